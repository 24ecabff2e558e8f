#include "pmhd/residuals.hpp"

#include "pmhd/fracdiff.hpp"
#include "pmhd/series_io.hpp"

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>

namespace pmhd {

BlockMatrix::BlockMatrix(std::size_t cols, std::vector<double> data)
  : rows_(cols == 0 ? 0 : data.size() / cols)
  , cols_(cols)
  , data_(std::move(data))
{
  if (cols == 0 || data_.size() % cols != 0)
    throw ConfigError("p", "data length " + std::to_string(data_.size()) + " is not a multiple of " +
                               std::to_string(cols));
}

BlockMatrix block(std::span<const double> values, std::size_t p)
{
  return BlockMatrix(p, std::vector<double>(values.begin(), values.end()));
}

std::vector<double> flatten(const BlockMatrix& blocks)
{
  return {blocks.data().begin(), blocks.data().end()};
}

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& fftw_planner_mutex()
{
  static std::mutex m;
  return m;
}

struct FftwFree
{
  void operator()(void* p) const { fftw_free(p); }
};

template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t count)
{
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * count));
  if (p == nullptr)
    throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

class RealFft
{
public:
  explicit RealFft(std::size_t size)
    : size_(size)
    , real_(fftw_buffer<double>(size))
    , spec_(fftw_buffer<fftw_complex>(size / 2 + 1))
  {
    std::lock_guard lock(fftw_planner_mutex());
    forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(size), real_.get(), spec_.get(), FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_1d(static_cast<int>(size), spec_.get(), real_.get(), FFTW_ESTIMATE);
  }
  ~RealFft()
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::vector<std::complex<double>> forward(std::span<const double> x)
  {
    std::fill(real_.get(), real_.get() + size_, 0.0);
    std::copy(x.begin(), x.end(), real_.get());
    fftw_execute(forward_);
    std::vector<std::complex<double>> out(size_ / 2 + 1);
    for (std::size_t k = 0; k < out.size(); ++k)
      out[k] = {spec_[k][0], spec_[k][1]};
    return out;
  }

  /// Unnormalized inverse; caller divides by size().
  std::span<const double> backward(std::span<const std::complex<double>> spectrum)
  {
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
      spec_[k][0] = spectrum[k].real();
      spec_[k][1] = spectrum[k].imag();
    }
    fftw_execute(backward_);
    return {real_.get(), size_};
  }

  std::size_t size() const noexcept { return size_; }

private:
  std::size_t size_;
  FftwBuffer<double> real_;
  FftwBuffer<fftw_complex> spec_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

void invert_direct(std::span<const double> x, const std::vector<FracCoeffs>& pi, BlockMatrix& out)
{
  const std::size_t p = out.cols();
  for (std::size_t t = 0; t < x.size(); ++t)
    out(t / p, t % p) = apply_filter(pi[t % p], x, t);
}

void invert_fft(std::span<const double> x, const std::vector<FracCoeffs>& pi, BlockMatrix& out)
{
  const std::size_t n = x.size();
  const std::size_t p = out.cols();
  std::size_t size = 1;
  while (size < 2 * n)
    size <<= 1;
  RealFft fft(size);
  const auto x_hat = fft.forward(x);
  std::vector<std::complex<double>> prod(x_hat.size());
  const double scale = 1.0 / static_cast<double>(size);
  for (std::size_t season = 0; season < p; ++season) {
    const auto c_hat = fft.forward(std::span<const double>(pi[season].values).first(n));
    for (std::size_t k = 0; k < prod.size(); ++k)
      prod[k] = c_hat[k] * x_hat[k];
    const auto conv = fft.backward(prod);
    for (std::size_t t = season; t < n; t += p)
      out(t / p, season) = conv[t] * scale;
  }
}

} // namespace

ResidualBlocks invert(const Series& series, std::span<const double> candidate_d, InversionMethod method)
{
  const std::size_t p = series.period;
  if (candidate_d.size() != p)
    throw ConfigError("d", "candidate has " + std::to_string(candidate_d.size()) + " entries but series period is " +
                               std::to_string(p));
  if (series.values.empty() || series.values.size() % p != 0)
    throw ConfigError("n", "series length " + std::to_string(series.values.size()) + " is not a positive multiple of p");

  const std::size_t n = series.values.size();
  std::vector<FracCoeffs> pi;
  pi.reserve(p);
  for (double d : candidate_d)
    pi.push_back(pi_coeffs(d, n - 1));

  ResidualBlocks out{BlockMatrix(n / p, p), {candidate_d.begin(), candidate_d.end()}};
  if (method == InversionMethod::automatic)
    method = n > kFftInversionThreshold ? InversionMethod::fft : InversionMethod::direct;
  if (method == InversionMethod::fft)
    invert_fft(series.values, pi, out.blocks);
  else
    invert_direct(series.values, pi, out.blocks);
  return out;
}

void write_residuals_csv(const ResidualBlocks& residuals, std::ostream& out)
{
  const std::size_t p = residuals.dim();
  for (std::size_t k = 0; k < p; ++k)
    out << (k ? "," : "") << "e_" << (k + 1);
  out << '\n';
  for (std::size_t m = 0; m < residuals.count(); ++m) {
    for (std::size_t k = 0; k < p; ++k)
      out << (k ? "," : "") << format_double(residuals.blocks(m, k));
    out << '\n';
  }
}

} // namespace pmhd
