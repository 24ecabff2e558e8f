#pragma once

#include "pmhd/process.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace pmhd {

/// Row-major rows x cols matrix; row m holds one p-dimensional block.
class BlockMatrix
{
public:
  BlockMatrix() = default;
  BlockMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows)
    , cols_(cols)
    , data_(rows * cols)
  {
  }
  BlockMatrix(std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  double& operator()(std::size_t m, std::size_t k) { return data_[m * cols_ + k]; }
  double operator()(std::size_t m, std::size_t k) const { return data_[m * cols_ + k]; }

  std::span<const double> row(std::size_t m) const { return {data_.data() + m * cols_, cols_}; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Inverted residual blocks: row m = (e_{1+pm}, ..., e_{p+pm}).
struct ResidualBlocks
{
  BlockMatrix blocks;
  std::vector<double> candidate_d;

  std::size_t count() const noexcept { return blocks.rows(); }
  std::size_t dim() const noexcept { return blocks.cols(); }
};

enum class InversionMethod
{
  automatic, ///< direct below kFftInversionThreshold, FFT above
  direct,
  fft
};

inline constexpr std::size_t kFftInversionThreshold = 4096;

/// Groups (X_{1+pm}, ..., X_{p+pm}) for m = 0..n'-1.
BlockMatrix block(std::span<const double> values, std::size_t p);

/// Row-major concatenation of the blocks; inverse of `block`.
std::vector<double> flatten(const BlockMatrix& blocks);

/// e_t = sum_{j=0}^{t-1} pi_j(d_{season(t)}) X_{t-j} with zero presample,
/// assembled into n' blocks of dimension p.
ResidualBlocks invert(const Series& series, std::span<const double> candidate_d,
                      InversionMethod method = InversionMethod::automatic);

/// Header e_1,...,e_p then one block per row.
void write_residuals_csv(const ResidualBlocks& residuals, std::ostream& out);

} // namespace pmhd
