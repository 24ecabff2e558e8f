#include "pmhd/kde.hpp"

#include "pmhd/series_io.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

namespace pmhd {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

std::size_t tensor_size(std::span<const std::vector<double>> axes)
{
  std::size_t total = 1;
  for (const auto& a : axes)
    total *= a.size();
  return total;
}

} // namespace

double KernelSpec::univariate(double u) const
{
  switch (family) {
    case Family::gaussian:
      return kInvSqrt2Pi * std::exp(-0.5 * u * u);
    case Family::cauchy:
      return 1.0 / (std::numbers::pi * (1.0 + u * u));
  }
  return 0.0;
}

double KernelSpec::operator()(std::span<const double> u) const
{
  if (u.size() != dim)
    throw ConfigError("x", "kernel of dimension " + std::to_string(dim) + " evaluated at a " +
                               std::to_string(u.size()) + "-vector");
  double v = 1.0;
  for (double ui : u)
    v *= univariate(ui);
  return v;
}

BandwidthRule BandwidthRule::for_dimension(std::size_t p)
{
  return {-1.0 / (static_cast<double>(p) + 4.0), 1.0};
}

void BandwidthRule::validate() const
{
  if (!(alpha > -1.0 && alpha < 0.0))
    throw ConfigError("alpha", "bandwidth exponent must lie in (-1, 0), got " + std::to_string(alpha));
  if (!(ell > 0.0) || !std::isfinite(ell))
    throw ConfigError("ell", "bandwidth constant must be positive, got " + std::to_string(ell));
}

double bandwidth(std::size_t n, const BandwidthRule& rule)
{
  rule.validate();
  if (n == 0)
    throw ConfigError("n", "bandwidth needs n >= 1");
  return rule.ell * std::pow(static_cast<double>(n), rule.alpha);
}

double kernel_l2_norm(const KernelSpec& kernel)
{
  const double one_dim =
    kernel.family == Family::gaussian ? 1.0 / (2.0 * std::sqrt(std::numbers::pi)) : 1.0 / (2.0 * std::numbers::pi);
  return std::pow(one_dim, static_cast<double>(kernel.dim));
}

KdeModel::KdeModel(BlockMatrix samples, KernelSpec kernel, double h)
  : KdeModel(std::move(samples), kernel, h, static_cast<double>(samples.rows()))
{
}

KdeModel::KdeModel(BlockMatrix samples, KernelSpec kernel, double h, double normalizer)
  : samples_(std::move(samples))
  , kernel_(kernel)
  , h_(h)
  , normalizer_(normalizer)
{
  if (samples_.empty())
    throw ConfigError("samples", "kernel density estimate needs at least one sample");
  if (samples_.cols() != kernel_.dim)
    throw ConfigError("samples", "sample dimension " + std::to_string(samples_.cols()) +
                                   " does not match kernel dimension " + std::to_string(kernel_.dim));
  if (!(h_ > 0.0) || !std::isfinite(h_))
    throw ConfigError("h", "bandwidth must be positive");
  if (!(normalizer_ > 0.0) || !std::isfinite(normalizer_))
    throw ConfigError("normalizer", "must be positive");
}

double KdeModel::operator()(std::span<const double> x) const
{
  const std::size_t p = dim();
  if (x.size() != p)
    throw ConfigError("x", "expected a " + std::to_string(p) + "-vector, got " + std::to_string(x.size()));
  double acc = 0.0;
  for (std::size_t m = 0; m < samples_.rows(); ++m) {
    double term = 1.0;
    for (std::size_t k = 0; k < p; ++k)
      term *= kernel_.univariate((x[k] - samples_(m, k)) / h_);
    acc += term;
  }
  return acc / (normalizer_ * std::pow(h_, static_cast<double>(p)));
}

std::vector<double> KdeModel::evaluate_tensor(std::span<const std::vector<double>> axes) const
{
  const std::size_t p = dim();
  if (axes.size() != p)
    throw ConfigError("axes", "expected " + std::to_string(p) + " axes, got " + std::to_string(axes.size()));
  const auto N = static_cast<Eigen::Index>(samples_.rows());
  const double scale = 1.0 / (normalizer_ * std::pow(h_, static_cast<double>(p)));

  // Per-axis kernel factors: factors[k](node, m) = K1((node - s_mk)/h).
  std::vector<Eigen::MatrixXd> factors;
  factors.reserve(p);
  for (std::size_t k = 0; k < p; ++k) {
    const auto& nodes = axes[k];
    Eigen::MatrixXd f(static_cast<Eigen::Index>(nodes.size()), N);
    for (Eigen::Index m = 0; m < N; ++m)
      for (Eigen::Index a = 0; a < f.rows(); ++a)
        f(a, m) = kernel_.univariate((nodes[static_cast<std::size_t>(a)] - samples_(static_cast<std::size_t>(m), k)) / h_);
    factors.push_back(std::move(f));
  }

  std::vector<double> out(tensor_size(axes));
  if (p == 1) {
    Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size())) =
      factors[0].rowwise().sum() * scale;
    return out;
  }
  if (p == 2) {
    // Row-major (axis 0 slow) result equals the column-major B * A^T.
    Eigen::Map<Eigen::MatrixXd> view(out.data(), factors[1].rows(), factors[0].rows());
    view.noalias() = factors[1] * factors[0].transpose();
    view *= scale;
    return out;
  }

  // General p: accumulate sample by sample over the full tensor.
  std::vector<double> partial;
  for (Eigen::Index m = 0; m < N; ++m) {
    partial.assign(1, 1.0);
    for (std::size_t k = 0; k < p; ++k) {
      const auto& f = factors[k];
      std::vector<double> next;
      next.reserve(partial.size() * static_cast<std::size_t>(f.rows()));
      for (double v : partial)
        for (Eigen::Index a = 0; a < f.rows(); ++a)
          next.push_back(v * f(a, m));
      partial.swap(next);
    }
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] += partial[i];
  }
  for (double& v : out)
    v *= scale;
  return out;
}

void write_grid_csv(std::span<const std::vector<double>> axes, std::span<const double> values, std::ostream& out)
{
  const std::size_t p = axes.size();
  if (values.size() != tensor_size(axes))
    throw ConfigError("values", "grid value count does not match axes");
  for (std::size_t k = 0; k < p; ++k)
    out << "x_" << (k + 1) << ',';
  out << "density\n";
  std::vector<std::size_t> idx(p, 0);
  for (double v : values) {
    for (std::size_t k = 0; k < p; ++k)
      out << format_double(axes[k][idx[k]]) << ',';
    out << format_double(v) << '\n';
    for (std::size_t k = p; k-- > 0;) {
      if (++idx[k] < axes[k].size())
        break;
      idx[k] = 0;
    }
  }
}

} // namespace pmhd
