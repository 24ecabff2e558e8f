#include "pmhd/hellinger.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace pmhd {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

void check_node_value(double v)
{
  if (!(v >= 0.0) || !std::isfinite(v))
    throw ConfigError("density", "density value " + std::to_string(v) + " at a grid node is not a finite non-negative number");
}

// Neumaier-compensated quadrature of sqrt(f g); keeps B == 1 to the last bit
// when f = g carries unit mass on the grid.
struct Bhattacharyya
{
  double sum = 0.0;
  double carry = 0.0;

  void add(double w, double fx, double gx)
  {
    check_node_value(fx);
    check_node_value(gx);
    const double term = w * std::sqrt(fx * gx);
    const double t = sum + term;
    carry += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }

  double distance() const { return std::sqrt(std::max(0.0, 2.0 - 2.0 * (sum + carry))); }
};

} // namespace

QuadGrid::QuadGrid(std::vector<QuadAxis> axes, QuadRule rule, bool allow_high_dim)
  : axes_(std::move(axes))
  , rule_(rule)
{
  if (axes_.empty())
    throw ConfigError("grid", "needs at least one axis");
  if (axes_.size() >= 4 && !allow_high_dim)
    throw ConfigError("grid", "tensor grids in dimension >= 4 need an explicit override");
  double total = 1.0;
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    const QuadAxis& a = axes_[k];
    if (!(a.lo < a.hi) || !std::isfinite(a.lo) || !std::isfinite(a.hi))
      throw ConfigError("grid", "axis " + std::to_string(k) + " needs lo < hi");
    if (a.nodes < 3)
      throw ConfigError("grid", "axis " + std::to_string(k) + " needs at least 3 nodes");
    if (rule_ == QuadRule::simpson && a.nodes % 2 == 0)
      throw ConfigError("grid", "Simpson rule needs an odd node count on axis " + std::to_string(k));
    total *= static_cast<double>(a.nodes);
  }
  if (total > static_cast<double>(kMaxTotalNodes))
    throw ConfigError("grid", "total node count exceeds " + std::to_string(kMaxTotalNodes));
}

std::size_t QuadGrid::total_nodes() const noexcept
{
  std::size_t total = 1;
  for (const auto& a : axes_)
    total *= a.nodes;
  return total;
}

std::vector<double> QuadGrid::nodes(std::size_t k) const
{
  const QuadAxis& a = axes_.at(k);
  std::vector<double> out(a.nodes);
  if (rule_ == QuadRule::midpoint) {
    const double step = (a.hi - a.lo) / static_cast<double>(a.nodes);
    for (std::size_t i = 0; i < a.nodes; ++i)
      out[i] = a.lo + (static_cast<double>(i) + 0.5) * step;
  } else {
    const double step = (a.hi - a.lo) / static_cast<double>(a.nodes - 1);
    for (std::size_t i = 0; i < a.nodes; ++i)
      out[i] = a.lo + static_cast<double>(i) * step;
  }
  return out;
}

std::vector<double> QuadGrid::weights(std::size_t k) const
{
  const QuadAxis& a = axes_.at(k);
  if (rule_ == QuadRule::midpoint)
    return std::vector<double>(a.nodes, (a.hi - a.lo) / static_cast<double>(a.nodes));
  const double step = (a.hi - a.lo) / static_cast<double>(a.nodes - 1);
  std::vector<double> out(a.nodes);
  for (std::size_t i = 0; i < a.nodes; ++i) {
    const double c = (i == 0 || i + 1 == a.nodes) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    out[i] = c * step / 3.0;
  }
  return out;
}

std::vector<std::vector<double>> QuadGrid::all_nodes() const
{
  std::vector<std::vector<double>> out;
  out.reserve(dim());
  for (std::size_t k = 0; k < dim(); ++k)
    out.push_back(nodes(k));
  return out;
}

std::vector<double> QuadGrid::tensor_weights() const
{
  std::vector<double> out{1.0};
  for (std::size_t k = 0; k < dim(); ++k) {
    const auto w = weights(k);
    std::vector<double> next;
    next.reserve(out.size() * w.size());
    for (double a : out)
      for (double b : w)
        next.push_back(a * b);
    out.swap(next);
  }
  return out;
}

void QuadGrid::for_each(const std::function<void(std::span<const double>, double)>& fn) const
{
  const auto nodes = all_nodes();
  const auto w = tensor_weights();
  const std::size_t p = dim();
  std::vector<std::size_t> idx(p, 0);
  std::vector<double> x(p);
  for (double wi : w) {
    for (std::size_t k = 0; k < p; ++k)
      x[k] = nodes[k][idx[k]];
    fn(x, wi);
    for (std::size_t k = p; k-- > 0;) {
      if (++idx[k] < nodes[k].size())
        break;
      idx[k] = 0;
    }
  }
}

double ReferenceDensity::marginal(std::size_t k, double x) const
{
  const double s = scale(k);
  const double u = x / s;
  switch (family) {
    case Family::gaussian:
      return kInvSqrt2Pi * std::exp(-0.5 * u * u) / s;
    case Family::cauchy:
      return 1.0 / (std::numbers::pi * s * (1.0 + u * u));
  }
  return 0.0;
}

double ReferenceDensity::operator()(std::span<const double> x) const
{
  if (x.size() != dim)
    throw ConfigError("x", "reference density of dimension " + std::to_string(dim) + " evaluated at a " +
                               std::to_string(x.size()) + "-vector");
  double v = 1.0;
  for (std::size_t k = 0; k < dim; ++k)
    v *= marginal(k, x[k]);
  return v;
}

double ReferenceDensity::central_half_width(std::size_t k) const
{
  return (family == Family::gaussian ? 5.0 : 32.0) * scale(k);
}

std::vector<double> ReferenceDensity::evaluate_tensor(std::span<const std::vector<double>> axes) const
{
  if (axes.size() != dim)
    throw ConfigError("axes", "expected " + std::to_string(dim) + " axes");
  std::vector<double> out{1.0};
  for (std::size_t k = 0; k < dim; ++k) {
    std::vector<double> next;
    next.reserve(out.size() * axes[k].size());
    for (double a : out)
      for (double x : axes[k])
        next.push_back(a * marginal(k, x));
    out.swap(next);
  }
  return out;
}

void ReferenceDensity::validate() const
{
  if (dim == 0)
    throw ConfigError("reference", "dimension must be at least 1");
  if (scales.size() != 1 && scales.size() != dim)
    throw ConfigError("reference", "need 1 or p scales");
  for (double s : scales)
    if (!(s > 0.0) || !std::isfinite(s))
      throw ConfigError("reference", "scales must be positive");
}

double hellinger_distance(const DensityFn& f, const DensityFn& g, const QuadGrid& grid)
{
  Bhattacharyya acc;
  grid.for_each([&](std::span<const double> x, double w) { acc.add(w, f(x), g(x)); });
  return acc.distance();
}

double hellinger_distance_direct(const DensityFn& f, const DensityFn& g, const QuadGrid& grid)
{
  double acc = 0.0;
  grid.for_each([&](std::span<const double> x, double w) {
    const double fx = f(x);
    const double gx = g(x);
    check_node_value(fx);
    check_node_value(gx);
    const double diff = std::sqrt(fx) - std::sqrt(gx);
    acc += w * diff * diff;
  });
  return std::sqrt(std::max(0.0, acc));
}

double hellinger_from_values(std::span<const double> f, std::span<const double> g, const QuadGrid& grid)
{
  const std::size_t total = grid.total_nodes();
  if (f.size() != total || g.size() != total)
    throw ConfigError("grid", "value count does not match the grid");
  const auto w = grid.tensor_weights();
  Bhattacharyya acc;
  for (std::size_t i = 0; i < total; ++i)
    acc.add(w[i], f[i], g[i]);
  return acc.distance();
}

QuadGrid default_grid(const BlockMatrix& samples, const ReferenceDensity& reference, double h, std::size_t nodes,
                      QuadRule rule, bool allow_high_dim)
{
  if (samples.empty())
    throw ConfigError("samples", "default grid needs at least one sample block");
  if (samples.cols() != reference.dim)
    throw ConfigError("samples", "sample dimension does not match the reference density");
  if (!(h > 0.0))
    throw ConfigError("h", "bandwidth must be positive");

  const std::size_t p = samples.cols();
  std::vector<QuadAxis> axes(p);
  double total = 1.0;
  for (std::size_t k = 0; k < p; ++k) {
    double lo = samples(0, k);
    double hi = lo;
    for (std::size_t m = 1; m < samples.rows(); ++m) {
      lo = std::min(lo, samples(m, k));
      hi = std::max(hi, samples(m, k));
    }
    const double half = reference.central_half_width(k);
    lo = std::clamp(lo - 3.0 * h, -2.0 * half, -half);
    hi = std::clamp(hi + 3.0 * h, half, 2.0 * half);

    std::size_t count = std::max<std::size_t>(nodes, 3);
    count = std::max(count, static_cast<std::size_t>(std::ceil((hi - lo) / h)));
    if (rule == QuadRule::simpson && count % 2 == 0)
      ++count;
    axes[k] = {lo, hi, count};
    total *= static_cast<double>(count);
  }
  // Fall back to the requested resolution if spacing refinement blows the cap.
  if (total > static_cast<double>(QuadGrid::kMaxTotalNodes)) {
    const auto per_axis = static_cast<std::size_t>(
      std::floor(std::pow(static_cast<double>(QuadGrid::kMaxTotalNodes), 1.0 / static_cast<double>(p))));
    for (auto& a : axes) {
      a.nodes = std::min(a.nodes, std::max(nodes, per_axis));
      if (rule == QuadRule::simpson && a.nodes % 2 == 0)
        --a.nodes;
    }
  }
  return QuadGrid(std::move(axes), rule, allow_high_dim);
}

} // namespace pmhd
