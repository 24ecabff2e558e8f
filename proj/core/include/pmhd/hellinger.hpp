#pragma once

#include "pmhd/family.hpp"
#include "pmhd/residuals.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace pmhd {

enum class QuadRule
{
  midpoint,
  simpson
};

struct QuadAxis
{
  double lo = -1.0;
  double hi = 1.0;
  std::size_t nodes = 101;
};

/// Tensor-product quadrature grid on a box in R^p.
class QuadGrid
{
public:
  static constexpr std::size_t kMaxTotalNodes = 1'000'000;

  QuadGrid(std::vector<QuadAxis> axes, QuadRule rule = QuadRule::midpoint, bool allow_high_dim = false);

  std::size_t dim() const noexcept { return axes_.size(); }
  QuadRule rule() const noexcept { return rule_; }
  const QuadAxis& axis(std::size_t k) const { return axes_.at(k); }
  std::size_t total_nodes() const noexcept;

  /// Node coordinates / weights along axis k.
  std::vector<double> nodes(std::size_t k) const;
  std::vector<double> weights(std::size_t k) const;
  std::vector<std::vector<double>> all_nodes() const;

  /// Product weights in tensor order (last axis fastest).
  std::vector<double> tensor_weights() const;

  /// Calls fn(x, w) for every node x with product weight w.
  void for_each(const std::function<void(std::span<const double>, double)>& fn) const;

private:
  std::vector<QuadAxis> axes_;
  QuadRule rule_;
};

/// Innovation density of one block: product of independent centred
/// univariate densities with per-coordinate scales.
struct ReferenceDensity
{
  Family family = Family::gaussian;
  std::size_t dim = 1;
  std::vector<double> scales{1.0}; ///< one per coordinate, or a single shared value

  static ReferenceDensity standard(Family family, std::size_t dim) { return {family, dim, {1.0}}; }

  double scale(std::size_t k) const { return scales.size() == 1 ? scales.front() : scales.at(k); }
  double marginal(std::size_t k, double x) const;
  double operator()(std::span<const double> x) const;

  /// Half-width of the region holding the bulk of the mass on axis k:
  /// 5 sigma (Gaussian), 32 gamma (Cauchy, which keeps the lost tail mass under 2%).
  double central_half_width(std::size_t k) const;

  /// Values on the tensor grid, last axis fastest.
  std::vector<double> evaluate_tensor(std::span<const std::vector<double>> axes) const;

  void validate() const;
};

using DensityFn = std::function<double(std::span<const double>)>;

/// sqrt(max(0, 2 - 2 B)) with B the quadrature of sqrt(f g). Mass either
/// density loses outside the grid counts toward the distance.
double hellinger_distance(const DensityFn& f, const DensityFn& g, const QuadGrid& grid);

/// Quadrature of (sqrt f - sqrt g)^2, then square root. Reference route for tests.
double hellinger_distance_direct(const DensityFn& f, const DensityFn& g, const QuadGrid& grid);

/// Bhattacharyya-form distance from precomputed tensor-ordered node values.
double hellinger_from_values(std::span<const double> f, std::span<const double> g, const QuadGrid& grid);

inline constexpr std::size_t kDefaultGridNodes = 101;

/// Per axis, [min s_k - 3h, max s_k + 3h] joined with the reference's central
/// region. The sample-driven part may extend at most one central half-width
/// beyond that region, and the node count grows so the spacing never exceeds h.
QuadGrid default_grid(const BlockMatrix& samples, const ReferenceDensity& reference, double h,
                      std::size_t nodes = kDefaultGridNodes, QuadRule rule = QuadRule::midpoint,
                      bool allow_high_dim = false);

} // namespace pmhd
