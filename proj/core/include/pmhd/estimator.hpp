#pragma once

#include "pmhd/hellinger.hpp"
#include "pmhd/kde.hpp"
#include "pmhd/process.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pmhd {

/// Compact parameter box strictly inside (0, 1/2)^p.
struct ThetaBox
{
  std::vector<double> lower;
  std::vector<double> upper;

  static ThetaBox uniform(std::size_t p, double lo = 0.01, double hi = 0.49);

  std::size_t dim() const noexcept { return lower.size(); }
  void validate() const;
  bool contains(std::span<const double> d) const;
  std::vector<double> clamp(std::span<const double> d) const;
};

/// Which sample size enters h = ell * n^alpha.
enum class BandwidthSampleSize
{
  total,  ///< n = p n'
  blocks, ///< n'
};

struct EstimatorConfig
{
  std::optional<ThetaBox> box;        ///< default [0.01, 0.49]^p
  Family kernel = Family::gaussian;
  std::optional<BandwidthRule> rule;  ///< default alpha = -1/(p+4), ell = 1
  BandwidthSampleSize bandwidth_n = BandwidthSampleSize::total;
  Family reference = Family::gaussian;
  std::vector<double> reference_scales{1.0};
  std::size_t grid_nodes = kDefaultGridNodes;
  QuadRule quadrature = QuadRule::midpoint;
  bool allow_high_dim = false;

  double coarse_step = 0.05;
  double refine_tol = 1e-4;
  std::size_t max_evals = 400; ///< budget of the simplex phase
  bool record_trace = false;

  void validate(std::size_t p) const;
  ThetaBox box_for(std::size_t p) const { return box ? *box : ThetaBox::uniform(p); }
  BandwidthRule rule_for(std::size_t p) const { return rule ? *rule : BandwidthRule::for_dimension(p); }
};

/// Hellinger distance between the kernel estimate of the residual blocks at
/// a candidate d and the fixed innovation density.
class Objective
{
public:
  Objective(const Series& series, EstimatorConfig config);

  double operator()(std::span<const double> candidate_d) const;

  double bandwidth() const noexcept { return h_; }
  const ReferenceDensity& reference() const noexcept { return reference_; }

private:
  const Series* series_;
  EstimatorConfig config_;
  ReferenceDensity reference_;
  double h_;
};

double objective(const Series& series, std::span<const double> candidate_d, const EstimatorConfig& config);

using ObjectiveFn = std::function<double(std::span<const double>)>;

struct TracePoint
{
  std::vector<double> d;
  double objective = 0.0;
};

struct EstimateResult
{
  std::vector<double> d_hat;
  double objective = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
  std::vector<TracePoint> trace;
};

/// Lattice lower_k + i * step (plus upper_k) per axis, in lexicographic order.
std::vector<std::vector<double>> scan_points(const ThetaBox& box, double step);

struct ScanResult
{
  std::vector<double> best;
  double value = 0.0;
  std::size_t evaluations = 0;
};

/// Exhaustive lattice scan; ties go to the lexicographically smallest point.
ScanResult coarse_scan(const ObjectiveFn& fn, const ThetaBox& box, double step);

struct SimplexResult
{
  std::vector<double> best;
  double value = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead with every trial point clamped to the box. Stops when the
/// largest vertex distance from the best vertex drops below `tol` or after
/// `max_evals` evaluations.
SimplexResult nelder_mead(const ObjectiveFn& fn, std::vector<double> start, double start_value, const ThetaBox& box,
                          double initial_step, double tol, std::size_t max_evals);

/// Coarse lattice scan followed by a clamped simplex refinement from the
/// best lattice point. Returns the best point seen in either phase.
EstimateResult estimate(const Series& series, const EstimatorConfig& config);

/// {"d_hat": [..], "objective": .., "evaluations": .., "converged": ..}
std::string to_json(const EstimateResult& result);

} // namespace pmhd
