#pragma once

#include "pmhd/estimator.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace pmhd {

struct McConfig
{
  std::vector<double> true_d;
  std::vector<std::size_t> sizes;
  std::size_t replications = 100;
  Family noise = Family::gaussian;
  Family kernel = Family::gaussian;
  std::uint64_t base_seed = 1;
  std::size_t truncation = kDefaultGenerationTruncation;
  Generator generator = Generator::ar_recursion;
  EstimatorConfig estimator;
  std::size_t threads = 1;

  void validate() const;
};

struct SizeReport
{
  std::size_t n = 0;
  std::vector<double> mean_estimate;
  double mse = 0.0;
  std::vector<std::vector<double>> estimates; ///< one per replication, in seed order
  std::size_t failures = 0;                   ///< non-converged replications (kept in aggregates)
  std::size_t converged = 0;                  ///< replications - failures
  double seconds = 0.0;
};

struct McReport
{
  std::vector<double> true_d;
  std::size_t replications = 0;
  std::vector<SizeReport> sizes;
};

/// Replication j of every size simulates with seed base_seed + j. The
/// reduction is in replication order, so the report does not depend on
/// the thread count.
McReport run(const McConfig& config);

/// (1/n_r) sum_j sum_k (est_jk - d_k)^2.
double mse(std::span<const std::vector<double>> estimates, std::span<const double> true_d);

struct NormalityGates
{
  double max_abs_skewness = 0.5;
  double max_abs_excess_kurtosis = 1.0;
  std::size_t min_samples = 50;
};

struct CoordinateDiagnostics
{
  double mean = 0.0;
  double stddev = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  bool degenerate = false;
  bool passed = false;
};

struct NormalityReport
{
  std::vector<CoordinateDiagnostics> coordinates;
  bool passed = false;
};

/// Moments of sqrt(n) (est - d) per coordinate, gated on skewness and excess kurtosis.
NormalityReport normality_diagnostics(std::span<const std::vector<double>> estimates, std::size_t n,
                                      std::span<const double> true_d, const NormalityGates& gates = {});

/// Columns n,mean_d_1..mean_d_p,mse,failures,seconds.
void write_report_csv(const McReport& report, std::ostream& out);
std::string report_to_json(const McReport& report);

/// Timing-free layout used by the `tables` command: n,mean_d_1..mean_d_p,mse,failures.
void write_table_csv(const McReport& report, std::ostream& out);

/// The four published designs: {Gaussian, Cauchy} x {d = (0.2, 0.15), (0.49, 0.4)}
/// over n in {10, 50, 100}, ordered as table 1..4.
std::vector<McConfig> table_configs(std::size_t replications, std::uint64_t base_seed, std::size_t threads);

} // namespace pmhd
