#pragma once

#include "pmhd/estimator.hpp"
#include "pmhd/montecarlo.hpp"
#include "pmhd/process.hpp"

#include <optional>
#include <string>

namespace pmhd::cli {

/// Declarative run description. Every section is optional, unknown keys are
/// rejected.
///
///   {
///     "process":    {"p", "d", "n", "noise", "scales", "seed", "truncation", "burn_in", "generator"},
///     "input":      {"path", "p"},
///     "estimator":  {"kernel", "reference", "reference_scales", "alpha", "ell", "bandwidth_n",
///                    "coarse_step", "refine_tol", "max_evals", "grid_nodes", "quadrature",
///                    "box_lower", "box_upper"},
///     "montecarlo": {"true_d", "sizes", "replications", "noise", "kernel", "base_seed",
///                    "truncation", "threads"},
///     "output":     {"series", "estimate", "report_csv", "report_json"}
///   }
struct RunConfig
{
  std::optional<ProcessSpec> process;
  std::optional<std::string> input_path;
  std::size_t input_period = 0;
  bool has_estimator = false;
  EstimatorConfig estimator;
  std::optional<McConfig> montecarlo;
  std::optional<std::string> series_out;
  std::optional<std::string> estimate_out;
  std::optional<std::string> report_csv;
  std::optional<std::string> report_json;
};

/// Throws ConfigError (field names the offending key) or ParseError.
RunConfig parse_run_config(const std::string& text);

} // namespace pmhd::cli
