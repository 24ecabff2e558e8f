#include "pmhd/montecarlo.hpp"

#include "pmhd/series_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace pmhd {

void McConfig::validate() const
{
  const std::size_t p = true_d.size();
  if (p == 0)
    throw ConfigError("true_d", "must not be empty");
  if (replications == 0)
    throw ConfigError("replications", "must be at least 1");
  if (sizes.empty())
    throw ConfigError("sizes", "must not be empty");
  for (std::size_t n : sizes)
    if (n == 0 || n % p != 0)
      throw ConfigError("sizes", "size " + std::to_string(n) + " is not a positive multiple of p = " + std::to_string(p));
  ProcessSpec probe{p, true_d, {noise, {1.0}}, sizes.front(), truncation, 0, base_seed};
  probe.validate();
  estimator.validate(p);
}

namespace {

SizeReport run_size(const McConfig& config, std::size_t n)
{
  const std::size_t p = config.true_d.size();
  const std::size_t reps = config.replications;
  EstimatorConfig est = config.estimator;
  est.kernel = config.kernel;
  est.reference = config.noise;
  est.record_trace = false;

  std::vector<EstimateResult> results(reps);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (std::size_t j = next++; j < reps; j = next++) {
      try {
        ProcessSpec spec{p, config.true_d, {config.noise, {1.0}}, n, config.truncation, 0, config.base_seed + j,
                         config.generator};
        const Series series = simulate(spec);
        results[j] = estimate(series, est);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error)
          error = std::current_exception();
      }
    }
  };

  const auto start = std::chrono::steady_clock::now();
  const std::size_t threads = std::clamp<std::size_t>(config.threads, 1, reps);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back(worker);
  }
  if (error)
    std::rethrow_exception(error);

  SizeReport out;
  out.n = n;
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.mean_estimate.assign(p, 0.0);
  for (const auto& r : results) {
    out.estimates.push_back(r.d_hat);
    for (std::size_t k = 0; k < p; ++k)
      out.mean_estimate[k] += r.d_hat[k] / static_cast<double>(reps);
    if (!r.converged)
      ++out.failures;
  }
  out.converged = reps - out.failures;
  out.mse = mse(out.estimates, config.true_d);
  return out;
}

} // namespace

McReport run(const McConfig& config)
{
  config.validate();
  McReport report{config.true_d, config.replications, {}};
  for (std::size_t n : config.sizes)
    report.sizes.push_back(run_size(config, n));
  return report;
}

double mse(std::span<const std::vector<double>> estimates, std::span<const double> true_d)
{
  if (estimates.empty())
    throw ConfigError("estimates", "mean squared error of an empty set");
  double acc = 0.0;
  for (const auto& e : estimates) {
    if (e.size() != true_d.size())
      throw ConfigError("estimates", "dimension mismatch with true_d");
    for (std::size_t k = 0; k < e.size(); ++k)
      acc += (e[k] - true_d[k]) * (e[k] - true_d[k]);
  }
  return acc / static_cast<double>(estimates.size());
}

NormalityReport normality_diagnostics(std::span<const std::vector<double>> estimates, std::size_t n,
                                      std::span<const double> true_d, const NormalityGates& gates)
{
  if (estimates.size() < gates.min_samples)
    throw ConfigError("estimates", "need at least " + std::to_string(gates.min_samples) + " estimates, got " +
                                     std::to_string(estimates.size()));
  const std::size_t p = true_d.size();
  const double root_n = std::sqrt(static_cast<double>(n));
  const auto count = static_cast<double>(estimates.size());

  NormalityReport report;
  report.passed = true;
  for (std::size_t k = 0; k < p; ++k) {
    std::vector<double> z;
    z.reserve(estimates.size());
    for (const auto& e : estimates) {
      if (e.size() != p)
        throw ConfigError("estimates", "dimension mismatch with true_d");
      z.push_back(root_n * (e[k] - true_d[k]));
    }
    CoordinateDiagnostics c;
    for (double v : z)
      c.mean += v / count;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : z) {
      const double dv = v - c.mean;
      m2 += dv * dv / count;
      m3 += dv * dv * dv / count;
      m4 += dv * dv * dv * dv / count;
    }
    const auto [lo, hi] = std::minmax_element(z.begin(), z.end());
    c.degenerate = *lo == *hi || m2 <= 1e-24 * (1.0 + c.mean * c.mean);
    c.stddev = c.degenerate ? 0.0 : std::sqrt(m2 * count / (count - 1.0));
    if (!c.degenerate) {
      c.skewness = m3 / std::pow(m2, 1.5);
      c.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    }
    c.passed = !c.degenerate && std::abs(c.skewness) < gates.max_abs_skewness &&
               std::abs(c.excess_kurtosis) < gates.max_abs_excess_kurtosis;
    report.passed = report.passed && c.passed;
    report.coordinates.push_back(c);
  }
  return report;
}

namespace {

void write_header(std::ostream& out, std::size_t p, bool timing)
{
  out << "n";
  for (std::size_t k = 0; k < p; ++k)
    out << ",mean_d_" << (k + 1);
  out << ",mse,failures";
  if (timing)
    out << ",seconds";
  out << '\n';
}

void write_rows(const McReport& report, std::ostream& out, bool timing)
{
  write_header(out, report.true_d.size(), timing);
  for (const auto& s : report.sizes) {
    out << s.n;
    for (double m : s.mean_estimate)
      out << ',' << format_double(m);
    out << ',' << format_double(s.mse) << ',' << s.failures;
    if (timing)
      out << ',' << format_double(s.seconds);
    out << '\n';
  }
}

} // namespace

void write_report_csv(const McReport& report, std::ostream& out)
{
  write_rows(report, out, true);
}

void write_table_csv(const McReport& report, std::ostream& out)
{
  write_rows(report, out, false);
}

std::string report_to_json(const McReport& report)
{
  nlohmann::json doc;
  doc["true_d"] = report.true_d;
  doc["replications"] = report.replications;
  doc["sizes"] = nlohmann::json::array();
  for (const auto& s : report.sizes) {
    doc["sizes"].push_back({{"n", s.n},
                            {"mean_d", s.mean_estimate},
                            {"mse", s.mse},
                            {"failures", s.failures},
                            {"converged", s.converged},
                            {"seconds", s.seconds},
                            {"estimates", s.estimates}});
  }
  return doc.dump();
}

std::vector<McConfig> table_configs(std::size_t replications, std::uint64_t base_seed, std::size_t threads)
{
  const std::vector<std::size_t> sizes{10, 50, 100};
  const std::vector<std::vector<double>> designs{{0.2, 0.15}, {0.49, 0.4}};
  std::vector<McConfig> out;
  for (Family family : {Family::gaussian, Family::cauchy}) {
    for (const auto& d : designs) {
      McConfig c;
      c.true_d = d;
      c.sizes = sizes;
      c.replications = replications;
      c.noise = family;
      c.kernel = family;
      c.base_seed = base_seed;
      c.threads = threads;
      c.estimator.kernel = family;
      c.estimator.reference = family;
      out.push_back(std::move(c));
    }
  }
  return out;
}

} // namespace pmhd
