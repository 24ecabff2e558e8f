#include "pmhd/estimator.hpp"

#include "pmhd/residuals.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pmhd {

ThetaBox ThetaBox::uniform(std::size_t p, double lo, double hi)
{
  return {std::vector<double>(p, lo), std::vector<double>(p, hi)};
}

void ThetaBox::validate() const
{
  if (lower.empty() || lower.size() != upper.size())
    throw ConfigError("box", "lower and upper bounds must be non-empty and of equal length");
  for (std::size_t k = 0; k < lower.size(); ++k) {
    if (!(0.0 < lower[k] && lower[k] < upper[k] && upper[k] < 0.5))
      throw ConfigError("box", "axis " + std::to_string(k) + " must satisfy 0 < lower < upper < 1/2");
  }
}

bool ThetaBox::contains(std::span<const double> d) const
{
  if (d.size() != dim())
    return false;
  for (std::size_t k = 0; k < d.size(); ++k)
    if (d[k] < lower[k] || d[k] > upper[k])
      return false;
  return true;
}

std::vector<double> ThetaBox::clamp(std::span<const double> d) const
{
  std::vector<double> out(d.begin(), d.end());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = std::clamp(out[k], lower[k], upper[k]);
  return out;
}

void EstimatorConfig::validate(std::size_t p) const
{
  const ThetaBox b = box_for(p);
  b.validate();
  if (b.dim() != p)
    throw ConfigError("box", "box dimension " + std::to_string(b.dim()) + " does not match p = " + std::to_string(p));
  rule_for(p).validate();
  if (!(coarse_step > 0.0))
    throw ConfigError("coarse_step", "must be positive");
  if (!(refine_tol > 0.0))
    throw ConfigError("refine_tol", "must be positive");
  if (grid_nodes < 3)
    throw ConfigError("grid_nodes", "need at least 3 nodes per axis");
  if (p >= 4 && !allow_high_dim)
    throw ConfigError("p", "tensor quadrature in dimension >= 4 needs allow_high_dim");
  ReferenceDensity{reference, p, reference_scales}.validate();
}

Objective::Objective(const Series& series, EstimatorConfig config)
  : series_(&series)
  , config_(std::move(config))
{
  const std::size_t p = series.period;
  if (p == 0 || series.values.empty() || series.values.size() % p != 0)
    throw ConfigError("series", "length must be a positive multiple of the period");
  config_.validate(p);
  reference_ = ReferenceDensity{config_.reference, p, config_.reference_scales};
  const std::size_t n_bw = config_.bandwidth_n == BandwidthSampleSize::total ? series.size() : series.cycles();
  h_ = pmhd::bandwidth(n_bw, config_.rule_for(p));
}

double Objective::operator()(std::span<const double> candidate_d) const
{
  const std::size_t p = series_->period;
  ResidualBlocks residuals = invert(*series_, candidate_d);
  const KdeModel kde(std::move(residuals.blocks), KernelSpec{config_.kernel, p}, h_);
  const QuadGrid grid =
    default_grid(kde.samples(), reference_, h_, config_.grid_nodes, config_.quadrature, config_.allow_high_dim);
  const auto axes = grid.all_nodes();
  return hellinger_from_values(kde.evaluate_tensor(axes), reference_.evaluate_tensor(axes), grid);
}

double objective(const Series& series, std::span<const double> candidate_d, const EstimatorConfig& config)
{
  return Objective(series, config)(candidate_d);
}

std::vector<std::vector<double>> scan_points(const ThetaBox& box, double step)
{
  box.validate();
  if (!(step > 0.0))
    throw ConfigError("coarse_step", "must be positive");
  std::vector<std::vector<double>> ticks(box.dim());
  for (std::size_t k = 0; k < box.dim(); ++k) {
    const double span = box.upper[k] - box.lower[k];
    const auto count = static_cast<std::size_t>(std::floor(span / step + 1e-9));
    for (std::size_t i = 0; i <= count; ++i)
      ticks[k].push_back(box.lower[k] + static_cast<double>(i) * step);
    if (box.upper[k] - ticks[k].back() > 1e-9)
      ticks[k].push_back(box.upper[k]);
  }
  std::vector<std::vector<double>> points{{}};
  for (const auto& axis : ticks) {
    std::vector<std::vector<double>> next;
    next.reserve(points.size() * axis.size());
    for (const auto& prefix : points)
      for (double v : axis) {
        auto pt = prefix;
        pt.push_back(v);
        next.push_back(std::move(pt));
      }
    points.swap(next);
  }
  return points;
}

ScanResult coarse_scan(const ObjectiveFn& fn, const ThetaBox& box, double step)
{
  ScanResult out;
  out.value = std::numeric_limits<double>::infinity();
  for (const auto& pt : scan_points(box, step)) {
    const double v = fn(pt);
    ++out.evaluations;
    if (v < out.value || out.best.empty()) {
      out.value = v;
      out.best = pt;
    }
  }
  return out;
}

namespace {

struct Vertex
{
  std::vector<double> x;
  double f;
};

double distance(std::span<const double> a, std::span<const double> b)
{
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    acc += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(acc);
}

} // namespace

SimplexResult nelder_mead(const ObjectiveFn& fn, std::vector<double> start, double start_value, const ThetaBox& box,
                          double initial_step, double tol, std::size_t max_evals)
{
  const std::size_t p = box.dim();
  SimplexResult out;

  auto eval = [&](std::vector<double> x) {
    x = box.clamp(x);
    const double f = fn(x);
    ++out.evaluations;
    return Vertex{std::move(x), f};
  };

  std::vector<Vertex> simplex;
  simplex.push_back({box.clamp(start), start_value});
  for (std::size_t k = 0; k < p && out.evaluations < max_evals; ++k) {
    auto x = simplex.front().x;
    x[k] = x[k] + initial_step <= box.upper[k] ? x[k] + initial_step : x[k] - initial_step;
    simplex.push_back(eval(std::move(x)));
  }

  const auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  while (true) {
    std::stable_sort(simplex.begin(), simplex.end(), by_value);
    double diameter = 0.0;
    for (std::size_t i = 1; i < simplex.size(); ++i)
      diameter = std::max(diameter, distance(simplex[i].x, simplex.front().x));
    if (simplex.size() == p + 1 && diameter < tol) {
      out.converged = true;
      break;
    }
    if (out.evaluations >= max_evals || simplex.size() < p + 1)
      break;

    std::vector<double> centroid(p, 0.0);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t k = 0; k < p; ++k)
        centroid[k] += simplex[i].x[k] / static_cast<double>(p);
    const Vertex& worst = simplex.back();
    auto along = [&](double coef, std::span<const double> from) {
      std::vector<double> x(p);
      for (std::size_t k = 0; k < p; ++k)
        x[k] = centroid[k] + coef * (from[k] - centroid[k]);
      return x;
    };

    Vertex reflected = eval(along(-1.0, worst.x));
    if (reflected.f < simplex.front().f) {
      if (out.evaluations >= max_evals) {
        simplex.back() = std::move(reflected);
        continue;
      }
      Vertex expanded = eval(along(-2.0, worst.x));
      simplex.back() = expanded.f < reflected.f ? std::move(expanded) : std::move(reflected);
      continue;
    }
    if (reflected.f < simplex[p - 1].f) {
      simplex.back() = std::move(reflected);
      continue;
    }
    if (out.evaluations >= max_evals)
      continue;
    if (reflected.f < worst.f) {
      Vertex outside = eval(along(-0.5, worst.x));
      if (outside.f <= reflected.f) {
        simplex.back() = std::move(outside);
        continue;
      }
    } else {
      Vertex inside = eval(along(0.5, worst.x));
      if (inside.f < worst.f) {
        simplex.back() = std::move(inside);
        continue;
      }
    }
    // Shrink toward the best vertex.
    for (std::size_t i = 1; i < simplex.size() && out.evaluations < max_evals; ++i) {
      std::vector<double> x(p);
      for (std::size_t k = 0; k < p; ++k)
        x[k] = simplex.front().x[k] + 0.5 * (simplex[i].x[k] - simplex.front().x[k]);
      simplex[i] = eval(std::move(x));
    }
  }

  const auto best = std::min_element(simplex.begin(), simplex.end(), by_value);
  out.best = best->x;
  out.value = best->f;
  return out;
}

EstimateResult estimate(const Series& series, const EstimatorConfig& config)
{
  const Objective objective_fn(series, config);
  const std::size_t p = series.period;
  const ThetaBox box = config.box_for(p);

  EstimateResult result;
  std::vector<double> best;
  double best_value = std::numeric_limits<double>::infinity();
  const ObjectiveFn fn = [&](std::span<const double> d) {
    const double v = objective_fn(d);
    ++result.evaluations;
    if (config.record_trace)
      result.trace.push_back({{d.begin(), d.end()}, v});
    if (v < best_value || best.empty()) {
      best_value = v;
      best.assign(d.begin(), d.end());
    }
    return v;
  };

  const ScanResult scan = coarse_scan(fn, box, config.coarse_step);
  const SimplexResult simplex =
    nelder_mead(fn, scan.best, scan.value, box, 0.5 * config.coarse_step, config.refine_tol, config.max_evals);

  result.d_hat = best;
  result.objective = best_value;
  result.converged = simplex.converged;
  return result;
}

std::string to_json(const EstimateResult& result)
{
  nlohmann::json doc;
  doc["d_hat"] = result.d_hat;
  doc["objective"] = result.objective;
  doc["evaluations"] = result.evaluations;
  doc["converged"] = result.converged;
  return doc.dump();
}

} // namespace pmhd
