#include "run_config.hpp"

#include <json.hpp>

#include <set>

namespace pmhd::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed)
{
  if (!obj.is_object())
    throw ConfigError(where, "must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key))
      throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
  }
}

template <class T>
T get(const json& obj, const std::string& where, const std::string& key)
{
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key, e.what());
  }
}

template <class T>
void get_opt(const json& obj, const std::string& where, const std::string& key, T& target)
{
  if (obj.contains(key))
    target = get<T>(obj, where, key);
}

ProcessSpec parse_process(const json& obj)
{
  reject_unknown(obj, "process",
                 {"p", "d", "n", "noise", "scales", "seed", "truncation", "burn_in", "generator"});
  ProcessSpec spec;
  spec.period = get<std::size_t>(obj, "process", "p");
  spec.d = get<std::vector<double>>(obj, "process", "d");
  spec.n = get<std::size_t>(obj, "process", "n");
  if (obj.contains("noise"))
    spec.noise.family = parse_family(get<std::string>(obj, "process", "noise"));
  get_opt(obj, "process", "scales", spec.noise.scales);
  get_opt(obj, "process", "seed", spec.seed);
  get_opt(obj, "process", "truncation", spec.truncation);
  get_opt(obj, "process", "burn_in", spec.burn_in);
  if (obj.contains("generator"))
    spec.generator = parse_generator(get<std::string>(obj, "process", "generator"));
  spec.validate();
  return spec;
}

EstimatorConfig parse_estimator(const json& obj)
{
  reject_unknown(obj, "estimator",
                 {"kernel", "reference", "reference_scales", "alpha", "ell", "bandwidth_n", "coarse_step", "refine_tol",
                  "max_evals", "grid_nodes", "quadrature", "box_lower", "box_upper"});
  EstimatorConfig cfg;
  if (obj.contains("kernel"))
    cfg.kernel = parse_family(get<std::string>(obj, "estimator", "kernel"));
  if (obj.contains("reference"))
    cfg.reference = parse_family(get<std::string>(obj, "estimator", "reference"));
  get_opt(obj, "estimator", "reference_scales", cfg.reference_scales);
  if (obj.contains("alpha") || obj.contains("ell")) {
    BandwidthRule rule{-0.2, 1.0};
    if (!obj.contains("alpha"))
      throw ConfigError("estimator.alpha", "required when ell is given");
    rule.alpha = get<double>(obj, "estimator", "alpha");
    get_opt(obj, "estimator", "ell", rule.ell);
    cfg.rule = rule;
  }
  if (obj.contains("bandwidth_n")) {
    const auto v = get<std::string>(obj, "estimator", "bandwidth_n");
    if (v == "total")
      cfg.bandwidth_n = BandwidthSampleSize::total;
    else if (v == "blocks")
      cfg.bandwidth_n = BandwidthSampleSize::blocks;
    else
      throw ConfigError("estimator.bandwidth_n", "expected 'total' or 'blocks'");
  }
  get_opt(obj, "estimator", "coarse_step", cfg.coarse_step);
  get_opt(obj, "estimator", "refine_tol", cfg.refine_tol);
  get_opt(obj, "estimator", "max_evals", cfg.max_evals);
  get_opt(obj, "estimator", "grid_nodes", cfg.grid_nodes);
  if (obj.contains("quadrature")) {
    const auto v = get<std::string>(obj, "estimator", "quadrature");
    if (v == "midpoint")
      cfg.quadrature = QuadRule::midpoint;
    else if (v == "simpson")
      cfg.quadrature = QuadRule::simpson;
    else
      throw ConfigError("estimator.quadrature", "expected 'midpoint' or 'simpson'");
  }
  if (obj.contains("box_lower") != obj.contains("box_upper"))
    throw ConfigError("estimator.box_lower", "box_lower and box_upper go together");
  if (obj.contains("box_lower"))
    cfg.box = ThetaBox{get<std::vector<double>>(obj, "estimator", "box_lower"),
                       get<std::vector<double>>(obj, "estimator", "box_upper")};
  return cfg;
}

McConfig parse_montecarlo(const json& obj)
{
  reject_unknown(obj, "montecarlo",
                 {"true_d", "sizes", "replications", "noise", "kernel", "base_seed", "truncation", "threads"});
  McConfig cfg;
  cfg.true_d = get<std::vector<double>>(obj, "montecarlo", "true_d");
  cfg.sizes = get<std::vector<std::size_t>>(obj, "montecarlo", "sizes");
  get_opt(obj, "montecarlo", "replications", cfg.replications);
  if (obj.contains("noise"))
    cfg.noise = parse_family(get<std::string>(obj, "montecarlo", "noise"));
  cfg.kernel = cfg.noise;
  if (obj.contains("kernel"))
    cfg.kernel = parse_family(get<std::string>(obj, "montecarlo", "kernel"));
  get_opt(obj, "montecarlo", "base_seed", cfg.base_seed);
  get_opt(obj, "montecarlo", "truncation", cfg.truncation);
  get_opt(obj, "montecarlo", "threads", cfg.threads);
  return cfg;
}

} // namespace

RunConfig parse_run_config(const std::string& text)
{
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  reject_unknown(doc, "", {"process", "input", "estimator", "montecarlo", "output"});

  RunConfig cfg;
  if (doc.contains("process"))
    cfg.process = parse_process(doc["process"]);
  if (doc.contains("input")) {
    const json& in = doc["input"];
    reject_unknown(in, "input", {"path", "p"});
    cfg.input_path = get<std::string>(in, "input", "path");
    get_opt(in, "input", "p", cfg.input_period);
  }
  if (cfg.process && cfg.input_path)
    throw ConfigError("input", "give either a process to simulate or an input file, not both");
  if (doc.contains("estimator")) {
    cfg.has_estimator = true;
    cfg.estimator = parse_estimator(doc["estimator"]);
  }
  if (doc.contains("montecarlo")) {
    McConfig mc = parse_montecarlo(doc["montecarlo"]);
    mc.estimator = cfg.estimator;
    mc.estimator.kernel = mc.kernel;
    mc.estimator.reference = mc.noise;
    mc.validate();
    cfg.montecarlo = std::move(mc);
  }
  if (doc.contains("output")) {
    const json& out = doc["output"];
    reject_unknown(out, "output", {"series", "estimate", "report_csv", "report_json"});
    auto opt = [&](const char* key, std::optional<std::string>& target) {
      if (out.contains(key))
        target = get<std::string>(out, "output", key);
    };
    opt("series", cfg.series_out);
    opt("estimate", cfg.estimate_out);
    opt("report_csv", cfg.report_csv);
    opt("report_json", cfg.report_json);
  }
  if (cfg.has_estimator) {
    const std::size_t p = cfg.process ? cfg.process->period : cfg.input_period;
    if (p != 0)
      cfg.estimator.validate(p);
  }
  if (!cfg.process && !cfg.input_path && !cfg.montecarlo)
    throw ConfigError("config", "nothing to do: need process, input or montecarlo");
  return cfg;
}

} // namespace pmhd::cli
