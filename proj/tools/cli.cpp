#include "cli.hpp"

#include "run_config.hpp"

#include "pmhd/pmhd.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace pmhd::cli {

namespace {

namespace fs = std::filesystem;

std::size_t default_threads()
{
  if (const char* env = std::getenv(kThreadsEnv)) {
    try {
      const long v = std::stol(env);
      if (v > 0)
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string join(const std::vector<double>& v)
{
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out += (i ? "," : "") + format_double(v[i]);
  return out;
}

void write_file(const fs::path& path, const std::string& content)
{
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out)
    throw std::runtime_error("write failed for '" + path.string() + "'");
}

const std::vector<std::string> kFamilyNames{"gaussian", "normal", "cauchy"};

/// Flags shared by `estimate` and `mc`.
struct EstimatorFlags
{
  std::string kernel = "gaussian";
  std::string reference = "gaussian";
  std::optional<double> alpha;
  double ell = 1.0;
  std::string bandwidth_n = "total";
  double coarse_step = 0.05;
  double refine_tol = 1e-4;
  std::size_t max_evals = 400;
  std::size_t grid_nodes = kDefaultGridNodes;
  std::string quadrature = "midpoint";
  std::vector<double> box_lower;
  std::vector<double> box_upper;

  void attach(CLI::App& app, bool with_families)
  {
    if (with_families) {
      app.add_option("--kernel", kernel, "Kernel family (gaussian|cauchy)")
        ->check(CLI::IsMember(kFamilyNames));
      app.add_option("--reference", reference, "Reference innovation density (gaussian|cauchy)")
        ->check(CLI::IsMember(kFamilyNames));
    }
    app.add_option("--alpha", alpha, "Bandwidth exponent in (-1, 0); default -1/(p+4)");
    app.add_option("--ell", ell, "Bandwidth constant")->check(CLI::PositiveNumber);
    app.add_option("--bandwidth-n", bandwidth_n, "Sample size in the bandwidth law")
      ->check(CLI::IsMember({"total", "blocks"}));
    app.add_option("--coarse-step", coarse_step, "Lattice spacing of the coarse scan")->check(CLI::PositiveNumber);
    app.add_option("--refine-tol", refine_tol, "Simplex diameter tolerance")->check(CLI::PositiveNumber);
    app.add_option("--max-evals", max_evals, "Simplex evaluation budget");
    app.add_option("--grid-nodes", grid_nodes, "Quadrature nodes per axis")->check(CLI::Range(3, 100000));
    app.add_option("--quadrature", quadrature, "midpoint|simpson")->check(CLI::IsMember({"midpoint", "simpson"}));
    app.add_option("--box-lower", box_lower, "Lower corner of the parameter box")->delimiter(',');
    app.add_option("--box-upper", box_upper, "Upper corner of the parameter box")->delimiter(',');
  }

  EstimatorConfig build() const
  {
    EstimatorConfig cfg;
    cfg.kernel = parse_family(kernel);
    cfg.reference = parse_family(reference);
    if (alpha)
      cfg.rule = BandwidthRule{*alpha, ell};
    else if (ell != 1.0)
      throw ConfigError("--ell", "set --alpha together with --ell");
    cfg.bandwidth_n = bandwidth_n == "blocks" ? BandwidthSampleSize::blocks : BandwidthSampleSize::total;
    cfg.coarse_step = coarse_step;
    cfg.refine_tol = refine_tol;
    cfg.max_evals = max_evals;
    cfg.grid_nodes = grid_nodes;
    cfg.quadrature = quadrature == "simpson" ? QuadRule::simpson : QuadRule::midpoint;
    if (box_lower.empty() != box_upper.empty())
      throw ConfigError("--box-lower", "--box-lower and --box-upper go together");
    if (!box_lower.empty())
      cfg.box = ThetaBox{box_lower, box_upper};
    return cfg;
  }
};

int cmd_simulate(std::size_t p, const std::vector<double>& d, std::size_t n, const std::string& noise_name,
                 const std::vector<double>& scales, std::uint64_t seed, const std::string& out_path,
                 std::size_t truncation, std::size_t burn_in, Generator generator, std::ostream& out)
{
  const Family noise = parse_family(noise_name);
  ProcessSpec spec{p, d, {noise, scales}, n, truncation, burn_in, seed, generator};
  const Series series = simulate(spec);
  save_series(series, out_path);
  out << "n=" << n << " p=" << p << " d=" << join(d) << " noise=" << to_string(noise) << " seed=" << seed
      << " generator=" << to_string(generator) << " -> " << out_path << '\n';
  return kExitOk;
}

int cmd_estimate(const std::string& input, std::size_t p, const EstimatorFlags& flags,
                 const std::string& residuals_out, const std::string& grid_out, std::ostream& out)
{
  const Series series = load_series(input, p);
  const EstimatorConfig cfg = flags.build();
  const EstimateResult result = estimate(series, cfg);

  if (!residuals_out.empty() || !grid_out.empty()) {
    const ResidualBlocks residuals = invert(series, result.d_hat);
    if (!residuals_out.empty()) {
      std::ostringstream buf;
      write_residuals_csv(residuals, buf);
      write_file(residuals_out, buf.str());
    }
    if (!grid_out.empty()) {
      const Objective objective_fn(series, cfg);
      const KdeModel kde(residuals.blocks, KernelSpec{cfg.kernel, series.period}, objective_fn.bandwidth());
      const QuadGrid grid = default_grid(kde.samples(), objective_fn.reference(), kde.bandwidth(), cfg.grid_nodes,
                                         cfg.quadrature, cfg.allow_high_dim);
      const auto axes = grid.all_nodes();
      std::ostringstream buf;
      write_grid_csv(axes, kde.evaluate_tensor(axes), buf);
      write_file(grid_out, buf.str());
    }
  }

  out << to_json(result) << '\n';
  return result.converged ? kExitOk : kExitNotConverged;
}

int cmd_tables(std::size_t nr, std::uint64_t seed, const std::string& out_dir, std::size_t threads,
               std::ostream& out)
{
  const auto configs = table_configs(nr, seed, threads);
  for (std::size_t t = 0; t < configs.size(); ++t) {
    const McReport report = run(configs[t]);
    std::ostringstream buf;
    write_table_csv(report, buf);
    const fs::path path = fs::path(out_dir) / ("table" + std::to_string(t + 1) + ".csv");
    write_file(path, buf.str());
    out << "table" << (t + 1) << ": noise=" << to_string(configs[t].noise) << " d=" << join(configs[t].true_d)
        << " n_r=" << nr << " -> " << path.string() << '\n';
    for (const auto& s : report.sizes)
      out << "  n=" << s.n << " mean=(" << join(s.mean_estimate) << ") mse=" << format_double(s.mse)
          << " failures=" << s.failures << " seconds=" << s.seconds << '\n';
  }
  return kExitOk;
}

void write_report(const McReport& report, const std::string& csv, const std::string& json, std::ostream& out)
{
  std::ostringstream buf;
  write_report_csv(report, buf);
  if (csv.empty())
    out << buf.str();
  else
    write_file(csv, buf.str());
  if (!json.empty())
    write_file(json, report_to_json(report) + "\n");
}

int cmd_run(const std::string& config_path, std::ostream& out)
{
  std::ifstream in(config_path, std::ios::binary);
  if (!in)
    throw ParseError("cannot open config '" + config_path + "'");
  std::stringstream text;
  text << in.rdbuf();
  const RunConfig cfg = parse_run_config(text.str());

  int status = kExitOk;
  std::optional<Series> series;
  if (cfg.process) {
    series = simulate(*cfg.process);
    if (cfg.series_out)
      save_series(*series, *cfg.series_out);
  } else if (cfg.input_path) {
    series = load_series(*cfg.input_path, cfg.input_period);
  }
  if (series && cfg.has_estimator) {
    const EstimateResult result = estimate(*series, cfg.estimator);
    const std::string json = to_json(result);
    if (cfg.estimate_out)
      write_file(*cfg.estimate_out, json + "\n");
    out << json << '\n';
    if (!result.converged)
      status = kExitNotConverged;
  }
  if (cfg.montecarlo) {
    const McReport report = run(*cfg.montecarlo);
    write_report(report, cfg.report_csv.value_or(""), cfg.report_json.value_or(""), out);
  }
  return status;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Periodic long-memory simulation and minimum Hellinger distance estimation", "pmhd"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate a periodic fractional series");
  std::size_t sim_p = 0, sim_n = 0, sim_truncation = kDefaultGenerationTruncation, sim_burn = 0;
  std::vector<double> sim_d, sim_scales{1.0};
  std::string sim_noise = "gaussian";
  std::uint64_t sim_seed = 1;
  std::string sim_out, sim_generator = "ar";
  sim->add_option("--p", sim_p, "Period")->required()->check(CLI::PositiveNumber);
  sim->add_option("--d", sim_d, "Memory parameters, comma separated")->required()->delimiter(',');
  sim->add_option("--n", sim_n, "Sample size (multiple of p)")->required()->check(CLI::PositiveNumber);
  sim->add_option("--noise", sim_noise, "Innovation family (gaussian|cauchy)")
    ->check(CLI::IsMember(kFamilyNames));
  sim->add_option("--scale", sim_scales, "Innovation scale(s): one value or one per season")->delimiter(',');
  sim->add_option("--seed", sim_seed, "RNG seed");
  sim->add_option("--out", sim_out, "Output file (.csv or .json)")->required();
  sim->add_option("--truncation", sim_truncation, "Filter truncation order M");
  sim->add_option("--burn-in", sim_burn, "Extra discarded prefix");
  sim->add_option("--generator", sim_generator, "ar (default) or ma")->check(CLI::IsMember({"ar", "ma"}));

  // estimate
  auto* est = app.add_subcommand("estimate", "Minimum Hellinger distance estimate of d");
  std::string est_input, est_residuals, est_grid;
  std::size_t est_p = 0;
  EstimatorFlags est_flags;
  est->add_option("--input", est_input, "Series file (.csv or .json)")->required();
  est->add_option("--p", est_p, "Period (required for CSV input)");
  est_flags.attach(*est, true);
  est->add_option("--residuals-out", est_residuals, "Write residual blocks at the estimate as CSV");
  est->add_option("--grid-out", est_grid, "Write the kernel estimate on the quadrature grid as CSV");

  // tables
  auto* tab = app.add_subcommand("tables", "Run the four published simulation designs");
  std::size_t tab_nr = 100, tab_threads = default_threads();
  std::uint64_t tab_seed = 1;
  std::string tab_dir = ".";
  tab->add_option("--nr", tab_nr, "Replications per size")->check(CLI::PositiveNumber);
  tab->add_option("--seed", tab_seed, "Base seed");
  tab->add_option("--out-dir", tab_dir, "Directory for table1.csv..table4.csv");
  tab->add_option("--threads", tab_threads, "Worker threads (default $PMHD_THREADS or #cores)")
    ->check(CLI::PositiveNumber);

  // mc
  auto* mc = app.add_subcommand("mc", "Monte Carlo replication of one design");
  std::vector<double> mc_d;
  std::vector<std::size_t> mc_sizes;
  std::size_t mc_nr = 100, mc_threads = default_threads(), mc_truncation = kDefaultGenerationTruncation;
  std::string mc_noise = "gaussian";
  std::optional<std::string> mc_kernel;
  std::uint64_t mc_seed = 1;
  std::string mc_csv, mc_json, mc_generator = "ar";
  EstimatorFlags mc_flags;
  mc->add_option("--d", mc_d, "True memory parameters")->required()->delimiter(',');
  mc->add_option("--sizes", mc_sizes, "Sample sizes")->required()->delimiter(',');
  mc->add_option("--nr", mc_nr, "Replications")->check(CLI::PositiveNumber);
  mc->add_option("--noise", mc_noise, "Innovation and reference family")
    ->check(CLI::IsMember(kFamilyNames));
  mc->add_option("--kernel", mc_kernel, "Kernel family (defaults to --noise)")
    ->check(CLI::IsMember(kFamilyNames));
  mc->add_option("--seed", mc_seed, "Base seed");
  mc->add_option("--threads", mc_threads, "Worker threads")->check(CLI::PositiveNumber);
  mc->add_option("--truncation", mc_truncation, "Generation truncation order");
  mc->add_option("--generator", mc_generator, "ar (default) or ma")->check(CLI::IsMember({"ar", "ma"}));
  mc->add_option("--csv", mc_csv, "Report CSV path (default: stdout)");
  mc->add_option("--json", mc_json, "Report JSON path");
  mc_flags.attach(*mc, false);

  // run
  auto* runc = app.add_subcommand("run", "Execute a JSON run configuration");
  std::string run_config;
  runc->add_option("--config", run_config, "Configuration file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (sim->parsed())
      return cmd_simulate(sim_p, sim_d, sim_n, sim_noise, sim_scales, sim_seed, sim_out, sim_truncation, sim_burn,
                          parse_generator(sim_generator), out);
    if (est->parsed())
      return cmd_estimate(est_input, est_p, est_flags, est_residuals, est_grid, out);
    if (tab->parsed())
      return cmd_tables(tab_nr, tab_seed, tab_dir, tab_threads, out);
    if (mc->parsed()) {
      McConfig cfg;
      cfg.true_d = mc_d;
      cfg.sizes = mc_sizes;
      cfg.replications = mc_nr;
      cfg.noise = parse_family(mc_noise);
      cfg.kernel = parse_family(mc_kernel.value_or(mc_noise));
      cfg.base_seed = mc_seed;
      cfg.truncation = mc_truncation;
      cfg.generator = parse_generator(mc_generator);
      cfg.threads = mc_threads;
      cfg.estimator = mc_flags.build();
      cfg.estimator.kernel = cfg.kernel;
      cfg.estimator.reference = cfg.noise;
      write_report(run(cfg), mc_csv, mc_json, out);
      return kExitOk;
    }
    if (runc->parsed())
      return cmd_run(run_config, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

} // namespace pmhd::cli
