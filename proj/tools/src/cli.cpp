#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "mrfcp/errors.hpp"
#include "mrfcp/evaluation.hpp"
#include "mrfcp/ingestion.hpp"
#include "mrfcp/io.hpp"
#include "mrfcp/random.hpp"
#include "mrfcp/scan.hpp"
#include "mrfcp/simulate.hpp"
#include "mrfcp/stability.hpp"

namespace mrfcp::cli {
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Common {
  std::string out;
  std::size_t threads = 0;
};

struct SolverFlags {
  std::string method = "newton";
  double tol = 1e-8;
  std::size_t max_iter = 5000;

  SolverOptions resolve() const {
    SolverOptions o;
    if (method == "newton") {
      o.method = SolverMethod::proximal_newton;
    } else if (method == "gradient") {
      o.method = SolverMethod::proximal_gradient;
    } else {
      throw InvalidArgument("--solver must be newton or gradient");
    }
    if (!(tol > 0.0)) throw InvalidArgument("--tol must be positive");
    if (max_iter < 1) throw InvalidArgument("--max-iter must be at least 1");
    o.tol = tol;
    o.max_iter = max_iter;
    return o;
  }
};

struct TuningFlags {
  bool bic = false;
  double a1 = 32.0;
  double a2 = 32.0;
  double grid_hi = 2.0;
  double grid_lo = 0.02;
  std::size_t per_decade = 20;

  std::vector<double> grid() const { return log_grid(grid_hi, grid_lo, per_decade); }

  Tuning resolve() const {
    Tuning t;
    t.mode = bic ? TuningMode::bic_per_tau : TuningMode::schedule;
    if (!(a1 > 0.0) || !(a2 > 0.0)) throw InvalidArgument("--a1 and --a2 must be positive");
    t.a1 = a1;
    t.a2 = a2;
    if (bic) t.a_grid = grid();
    return t;
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "Output directory (default: $" + std::string(kOutputDirEnv) + " or .)");
  cmd->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
}

void add_solver(CLI::App* cmd, SolverFlags& s) {
  cmd->add_option("--solver", s.method, "newton or gradient")->capture_default_str();
  cmd->add_option("--tol", s.tol, "Relative KKT tolerance")->capture_default_str();
  cmd->add_option("--max-iter", s.max_iter, "Iteration cap per fit")->capture_default_str();
}

void add_tuning(CLI::App* cmd, TuningFlags& t) {
  cmd->add_flag("--bic", t.bic, "Choose each side's multiplier by BIC at every tau");
  cmd->add_option("--a1", t.a1, "Penalty multiplier before the change")->capture_default_str();
  cmd->add_option("--a2", t.a2, "Penalty multiplier after the change")->capture_default_str();
  cmd->add_option("--a-grid-hi", t.grid_hi, "Largest BIC multiplier")->capture_default_str();
  cmd->add_option("--a-grid-lo", t.grid_lo, "Smallest BIC multiplier")->capture_default_str();
  cmd->add_option("--a-grid-per-decade", t.per_decade, "BIC grid density")->capture_default_str();
}

fs::path output_dir(const Common& c) {
  std::string dir = c.out;
  if (dir.empty()) {
    const char* env = std::getenv(kOutputDirEnv);
    dir = env != nullptr && *env != '\0' ? env : ".";
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + dir + ": " + ec.message());
  return dir;
}

Json with_header(const char* command) { return Json{{"schema_version", kSchemaVersion}, {"command", command}}; }

void write_result(const fs::path& dir, const std::string& name, Json body, Clock::time_point start) {
  Json j = {{"schema_version", kSchemaVersion}};
  for (auto& [k, v] : body.items()) j[k] = v;
  j["runtime_seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
  write_json_file((dir / name).string(), j);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

std::string curve_csv(const std::vector<CurvePoint>& curve) {
  std::ostringstream s;
  write_curve_csv(s, curve);
  return s.str();
}

Json solver_json(const SolverFlags& s) {
  return {{"method", s.method}, {"tol", s.tol}, {"max_iter", s.max_iter}};
}

Json tuning_json(const TuningFlags& t) {
  Json j = {{"bic", t.bic}, {"a1", t.a1}, {"a2", t.a2}};
  if (t.bic) j["a_grid"] = {{"hi", t.grid_hi}, {"lo", t.grid_lo}, {"per_decade", t.per_decade}};
  return j;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateConfig {
  Common common;
  ScenarioSpec spec;
  bool table6 = false;
  std::string redraw = "fresh";
};

int cmd_simulate(const SimulateConfig& cfg, std::ostream& out) {
  const auto start = Clock::now();
  ScenarioSpec spec = cfg.spec;
  if (cfg.redraw == "keep") {
    spec.redraw = RedrawPolicy::keep_positions;
  } else if (cfg.redraw != "fresh") {
    throw InvalidArgument("--redraw must be fresh or keep");
  }
  spec.community = cfg.table6;
  if (spec.community) spec.p = spec.layout.group1 + spec.layout.group2;
  const fs::path dir = output_dir(cfg.common);

  Json config = with_header("simulate");
  config["scenario"] = scenario_to_json(spec);
  write_json_file((dir / "config.json").string(), config);

  const Scenario sc = build_scenario(spec);
  write_dataset_csv((dir / "dataset.csv").string(), sc.data);
  Json truth = {{"T", spec.T},
                {"tau_star", spec.tau_star},
                {"theta1", params_to_json(sc.theta1)},
                {"theta2", params_to_json(sc.theta2)}};
  if (spec.community) {
    truth["groups"] = {{"assignment", sc.groups.assignment}, {"names", sc.groups.names}};
  }
  write_result(dir, "truth.json", truth, start);
  write_result(dir, "scenario.json", {{"scenario", scenario_to_json(sc.spec)}}, start);
  out << "wrote " << sc.data.T() << " x " << sc.data.p() << " dataset to " << (dir / "dataset.csv").string()
      << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// scan / fast-scan

struct ScanConfig {
  Common common;
  std::string input;
  std::size_t kl = 0;
  std::size_t ku = 0;
  std::size_t step = 1;
  bool no_warm_start = false;
  SolverFlags solver;
  TuningFlags tuning;
  // fast-scan only
  std::size_t stage1_step = 10;
  std::size_t stage2_halfwidth = 30;
  std::size_t stage2_step = 3;
  double bandwidth = 0.0;
  double bandwidth1 = 0.0;
  double bandwidth2 = 0.0;
};

ScanOptions scan_options(const ScanConfig& cfg) {
  ScanOptions o;
  o.tuning = cfg.tuning.resolve();
  o.solver = cfg.solver.resolve();
  o.threads = cfg.common.threads;
  o.warm_start = !cfg.no_warm_start;
  return o;
}

Json scan_config_json(const char* name, const ScanConfig& cfg, std::size_t kl, std::size_t ku, bool fast) {
  Json j = with_header(name);
  j["input"] = cfg.input;
  j["kl"] = kl;
  j["ku"] = ku;
  if (fast) {
    j["stage1_step"] = cfg.stage1_step;
    j["stage2_halfwidth"] = cfg.stage2_halfwidth;
    j["stage2_step"] = cfg.stage2_step;
    j["bandwidth1"] = cfg.bandwidth1 > 0.0 ? cfg.bandwidth1 : cfg.bandwidth;
    j["bandwidth2"] = cfg.bandwidth2 > 0.0 ? cfg.bandwidth2 : cfg.bandwidth;
  } else {
    j["step"] = cfg.step;
  }
  j["warm_start"] = !cfg.no_warm_start;
  j["threads"] = cfg.common.threads;
  j["solver"] = solver_json(cfg.solver);
  j["tuning"] = tuning_json(cfg.tuning);
  return j;
}

int cmd_scan(const ScanConfig& cfg, bool fast, std::ostream& out) {
  const auto start = Clock::now();
  const Dataset data = read_dataset_csv(cfg.input);
  const std::size_t kl = cfg.kl > 0 ? cfg.kl : default_margin(data.T());
  const std::size_t ku = cfg.ku > 0 ? cfg.ku : default_margin(data.T());
  const ScanOptions options = scan_options(cfg);
  const fs::path dir = output_dir(cfg.common);
  const char* name = fast ? "fast-scan" : "scan";
  write_json_file((dir / "config.json").string(), scan_config_json(name, cfg, kl, ku, fast));

  const PseudoLikelihood loss(make_ising_spec(), data);
  ScanResult result;
  if (fast) {
    FastScanOptions f;
    f.stage1 = build_domain(data.T(), kl, ku, cfg.stage1_step);
    f.stage2_halfwidth = cfg.stage2_halfwidth;
    f.stage2_step = cfg.stage2_step;
    f.bandwidth1 = cfg.bandwidth1 > 0.0 ? cfg.bandwidth1 : cfg.bandwidth;
    f.bandwidth2 = cfg.bandwidth2 > 0.0 ? cfg.bandwidth2 : cfg.bandwidth;
    result = fast_scan(loss, f, options);
  } else {
    result = basic_scan(loss, build_domain(data.T(), kl, ku, cfg.step), options);
  }

  Json body = scan_result_to_json(result);
  body["solver"] = solver_to_json(options.solver);
  write_result(dir, fast ? "fast_scan.json" : "scan.json", body, start);
  write_text(dir / "curve.csv", curve_csv(result.curve));
  if (result.stage1) write_text(dir / "stage1_smoothed.csv", curve_csv(result.stage1->smoothed));
  if (result.stage2) write_text(dir / "stage2_smoothed.csv", curve_csv(result.stage2->smoothed));
  out << "tau_hat " << result.tau_hat << " (alpha_hat " << result.alpha_hat << ", " << result.profile_fits
      << " profile fits)\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// stability

struct StabilityConfig {
  Common common;
  std::string input;
  std::size_t first = 0;
  std::size_t last = 0;
  std::string scan;
  std::string side = "first";
  std::size_t bootstrap = 50;
  double threshold = 0.9;
  double lambda = 0.0;
  std::uint64_t seed = 1;
  SolverFlags solver;
  TuningFlags tuning;
};

int cmd_stability(const StabilityConfig& cfg, std::ostream& out) {
  const auto start = Clock::now();
  const Dataset data = read_dataset_csv(cfg.input);
  TimeRange range{cfg.first, cfg.last};
  if (!cfg.scan.empty()) {
    if (cfg.first != 0 || cfg.last != 0) throw InvalidArgument("give either --scan or --first/--last");
    const Json scan = read_json_file(cfg.scan);
    const auto tau = scan.at("tau_hat").get<std::size_t>();
    if (cfg.side == "first") {
      range = {1, tau};
    } else if (cfg.side == "second") {
      range = {tau + 1, data.T()};
    } else {
      throw InvalidArgument("--side must be first or second");
    }
  } else if (cfg.first == 0 && cfg.last == 0) {
    range = {1, data.T()};
  }
  range.validate(data.T());

  StabilityOptions o;
  o.n_bootstrap = cfg.bootstrap;
  o.threshold = cfg.threshold;
  o.seed = cfg.seed;
  o.threads = cfg.common.threads;
  o.solver = cfg.solver.resolve();
  if (cfg.lambda > 0.0) {
    o.policy.kind = LambdaPolicyKind::fixed;
    o.policy.lambda = cfg.lambda;
  } else {
    o.policy.kind = LambdaPolicyKind::bic;
    o.policy.a_grid = cfg.tuning.grid();
  }

  const fs::path dir = output_dir(cfg.common);
  Json config = with_header("stability");
  config["input"] = cfg.input;
  config["range"] = {range.first, range.last};
  config["bootstrap"] = cfg.bootstrap;
  config["threshold"] = cfg.threshold;
  config["lambda_policy"] = cfg.lambda > 0.0 ? Json{{"kind", "fixed"}, {"lambda", cfg.lambda}}
                                             : Json{{"kind", "bic"}, {"a_grid", tuning_json(cfg.tuning)["a_grid"]}};
  config["seed"] = cfg.seed;
  config["threads"] = cfg.common.threads;
  config["solver"] = solver_json(cfg.solver);
  write_json_file((dir / "config.json").string(), config);

  const StabilityResult r = stability_select(make_ising_spec(), data, range, o);
  Json body = stability_to_json(r);
  body["range"] = {range.first, range.last};
  write_result(dir, "stability.json", body, start);
  std::ostringstream edges;
  write_stable_edges_csv(edges, r);
  write_text(dir / "stable_edges.csv", edges.str());
  out << r.stable_edges().size() << " stable edges at threshold " << r.threshold << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// metrics

struct MetricsConfig {
  Common common;
  std::string estimate;
  std::string truth;
  double zero_tol = 0.0;
};

int cmd_metrics(const MetricsConfig& cfg, std::ostream& out) {
  const auto start = Clock::now();
  const Json est = read_json_file(cfg.estimate);
  const Json tru = read_json_file(cfg.truth);
  auto params = [](const Json& j, const char* key, const std::string& file) {
    if (!j.contains(key)) throw DataError(file + " has no '" + key + "' matrix");
    return params_from_json(j.at(key));
  };
  const SymmetricParams e1 = params(est, "theta1", cfg.estimate);
  const SymmetricParams e2 = params(est, "theta2", cfg.estimate);
  const SymmetricParams t1 = params(tru, "theta1", cfg.truth);
  const SymmetricParams t2 = params(tru, "theta2", cfg.truth);

  const fs::path dir = output_dir(cfg.common);
  Json config = with_header("metrics");
  config["estimate"] = cfg.estimate;
  config["truth"] = cfg.truth;
  config["zero_tol"] = cfg.zero_tol;
  write_json_file((dir / "config.json").string(), config);

  const RecoveryReport rec = recovery_report(e1, t1, e2, t2, cfg.zero_tol);
  Json body = {{"recovery", recovery_to_json(rec)}};
  std::ostringstream csv;
  csv << std::setprecision(17) << "side,metric,value\n";
  auto row = [&](const char* side, const char* metric, const std::optional<double>& v) {
    csv << side << ',' << metric << ',';
    if (v) {
      csv << *v;
    } else {
      csv << "NA";
    }
    csv << '\n';
  };
  for (const auto& [side, rep] : {std::pair<const char*, const SideReport&>{"first", rec.first},
                                  std::pair<const char*, const SideReport&>{"second", rec.second}}) {
    row(side, "sensitivity", rep.confusion.sensitivity);
    row(side, "specificity", rep.confusion.specificity);
    row(side, "relative_error", rep.relative_error);
  }

  if (est.contains("tau_hat") && tru.contains("tau_star")) {
    const auto cp = changepoint_stats({est.at("tau_hat").get<double>()}, tru.at("tau_star").get<double>());
    body["changepoint"] = changepoint_to_json(cp);
    row("both", "tau_hat", cp.mean);
    row("both", "abs_error", std::abs(cp.mean - cp.tau_star));
  }
  if (tru.contains("groups")) {
    GroupLabels g;
    g.assignment = tru.at("groups").at("assignment").get<std::vector<std::size_t>>();
    g.names = tru.at("groups").at("names").get<std::vector<std::string>>();
    body["network"] = {{"estimate_first", network_stats_to_json(network_stats(e1, g))},
                       {"estimate_second", network_stats_to_json(network_stats(e2, g))},
                       {"truth_first", network_stats_to_json(network_stats(t1, g))},
                       {"truth_second", network_stats_to_json(network_stats(t2, g))}};
    body["signs"] = {{"estimate_first", sign_table_to_json(edge_sign_proportions(e1, g))},
                     {"estimate_second", sign_table_to_json(edge_sign_proportions(e2, g))}};
  }
  write_result(dir, "metrics.json", body, start);
  write_text(dir / "metrics.csv", csv.str());
  out << "sensitivity/specificity first " << rec.first.confusion.sensitivity.value_or(-1) << '/'
      << rec.first.confusion.specificity.value_or(-1) << ", second " << rec.second.confusion.sensitivity.value_or(-1)
      << '/' << rec.second.confusion.specificity.value_or(-1) << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// impute

struct ImputeConfig {
  Common common;
  std::string input;
  std::string parties;
  std::string strategy = "own-party-majority";
  double conformity = 0.0;
  std::string na_marker = "NA";
  std::string tie = "yes";
};

int cmd_impute(const ImputeConfig& cfg, std::ostream& out) {
  const auto start = Clock::now();
  ImputeOptions opts;
  opts.strategy = parse_impute_strategy(cfg.strategy);
  if (cfg.tie == "yes") {
    opts.tie = Vote::yes;
  } else if (cfg.tie == "no") {
    opts.tie = Vote::no;
  } else {
    throw InvalidArgument("--tie must be yes or no");
  }
  if (cfg.conformity != 0.0 && (!(cfg.conformity > 0.5) || cfg.conformity > 1.0)) {
    throw InvalidArgument("--conformity must lie in (0.5, 1]");
  }

  RawVotes raw = read_votes_csv(cfg.input, {cfg.na_marker});
  const std::size_t rows_in = raw.rows();
  if (!cfg.parties.empty()) attach_parties(raw, read_party_csv(cfg.parties));
  if (cfg.conformity > 0.0) raw = conformity_filter(raw, cfg.conformity);
  std::size_t missing = 0;
  for (Vote v : raw.cells) missing += v == Vote::missing ? 1 : 0;

  const fs::path dir = output_dir(cfg.common);
  Json config = with_header("impute");
  config["input"] = cfg.input;
  config["parties"] = cfg.parties;
  config["strategy"] = cfg.strategy;
  config["conformity"] = cfg.conformity > 0.0 ? Json(cfg.conformity) : Json(nullptr);
  config["na_marker"] = cfg.na_marker;
  config["tie"] = cfg.tie;
  write_json_file((dir / "config.json").string(), config);

  const Dataset data = impute(raw, opts);
  write_dataset_csv((dir / "dataset.csv").string(), data);
  write_result(dir, "impute.json",
               {{"rows_in", rows_in},
                {"rows_kept", data.T()},
                {"seats", data.p()},
                {"imputed_cells", missing},
                {"strategy", to_string(opts.strategy)}},
               start);
  out << "kept " << data.T() << " of " << rows_in << " rows, imputed " << missing << " cells\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchConfig {
  Common common;
  std::size_t p = 15;
  std::size_t T = 400;
  std::size_t tau_star = 200;
  double density = 0.15;
  std::vector<double> similarities{0.0, 0.2, 0.4};
  std::size_t reps = 10;
  std::uint64_t seed = 1;
  std::size_t kl = 40;
  std::size_t ku = 40;
  std::size_t step = 5;
  std::size_t stage1_step = 40;
  std::size_t stage2_halfwidth = 20;
  std::size_t stage2_step = 5;
  bool schedule = false;
  SolverFlags solver;
  TuningFlags tuning;
};

int cmd_bench(const BenchConfig& cfg, std::ostream& out) {
  const auto start = Clock::now();
  if (cfg.reps < 1) throw InvalidArgument("--reps must be at least 1");
  TuningFlags tf = cfg.tuning;
  tf.bic = !cfg.schedule;
  ScanOptions options;
  options.tuning = tf.resolve();
  options.solver = cfg.solver.resolve();
  options.threads = cfg.common.threads;

  const fs::path dir = output_dir(cfg.common);
  Json config = with_header("bench");
  config["p"] = cfg.p;
  config["T"] = cfg.T;
  config["tau_star"] = cfg.tau_star;
  config["density"] = cfg.density;
  config["similarities"] = cfg.similarities;
  config["reps"] = cfg.reps;
  config["seed"] = cfg.seed;
  config["basic"] = {{"kl", cfg.kl}, {"ku", cfg.ku}, {"step", cfg.step}};
  config["fast"] = {{"stage1_step", cfg.stage1_step},
                    {"stage2_halfwidth", cfg.stage2_halfwidth},
                    {"stage2_step", cfg.stage2_step}};
  config["solver"] = solver_json(cfg.solver);
  config["tuning"] = tuning_json(tf);
  write_json_file((dir / "config.json").string(), config);

  Json rows = Json::array();
  std::ostringstream csv;
  csv << std::setprecision(10)
      << "similarity,method,mean_tau_hat,rmse,cv,mean_profile_fits,seconds\n";
  out << std::fixed << std::setprecision(3);
  out << "similarity  method  mean_tau  rmse      cv      fits    seconds\n";
  for (double sim : cfg.similarities) {
    std::vector<double> basic_tau, fast_tau;
    double basic_fits = 0.0, fast_fits = 0.0, basic_sec = 0.0, fast_sec = 0.0;
    for (std::size_t r = 0; r < cfg.reps; ++r) {
      ScenarioSpec spec;
      spec.p = cfg.p;
      spec.T = cfg.T;
      spec.tau_star = cfg.tau_star;
      spec.density = cfg.density;
      spec.similarity = sim;
      spec.seed = child_seed(cfg.seed, r);
      const Scenario sc = build_scenario(spec);
      const PseudoLikelihood loss(make_ising_spec(), sc.data);

      auto t0 = Clock::now();
      const ScanResult b = basic_scan(loss, build_domain(cfg.T, cfg.kl, cfg.ku, cfg.step), options);
      basic_sec += std::chrono::duration<double>(Clock::now() - t0).count();
      basic_tau.push_back(static_cast<double>(b.tau_hat));
      basic_fits += static_cast<double>(b.profile_fits);

      FastScanOptions f;
      f.stage1 = build_domain(cfg.T, cfg.kl, cfg.ku, cfg.stage1_step);
      f.stage2_halfwidth = cfg.stage2_halfwidth;
      f.stage2_step = cfg.stage2_step;
      t0 = Clock::now();
      const ScanResult fr = fast_scan(loss, f, options);
      fast_sec += std::chrono::duration<double>(Clock::now() - t0).count();
      fast_tau.push_back(static_cast<double>(fr.tau_hat));
      fast_fits += static_cast<double>(fr.profile_fits);
    }
    const double n = static_cast<double>(cfg.reps);
    for (const auto& [method, taus, fits, sec] :
         {std::tuple<const char*, std::vector<double>&, double, double>{"basic", basic_tau, basic_fits, basic_sec},
          std::tuple<const char*, std::vector<double>&, double, double>{"fast", fast_tau, fast_fits, fast_sec}}) {
      const ChangePointReport rep = changepoint_stats(taus, static_cast<double>(cfg.tau_star));
      rows.push_back({{"similarity", sim},
                      {"method", method},
                      {"report", changepoint_to_json(rep)},
                      {"mean_profile_fits", fits / n},
                      {"seconds", sec}});
      csv << sim << ',' << method << ',' << rep.mean << ',' << rep.rmse << ',' << rep.cv << ',' << fits / n << ','
          << sec << '\n';
      out << std::setw(10) << sim << "  " << std::setw(6) << method << "  " << std::setw(8) << rep.mean << "  "
          << std::setw(8) << rep.rmse << "  " << std::setw(6) << rep.cv << "  " << std::setw(6) << fits / n << "  "
          << std::setw(8) << sec << '\n';
    }
  }
  write_result(dir, "bench.json", {{"rows", rows}}, start);
  write_text(dir / "bench.csv", csv.str());
  return kOk;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InvalidArgument*>(&e) != nullptr) return kConfigError;
  if (dynamic_cast<const DataError*>(&e) != nullptr) return kDataError;
  if (dynamic_cast<const NumericalError*>(&e) != nullptr) return kNumericalError;
  return kFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Single change-point detection in Markov random field time series"};
  app.require_subcommand(1);

  SimulateConfig sim;
  auto* simulate = app.add_subcommand("simulate", "Sample a synthetic series with one change-point");
  add_common(simulate, sim.common);
  simulate->add_option("--p", sim.spec.p, "Nodes")->capture_default_str();
  simulate->add_option("--T", sim.spec.T, "Series length")->capture_default_str();
  simulate->add_option("--tau-star", sim.spec.tau_star, "True change-point")->capture_default_str();
  simulate->add_option("--density", sim.spec.density, "Edge density of each network")->capture_default_str();
  simulate->add_option("--similarity", sim.spec.similarity, "Fraction of edges shared")->capture_default_str();
  simulate->add_option("--redraw", sim.redraw, "fresh or keep: positions of unshared edges")->capture_default_str();
  simulate->add_flag("--community-table6", sim.table6, "Two-community scenario (p = 50)");
  simulate->add_option("--burn-in", sim.spec.sampler.burn_in, "Gibbs burn-in sweeps")->capture_default_str();
  simulate->add_option("--thin", sim.spec.sampler.thin, "Sweeps between samples")->capture_default_str();
  simulate->add_option("--seed", sim.spec.seed, "Master seed")->capture_default_str();

  ScanConfig scan_cfg;
  auto* scan = app.add_subcommand("scan", "Full-grid change-point scan");
  add_common(scan, scan_cfg.common);
  add_solver(scan, scan_cfg.solver);
  add_tuning(scan, scan_cfg.tuning);
  scan->add_option("--input", scan_cfg.input, "Dataset CSV")->required();
  scan->add_option("--kl", scan_cfg.kl, "Left margin (default max(30, 8% of T))");
  scan->add_option("--ku", scan_cfg.ku, "Right margin (default max(30, 8% of T))");
  scan->add_option("--step", scan_cfg.step, "Grid step")->capture_default_str();
  scan->add_flag("--no-warm-start", scan_cfg.no_warm_start, "Cold-start every fit");

  ScanConfig fast_cfg;
  auto* fast = app.add_subcommand("fast-scan", "Two-stage coarse-to-fine scan with kernel smoothing");
  add_common(fast, fast_cfg.common);
  add_solver(fast, fast_cfg.solver);
  add_tuning(fast, fast_cfg.tuning);
  fast->add_option("--input", fast_cfg.input, "Dataset CSV")->required();
  fast->add_option("--kl", fast_cfg.kl, "Left margin (default max(30, 8% of T))");
  fast->add_option("--ku", fast_cfg.ku, "Right margin (default max(30, 8% of T))");
  fast->add_option("--stage1-step", fast_cfg.stage1_step, "Coarse grid step")->capture_default_str();
  fast->add_option("--stage2-halfwidth", fast_cfg.stage2_halfwidth, "Fine window half-width")->capture_default_str();
  fast->add_option("--stage2-step", fast_cfg.stage2_step, "Fine grid step")->capture_default_str();
  fast->add_option("--bandwidth", fast_cfg.bandwidth, "Kernel bandwidth for both stages (0 = 1.5 x step)");
  fast->add_option("--bandwidth1", fast_cfg.bandwidth1, "Stage-1 bandwidth");
  fast->add_option("--bandwidth2", fast_cfg.bandwidth2, "Stage-2 bandwidth");
  fast->add_flag("--no-warm-start", fast_cfg.no_warm_start, "Cold-start every fit");

  StabilityConfig stab;
  auto* stability = app.add_subcommand("stability", "Bootstrap edge-selection frequencies for one segment");
  add_common(stability, stab.common);
  add_solver(stability, stab.solver);
  add_tuning(stability, stab.tuning);
  stability->add_option("--input", stab.input, "Dataset CSV")->required();
  stability->add_option("--first", stab.first, "First row of the segment (1-based)");
  stability->add_option("--last", stab.last, "Last row of the segment (1-based)");
  stability->add_option("--scan", stab.scan, "Scan JSON whose tau_hat splits the series");
  stability->add_option("--side", stab.side, "first or second segment of --scan")->capture_default_str();
  stability->add_option("--bootstrap", stab.bootstrap, "Resamples")->capture_default_str();
  stability->add_option("--threshold", stab.threshold, "Selection frequency cut")->capture_default_str();
  stability->add_option("--lambda", stab.lambda, "Fixed lambda (default: BIC per resample)");
  stability->add_option("--seed", stab.seed, "Master seed")->capture_default_str();

  MetricsConfig met;
  auto* metrics = app.add_subcommand("metrics", "Compare estimated networks against the truth");
  add_common(metrics, met.common);
  metrics->add_option("--estimate", met.estimate, "Scan JSON with theta1/theta2")->required();
  metrics->add_option("--truth", met.truth, "Truth JSON with theta1/theta2")->required();
  metrics->add_option("--zero-tol", met.zero_tol, "Estimates at or below this size count as absent");

  ImputeConfig imp;
  auto* imputation = app.add_subcommand("impute", "Clean a vote table into a binary dataset");
  add_common(imputation, imp.common);
  imputation->add_option("--input", imp.input, "Vote CSV")->required();
  imputation->add_option("--parties", imp.parties, "Party CSV: seat,start,end,party");
  imputation->add_option("--strategy", imp.strategy,
                         "own-party-majority, winning-majority or opposite-party-majority")
      ->capture_default_str();
  imputation->add_option("--conformity", imp.conformity, "Drop rows whose majority share reaches this");
  imputation->add_option("--na-marker", imp.na_marker, "Missing-value marker")->capture_default_str();
  imputation->add_option("--tie", imp.tie, "yes or no: value used on tied majorities")->capture_default_str();

  BenchConfig ben;
  auto* bench = app.add_subcommand("bench", "Replicated basic and fast scans over similarity levels");
  add_common(bench, ben.common);
  add_solver(bench, ben.solver);
  add_tuning(bench, ben.tuning);
  bench->add_option("--p", ben.p)->capture_default_str();
  bench->add_option("--T", ben.T)->capture_default_str();
  bench->add_option("--tau-star", ben.tau_star)->capture_default_str();
  bench->add_option("--density", ben.density)->capture_default_str();
  bench->add_option("--similarity", ben.similarities, "Similarity levels")->delimiter(',')->capture_default_str();
  bench->add_option("--reps", ben.reps, "Replications per level")->capture_default_str();
  bench->add_option("--seed", ben.seed)->capture_default_str();
  bench->add_option("--kl", ben.kl)->capture_default_str();
  bench->add_option("--ku", ben.ku)->capture_default_str();
  bench->add_option("--step", ben.step, "Basic-scan grid step")->capture_default_str();
  bench->add_option("--stage1-step", ben.stage1_step)->capture_default_str();
  bench->add_option("--stage2-halfwidth", ben.stage2_halfwidth)->capture_default_str();
  bench->add_option("--stage2-step", ben.stage2_step)->capture_default_str();
  bench->add_flag("--schedule", ben.schedule, "Use the fixed a1/a2 schedule instead of BIC");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kConfigError;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, out);
    if (scan->parsed()) return cmd_scan(scan_cfg, false, out);
    if (fast->parsed()) return cmd_scan(fast_cfg, true, out);
    if (stability->parsed()) return cmd_stability(stab, out);
    if (metrics->parsed()) return cmd_metrics(met, out);
    if (imputation->parsed()) return cmd_impute(imp, out);
    if (bench->parsed()) return cmd_bench(ben, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kFailure;
}

}  // namespace mrfcp::cli
