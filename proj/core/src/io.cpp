#include "mrfcp/io.hpp"

#include <fstream>
#include <sstream>

#include "mrfcp/errors.hpp"

namespace mrfcp {
namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <class T>
T require(const Json& j, const char* key) {
  if (!j.contains(key)) throw DataError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("field '") + key + "': " + e.what());
  }
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json curve_to_json(const std::vector<CurvePoint>& curve) {
  Json arr = Json::array();
  for (const CurvePoint& c : curve) arr.push_back({{"tau", c.tau}, {"objective", c.objective}});
  return arr;
}

Json stage_to_json(const StageInfo& s) {
  return {{"lo", s.lo},
          {"hi", s.hi},
          {"step", s.step},
          {"bandwidth", s.bandwidth},
          {"tau_hat", s.tau_hat},
          {"raw", curve_to_json(s.raw)},
          {"smoothed", curve_to_json(s.smoothed)}};
}

Json fit_to_json(const FitResult& f) {
  return {{"lambda", f.lambda},
          {"objective_value", f.objective_value},
          {"loss", f.loss},
          {"iterations", f.iterations},
          {"kkt_residual", f.kkt_residual},
          {"kkt_tolerance", f.kkt_tolerance},
          {"converged", f.converged},
          {"theta", params_to_json(f.theta_hat)}};
}

}  // namespace

Json params_to_json(const SymmetricParams& theta) {
  Json entries = Json::array();
  for (std::size_t j = 0; j < theta.p(); ++j) {
    for (std::size_t k = 0; k <= j; ++k) {
      if (theta(j, k) != 0.0) entries.push_back(Json::array({j, k, theta(j, k)}));
    }
  }
  return {{"p", theta.p()}, {"entries", entries}};
}

SymmetricParams params_from_json(const Json& j) {
  const auto p = require<std::size_t>(j, "p");
  if (!j.contains("entries") || !j.at("entries").is_array()) throw DataError("missing field 'entries'");
  SymmetricParams theta(p);
  for (const Json& e : j.at("entries")) {
    if (!e.is_array() || e.size() != 3) throw DataError("parameter entries must be [j, k, value]");
    const auto a = e[0].get<std::size_t>();
    const auto b = e[1].get<std::size_t>();
    if (a >= p || b >= p) throw DataError("parameter entry index out of range");
    if (a < b) throw DataError("parameter entries must satisfy j >= k");
    theta.set(a, b, e[2].get<double>());
  }
  return theta;
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  const bool timed = !data.time_labels().empty();
  if (timed) out << "time,";
  for (std::size_t j = 0; j < data.p(); ++j) {
    if (j > 0) out << ',';
    out << (data.node_labels().empty() ? "x" + std::to_string(j + 1) : data.node_labels()[j]);
  }
  out << '\n';
  for (std::size_t t = 0; t < data.T(); ++t) {
    if (timed) out << data.time_labels()[t] << ',';
    for (std::size_t j = 0; j < data.p(); ++j) {
      if (j > 0) out << ',';
      out << static_cast<int>(data(t, j));
    }
    out << '\n';
  }
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  write_dataset_csv(out, data);
  if (!out) throw DataError("failed writing " + path);
}

Dataset read_dataset_csv(std::istream& in, std::size_t alphabet_size) {
  if (alphabet_size < 2 || alphabet_size > 256) throw InvalidArgument("alphabet size must lie in [2, 256]");
  std::string line;
  if (!std::getline(in, line)) throw DataError("dataset file is empty");
  const std::vector<std::string> header = split_commas(line);
  const bool timed = !header.empty() && (header[0] == "time" || header[0] == "date");
  std::vector<std::string> labels(header.begin() + (timed ? 1 : 0), header.end());
  if (labels.empty()) throw DataError("dataset header lists no nodes");
  std::vector<Symbol> values;
  std::vector<std::string> times;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split_commas(line);
    if (cells.size() != header.size()) {
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                      " fields, found " + std::to_string(cells.size()));
    }
    if (timed) times.push_back(cells[0]);
    for (std::size_t i = timed ? 1 : 0; i < cells.size(); ++i) {
      std::size_t used = 0;
      int v = -1;
      try {
        v = std::stoi(cells[i], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cells[i].size() || cells[i].empty() || v < 0 || static_cast<std::size_t>(v) >= alphabet_size) {
        throw DataError("line " + std::to_string(line_no) + ": invalid cell '" + cells[i] + "'");
      }
      values.push_back(static_cast<Symbol>(v));
    }
  }
  const std::size_t p = labels.size();
  return Dataset(p, std::move(values), alphabet_size, std::move(labels), std::move(times));
}

Dataset read_dataset_csv(const std::string& path, std::size_t alphabet_size) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return read_dataset_csv(in, alphabet_size);
}

Json scenario_to_json(const ScenarioSpec& s) {
  Json j = {{"p", s.p},
            {"T", s.T},
            {"tau_star", s.tau_star},
            {"alpha_star", static_cast<double>(s.tau_star) / static_cast<double>(s.T)},
            {"density", s.density},
            {"similarity", s.similarity},
            {"redraw", s.redraw == RedrawPolicy::fresh_positions ? "fresh-positions" : "keep-positions"},
            {"value_range", Json::array({Json::array({-1.0, -0.5}), Json::array({0.5, 1.0})})},
            {"community", s.community},
            {"burn_in", s.sampler.burn_in},
            {"thin", s.sampler.thin},
            {"seed", s.seed}};
  if (s.community) {
    auto counts = [](const BlockCounts& c) {
      return Json{{"within1", c.within1}, {"within2", c.within2}, {"between", c.between}};
    };
    j["layout"] = {{"group1", s.layout.group1},
                   {"group2", s.layout.group2},
                   {"before", counts(s.layout.before)},
                   {"after", counts(s.layout.after)}};
  }
  return j;
}

ScenarioSpec scenario_from_json(const Json& j) {
  ScenarioSpec s;
  s.p = require<std::size_t>(j, "p");
  s.T = require<std::size_t>(j, "T");
  s.tau_star = require<std::size_t>(j, "tau_star");
  s.density = require<double>(j, "density");
  s.similarity = require<double>(j, "similarity");
  s.redraw = require<std::string>(j, "redraw") == "keep-positions" ? RedrawPolicy::keep_positions
                                                                   : RedrawPolicy::fresh_positions;
  s.community = require<bool>(j, "community");
  s.sampler.burn_in = require<std::size_t>(j, "burn_in");
  s.sampler.thin = require<std::size_t>(j, "thin");
  s.seed = require<std::uint64_t>(j, "seed");
  if (s.community) {
    const Json& l = j.at("layout");
    auto counts = [](const Json& c) {
      return BlockCounts{require<std::size_t>(c, "within1"), require<std::size_t>(c, "within2"),
                         require<std::size_t>(c, "between")};
    };
    s.layout.group1 = require<std::size_t>(l, "group1");
    s.layout.group2 = require<std::size_t>(l, "group2");
    s.layout.before = counts(l.at("before"));
    s.layout.after = counts(l.at("after"));
  }
  s.validate();
  return s;
}

Json tuning_to_json(const Tuning& t) {
  Json j = {{"mode", t.mode == TuningMode::schedule ? "schedule" : "bic-per-tau"}};
  if (t.mode == TuningMode::schedule) {
    j["a1"] = t.a1;
    j["a2"] = t.a2;
  } else {
    j["a_grid"] = t.a_grid.empty() ? default_bic_grid() : t.a_grid;
  }
  return j;
}

Json solver_to_json(const SolverOptions& o) {
  return {{"method", o.method == SolverMethod::proximal_newton ? "proximal-newton" : "proximal-gradient"},
          {"tol", o.tol},
          {"max_iter", o.max_iter},
          {"accelerate", o.accelerate}};
}

Json profile_point_to_json(const ProfilePoint& pt) {
  return {{"tau", pt.tau},
          {"objective", pt.objective},
          {"a1", pt.a1},
          {"a2", pt.a2},
          {"first", fit_to_json(pt.first)},
          {"second", fit_to_json(pt.second)}};
}

Json scan_result_to_json(const ScanResult& r) {
  Json j = {{"T", r.T},
            {"tau_hat", r.tau_hat},
            {"alpha_hat", r.alpha_hat},
            {"profile_fits", r.profile_fits},
            {"curve", curve_to_json(r.curve)}};
  if (r.stage1) j["stage1"] = stage_to_json(*r.stage1);
  if (r.stage2) j["stage2"] = stage_to_json(*r.stage2);
  j["theta1"] = params_to_json(r.at_tau_hat.first.theta_hat);
  j["theta2"] = params_to_json(r.at_tau_hat.second.theta_hat);
  j["penalties"] = {{"lambda1", r.at_tau_hat.lambda1},
                    {"lambda2", r.at_tau_hat.lambda2},
                    {"a1", r.at_tau_hat.a1},
                    {"a2", r.at_tau_hat.a2}};
  j["fits"] = {{"first", fit_to_json(r.at_tau_hat.first)}, {"second", fit_to_json(r.at_tau_hat.second)}};
  j["tuning"] = tuning_to_json(r.tuning);
  return j;
}

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve) {
  out << "tau,objective\n";
  out.precision(17);
  for (const CurvePoint& c : curve) out << c.tau << ',' << c.objective << '\n';
}

Json confusion_to_json(const EdgeConfusion& c) {
  return {{"true_positive", c.true_positive},
          {"false_positive", c.false_positive},
          {"true_negative", c.true_negative},
          {"false_negative", c.false_negative},
          {"sensitivity", optional_number(c.sensitivity)},
          {"specificity", optional_number(c.specificity)}};
}

Json recovery_to_json(const RecoveryReport& r) {
  auto side = [](const SideReport& s) {
    Json j = confusion_to_json(s.confusion);
    j["relative_error"] = s.relative_error;
    j["relative_error_norm"] = "frobenius";
    return j;
  };
  return {{"zero_tol", r.zero_tol}, {"first", side(r.first)}, {"second", side(r.second)}};
}

Json changepoint_to_json(const ChangePointReport& r) {
  return {{"tau_star", r.tau_star}, {"estimates", r.estimates}, {"mean", r.mean}, {"rmse", r.rmse}, {"cv", r.cv}};
}

Json network_stats_to_json(const std::vector<GroupNetworkStats>& stats) {
  Json arr = Json::array();
  for (const auto& s : stats) {
    arr.push_back({{"group", s.name},
                   {"members", s.members},
                   {"average_degree", s.average_degree},
                   {"average_centrality", s.average_centrality},
                   {"average_clustering", s.average_clustering}});
  }
  return arr;
}

Json sign_table_to_json(const SignTable& t) {
  Json cells = Json::array();
  for (const SignCell& c : t.cells) {
    cells.push_back({{"group_a", c.group_a},
                     {"group_b", c.group_b},
                     {"positive", c.positive},
                     {"negative", c.negative},
                     {"positive_fraction", c.positive_fraction},
                     {"negative_fraction", c.negative_fraction}});
  }
  return {{"total_edges", t.total_edges}, {"empty", t.empty}, {"cells", cells}};
}

Json stability_to_json(const StabilityResult& r) {
  Json freq = Json::array();
  for (std::size_t j = 1; j < r.p; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      const std::size_t c = r.counts[SymmetricParams::index(j, k)];
      if (c > 0) freq.push_back(Json::array({j, k, c}));
    }
  }
  Json stable = Json::array();
  for (const auto& [j, k] : r.stable_edges()) stable.push_back(Json::array({j, k}));
  return {{"p", r.p},
          {"n_bootstrap", r.n_bootstrap},
          {"threshold", r.threshold},
          {"counts", freq},
          {"stable_edges", stable},
          {"lambdas", r.lambdas}};
}

void write_stable_edges_csv(std::ostream& out, const StabilityResult& r) {
  out << "j,k,count,frequency\n";
  out.precision(17);
  for (const auto& [j, k] : r.stable_edges()) {
    out << j << ',' << k << ',' << r.counts[SymmetricParams::index(j, k)] << ',' << r.frequency(j, k) << '\n';
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw DataError("failed writing " + path);
}

}  // namespace mrfcp
