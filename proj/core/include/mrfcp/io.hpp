#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "mrfcp/evaluation.hpp"
#include "mrfcp/model.hpp"
#include "mrfcp/scan.hpp"
#include "mrfcp/simulate.hpp"
#include "mrfcp/stability.hpp"

namespace mrfcp {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// {"p": p, "entries": [[j, k, value], ...]} over non-zero entries with j >= k.
Json params_to_json(const SymmetricParams& theta);
SymmetricParams params_from_json(const Json& j);

/// Header of node labels (x1..xp when unnamed), preceded by a "time" column
/// when the dataset carries time labels; one row of alphabet indices per step.
void write_dataset_csv(std::ostream& out, const Dataset& data);
void write_dataset_csv(const std::string& path, const Dataset& data);
/// Inverse of write_dataset_csv. Throws DataError on malformed input.
Dataset read_dataset_csv(std::istream& in, std::size_t alphabet_size = 2);
Dataset read_dataset_csv(const std::string& path, std::size_t alphabet_size = 2);

Json scenario_to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_from_json(const Json& j);

Json tuning_to_json(const Tuning& tuning);
Json solver_to_json(const SolverOptions& opts);
Json profile_point_to_json(const ProfilePoint& pt);
Json scan_result_to_json(const ScanResult& result);
/// Two columns, tau and objective.
void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve);

Json confusion_to_json(const EdgeConfusion& c);
Json recovery_to_json(const RecoveryReport& r);
Json changepoint_to_json(const ChangePointReport& r);
Json network_stats_to_json(const std::vector<GroupNetworkStats>& stats);
Json sign_table_to_json(const SignTable& table);
Json stability_to_json(const StabilityResult& r);
/// j,k,count,frequency for every stable edge.
void write_stable_edges_csv(std::ostream& out, const StabilityResult& r);

/// Reads a whole JSON file. Throws DataError on I/O or parse failure.
Json read_json_file(const std::string& path);
/// Writes `j` with two-space indentation and a trailing newline.
void write_json_file(const std::string& path, const Json& j);

}  // namespace mrfcp
