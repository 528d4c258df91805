#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "mrfcp/errors.hpp"
#include "mrfcp/io.hpp"
#include "mrfcp/scan.hpp"

using namespace mrfcp;

TEST(ParamsJson, SparseRoundTrip) {
  Rng rng(1);
  SymmetricParams th = fixture::random_theta(6, 2.0, rng);
  th.set(4, 2, 0.0);
  th.set(0, 0, 0.0);
  const Json j = params_to_json(th);
  EXPECT_EQ(j.at("p"), 6);
  EXPECT_EQ(j.at("entries").size(), th.nonzeros());
  for (const Json& e : j.at("entries")) EXPECT_GE(e[0].get<int>(), e[1].get<int>());
  EXPECT_EQ(params_from_json(Json::parse(j.dump())), th);
}

TEST(ParamsJson, RejectsMalformedInput) {
  EXPECT_THROW(params_from_json(Json::parse(R"({"entries": []})")), DataError);
  EXPECT_THROW(params_from_json(Json::parse(R"({"p": 2})")), DataError);
  EXPECT_THROW(params_from_json(Json::parse(R"({"p": 2, "entries": [[2, 0, 1.0]]})")), DataError);
  EXPECT_THROW(params_from_json(Json::parse(R"({"p": 2, "entries": [[1, 0]]})")), DataError);
  EXPECT_THROW(params_from_json(Json::parse(R"({"p": 3, "entries": [[0, 2, 0.5]]})")), DataError);
}

TEST(DatasetCsv, RoundTripWithAndWithoutTime) {
  Rng rng(2);
  const Dataset plain = fixture::random_dataset(4, 12, 2, rng);
  std::stringstream a;
  write_dataset_csv(a, plain);
  EXPECT_EQ(a.str().substr(0, 12), "x1,x2,x3,x4\n");
  const Dataset back = read_dataset_csv(a);
  EXPECT_TRUE(std::ranges::equal(back.values(), plain.values()));
  EXPECT_EQ(back.node_labels().front(), "x1");

  const Dataset timed(2, {0, 1, 1, 1, 0, 0}, 2, {"a", "b"}, {"2001-01-01", "2001-01-02", "2001-01-03"});
  std::stringstream b;
  write_dataset_csv(b, timed);
  EXPECT_EQ(b.str(), "time,a,b\n2001-01-01,0,1\n2001-01-02,1,1\n2001-01-03,0,0\n");
  EXPECT_EQ(read_dataset_csv(b), timed);

  std::stringstream c;
  write_dataset_csv(c, Dataset(2, {0, 2, 1, 1}, 3));
  EXPECT_EQ(read_dataset_csv(c, 3).alphabet_size(), 3u);
}

TEST(DatasetCsv, MalformedInput) {
  std::istringstream bad_cell("a,b\n0,1\n0,x\n");
  EXPECT_THROW(read_dataset_csv(bad_cell), DataError);
  std::istringstream out_of_alphabet("a,b\n0,1\n0,2\n");
  EXPECT_THROW(read_dataset_csv(out_of_alphabet), DataError);
  std::istringstream ragged("a,b\n0,1\n0\n");
  EXPECT_THROW(read_dataset_csv(ragged), DataError);
  std::istringstream empty("");
  EXPECT_THROW(read_dataset_csv(empty), DataError);
  std::istringstream short_series("a,b\n0,1\n");
  EXPECT_THROW(read_dataset_csv(short_series), DataError);
  EXPECT_THROW(read_dataset_csv("/nonexistent/file.csv"), DataError);
}

TEST(ScenarioJson, RoundTrip) {
  ScenarioSpec s;
  s.p = 12;
  s.T = 300;
  s.tau_star = 120;
  s.density = 0.2;
  s.similarity = 0.4;
  s.redraw = RedrawPolicy::keep_positions;
  s.sampler = {500, 3};
  s.seed = 77;
  const ScenarioSpec r = scenario_from_json(Json::parse(scenario_to_json(s).dump()));
  EXPECT_EQ(r.p, 12u);
  EXPECT_EQ(r.T, 300u);
  EXPECT_EQ(r.tau_star, 120u);
  EXPECT_EQ(r.density, 0.2);
  EXPECT_EQ(r.similarity, 0.4);
  EXPECT_EQ(r.redraw, RedrawPolicy::keep_positions);
  EXPECT_EQ(r.sampler.burn_in, 500u);
  EXPECT_EQ(r.seed, 77u);
  ScenarioSpec c;
  c.community = true;
  c.layout.after.between = 40;
  const ScenarioSpec rc = scenario_from_json(scenario_to_json(c));
  EXPECT_TRUE(rc.community);
  EXPECT_EQ(rc.layout.after.between, 40u);
  EXPECT_EQ(rc.layout.before.within2, 63u);
}

TEST(ScanJson, CarriesStageMetadata) {
  Rng rng(3);
  const Dataset d = fixture::random_dataset(4, 80, 2, rng);
  const PseudoLikelihood pl(make_ising_spec(), d);
  FastScanOptions f;
  f.stage1 = build_domain(80, 20, 20, 10);
  f.stage2_halfwidth = 6;
  f.stage2_step = 2;
  ScanOptions o;
  o.tuning.a1 = o.tuning.a2 = 0.5;
  o.threads = 1;
  const ScanResult r = fast_scan(pl, f, o);
  const Json j = scan_result_to_json(r);
  for (const char* key : {"T", "tau_hat", "alpha_hat", "profile_fits", "curve", "stage1", "stage2", "theta1",
                          "theta2", "penalties", "fits", "tuning"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j.at("tau_hat"), r.tau_hat);
  EXPECT_EQ(j.at("stage2").at("raw").size(), r.stage2->raw.size());
  EXPECT_EQ(params_from_json(j.at("theta1")), r.at_tau_hat.first.theta_hat);
  std::ostringstream csv;
  write_curve_csv(csv, {{5, 1.25}, {6, -0.5}});
  EXPECT_EQ(csv.str(), "tau,objective\n5,1.25\n6,-0.5\n");
}

TEST(ReportJson, OptionalMetricsBecomeNull) {
  EdgeConfusion c;
  c.true_negative = 3;
  c.specificity = 1.0;
  const Json j = confusion_to_json(c);
  EXPECT_TRUE(j.at("sensitivity").is_null());
  EXPECT_EQ(j.at("specificity"), 1.0);
  StabilityResult s;
  s.p = 3;
  s.n_bootstrap = 10;
  s.threshold = 0.9;
  s.counts = {0, 10, 0, 4, 0, 0};
  s.lambdas.assign(10, 0.1);
  const Json sj = stability_to_json(s);
  EXPECT_EQ(sj.at("stable_edges").size(), 1u);
  EXPECT_EQ(sj.at("counts").size(), 2u);
  std::ostringstream edges;
  write_stable_edges_csv(edges, s);
  EXPECT_EQ(edges.str(), "j,k,count,frequency\n1,0,10,1\n");
}

TEST(JsonFiles, WriteThenRead) {
  const auto dir = std::filesystem::temp_directory_path() / "mrfcp_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "x.json").string();
  Json j = {{"schema_version", kSchemaVersion}, {"value", 1.5}};
  write_json_file(path, j);
  EXPECT_EQ(read_json_file(path), j);
  std::ofstream(dir / "bad.json") << "{";
  EXPECT_THROW(read_json_file((dir / "bad.json").string()), DataError);
  EXPECT_THROW(read_json_file((dir / "missing.json").string()), DataError);
  std::filesystem::remove_all(dir);
}
