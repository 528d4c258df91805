#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "mrfcp/errors.hpp"
#include "mrfcp/scan.hpp"
#include "mrfcp/simulate.hpp"
#include "oracles.hpp"

using namespace mrfcp;

namespace {

Dataset change_data(std::size_t p, std::size_t T, std::size_t tau_star, double density, std::uint64_t seed) {
  ScenarioSpec spec;
  spec.p = p;
  spec.T = T;
  spec.tau_star = tau_star;
  spec.density = density;
  spec.seed = seed;
  return build_scenario(spec).data;
}

ScanOptions bic_options() {
  ScanOptions o;
  o.tuning.mode = TuningMode::bic_per_tau;
  o.tuning.a_grid = log_grid(2.0, 0.05, 8);
  o.threads = 1;
  return o;
}

std::size_t argmin_tau(const std::vector<CurvePoint>& c) {
  return std::min_element(c.begin(), c.end(), [](auto& a, auto& b) { return a.objective < b.objective; })->tau;
}

}  // namespace

TEST(BuildDomain, GridFromMargins) {
  const SearchDomain d = build_domain(700, 60, 60, 10);
  ASSERT_EQ(d.taus.size(), 59u);
  EXPECT_EQ(d.taus.front(), 60u);
  EXPECT_EQ(d.taus.back(), 640u);
  const SearchDomain all = build_domain(20, 3, 4, 1);
  ASSERT_EQ(all.taus.size(), 14u);
  for (std::size_t i = 0; i < all.taus.size(); ++i) EXPECT_EQ(all.taus[i], 3 + i);
  EXPECT_THROW(build_domain(20, 10, 10), InvalidArgument);
  EXPECT_THROW(build_domain(20, 0, 10), InvalidArgument);
  EXPECT_THROW(build_domain(20, 2, 2, 0), InvalidArgument);
  EXPECT_EQ(default_margin(700), 56u);
  EXPECT_EQ(default_margin(400), 32u);
  EXPECT_EQ(default_margin(100), 30u);
}

TEST(NwSmooth, MatchesOracle) {
  Rng rng(3);
  std::vector<CurvePoint> pts;
  std::vector<double> xs, ys;
  for (std::size_t tau = 10; tau <= 90; tau += 8) {
    const double y = rng.uniform(-1.0, 1.0);
    pts.push_back({tau, y});
    xs.push_back(static_cast<double>(tau));
    ys.push_back(y);
  }
  const auto sm = nw_smooth(pts, 12.0, 10, 90);
  ASSERT_EQ(sm.size(), 81u);
  for (const CurvePoint& c : sm) {
    EXPECT_NEAR(c.objective, oracle::nadaraya_watson(xs, ys, 12.0, static_cast<double>(c.tau)), 1e-13);
  }
}

TEST(NwSmooth, ConstantLinearAndNarrowKernels) {
  std::vector<CurvePoint> flat{{1, 3.5}, {5, 3.5}, {9, 3.5}};
  for (const CurvePoint& c : nw_smooth(flat, 2.0, 1, 9)) EXPECT_NEAR(c.objective, 3.5, 1e-14);
  std::vector<CurvePoint> line;
  for (std::size_t tau = 0; tau <= 100; tau += 5) line.push_back({tau, 2.0 * tau - 7.0});
  const auto sm = nw_smooth(line, 7.5, 0, 100);
  for (const CurvePoint& c : sm) {
    EXPECT_GE(c.objective, -7.0);
    EXPECT_LE(c.objective, 193.0);
  }
  for (std::size_t tau = 45; tau <= 55; ++tau) {
    EXPECT_NEAR(sm[tau].objective, 2.0 * tau - 7.0, 1e-6);
  }
  std::vector<CurvePoint> raw{{10, 1.0}, {20, -2.0}, {30, 4.0}};
  const auto narrow = nw_smooth(raw, 1.0, 10, 30);
  EXPECT_NEAR(narrow[0].objective, 1.0, 1e-10);
  EXPECT_NEAR(narrow[10].objective, -2.0, 1e-10);
  EXPECT_NEAR(narrow[20].objective, 4.0, 1e-10);
  EXPECT_THROW(nw_smooth(raw, 0.01, 10, 30), InvalidArgument);
  EXPECT_THROW(nw_smooth(std::vector<CurvePoint>{{1, 1.0}}, 1.0, 1, 2), InvalidArgument);
  EXPECT_THROW(nw_smooth(raw, -1.0, 10, 30), InvalidArgument);
}

TEST(ArgminIndex, TiesGoToEarliest) {
  std::vector<CurvePoint> c{{4, 2.0}, {5, 1.0}, {6, 1.0}, {7, 3.0}};
  EXPECT_EQ(argmin_index(c), 1u);
  EXPECT_THROW(argmin_index(std::vector<CurvePoint>{}), InvalidArgument);
}

TEST(ProfileObjective, ZeroFitsGiveConstant) {
  const ModelSpec s = make_ising_spec();
  Rng rng(5);
  const Dataset d = fixture::random_dataset(6, 80, 2, rng);
  const PseudoLikelihood pl(s, d);
  for (std::size_t tau : {1u, 20u, 79u}) {
    const ProfilePoint pt = profile_objective(pl, tau, {50.0, 50.0});
    EXPECT_NEAR(pt.objective, 6 * std::log(2.0), 1e-12);
    EXPECT_EQ(pt.first.theta_hat.nonzeros(), 0u);
  }
  EXPECT_THROW(profile_objective(pl, 0, {1.0, 1.0}), InvalidArgument);
  EXPECT_THROW(profile_objective(pl, 80, {1.0, 1.0}), InvalidArgument);
}

TEST(ProfileObjective, IsUnpenalizedLossAtFits) {
  const ModelSpec s = make_ising_spec();
  const Dataset d = change_data(6, 100, 50, 0.3, 4);
  const PseudoLikelihood pl(s, d);
  const ProfilePoint pt = profile_objective(pl, 37, {0.03, 0.05});
  double ref = 0.0;
  for (std::size_t t = 1; t <= 37; ++t) ref += phi(s, pt.first.theta_hat, d.row(t - 1));
  for (std::size_t t = 38; t <= 100; ++t) ref += phi(s, pt.second.theta_hat, d.row(t - 1));
  EXPECT_NEAR(pt.objective, ref / 100.0, 1e-12);
  EXPECT_EQ(pt.lambda1, 0.03);
  EXPECT_EQ(pt.lambda2, 0.05);
}

TEST(ProfileObjective, StrongSignalFavoursTrueChangePoint) {
  const ModelSpec s = make_ising_spec();
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset d = change_data(10, 200, 100, 0.3, 50 + seed);
    const PseudoLikelihood pl(s, d);
    const ScanOptions o = bic_options();
    const double at = profile_point(pl, 100, o).objective;
    const double lo = profile_point(pl, 50, o).objective;
    const double hi = profile_point(pl, 150, o).objective;
    wins += at <= lo && at <= hi;
  }
  EXPECT_GE(wins, 6);
}

TEST(BasicScan, NullCurveFlatterThanSignalCurve) {
  const ModelSpec s = make_ising_spec();
  ScenarioSpec null_spec;
  null_spec.p = 8;
  null_spec.T = 160;
  null_spec.tau_star = 80;
  null_spec.density = 0.3;
  null_spec.similarity = 1.0;
  null_spec.seed = 12;
  ScenarioSpec signal_spec = null_spec;
  signal_spec.similarity = 0.0;
  const SearchDomain dom = build_domain(160, 30, 30, 10);
  auto spread = [&](const ScenarioSpec& sp) {
    const PseudoLikelihood pl(s, build_scenario(sp).data);
    const ScanResult r = basic_scan(pl, dom, bic_options());
    double lo = 1e300, hi = -1e300;
    for (const CurvePoint& c : r.curve) {
      lo = std::min(lo, c.objective);
      hi = std::max(hi, c.objective);
    }
    return hi - lo;
  };
  EXPECT_LT(spread(null_spec), spread(signal_spec));
}

TEST(BasicScan, SelectsCurveMinimum) {
  const ModelSpec s = make_ising_spec();
  const Dataset d = change_data(8, 150, 70, 0.25, 9);
  const PseudoLikelihood pl(s, d);
  const SearchDomain dom = build_domain(150, 30, 30, 5);
  const ScanResult r = basic_scan(pl, dom, bic_options());
  ASSERT_EQ(r.curve.size(), dom.taus.size());
  EXPECT_EQ(r.tau_hat, argmin_tau(r.curve));
  EXPECT_TRUE(std::ranges::find(dom.taus, r.tau_hat) != dom.taus.end());
  EXPECT_DOUBLE_EQ(r.alpha_hat, r.tau_hat / 150.0);
  EXPECT_EQ(r.at_tau_hat.tau, r.tau_hat);
  EXPECT_EQ(r.profile_fits, dom.taus.size());
  for (const CurvePoint& c : r.curve) EXPECT_TRUE(std::isfinite(c.objective));

  SearchDomain single = dom;
  single.taus = {77};
  EXPECT_EQ(basic_scan(pl, single, bic_options()).tau_hat, 77u);
  SearchDomain empty = dom;
  empty.taus.clear();
  EXPECT_THROW(basic_scan(pl, empty), InvalidArgument);
}

TEST(BasicScan, WarmStartDoesNotChangeValues) {
  const ModelSpec s = make_ising_spec();
  const Dataset d = change_data(8, 150, 70, 0.25, 10);
  const PseudoLikelihood pl(s, d);
  const SearchDomain dom = build_domain(150, 30, 30, 4);
  for (TuningMode mode : {TuningMode::schedule, TuningMode::bic_per_tau}) {
    ScanOptions warm = bic_options();
    warm.tuning.mode = mode;
    warm.tuning.a1 = warm.tuning.a2 = 0.5;
    ScanOptions cold = warm;
    cold.warm_start = false;
    const ScanResult a = basic_scan(pl, dom, warm);
    const ScanResult b = basic_scan(pl, dom, cold);
    for (std::size_t i = 0; i < a.curve.size(); ++i) {
      EXPECT_NEAR(a.curve[i].objective, b.curve[i].objective, 1e-8) << "tau " << a.curve[i].tau;
    }
  }
}

TEST(BasicScan, IndependentOfWorkerCount) {
  const ModelSpec s = make_ising_spec();
  const Dataset d = change_data(8, 150, 70, 0.25, 11);
  const PseudoLikelihood pl(s, d);
  const SearchDomain dom = build_domain(150, 30, 30, 3);
  ScanOptions one = bic_options();
  ScanOptions many = one;
  many.threads = 8;
  const ScanResult a = basic_scan(pl, dom, one);
  const ScanResult b = basic_scan(pl, dom, many);
  EXPECT_EQ(a.tau_hat, b.tau_hat);
  ASSERT_EQ(a.curve.size(), b.curve.size());
  for (std::size_t i = 0; i < a.curve.size(); ++i) EXPECT_EQ(a.curve[i].objective, b.curve[i].objective);
  EXPECT_EQ(a.at_tau_hat.first.theta_hat, b.at_tau_hat.first.theta_hat);
}

TEST(BasicScan, TimeReversalSymmetry) {
  const ModelSpec s = make_ising_spec();
  const Dataset d = change_data(8, 150, 70, 0.25, 13);
  const PseudoLikelihood fwd(s, d);
  const PseudoLikelihood rev(s, d.reversed());
  const SearchDomain dom = build_domain(150, 30, 30, 1);
  for (TuningMode mode : {TuningMode::schedule, TuningMode::bic_per_tau}) {
    ScanOptions o = bic_options();
    o.tuning.mode = mode;
    o.tuning.a1 = 0.4;
    o.tuning.a2 = 0.7;
    ScanOptions swapped = o;
    std::swap(swapped.tuning.a1, swapped.tuning.a2);
    const ScanResult a = basic_scan(fwd, dom, o);
    const ScanResult b = basic_scan(rev, dom, swapped);
    for (std::size_t i = 0; i < a.curve.size(); ++i) {
      const CurvePoint& x = a.curve[i];
      const CurvePoint& y = b.curve[a.curve.size() - 1 - i];
      ASSERT_EQ(x.tau, 150 - y.tau);
      EXPECT_LE(std::fabs(x.objective - y.objective), 1e-9 * std::fabs(x.objective));
    }
  }
}

TEST(FastScan, StageMetadataAndFitBudget) {
  const ModelSpec s = make_ising_spec();
  const Dataset d = change_data(8, 300, 150, 0.25, 14);
  const PseudoLikelihood pl(s, d);
  FastScanOptions f;
  f.stage1 = build_domain(300, 30, 30, 10);
  f.stage2_halfwidth = 30;
  f.stage2_step = 3;
  f.bandwidth1 = 15.0;
  const ScanResult r = fast_scan(pl, f, bic_options());
  ASSERT_TRUE(r.stage1 && r.stage2);
  EXPECT_EQ(r.stage1->raw.size(), 25u);
  EXPECT_EQ(r.stage1->bandwidth, 15.0);
  EXPECT_EQ(r.stage2->bandwidth, 4.5);
  EXPECT_EQ(r.stage2->raw.size(), 21u);
  EXPECT_EQ(r.stage2->lo, r.stage1->tau_hat - 30);
  EXPECT_LE(r.profile_fits, 25u + 21u + 1u);
  EXPECT_EQ(r.tau_hat, r.stage2->tau_hat);
  EXPECT_GE(r.tau_hat, r.stage2->lo);
  EXPECT_LE(r.tau_hat, r.stage2->hi);
  EXPECT_EQ(r.stage1->tau_hat, argmin_tau(r.stage1->smoothed));
  EXPECT_EQ(r.tau_hat, argmin_tau(r.stage2->smoothed));
  EXPECT_EQ(r.at_tau_hat.tau, r.tau_hat);

  FastScanOptions bad = f;
  bad.stage2_halfwidth = 2;
  EXPECT_THROW(fast_scan(pl, bad, bic_options()), InvalidArgument);
}

TEST(FastScan, FullGridAgreesWithBasicScan) {
  const ModelSpec s = make_ising_spec();
  const Dataset d = change_data(8, 120, 60, 0.3, 15);
  const PseudoLikelihood pl(s, d);
  const SearchDomain dom = build_domain(120, 30, 30, 1);
  const ScanOptions o = bic_options();
  const ScanResult basic = basic_scan(pl, dom, o);
  FastScanOptions f;
  f.stage1 = dom;
  f.stage2_halfwidth = 60;
  f.stage2_step = 1;
  const ScanResult fast = fast_scan(pl, f, o);
  const double h = 1.5;
  EXPECT_LE(std::fabs(static_cast<double>(fast.tau_hat) - static_cast<double>(basic.tau_hat)), h);
  EXPECT_LE(fast.profile_fits, 120u - 1u);
}
