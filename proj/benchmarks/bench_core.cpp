#include <benchmark/benchmark.h>

#include "mrfcp/penalized.hpp"
#include "mrfcp/pseudolikelihood.hpp"
#include "mrfcp/scan.hpp"
#include "mrfcp/simulate.hpp"

using namespace mrfcp;

namespace {

Scenario scenario(std::size_t p, std::size_t T) {
  ScenarioSpec s;
  s.p = p;
  s.T = T;
  s.tau_star = T / 2;
  s.density = 0.15;
  s.seed = 5;
  return build_scenario(s);
}

}  // namespace

static void BM_LossAndGradient(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  const Scenario sc = scenario(p, 400);
  const PseudoLikelihood loss(make_ising_spec(), sc.data);
  std::vector<double> grad(loss.dim());
  for (auto _ : state) {
    benchmark::DoNotOptimize(loss.sum_and_gradient(sc.theta1.packed(), {1, 400}, grad));
  }
  state.SetItemsProcessed(state.iterations() * 400);
}
BENCHMARK(BM_LossAndGradient)->Arg(15)->Arg(40);

static void BM_FitPenalized(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  const Scenario sc = scenario(p, 400);
  const PseudoLikelihood loss(make_ising_spec(), sc.data);
  SolverOptions o;
  o.method = state.range(1) == 0 ? SolverMethod::proximal_newton : SolverMethod::proximal_gradient;
  o.tol = 1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_penalized(loss, {1, 200}, 400, 0.05, nullptr, o).objective_value);
  }
}
BENCHMARK(BM_FitPenalized)->Args({15, 0})->Args({15, 1})->Args({40, 0})->Unit(benchmark::kMillisecond);

static void BM_GibbsSweeps(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  const SymmetricParams theta = random_network(p, 0.15, 3);
  const ModelSpec spec = make_ising_spec();
  for (auto _ : state) {
    benchmark::DoNotOptimize(gibbs_sample(spec, theta, 1000, {0, 1}, 9).T());
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_GibbsSweeps)->Arg(15)->Arg(40);

static void BM_Scan(benchmark::State& state) {
  const Scenario sc = scenario(10, 200);
  const PseudoLikelihood loss(make_ising_spec(), sc.data);
  ScanOptions o;
  o.tuning.a1 = o.tuning.a2 = 1.0;
  o.threads = 1;
  const SearchDomain domain = build_domain(200, 30, 30, 5);
  FastScanOptions fast;
  fast.stage1 = build_domain(200, 30, 30, 20);
  fast.stage2_halfwidth = 15;
  fast.stage2_step = 5;
  for (auto _ : state) {
    const ScanResult r = state.range(0) == 0 ? basic_scan(loss, domain, o) : fast_scan(loss, fast, o);
    benchmark::DoNotOptimize(r.tau_hat);
    state.counters["profile_fits"] = static_cast<double>(r.profile_fits);
  }
}
BENCHMARK(BM_Scan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
