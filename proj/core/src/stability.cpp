#include "mrfcp/stability.hpp"

#include "mrfcp/errors.hpp"
#include "mrfcp/parallel.hpp"
#include "mrfcp/random.hpp"
#include "mrfcp/scan.hpp"

namespace mrfcp {

double StabilityResult::frequency(std::size_t j, std::size_t k) const {
  if (j == k || j >= p || k >= p) throw InvalidArgument("not an off-diagonal position");
  return static_cast<double>(counts[SymmetricParams::index(j, k)]) / static_cast<double>(n_bootstrap);
}

bool StabilityResult::stable(std::size_t j, std::size_t k, double t) const {
  // count / n > t, compared without dividing.
  return static_cast<double>(counts[SymmetricParams::index(j, k)]) > t * static_cast<double>(n_bootstrap);
}

std::vector<std::pair<std::size_t, std::size_t>> StabilityResult::stable_edges(double t) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t j = 1; j < p; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      if (stable(j, k, t)) out.emplace_back(j, k);
    }
  }
  return out;
}

StabilityResult stability_select(const ModelSpec& spec, const Dataset& data, TimeRange range,
                                 const StabilityOptions& options) {
  range.validate(data.T());
  if (options.n_bootstrap < 1) throw InvalidArgument("need at least one bootstrap resample");
  if (!(options.threshold > 0.0) || !(options.threshold < 1.0)) {
    throw InvalidArgument("stability threshold must lie in (0, 1)");
  }
  const std::size_t n = range.length();
  if (n < 2) throw InvalidArgument("segment needs at least two rows for resampling");
  const LambdaPolicy& policy = options.policy;
  if (policy.kind == LambdaPolicyKind::fixed && !(policy.lambda > 0.0)) {
    throw InvalidArgument("fixed λ policy needs a positive λ");
  }
  const std::vector<double> a_grid = policy.a_grid.empty() ? default_bic_grid() : policy.a_grid;
  const std::size_t p = data.p();

  std::vector<SymmetricParams> fits(options.n_bootstrap);
  std::vector<double> lambdas(options.n_bootstrap);
  parallel_for(options.n_bootstrap, options.threads, [&](std::size_t b) {
    Rng rng(child_seed(options.seed, b));
    std::vector<std::size_t> rows(n);
    for (std::size_t& r : rows) r = range.first - 1 + static_cast<std::size_t>(rng.below(n));
    const Dataset sample = data.select_rows(rows);
    const PseudoLikelihood loss(spec, sample);
    const TimeRange all{1, n};
    if (policy.kind == LambdaPolicyKind::fixed) {
      fits[b] = fit_penalized(loss, all, n, policy.lambda, nullptr, options.solver).theta_hat;
      lambdas[b] = policy.lambda;
      return;
    }
    const auto schedule = PenaltySchedule::for_problem(spec, p, n);
    std::vector<double> grid(a_grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = a_grid[i] * schedule.unit(n);
    BicSelection sel = select_lambda_bic(loss, all, n, grid, options.solver);
    fits[b] = std::move(sel.fit.theta_hat);
    lambdas[b] = sel.lambda;
  });

  StabilityResult res;
  res.p = p;
  res.n_bootstrap = options.n_bootstrap;
  res.threshold = options.threshold;
  res.counts.assign(SymmetricParams::packed_size(p), 0);
  res.lambdas = std::move(lambdas);
  for (const SymmetricParams& fit : fits) {
    for (std::size_t j = 1; j < p; ++j) {
      for (std::size_t k = 0; k < j; ++k) {
        if (fit(j, k) != 0.0) ++res.counts[SymmetricParams::index(j, k)];
      }
    }
  }
  return res;
}

}  // namespace mrfcp
