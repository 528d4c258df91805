#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mrfcp/model.hpp"
#include "mrfcp/penalized.hpp"

namespace mrfcp {

enum class LambdaPolicyKind { fixed, bic };

/// How λ is chosen on each resample. With `bic`, multipliers in `a_grid` are
/// scaled by c0 √(n log(d n)) / n for a resample of n rows.
struct LambdaPolicy {
  LambdaPolicyKind kind = LambdaPolicyKind::bic;
  double lambda = 0.0;
  std::vector<double> a_grid;
};

struct StabilityOptions {
  std::size_t n_bootstrap = 50;
  double threshold = 0.9;
  LambdaPolicy policy;
  SolverOptions solver;
  std::size_t threads = 0;
  std::uint64_t seed = 1;
};

struct StabilityResult {
  std::size_t p = 0;
  std::size_t n_bootstrap = 0;
  double threshold = 0.0;
  /// Per off-diagonal pair (packed lower-triangle order, diagonal slots zero):
  /// number of resamples whose fit kept the edge.
  std::vector<std::size_t> counts;
  /// λ used on each resample, in resample order.
  std::vector<double> lambdas;

  double frequency(std::size_t j, std::size_t k) const;
  /// Edge (j,k) is stable when its frequency exceeds `t`.
  bool stable(std::size_t j, std::size_t k, double t) const;
  bool stable(std::size_t j, std::size_t k) const { return stable(j, k, threshold); }
  /// Stable edges at threshold `t` as (j, k) pairs with j > k.
  std::vector<std::pair<std::size_t, std::size_t>> stable_edges(double t) const;
  std::vector<std::pair<std::size_t, std::size_t>> stable_edges() const { return stable_edges(threshold); }
};

/// Row bootstrap of the segment `range`: each resample draws range.length()
/// rows with replacement, fits a penalized network, and records its support.
/// Resample b draws from child_seed(seed, b), so results do not depend on the
/// worker count.
StabilityResult stability_select(const ModelSpec& spec, const Dataset& data, TimeRange range,
                                 const StabilityOptions& options);

}  // namespace mrfcp
