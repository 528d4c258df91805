#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "mrfcp/model.hpp"

namespace mrfcp {

/// Symmetric matrix with ceil(density * p(p-1)/2) edges at uniformly chosen
/// off-diagonal positions, weights uniform on [-1,-0.5] ∪ [0.5,1], zero diagonal.
SymmetricParams random_network(std::size_t p, double density, std::uint64_t seed);

/// How the entries of θ(2) that are not copied from θ(1) are placed.
enum class RedrawPolicy {
  fresh_positions,  ///< New positions drawn among all positions not shared.
  keep_positions,   ///< Same positions as θ(1), fresh values.
};

/// θ(1) from random_network; θ(2) copies ceil(similarity * edges) of θ(1)'s
/// entries (position and value) and redraws the remaining ones.
std::pair<SymmetricParams, SymmetricParams> similarity_pair(
    std::size_t p, double density, double similarity, std::uint64_t seed,
    RedrawPolicy policy = RedrawPolicy::fresh_positions);

/// Edge counts of a two-group network: within group 1, within group 2, between.
struct BlockCounts {
  std::size_t within1 = 0;
  std::size_t within2 = 0;
  std::size_t between = 0;

  std::size_t total() const noexcept { return within1 + within2 + between; }
};

/// Two communities whose within-group edges are positive and between-group
/// edges negative. Defaults reproduce the two-community scenario (p = 50).
struct CommunityLayout {
  std::size_t group1 = 25;
  std::size_t group2 = 25;
  BlockCounts before{50, 63, 10};
  BlockCounts after{52, 21, 50};
};

/// Nodes [0, group1) form group 0, the rest group 1.
GroupLabels community_groups(const CommunityLayout& layout);

std::pair<SymmetricParams, SymmetricParams> community_pair(const CommunityLayout& layout,
                                                           std::uint64_t seed);

struct SamplerOptions {
  std::size_t burn_in = 1000;  ///< Sweeps discarded before recording.
  std::size_t thin = 5;        ///< Sweeps between recorded states.
};

/// Single-chain systematic-scan Gibbs sampler targeting g_θ. Records every
/// `thin`-th sweep after `burn_in` sweeps. Deterministic in `seed`.
Dataset gibbs_sample(const ModelSpec& spec, const SymmetricParams& theta, std::size_t n,
                     const SamplerOptions& opts, std::uint64_t seed);

/// Probabilities of all m^p states. State s has x_j = (s / m^j) mod m.
/// Throws InvalidArgument when m^p exceeds 2^20.
std::vector<double> exact_distribution(const ModelSpec& spec, const SymmetricParams& theta);

/// Decodes a state index of exact_distribution into an observation.
std::vector<Symbol> decode_state(std::size_t state, std::size_t p, std::size_t m);

/// First tau_star rows from g_θ1, the remaining T - tau_star from g_θ2, drawn by
/// two independent chains with seeds derived from `seed`.
Dataset generate_series(const ModelSpec& spec, const SymmetricParams& theta1,
                        const SymmetricParams& theta2, std::size_t T, std::size_t tau_star,
                        const SamplerOptions& opts, std::uint64_t seed);

/// Description of a synthetic change-point experiment.
struct ScenarioSpec {
  std::size_t p = 15;
  std::size_t T = 400;
  std::size_t tau_star = 200;
  double density = 0.15;
  double similarity = 0.0;
  RedrawPolicy redraw = RedrawPolicy::fresh_positions;
  bool community = false;
  CommunityLayout layout;
  SamplerOptions sampler;
  std::uint64_t seed = 1;

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
};

struct Scenario {
  ScenarioSpec spec;
  SymmetricParams theta1;
  SymmetricParams theta2;
  Dataset data;
  GroupLabels groups;  ///< Filled for community scenarios.
};

/// Builds the truth matrices and samples the series for an Ising scenario.
Scenario build_scenario(const ScenarioSpec& spec);

}  // namespace mrfcp
