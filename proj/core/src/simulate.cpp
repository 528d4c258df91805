#include "mrfcp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mrfcp/errors.hpp"
#include "mrfcp/random.hpp"

namespace mrfcp {
namespace {

// Off-diagonal positions (j > k) in packed order.
std::vector<std::size_t> off_diagonal_slots(std::size_t p) {
  std::vector<std::size_t> slots;
  slots.reserve(p * (p - 1) / 2);
  for (std::size_t j = 1; j < p; ++j) {
    for (std::size_t k = 0; k < j; ++k) slots.push_back(SymmetricParams::index(j, k));
  }
  return slots;
}

// Partial Fisher–Yates: the first `count` entries become a uniform sample.
void sample_prefix(std::vector<std::size_t>& items, std::size_t count, Rng& rng) {
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(items.size() - i));
    std::swap(items[i], items[j]);
  }
}

double edge_magnitude(Rng& rng) { return rng.uniform(0.5, 1.0); }

double edge_weight(Rng& rng) {
  const double sign = rng.coin() ? -1.0 : 1.0;
  return sign * edge_magnitude(rng);
}

std::size_t edges_for_density(std::size_t p, double density) {
  if (!(density > 0.0) || density > 1.0) throw InvalidArgument("density must lie in (0, 1]");
  const double slots = static_cast<double>(p * (p - 1) / 2);
  // The epsilon keeps products such as 0.1 * 780 from rounding up to 79.
  const auto count = static_cast<std::size_t>(std::ceil(density * slots - 1e-9));
  if (count == 0) throw InvalidArgument("density yields no edges");
  return count;
}

}  // namespace

SymmetricParams random_network(std::size_t p, double density, std::uint64_t seed) {
  if (p < 2) throw InvalidArgument("random_network needs p >= 2");
  const std::size_t count = edges_for_density(p, density);
  Rng rng(seed);
  std::vector<std::size_t> slots = off_diagonal_slots(p);
  sample_prefix(slots, count, rng);
  std::vector<double> packed(SymmetricParams::packed_size(p), 0.0);
  for (std::size_t i = 0; i < count; ++i) packed[slots[i]] = edge_weight(rng);
  return SymmetricParams(p, std::move(packed));
}

std::pair<SymmetricParams, SymmetricParams> similarity_pair(std::size_t p, double density,
                                                            double similarity, std::uint64_t seed,
                                                            RedrawPolicy policy) {
  if (!(similarity >= 0.0) || similarity > 1.0) throw InvalidArgument("similarity must lie in [0, 1]");
  SymmetricParams first = random_network(p, density, child_seed(seed, 0));
  const std::size_t count = edges_for_density(p, density);
  const auto shared = static_cast<std::size_t>(
      std::ceil(similarity * static_cast<double>(count) - 1e-9));

  Rng rng(child_seed(seed, 1));
  std::vector<std::size_t> support;
  for (std::size_t slot : off_diagonal_slots(p)) {
    if (first.packed()[slot] != 0.0) support.push_back(slot);
  }
  sample_prefix(support, shared, rng);

  std::vector<double> packed(SymmetricParams::packed_size(p), 0.0);
  for (std::size_t i = 0; i < shared; ++i) packed[support[i]] = first.packed()[support[i]];

  if (policy == RedrawPolicy::keep_positions) {
    for (std::size_t i = shared; i < count; ++i) {
      const double old = first.packed()[support[i]];
      double v = edge_weight(rng);
      while (v == old) v = edge_weight(rng);
      packed[support[i]] = v;
    }
  } else {
    std::vector<std::size_t> free_slots;
    for (std::size_t slot : off_diagonal_slots(p)) {
      if (packed[slot] == 0.0) free_slots.push_back(slot);
    }
    sample_prefix(free_slots, count - shared, rng);
    for (std::size_t i = 0; i < count - shared; ++i) {
      const std::size_t slot = free_slots[i];
      double v = edge_weight(rng);
      while (v == first.packed()[slot]) v = edge_weight(rng);
      packed[slot] = v;
    }
  }
  return {std::move(first), SymmetricParams(p, std::move(packed))};
}

GroupLabels community_groups(const CommunityLayout& layout) {
  GroupLabels g;
  g.assignment.assign(layout.group1 + layout.group2, 1);
  std::fill_n(g.assignment.begin(), layout.group1, 0);
  g.names = {"community1", "community2"};
  return g;
}

namespace {

SymmetricParams community_matrix(const CommunityLayout& layout, const BlockCounts& counts, Rng& rng) {
  const std::size_t p = layout.group1 + layout.group2;
  std::vector<std::size_t> within1, within2, between;
  for (std::size_t j = 1; j < p; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      const bool j1 = j < layout.group1;
      const bool k1 = k < layout.group1;
      auto& block = (j1 && k1) ? within1 : (!j1 && !k1) ? within2 : between;
      block.push_back(SymmetricParams::index(j, k));
    }
  }
  std::vector<double> packed(SymmetricParams::packed_size(p), 0.0);
  auto fill = [&](std::vector<std::size_t>& block, std::size_t count, double sign, const char* name) {
    if (count > block.size()) {
      throw InvalidArgument(std::string("requested edge count exceeds capacity of block ") + name);
    }
    sample_prefix(block, count, rng);
    for (std::size_t i = 0; i < count; ++i) packed[block[i]] = sign * edge_magnitude(rng);
  };
  fill(within1, counts.within1, 1.0, "within-1");
  fill(within2, counts.within2, 1.0, "within-2");
  fill(between, counts.between, -1.0, "between");
  return SymmetricParams(p, std::move(packed));
}

}  // namespace

std::pair<SymmetricParams, SymmetricParams> community_pair(const CommunityLayout& layout,
                                                           std::uint64_t seed) {
  if (layout.group1 + layout.group2 < 2) throw InvalidArgument("community layout needs p >= 2");
  Rng before(child_seed(seed, 0));
  Rng after(child_seed(seed, 1));
  return {community_matrix(layout, layout.before, before), community_matrix(layout, layout.after, after)};
}

Dataset gibbs_sample(const ModelSpec& spec, const SymmetricParams& theta, std::size_t n,
                     const SamplerOptions& opts, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("gibbs_sample needs n >= 1");
  if (opts.thin < 1) throw InvalidArgument("thinning interval must be at least 1");
  const std::size_t p = theta.p();
  const std::size_t m = spec.alphabet_size();
  const std::vector<double> dense = theta.dense();
  Rng rng(seed);

  std::vector<Symbol> state(p);
  for (Symbol& s : state) s = static_cast<Symbol>(rng.below(m));
  std::vector<double> logits(m);

  auto sweep = [&] {
    for (std::size_t j = 0; j < p; ++j) {
      const double* row = dense.data() + j * p;
      for (std::size_t u = 0; u < m; ++u) {
        const auto su = static_cast<Symbol>(u);
        double v = row[j] * spec.b0(su);
        for (std::size_t k = 0; k < p; ++k) {
          if (k != j) v += row[k] * spec.b(su, state[k]);
        }
        logits[u] = v;
      }
      const double hi = *std::max_element(logits.begin(), logits.end());
      double mass = 0.0;
      for (double& v : logits) {
        v = std::exp(v - hi);
        mass += v;
      }
      double draw = rng.uniform() * mass;
      std::size_t pick = m - 1;
      for (std::size_t u = 0; u < m; ++u) {
        if (draw < logits[u]) {
          pick = u;
          break;
        }
        draw -= logits[u];
      }
      state[j] = static_cast<Symbol>(pick);
    }
  };

  for (std::size_t s = 0; s < opts.burn_in; ++s) sweep();
  std::vector<Symbol> values;
  values.reserve(n * p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < opts.thin; ++s) sweep();
    values.insert(values.end(), state.begin(), state.end());
  }
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  if (n >= 2) return Dataset(p, std::move(values), m);
  // A one-row sample is legal here even though Dataset needs two rows; pad and slice.
  values.insert(values.end(), state.begin(), state.end());
  return Dataset(p, std::move(values), m).select_rows(all);
}

std::vector<Symbol> decode_state(std::size_t state, std::size_t p, std::size_t m) {
  std::vector<Symbol> x(p);
  for (std::size_t j = 0; j < p; ++j) {
    x[j] = static_cast<Symbol>(state % m);
    state /= m;
  }
  return x;
}

std::vector<double> exact_distribution(const ModelSpec& spec, const SymmetricParams& theta) {
  const std::size_t p = theta.p();
  const std::size_t m = spec.alphabet_size();
  std::size_t states = 1;
  for (std::size_t j = 0; j < p; ++j) {
    states *= m;
    if (states > (std::size_t{1} << 20)) throw InvalidArgument("state space exceeds 2^20 states");
  }
  std::vector<double> logw(states);
  for (std::size_t s = 0; s < states; ++s) {
    const std::vector<Symbol> x = decode_state(s, p, m);
    double e = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      e += theta(j, j) * spec.b0(x[j]);
      for (std::size_t k = 0; k < j; ++k) e += theta(j, k) * spec.b(x[j], x[k]);
    }
    logw[s] = e;
  }
  const double hi = *std::max_element(logw.begin(), logw.end());
  double z = 0.0;
  for (double& v : logw) {
    v = std::exp(v - hi);
    z += v;
  }
  for (double& v : logw) v /= z;
  return logw;
}

Dataset generate_series(const ModelSpec& spec, const SymmetricParams& theta1,
                        const SymmetricParams& theta2, std::size_t T, std::size_t tau_star,
                        const SamplerOptions& opts, std::uint64_t seed) {
  if (tau_star < 1 || tau_star >= T) throw InvalidArgument("change-point must satisfy 1 <= τ* < T");
  if (theta1.p() != theta2.p()) throw InvalidArgument("pre- and post-change matrices differ in size");
  const Dataset before = gibbs_sample(spec, theta1, tau_star, opts, child_seed(seed, 0));
  const Dataset after = gibbs_sample(spec, theta2, T - tau_star, opts, child_seed(seed, 1));
  std::vector<Symbol> values(before.values().begin(), before.values().end());
  values.insert(values.end(), after.values().begin(), after.values().end());
  return Dataset(theta1.p(), std::move(values), spec.alphabet_size());
}

void ScenarioSpec::validate() const {
  if (T < 2) throw InvalidArgument("scenario needs T >= 2");
  if (tau_star < 1 || tau_star >= T) throw InvalidArgument("scenario needs 1 <= τ* < T");
  if (community) {
    if (layout.group1 + layout.group2 < 2) throw InvalidArgument("community layout needs p >= 2");
  } else {
    if (p < 2) throw InvalidArgument("scenario needs p >= 2");
    if (!(density > 0.0) || density > 1.0) throw InvalidArgument("density must lie in (0, 1]");
    if (!(similarity >= 0.0) || similarity > 1.0) throw InvalidArgument("similarity must lie in [0, 1]");
  }
  if (sampler.thin < 1) throw InvalidArgument("thinning interval must be at least 1");
}

Scenario build_scenario(const ScenarioSpec& spec) {
  spec.validate();
  Scenario sc;
  sc.spec = spec;
  if (spec.community) {
    sc.spec.p = spec.layout.group1 + spec.layout.group2;
    std::tie(sc.theta1, sc.theta2) = community_pair(spec.layout, child_seed(spec.seed, 0));
    sc.groups = community_groups(spec.layout);
  } else {
    std::tie(sc.theta1, sc.theta2) =
        similarity_pair(spec.p, spec.density, spec.similarity, child_seed(spec.seed, 0), spec.redraw);
  }
  sc.data = generate_series(make_ising_spec(), sc.theta1, sc.theta2, spec.T, spec.tau_star, spec.sampler,
                            child_seed(spec.seed, 1));
  return sc;
}

}  // namespace mrfcp
