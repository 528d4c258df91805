#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mrfcp/model.hpp"
#include "mrfcp/random.hpp"
#include "oracles.hpp"

namespace fixture {

inline mrfcp::SymmetricParams random_theta(std::size_t p, double bound, mrfcp::Rng& rng) {
  mrfcp::SymmetricParams th(p);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = 0; k <= j; ++k) th.set(j, k, rng.uniform(-bound, bound));
  }
  return th;
}

inline mrfcp::Dataset random_dataset(std::size_t p, std::size_t T, std::size_t m, mrfcp::Rng& rng) {
  std::vector<mrfcp::Symbol> v(p * T);
  for (auto& s : v) s = static_cast<mrfcp::Symbol>(rng.below(m));
  return mrfcp::Dataset(p, std::move(v), m);
}

inline std::vector<mrfcp::Symbol> random_obs(std::size_t p, std::size_t m, mrfcp::Rng& rng) {
  std::vector<mrfcp::Symbol> x(p);
  for (auto& s : x) s = static_cast<mrfcp::Symbol>(rng.below(m));
  return x;
}

inline oracle::Dense to_dense(const mrfcp::SymmetricParams& th) {
  oracle::Dense d(th.p());
  for (std::size_t j = 0; j < th.p(); ++j) {
    for (std::size_t k = 0; k < th.p(); ++k) d(j, k) = th(j, k);
  }
  return d;
}

inline std::vector<int> to_ints(std::span<const mrfcp::Symbol> x) { return {x.begin(), x.end()}; }

/// Alphabet {0,1,2} with b0(x) = x and b(x,y) = xy.
inline mrfcp::ModelSpec ternary_spec() {
  return mrfcp::ModelSpec({0.0, 1.0, 2.0}, [](double x) { return x; },
                          [](double x, double y) { return x * y; });
}

}  // namespace fixture
