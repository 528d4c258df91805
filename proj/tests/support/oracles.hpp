#pragma once

// Reference implementations used only by tests. They work from the raw
// definitions with dense loops and share no code with the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

/// Dense symmetric matrix, row-major.
struct Dense {
  std::size_t p = 0;
  std::vector<double> a;

  explicit Dense(std::size_t n = 0) : p(n), a(n * n, 0.0) {}
  double& operator()(std::size_t j, std::size_t k) { return a[j * p + k]; }
  double operator()(std::size_t j, std::size_t k) const { return a[j * p + k]; }
  void set_sym(std::size_t j, std::size_t k, double v) {
    (*this)(j, k) = v;
    (*this)(k, j) = v;
  }
};

/// Ising negative log pseudo-likelihood of one binary observation.
inline double ising_phi(const Dense& th, const std::vector<int>& x) {
  double total = 0.0;
  for (std::size_t j = 0; j < th.p; ++j) {
    // Energy of x_j = u given the others: θ_jj u + Σ_k θ_jk u x_k.
    double field = th(j, j);
    for (std::size_t k = 0; k < th.p; ++k) {
      if (k != j) field += th(j, k) * x[k];
    }
    const double e1 = field;
    const double e0 = 0.0;
    const double z = std::log(std::exp(e0) + std::exp(e1));
    total -= (x[j] == 1 ? e1 : e0) - z;
  }
  return total;
}

/// Unnormalized Ising log-weight Σ_j θ_jj x_j + Σ_{k<j} θ_jk x_j x_k.
inline double ising_energy(const Dense& th, const std::vector<int>& x) {
  double e = 0.0;
  for (std::size_t j = 0; j < th.p; ++j) {
    e += th(j, j) * x[j];
    for (std::size_t k = 0; k < j; ++k) e += th(j, k) * x[j] * x[k];
  }
  return e;
}

/// Exact Ising law by enumeration; state s has x_j = bit j of s.
inline std::vector<double> ising_exact(const Dense& th) {
  const std::size_t states = std::size_t{1} << th.p;
  std::vector<double> w(states);
  double z = 0.0;
  for (std::size_t s = 0; s < states; ++s) {
    std::vector<int> x(th.p);
    for (std::size_t j = 0; j < th.p; ++j) x[j] = static_cast<int>((s >> j) & 1U);
    w[s] = std::exp(ising_energy(th, x));
    z += w[s];
  }
  for (double& v : w) v /= z;
  return w;
}

/// Central difference of f at x along coordinate i.
inline double central_difference(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> x, std::size_t i, double h) {
  const double x0 = x[i];
  x[i] = x0 + h;
  const double up = f(x);
  x[i] = x0 - h;
  const double down = f(x);
  return (up - down) / (2.0 * h);
}

/// Minimizes a convex function of three variables by nested grid search:
/// a 21^3 grid around the incumbent, shrunk fourfold until the spacing is
/// below `resolution`.
inline std::array<double, 3> grid_search3(const std::function<double(const std::array<double, 3>&)>& f,
                                          std::array<double, 3> center, double radius, double resolution,
                                          double* best_value = nullptr) {
  constexpr int kHalf = 10;
  double best = f(center);
  while (radius / kHalf > resolution) {
    const double h = radius / kHalf;
    std::array<double, 3> incumbent = center;
    for (int a = -kHalf; a <= kHalf; ++a) {
      for (int b = -kHalf; b <= kHalf; ++b) {
        for (int c = -kHalf; c <= kHalf; ++c) {
          const std::array<double, 3> q{center[0] + a * h, center[1] + b * h, center[2] + c * h};
          const double v = f(q);
          if (v < best) {
            best = v;
            incumbent = q;
          }
        }
      }
    }
    center = incumbent;
    radius /= 4.0;
  }
  if (best_value != nullptr) *best_value = best;
  return center;
}

/// Gaussian-kernel Nadaraya–Watson estimate at x.
inline double nadaraya_watson(const std::vector<double>& xs, const std::vector<double>& ys, double h, double x) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double k = std::exp(-0.5 * ((x - xs[i]) / h) * ((x - xs[i]) / h));
    num += k * ys[i];
    den += k;
  }
  return num / den;
}

/// Triangles through each vertex of an adjacency matrix, by triple loop.
inline std::vector<std::size_t> triangles_per_vertex(const std::vector<std::vector<int>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::size_t> t(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (std::size_t c = b + 1; c < n; ++c) {
        if (adj[a][b] && adj[b][c] && adj[a][c]) {
          ++t[a];
          ++t[b];
          ++t[c];
        }
      }
    }
  }
  return t;
}

}  // namespace oracle
