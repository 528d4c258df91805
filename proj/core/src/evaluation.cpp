#include "mrfcp/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mrfcp/errors.hpp"
#include "mrfcp/pseudolikelihood.hpp"
#include "mrfcp/random.hpp"

namespace mrfcp {
namespace {

void check_same_size(const SymmetricParams& a, const SymmetricParams& b) {
  if (a.p() != b.p()) throw InvalidArgument("matrices differ in dimension");
}

std::vector<std::vector<std::size_t>> adjacency_lists(const SymmetricParams& theta) {
  const std::size_t p = theta.p();
  std::vector<std::vector<std::size_t>> adj(p);
  for (std::size_t j = 1; j < p; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      if (theta(j, k) != 0.0) {
        adj[j].push_back(k);
        adj[k].push_back(j);
      }
    }
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

}  // namespace

EdgeConfusion edge_confusion(const SymmetricParams& estimate, const SymmetricParams& truth,
                             double zero_tol) {
  check_same_size(estimate, truth);
  if (!(zero_tol >= 0.0)) throw InvalidArgument("zero tolerance must be non-negative");
  EdgeConfusion c;
  for (std::size_t j = 1; j < truth.p(); ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      const bool actual = truth(j, k) != 0.0;
      const bool predicted = std::abs(estimate(j, k)) > zero_tol;
      if (actual && predicted) ++c.true_positive;
      if (actual && !predicted) ++c.false_negative;
      if (!actual && predicted) ++c.false_positive;
      if (!actual && !predicted) ++c.true_negative;
    }
  }
  if (const std::size_t pos = c.true_positive + c.false_negative; pos > 0) {
    c.sensitivity = static_cast<double>(c.true_positive) / static_cast<double>(pos);
  }
  if (const std::size_t neg = c.true_negative + c.false_positive; neg > 0) {
    c.specificity = static_cast<double>(c.true_negative) / static_cast<double>(neg);
  }
  return c;
}

double relative_error(const SymmetricParams& estimate, const SymmetricParams& truth) {
  check_same_size(estimate, truth);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < truth.dim(); ++i) {
    const double gap = estimate.packed()[i] - truth.packed()[i];
    num += gap * gap;
    den += truth.packed()[i] * truth.packed()[i];
  }
  if (den == 0.0) throw InvalidArgument("relative error is undefined for a zero true matrix");
  return std::sqrt(num / den);
}

RecoveryReport recovery_report(const SymmetricParams& estimate1, const SymmetricParams& truth1,
                               const SymmetricParams& estimate2, const SymmetricParams& truth2,
                               double zero_tol) {
  RecoveryReport r;
  r.zero_tol = zero_tol;
  r.first = {edge_confusion(estimate1, truth1, zero_tol), relative_error(estimate1, truth1)};
  r.second = {edge_confusion(estimate2, truth2, zero_tol), relative_error(estimate2, truth2)};
  return r;
}

ChangePointReport changepoint_stats(const std::vector<double>& estimates, double tau_star) {
  if (estimates.empty()) throw InvalidArgument("no change-point estimates given");
  ChangePointReport r;
  r.estimates = estimates;
  r.tau_star = tau_star;
  const double n = static_cast<double>(estimates.size());
  r.mean = std::accumulate(estimates.begin(), estimates.end(), 0.0) / n;
  double sq = 0.0;
  double var = 0.0;
  for (double e : estimates) {
    sq += (e - tau_star) * (e - tau_star);
    var += (e - r.mean) * (e - r.mean);
  }
  r.rmse = std::sqrt(sq / n);
  const double sd = std::sqrt(var / n);
  r.cv = r.mean != 0.0 ? sd / std::abs(r.mean) : 0.0;
  return r;
}

std::vector<std::size_t> node_degrees(const SymmetricParams& theta) {
  std::vector<std::size_t> deg(theta.p(), 0);
  for (std::size_t j = 1; j < theta.p(); ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      if (theta(j, k) != 0.0) {
        ++deg[j];
        ++deg[k];
      }
    }
  }
  return deg;
}

std::vector<double> clustering_coefficients(const SymmetricParams& theta) {
  const auto adj = adjacency_lists(theta);
  std::vector<double> out(theta.p(), 0.0);
  for (std::size_t v = 0; v < theta.p(); ++v) {
    const auto& nb = adj[v];
    if (nb.size() < 2) continue;
    std::size_t closed = 0;
    for (std::size_t a = 0; a < nb.size(); ++a) {
      for (std::size_t b = a + 1; b < nb.size(); ++b) {
        if (theta(nb[a], nb[b]) != 0.0) ++closed;
      }
    }
    const double wedges = 0.5 * static_cast<double>(nb.size() * (nb.size() - 1));
    out[v] = static_cast<double>(closed) / wedges;
  }
  return out;
}

std::vector<double> eigenvector_centrality(const SymmetricParams& theta, double tol) {
  const std::size_t p = theta.p();
  const auto adj = adjacency_lists(theta);
  std::vector<double> out(p, 0.0);
  std::vector<int> component(p, -1);
  int next = 0;
  for (std::size_t start = 0; start < p; ++start) {
    if (component[start] >= 0) continue;
    std::vector<std::size_t> members{start};
    component[start] = next;
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t w : adj[members[i]]) {
        if (component[w] < 0) {
          component[w] = next;
          members.push_back(w);
        }
      }
    }
    ++next;
    if (members.size() == 1) continue;

    // A + I has the same leading eigenvector as A and is aperiodic, so the
    // iteration converges on bipartite components too.
    std::vector<double> x(p, 0.0), y(p, 0.0);
    for (std::size_t v : members) x[v] = 1.0;
    for (std::size_t iter = 0; iter < 100000; ++iter) {
      double top = 0.0;
      for (std::size_t v : members) {
        double s = x[v];
        for (std::size_t w : adj[v]) s += x[w];
        y[v] = s;
        top = std::max(top, s);
      }
      double change = 0.0;
      for (std::size_t v : members) {
        y[v] /= top;
        change = std::max(change, std::abs(y[v] - x[v]));
        x[v] = y[v];
      }
      if (change <= tol) break;
    }
    for (std::size_t v : members) out[v] = x[v];
  }
  return out;
}

std::vector<GroupNetworkStats> network_stats(const SymmetricParams& theta, const GroupLabels& groups) {
  groups.validate(theta.p());
  const auto deg = node_degrees(theta);
  const auto cen = eigenvector_centrality(theta);
  const auto clu = clustering_coefficients(theta);
  std::vector<GroupNetworkStats> out(groups.group_count());
  for (std::size_t g = 0; g < out.size(); ++g) {
    out[g].name = g < groups.names.size() ? groups.names[g] : "group" + std::to_string(g);
  }
  for (std::size_t v = 0; v < theta.p(); ++v) {
    auto& s = out[groups.assignment[v]];
    ++s.members;
    s.average_degree += static_cast<double>(deg[v]);
    s.average_centrality += cen[v];
    s.average_clustering += clu[v];
  }
  for (auto& s : out) {
    if (s.members == 0) continue;
    const double n = static_cast<double>(s.members);
    s.average_degree /= n;
    s.average_centrality /= n;
    s.average_clustering /= n;
  }
  return out;
}

SignTable edge_sign_proportions(const SymmetricParams& theta, const GroupLabels& groups) {
  groups.validate(theta.p());
  const std::size_t G = groups.group_count();
  SignTable table;
  for (std::size_t a = 0; a < G; ++a) {
    for (std::size_t b = a; b < G; ++b) table.cells.push_back({a, b, 0, 0, 0.0, 0.0});
  }
  auto cell_of = [&](std::size_t a, std::size_t b) -> SignCell& {
    if (a > b) std::swap(a, b);
    // Row a of the upper block triangle starts after a rows of shrinking length.
    const std::size_t offset = a * G - a * (a - 1) / 2;
    return table.cells[offset + (b - a)];
  };
  for (std::size_t j = 1; j < theta.p(); ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      const double v = theta(j, k);
      if (v == 0.0) continue;
      SignCell& c = cell_of(groups.assignment[j], groups.assignment[k]);
      if (v > 0.0) {
        ++c.positive;
      } else {
        ++c.negative;
      }
      ++table.total_edges;
    }
  }
  table.empty = table.total_edges == 0;
  if (!table.empty) {
    const double total = static_cast<double>(table.total_edges);
    for (SignCell& c : table.cells) {
      c.positive_fraction = static_cast<double>(c.positive) / total;
      c.negative_fraction = static_cast<double>(c.negative) / total;
    }
  }
  return table;
}

KappaEstimate estimate_kappa_mc(const ModelSpec& spec, const SymmetricParams& theta1,
                                const SymmetricParams& theta2, std::size_t n,
                                const SamplerOptions& sampler, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("kappa estimate needs n >= 1");
  check_same_size(theta1, theta2);
  auto side = [&](const SymmetricParams& draw_from, const SymmetricParams& minuend,
                  const SymmetricParams& subtrahend, std::uint64_t s, double& mean, double& se) {
    const Dataset data = gibbs_sample(spec, draw_from, n, sampler, s);
    double sum = 0.0;
    double sq = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = phi(spec, minuend, data.row(t)) - phi(spec, subtrahend, data.row(t));
      sum += v;
      sq += v * v;
    }
    const double dn = static_cast<double>(n);
    mean = sum / dn;
    const double var = n > 1 ? std::max(0.0, (sq - dn * mean * mean) / (dn - 1.0)) : 0.0;
    se = std::sqrt(var / dn);
  };
  KappaEstimate k;
  side(theta2, theta1, theta2, child_seed(seed, 0), k.forward, k.forward_se);
  side(theta1, theta2, theta1, child_seed(seed, 1), k.backward, k.backward_se);
  if (k.forward <= k.backward) {
    k.kappa = k.forward;
    k.standard_error = k.forward_se;
  } else {
    k.kappa = k.backward;
    k.standard_error = k.backward_se;
  }
  return k;
}

}  // namespace mrfcp
