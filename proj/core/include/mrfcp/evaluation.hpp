#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mrfcp/model.hpp"
#include "mrfcp/simulate.hpp"

namespace mrfcp {

/// Off-diagonal support comparison of an estimate against the truth.
struct EdgeConfusion {
  std::size_t true_positive = 0;
  std::size_t false_positive = 0;
  std::size_t true_negative = 0;
  std::size_t false_negative = 0;
  /// TP / (TP + FN); empty when the truth has no edges.
  std::optional<double> sensitivity;
  /// TN / (TN + FP); empty when the truth is complete.
  std::optional<double> specificity;
};

/// Positive means |truth| > 0; predicted positive means |estimate| > zero_tol.
EdgeConfusion edge_confusion(const SymmetricParams& estimate, const SymmetricParams& truth,
                             double zero_tol = 0.0);

/// ||estimate - truth||_F / ||truth||_F over the lower triangle (diagonal
/// included). Throws InvalidArgument when the truth is zero.
double relative_error(const SymmetricParams& estimate, const SymmetricParams& truth);

struct SideReport {
  EdgeConfusion confusion;
  double relative_error = 0.0;
};

struct RecoveryReport {
  SideReport first;
  SideReport second;
  double zero_tol = 0.0;
};

RecoveryReport recovery_report(const SymmetricParams& estimate1, const SymmetricParams& truth1,
                               const SymmetricParams& estimate2, const SymmetricParams& truth2,
                               double zero_tol = 0.0);

struct ChangePointReport {
  std::vector<double> estimates;
  double tau_star = 0.0;
  double mean = 0.0;
  double rmse = 0.0;
  /// Population standard deviation over the mean.
  double cv = 0.0;
};

ChangePointReport changepoint_stats(const std::vector<double>& estimates, double tau_star);

struct GroupNetworkStats {
  std::string name;
  std::size_t members = 0;
  double average_degree = 0.0;
  double average_centrality = 0.0;
  double average_clustering = 0.0;
};

/// Binarized degree of each node.
std::vector<std::size_t> node_degrees(const SymmetricParams& theta);
/// Local clustering coefficient: closed wedges over wedges, 0 below degree 2.
std::vector<double> clustering_coefficients(const SymmetricParams& theta);
/// Eigenvector centrality of the binarized graph, by power iteration on A + I
/// within each connected component, scaled to a maximum of 1 per component.
/// Isolated nodes score 0.
std::vector<double> eigenvector_centrality(const SymmetricParams& theta, double tol = 1e-10);

std::vector<GroupNetworkStats> network_stats(const SymmetricParams& theta, const GroupLabels& groups);

/// Edge counts split by sign and by block (g, h) with g <= h; within-group
/// blocks have g == h. Fractions are relative to the total edge count.
struct SignCell {
  std::size_t group_a = 0;
  std::size_t group_b = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;
  double positive_fraction = 0.0;
  double negative_fraction = 0.0;
};

struct SignTable {
  std::vector<SignCell> cells;
  std::size_t total_edges = 0;
  /// Set when the network has no edges; every fraction is then 0.
  bool empty = false;
};

SignTable edge_sign_proportions(const SymmetricParams& theta, const GroupLabels& groups);

struct KappaEstimate {
  double kappa = 0.0;
  double standard_error = 0.0;
  /// E_{θ2}[φ(θ1,X) - φ(θ2,X)] and E_{θ1}[φ(θ2,X) - φ(θ1,X)].
  double forward = 0.0;
  double backward = 0.0;
  double forward_se = 0.0;
  double backward_se = 0.0;
};

/// Monte Carlo estimate of the identifiability gap from n Gibbs draws under
/// each parameter. The reported error is that of the smaller side.
KappaEstimate estimate_kappa_mc(const ModelSpec& spec, const SymmetricParams& theta1,
                                const SymmetricParams& theta2, std::size_t n,
                                const SamplerOptions& sampler, std::uint64_t seed);

}  // namespace mrfcp
