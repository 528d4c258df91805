#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "mrfcp/model.hpp"

namespace mrfcp {

/// Conditional law of node j (0-based) given the other coordinates of x:
/// softmax over u of  θ_jj b0(u) + Σ_{k≠j} θ_jk b(u, x_k).
/// Throws InvalidArgument for a bad node index or observation length and
/// NumericalError if a logit is not finite.
std::vector<double> node_conditional(const ModelSpec& spec, const SymmetricParams& theta,
                                     std::span<const Symbol> x, std::size_t j);

/// Negative log-pseudo-likelihood of one observation: -Σ_j log f_j(x_j | x).
double phi(const ModelSpec& spec, const SymmetricParams& theta, std::span<const Symbol> x);

/// Gradient of phi with respect to the packed lower triangle of θ. Off-diagonal
/// coordinates collect the contributions of both node conditionals sharing θ_jk.
SymmetricParams phi_gradient(const ModelSpec& spec, const SymmetricParams& theta,
                             std::span<const Symbol> x);

/// (1/scale_T) Σ_{t ∈ range} phi(θ, x_t).
struct SegmentObjective {
  double value = 0.0;
  TimeRange range;
  std::size_t scale_T = 1;
};

SegmentObjective segment_objective(const ModelSpec& spec, const SymmetricParams& theta,
                                   const Dataset& data, TimeRange range, std::size_t scale_T);

/// Batched evaluator of Σ_t phi and its gradient over contiguous time ranges.
///
/// The dataset is expanded once into per-symbol design matrices; each call is
/// then a pair of dense products plus one pass of log-sum-exp. Binary alphabets
/// take a logit-difference path (one exp and one log1p per cell). Copies share
/// the immutable expansion, and all members are safe to call concurrently.
class PseudoLikelihood {
 public:
  PseudoLikelihood(const ModelSpec& spec, const Dataset& data);
  ~PseudoLikelihood();
  PseudoLikelihood(const PseudoLikelihood&);
  PseudoLikelihood& operator=(const PseudoLikelihood&);
  PseudoLikelihood(PseudoLikelihood&&) noexcept;
  PseudoLikelihood& operator=(PseudoLikelihood&&) noexcept;

  std::size_t p() const noexcept;
  std::size_t T() const noexcept;
  std::size_t dim() const noexcept { return SymmetricParams::packed_size(p()); }
  const ModelSpec& spec() const noexcept;

  /// Σ_{t ∈ range} phi(θ, x_t) for θ given as a packed lower triangle.
  double sum(std::span<const double> theta, TimeRange range) const;

  /// Same sum; writes its gradient into `grad` (length dim()).
  double sum_and_gradient(std::span<const double> theta, TimeRange range,
                          std::span<double> grad) const;
  /// Hessian of the same sum, written row-major into `hess` (dim() x dim()).
  void hessian(std::span<const double> theta, TimeRange range, std::span<double> hess) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

}  // namespace mrfcp
