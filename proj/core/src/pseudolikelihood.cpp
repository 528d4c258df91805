#include "mrfcp/pseudolikelihood.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "mrfcp/errors.hpp"

namespace mrfcp {
namespace {

void check_observation(const SymmetricParams& theta, std::span<const Symbol> x,
                       std::size_t alphabet_size) {
  if (x.size() != theta.p()) throw InvalidArgument("observation length does not match p");
  for (Symbol s : x) {
    if (s >= alphabet_size) throw InvalidArgument("observation holds an invalid alphabet index");
  }
}

// Logits of node j's conditional, written into `logits` (size m).
void node_logits(const ModelSpec& spec, const SymmetricParams& theta, std::span<const Symbol> x,
                 std::size_t j, std::span<double> logits) {
  const std::size_t m = spec.alphabet_size();
  for (std::size_t u = 0; u < m; ++u) {
    const auto su = static_cast<Symbol>(u);
    double v = theta(j, j) * spec.b0(su);
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (k != j) v += theta(j, k) * spec.b(su, x[k]);
    }
    logits[u] = v;
  }
}

double log_sum_exp(std::span<const double> v) {
  const double hi = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double a : v) s += std::exp(a - hi);
  return hi + std::log(s);
}

}  // namespace

std::vector<double> node_conditional(const ModelSpec& spec, const SymmetricParams& theta,
                                     std::span<const Symbol> x, std::size_t j) {
  check_observation(theta, x, spec.alphabet_size());
  if (j >= theta.p()) throw InvalidArgument("node index out of range");
  std::vector<double> logits(spec.alphabet_size());
  node_logits(spec, theta, x, j, logits);
  for (double v : logits) {
    if (!std::isfinite(v)) throw NumericalError("non-finite logit in node conditional");
  }
  const double lse = log_sum_exp(logits);
  for (double& v : logits) v = std::exp(v - lse);
  return logits;
}

double phi(const ModelSpec& spec, const SymmetricParams& theta, std::span<const Symbol> x) {
  check_observation(theta, x, spec.alphabet_size());
  std::vector<double> logits(spec.alphabet_size());
  double total = 0.0;
  for (std::size_t j = 0; j < theta.p(); ++j) {
    node_logits(spec, theta, x, j, logits);
    total += log_sum_exp(logits) - logits[x[j]];
  }
  return total;
}

SymmetricParams phi_gradient(const ModelSpec& spec, const SymmetricParams& theta,
                             std::span<const Symbol> x) {
  check_observation(theta, x, spec.alphabet_size());
  const std::size_t p = theta.p();
  const std::size_t m = spec.alphabet_size();
  std::vector<double> grad(SymmetricParams::packed_size(p), 0.0);
  std::vector<double> prob(m);
  for (std::size_t j = 0; j < p; ++j) {
    node_logits(spec, theta, x, j, prob);
    const double lse = log_sum_exp(prob);
    for (double& v : prob) v = std::exp(v - lse);

    double expected_b0 = 0.0;
    for (std::size_t u = 0; u < m; ++u) expected_b0 += prob[u] * spec.b0(static_cast<Symbol>(u));
    grad[SymmetricParams::index(j, j)] += expected_b0 - spec.b0(x[j]);

    // Node j's conditional contributes E[b(X_j, x_k) | x_-j] - b(x_j, x_k) to θ_jk;
    // node k's conditional adds the mirrored term when the loop reaches k.
    for (std::size_t k = 0; k < p; ++k) {
      if (k == j) continue;
      double expected_b = 0.0;
      for (std::size_t u = 0; u < m; ++u) expected_b += prob[u] * spec.b(static_cast<Symbol>(u), x[k]);
      grad[SymmetricParams::index(j, k)] += expected_b - spec.b(x[j], x[k]);
    }
  }
  return SymmetricParams(p, std::move(grad));
}

SegmentObjective segment_objective(const ModelSpec& spec, const SymmetricParams& theta,
                                   const Dataset& data, TimeRange range, std::size_t scale_T) {
  range.validate(data.T());
  if (scale_T == 0) throw InvalidArgument("scale_T must be positive");
  double total = 0.0;
  for (std::size_t t = range.first; t <= range.last; ++t) total += phi(spec, theta, data.row(t - 1));
  return {total / static_cast<double>(scale_T), range, scale_T};
}

// ---------------------------------------------------------------------------

using Matrix = Eigen::MatrixXd;

struct PseudoLikelihood::Impl {
  ModelSpec spec;
  std::size_t p = 0;
  std::size_t T = 0;
  std::size_t m = 0;
  bool binary = false;
  // Binary path: diff = b(1, x_tk) - b(0, x_tk); is_one = [x_tk == 1].
  Matrix diff;
  Matrix is_one;
  double b0_diff = 0.0;
  // General path, one matrix per symbol u: feature[u](t,k) = b(u, x_tk),
  // indicator[u](t,k) = [x_tk == u].
  std::vector<Matrix> feature;
  std::vector<Matrix> indicator;

  Impl(const ModelSpec& s, const Dataset& data)
      : spec(s), p(data.p()), T(data.T()), m(s.alphabet_size()), binary(s.is_binary()) {
    if (data.alphabet_size() > m) throw InvalidArgument("dataset alphabet exceeds model alphabet");
    if (binary) {
      diff.resize(T, p);
      is_one.resize(T, p);
      for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t k = 0; k < p; ++k) {
          const Symbol v = data(t, k);
          diff(t, k) = spec.b(1, v) - spec.b(0, v);
          is_one(t, k) = v == 1 ? 1.0 : 0.0;
        }
      }
      b0_diff = spec.b0(1) - spec.b0(0);
    } else {
      feature.assign(m, Matrix(T, p));
      indicator.assign(m, Matrix::Zero(T, p));
      for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t k = 0; k < p; ++k) {
          const Symbol v = data(t, k);
          for (std::size_t u = 0; u < m; ++u) feature[u](t, k) = spec.b(static_cast<Symbol>(u), v);
          indicator[v](t, k) = 1.0;
        }
      }
    }
  }

  // Off-diagonal part of θ as a dense symmetric matrix with zero diagonal.
  Matrix off_diagonal(std::span<const double> theta) const {
    Matrix out(p, p);
    for (std::size_t j = 0; j < p; ++j) {
      out(j, j) = 0.0;
      for (std::size_t k = 0; k < j; ++k) {
        const double v = theta[SymmetricParams::index(j, k)];
        out(j, k) = v;
        out(k, j) = v;
      }
    }
    return out;
  }

  double evaluate(std::span<const double> theta, TimeRange range, double* grad) const {
    if (theta.size() != SymmetricParams::packed_size(p)) {
      throw InvalidArgument("parameter vector length does not match the evaluator");
    }
    range.validate(T);
    return binary ? evaluate_binary(theta, range, grad) : evaluate_general(theta, range, grad);
  }

  double evaluate_binary(std::span<const double> theta, TimeRange range, double* grad) const {
    const auto first = static_cast<Eigen::Index>(range.first - 1);
    const auto n = static_cast<Eigen::Index>(range.length());
    const auto d = diff.middleRows(first, n);
    const auto y = is_one.middleRows(first, n);
    const Matrix off = off_diagonal(theta);

    Matrix eta(n, static_cast<Eigen::Index>(p));
    eta.noalias() = d * off;
    for (std::size_t j = 0; j < p; ++j) {
      eta.col(static_cast<Eigen::Index>(j)).array() += b0_diff * theta[SymmetricParams::index(j, j)];
    }

    // phi_j = softplus(eta) - y * eta; residual = sigmoid(eta) - y.
    double total = 0.0;
    for (Eigen::Index k = 0; k < eta.cols(); ++k) {
      for (Eigen::Index t = 0; t < n; ++t) {
        const double e = eta(t, k);
        const double tail = std::exp(-std::abs(e));
        total += std::max(e, 0.0) + std::log1p(tail) - y(t, k) * e;
        if (grad != nullptr) {
          const double sigma = e >= 0.0 ? 1.0 / (1.0 + tail) : tail / (1.0 + tail);
          eta(t, k) = sigma - y(t, k);
        }
      }
    }
    if (!std::isfinite(total)) throw NumericalError("pseudo-likelihood is not finite");
    if (grad == nullptr) return total;

    Matrix cross(p, p);
    cross.noalias() = eta.transpose() * d;
    for (std::size_t j = 0; j < p; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      grad[SymmetricParams::index(j, j)] = b0_diff * eta.col(jj).sum();
      for (std::size_t k = 0; k < j; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        grad[SymmetricParams::index(j, k)] = cross(jj, kk) + cross(kk, jj);
      }
    }
    return total;
  }

  double evaluate_general(std::span<const double> theta, TimeRange range, double* grad) const {
    const auto first = static_cast<Eigen::Index>(range.first - 1);
    const auto n = static_cast<Eigen::Index>(range.length());
    const auto pp = static_cast<Eigen::Index>(p);
    const Matrix off = off_diagonal(theta);

    std::vector<Matrix> logits(m, Matrix(n, pp));
    for (std::size_t u = 0; u < m; ++u) {
      logits[u].noalias() = feature[u].middleRows(first, n) * off;
      const double b0u = spec.b0(static_cast<Symbol>(u));
      for (std::size_t j = 0; j < p; ++j) {
        logits[u].col(static_cast<Eigen::Index>(j)).array() +=
            b0u * theta[SymmetricParams::index(j, j)];
      }
    }

    double total = 0.0;
    std::vector<double> cell(m);
    for (Eigen::Index k = 0; k < pp; ++k) {
      for (Eigen::Index t = 0; t < n; ++t) {
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t u = 0; u < m; ++u) hi = std::max(hi, logits[u](t, k));
        double s = 0.0;
        for (std::size_t u = 0; u < m; ++u) {
          cell[u] = std::exp(logits[u](t, k) - hi);
          s += cell[u];
        }
        const double lse = hi + std::log(s);
        for (std::size_t u = 0; u < m; ++u) {
          const double y = indicator[u](first + t, k);
          total -= y * logits[u](t, k);
          if (grad != nullptr) logits[u](t, k) = cell[u] / s - y;
        }
        total += lse;
      }
    }
    if (!std::isfinite(total)) throw NumericalError("pseudo-likelihood is not finite");
    if (grad == nullptr) return total;

    Matrix cross = Matrix::Zero(pp, pp);
    for (std::size_t u = 0; u < m; ++u) {
      cross.noalias() += logits[u].transpose() * feature[u].middleRows(first, n);
    }
    for (std::size_t j = 0; j < p; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      double diag = 0.0;
      for (std::size_t u = 0; u < m; ++u) {
        diag += spec.b0(static_cast<Symbol>(u)) * logits[u].col(jj).sum();
      }
      grad[SymmetricParams::index(j, j)] = diag;
      for (std::size_t k = 0; k < j; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        grad[SymmetricParams::index(j, k)] = cross(jj, kk) + cross(kk, jj);
      }
    }
    return total;
  }

  // Node j's conditional depends on row j of θ only, so its curvature is a
  // p x p block over the coordinates (j, 0..p-1); the diagonal slot of the
  // block is θ_jj.
  void scatter_block(std::size_t j, const Matrix& block, double* hess) const {
    const std::size_t d = SymmetricParams::packed_size(p);
    for (std::size_t k = 0; k < p; ++k) {
      const std::size_t r = SymmetricParams::index(j, k);
      for (std::size_t l = 0; l < p; ++l) {
        hess[r * d + SymmetricParams::index(j, l)] +=
            block(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
      }
    }
  }

  void hessian(std::span<const double> theta, TimeRange range, double* hess) const {
    if (theta.size() != SymmetricParams::packed_size(p)) {
      throw InvalidArgument("parameter vector length does not match the evaluator");
    }
    range.validate(T);
    const std::size_t d = SymmetricParams::packed_size(p);
    std::fill(hess, hess + d * d, 0.0);
    const auto first = static_cast<Eigen::Index>(range.first - 1);
    const auto n = static_cast<Eigen::Index>(range.length());
    const auto pp = static_cast<Eigen::Index>(p);
    const Matrix off = off_diagonal(theta);

    if (binary) {
      const auto dm = diff.middleRows(first, n);
      Matrix eta(n, pp);
      eta.noalias() = dm * off;
      Matrix v(n, pp);
      Eigen::VectorXd w(n);
      for (std::size_t j = 0; j < p; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        const double bias = b0_diff * theta[SymmetricParams::index(j, j)];
        for (Eigen::Index t = 0; t < n; ++t) {
          const double s = 1.0 / (1.0 + std::exp(-(eta(t, jj) + bias)));
          w(t) = s * (1.0 - s);
        }
        v = dm;
        v.col(jj).setConstant(b0_diff);
        const Matrix block = v.transpose() * w.asDiagonal() * v;
        scatter_block(j, block, hess);
      }
      return;
    }

    std::vector<Matrix> prob(m, Matrix(n, pp));
    for (std::size_t u = 0; u < m; ++u) {
      prob[u].noalias() = feature[u].middleRows(first, n) * off;
      const double b0u = spec.b0(static_cast<Symbol>(u));
      for (std::size_t j = 0; j < p; ++j) {
        prob[u].col(static_cast<Eigen::Index>(j)).array() += b0u * theta[SymmetricParams::index(j, j)];
      }
    }
    for (Eigen::Index k = 0; k < pp; ++k) {
      for (Eigen::Index t = 0; t < n; ++t) {
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t u = 0; u < m; ++u) hi = std::max(hi, prob[u](t, k));
        double s = 0.0;
        for (std::size_t u = 0; u < m; ++u) {
          prob[u](t, k) = std::exp(prob[u](t, k) - hi);
          s += prob[u](t, k);
        }
        for (std::size_t u = 0; u < m; ++u) prob[u](t, k) /= s;
      }
    }
    // Covariance of the feature vector a(U) under node j's conditional:
    // Σ_u p_u a_u a_uᵀ - ā āᵀ, summed over t.
    Matrix a(n, pp);
    Matrix mean(n, pp);
    for (std::size_t j = 0; j < p; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      Matrix block = Matrix::Zero(pp, pp);
      mean.setZero();
      for (std::size_t u = 0; u < m; ++u) {
        a = feature[u].middleRows(first, n);
        a.col(jj).setConstant(spec.b0(static_cast<Symbol>(u)));
        const Eigen::VectorXd w = prob[u].col(jj);
        block.noalias() += a.transpose() * w.asDiagonal() * a;
        mean.noalias() += w.asDiagonal() * a;
      }
      block.noalias() -= mean.transpose() * mean;
      scatter_block(j, block, hess);
    }
  }
};

PseudoLikelihood::PseudoLikelihood(const ModelSpec& spec, const Dataset& data)
    : impl_(std::make_shared<const Impl>(spec, data)) {}
PseudoLikelihood::~PseudoLikelihood() = default;
PseudoLikelihood::PseudoLikelihood(const PseudoLikelihood&) = default;
PseudoLikelihood& PseudoLikelihood::operator=(const PseudoLikelihood&) = default;
PseudoLikelihood::PseudoLikelihood(PseudoLikelihood&&) noexcept = default;
PseudoLikelihood& PseudoLikelihood::operator=(PseudoLikelihood&&) noexcept = default;

std::size_t PseudoLikelihood::p() const noexcept { return impl_->p; }
std::size_t PseudoLikelihood::T() const noexcept { return impl_->T; }
const ModelSpec& PseudoLikelihood::spec() const noexcept { return impl_->spec; }

double PseudoLikelihood::sum(std::span<const double> theta, TimeRange range) const {
  return impl_->evaluate(theta, range, nullptr);
}

double PseudoLikelihood::sum_and_gradient(std::span<const double> theta, TimeRange range,
                                          std::span<double> grad) const {
  if (grad.size() != dim()) throw InvalidArgument("gradient buffer has the wrong length");
  return impl_->evaluate(theta, range, grad.data());
}

void PseudoLikelihood::hessian(std::span<const double> theta, TimeRange range,
                               std::span<double> hess) const {
  if (hess.size() != dim() * dim()) throw InvalidArgument("Hessian buffer has the wrong length");
  impl_->hessian(theta, range, hess.data());
}

}  // namespace mrfcp
