#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mrfcp/model.hpp"
#include "mrfcp/pseudolikelihood.hpp"

namespace mrfcp {

enum class Side { first, second };

/// λ_{1,τ} = a1 c0 √(τ log(dT)) / T  and  λ_{2,τ} = a2 c0 √((T-τ) log(dT)) / T.
struct PenaltySchedule {
  double a1 = 32.0;
  double a2 = 32.0;
  double c0 = 1.0;
  std::size_t T = 0;
  std::size_t d = 0;

  static PenaltySchedule for_problem(const ModelSpec& spec, std::size_t p, std::size_t T,
                                     double a1 = 32.0, double a2 = 32.0);

  /// c0 √(n log(dT)) / T: the penalty per unit multiplier for a segment of length n.
  double unit(std::size_t n) const;
};

/// Penalty for the segment on `side` of change-point `tau` (1 <= tau < T).
double penalty_at(const PenaltySchedule& schedule, std::size_t tau, Side side);

enum class SolverMethod {
  /// Quadratic model from the exact Hessian, solved by coordinate descent, then
  /// a backtracking line search on the penalized objective.
  proximal_newton,
  /// Proximal gradient with backtracking and optional acceleration.
  proximal_gradient,
};

struct SolverOptions {
  SolverMethod method = SolverMethod::proximal_newton;
  /// Converged once the KKT residual is at most tol * λ.
  double tol = 1e-8;
  std::size_t max_iter = 5000;
  /// Proximal gradient only: monotone FISTA when true, plain steps otherwise.
  bool accelerate = true;
  /// Keep the penalized objective after every iteration in FitResult::history.
  bool record_history = false;
};

struct FitResult {
  SymmetricParams theta_hat;
  /// (1/scale_T) Σ phi + λ ||θ||_1 at theta_hat.
  double objective_value = 0.0;
  /// (1/scale_T) Σ phi at theta_hat.
  double loss = 0.0;
  double lambda = 0.0;
  std::size_t iterations = 0;
  double kkt_residual = 0.0;
  /// Residual bound used for the convergence decision (tol * λ).
  double kkt_tolerance = 0.0;
  bool converged = false;
  /// Final backtracking curvature estimate; seeds warm-started fits.
  double lipschitz = 0.0;
  std::vector<double> history;
};

/// Maximum violation of the subgradient optimality conditions of
/// loss + λ||θ||_1, given the loss gradient at θ.
double kkt_residual(std::span<const double> theta, std::span<const double> grad, double lambda);

/// Minimizes (1/scale_T) Σ_{t∈range} phi(θ, x_t) + λ ||θ||_1 over symmetric θ
/// (diagonal included in the penalty). Every accepted iterate lowers (or keeps)
/// the penalized objective.
/// Non-convergence is reported through FitResult::converged, not thrown.
FitResult fit_penalized(const PseudoLikelihood& loss, TimeRange range, std::size_t scale_T,
                        double lambda, const SymmetricParams* init = nullptr,
                        const SolverOptions& opts = {}, double lipschitz_hint = 0.0);

FitResult fit_penalized(const ModelSpec& spec, const Dataset& data, TimeRange range,
                        std::size_t scale_T, double lambda, const SymmetricParams* init = nullptr,
                        const SolverOptions& opts = {});

/// 2 Σ_{t∈range} phi(θ̂, x_t) + log(n) ||θ̂||_0, with n the range length and
/// ||·||_0 counting non-zero lower-triangle entries.
double bic_score(const PseudoLikelihood& loss, const SymmetricParams& theta_hat, TimeRange range);
double bic_score(const ModelSpec& spec, const SymmetricParams& theta_hat, const Dataset& data,
                 TimeRange range);

struct BicSelection {
  double lambda = 0.0;
  std::size_t index = 0;  ///< Position of the winner in the caller's grid.
  FitResult fit;
  std::vector<double> scores;           ///< BIC per grid entry, caller's order.
  std::vector<SymmetricParams> path;    ///< Fitted θ per grid entry, caller's order.
  double lipschitz = 0.0;
};

/// Fits every λ of `grid` (visited from largest to smallest, each fit warm-started
/// from the previous one, or from warm_path[i] when given) and returns the BIC
/// minimizer. Ties go to the larger λ.
BicSelection select_lambda_bic(const PseudoLikelihood& loss, TimeRange range, std::size_t scale_T,
                               std::span<const double> grid, const SolverOptions& opts = {},
                               std::span<const SymmetricParams> warm_path = {},
                               double lipschitz_hint = 0.0);

BicSelection select_lambda_bic(const ModelSpec& spec, const Dataset& data, TimeRange range,
                               std::span<const double> grid, const SolverOptions& opts = {});

/// Log-spaced values from `hi` down to `lo`, both ends included, with at least
/// `per_decade` intervals per factor of ten.
std::vector<double> log_grid(double hi, double lo, std::size_t per_decade);

}  // namespace mrfcp
