#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mrfcp/model.hpp"
#include "mrfcp/penalized.hpp"
#include "mrfcp/pseudolikelihood.hpp"

namespace mrfcp {

/// Candidate change-points {k_l, k_l+step, ...} up to T - k_u.
struct SearchDomain {
  std::size_t k_l = 1;
  std::size_t k_u = 1;
  std::size_t step = 1;
  std::vector<std::size_t> taus;
};

/// Throws InvalidArgument when k_l or k_u is zero, step is zero, or k_l + k_u >= T.
SearchDomain build_domain(std::size_t T, std::size_t k_l, std::size_t k_u, std::size_t step = 1);

/// max(30, ceil(0.08 T)), capped so that the domain stays non-empty.
std::size_t default_margin(std::size_t T);

enum class TuningMode {
  schedule,     ///< λ from the penalty schedule with fixed a1, a2.
  bic_per_tau,  ///< For each τ and side, the BIC minimizer over a grid of multipliers.
};

struct Tuning {
  TuningMode mode = TuningMode::schedule;
  double a1 = 32.0;
  double a2 = 32.0;
  /// Multipliers searched by BIC; λ = a * c0 √(n log(dT)) / T for a side of length n.
  std::vector<double> a_grid;
};

/// 2.0 down to 0.02, 20 points per decade.
std::vector<double> default_bic_grid();

struct ScanOptions {
  Tuning tuning;
  SolverOptions solver;
  std::size_t threads = 0;  ///< 0 = hardware concurrency.
  /// Warm-start each fit from the neighbouring τ inside fixed-length chains.
  bool warm_start = true;
  std::size_t chain_length = 8;
};

/// State carried between neighbouring τ when warm starting. One entry per
/// λ (a single entry under the schedule, the whole path under BIC).
struct WarmStart {
  std::vector<SymmetricParams> first;
  std::vector<SymmetricParams> second;
  double lipschitz_first = 0.0;
  double lipschitz_second = 0.0;
};

struct ProfilePoint {
  std::size_t tau = 0;
  /// ℓ_T(τ; θ̂1, θ̂2): unpenalized, both sums divided by T.
  double objective = 0.0;
  FitResult first;
  FitResult second;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
};

/// Fits both segments around `tau` with the given penalties and evaluates the
/// unpenalized profile objective at the fits.
ProfilePoint profile_objective(const PseudoLikelihood& loss, std::size_t tau,
                               std::pair<double, double> lambdas, const SolverOptions& opts = {},
                               const WarmStart* warm = nullptr);

/// Same, with the penalties resolved from `options.tuning`. Updates `warm`
/// (when non-null) with the fits made here.
ProfilePoint profile_point(const PseudoLikelihood& loss, std::size_t tau, const ScanOptions& options,
                           WarmStart* warm = nullptr);

/// Evaluates profile points for every τ in `taus`, in chains of
/// options.chain_length consecutive entries. Output order follows `taus`.
std::vector<ProfilePoint> profile_curve(const PseudoLikelihood& loss, std::span<const std::size_t> taus,
                                        const ScanOptions& options);

struct CurvePoint {
  std::size_t tau = 0;
  double objective = 0.0;
};

/// Nadaraya–Watson smoother with a Gaussian kernel of bandwidth h, evaluated at
/// every integer of [eval_lo, eval_hi]. Throws when the kernel mass underflows.
std::vector<CurvePoint> nw_smooth(std::span<const CurvePoint> points, double bandwidth,
                                  std::size_t eval_lo, std::size_t eval_hi);

/// Index of the smallest objective; ties resolve to the earliest entry.
std::size_t argmin_index(std::span<const CurvePoint> curve);

struct StageInfo {
  std::vector<CurvePoint> raw;
  std::vector<CurvePoint> smoothed;
  double bandwidth = 0.0;
  std::size_t step = 0;
  std::size_t lo = 0;
  std::size_t hi = 0;
  std::size_t tau_hat = 0;
};

struct ScanResult {
  std::size_t T = 0;
  std::size_t tau_hat = 0;
  double alpha_hat = 0.0;
  /// Raw profile values evaluated by the scan (final stage for two-stage runs).
  std::vector<CurvePoint> curve;
  ProfilePoint at_tau_hat;
  std::optional<StageInfo> stage1;
  std::optional<StageInfo> stage2;
  /// Distinct τ at which both segments were fitted.
  std::size_t profile_fits = 0;
  Tuning tuning;
};

/// Full-grid scan: argmin of the profile objective over the domain (smallest τ on ties).
ScanResult basic_scan(const PseudoLikelihood& loss, const SearchDomain& domain,
                      const ScanOptions& options = {});

struct FastScanOptions {
  SearchDomain stage1;
  std::size_t stage2_halfwidth = 30;
  std::size_t stage2_step = 3;
  /// Kernel bandwidths; 0 selects 1.5 x the stage's grid step.
  double bandwidth1 = 0.0;
  double bandwidth2 = 0.0;
};

/// Two-stage scan: coarse grid, smoothed argmin, then a fine grid around it,
/// smoothed again. τ values shared between stages are fitted once.
ScanResult fast_scan(const PseudoLikelihood& loss, const FastScanOptions& fast,
                     const ScanOptions& options = {});

}  // namespace mrfcp
