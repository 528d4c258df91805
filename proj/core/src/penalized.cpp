#include "mrfcp/penalized.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mrfcp/errors.hpp"

namespace mrfcp {

PenaltySchedule PenaltySchedule::for_problem(const ModelSpec& spec, std::size_t p, std::size_t T,
                                             double a1, double a2) {
  PenaltySchedule s{a1, a2, spec.c0(), T, SymmetricParams::packed_size(p)};
  if (!(a1 > 0.0) || !(a2 > 0.0)) throw InvalidArgument("penalty multipliers must be positive");
  if (!(s.c0 > 0.0)) throw InvalidArgument("c0 is zero; the model family is degenerate");
  if (T < 2) throw InvalidArgument("series length must be at least 2");
  return s;
}

double PenaltySchedule::unit(std::size_t n) const {
  return c0 * std::sqrt(static_cast<double>(n) * std::log(static_cast<double>(d) * static_cast<double>(T))) /
         static_cast<double>(T);
}

double penalty_at(const PenaltySchedule& schedule, std::size_t tau, Side side) {
  if (tau < 1 || tau >= schedule.T) {
    throw InvalidArgument("change-point " + std::to_string(tau) + " outside [1, T-1]");
  }
  return side == Side::first ? schedule.a1 * schedule.unit(tau)
                             : schedule.a2 * schedule.unit(schedule.T - tau);
}

double kkt_residual(std::span<const double> theta, std::span<const double> grad, double lambda) {
  double worst = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double r = theta[i] != 0.0 ? std::abs(grad[i] + std::copysign(lambda, theta[i]))
                                     : std::max(0.0, std::abs(grad[i]) - lambda);
    worst = std::max(worst, r);
  }
  return worst;
}

namespace {

double l1(std::span<const double> v) {
  double s = 0.0;
  for (double a : v) s += std::abs(a);
  return s;
}

double soft_threshold(double v, double cut) {
  if (v > cut) return v - cut;
  if (v < -cut) return v + cut;
  return 0.0;
}

// Scaled smooth part (1/scale) Σ phi over one range.
class ScaledLoss {
 public:
  ScaledLoss(const PseudoLikelihood& loss, TimeRange range, std::size_t scale_T)
      : loss_(loss), range_(range), inv_scale_(1.0 / static_cast<double>(scale_T)) {}

  double value(std::span<const double> theta) const { return loss_.sum(theta, range_) * inv_scale_; }

  double value_gradient(std::span<const double> theta, std::span<double> grad) const {
    const double v = loss_.sum_and_gradient(theta, range_, grad);
    for (double& g : grad) g *= inv_scale_;
    return v * inv_scale_;
  }

 private:
  const PseudoLikelihood& loss_;
  TimeRange range_;
  double inv_scale_;
};

constexpr double kLipschitzFloor = 1e-8;
constexpr double kLipschitzCeiling = 1e20;
constexpr double kLipschitzShrink = 0.9;
constexpr std::size_t kKktCheckEvery = 10;

}  // namespace

namespace {

struct SolveState {
  std::vector<double> x;
  std::vector<double> gx;
  double fx = 0.0;
  double Fx = 0.0;
  double kkt = 0.0;
  double L = 1.0;
  std::size_t iter = 0;
};

// One backtracking proximal-gradient step from y. Returns the candidate z and
// its smooth value; L is updated in place.
double prox_step(const ScaledLoss& f, std::span<const double> y, std::span<const double> gy, double fy,
                 double lambda, double& L, std::vector<double>& z) {
  const std::size_t d = y.size();
  L = std::max(L * kLipschitzShrink, kLipschitzFloor);
  for (;;) {
    const double step = 1.0 / L;
    double inner = 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      z[i] = soft_threshold(y[i] - step * gy[i], lambda * step);
      const double delta = z[i] - y[i];
      inner += gy[i] * delta;
      sq += delta * delta;
    }
    const double fz = f.value(z);
    const double slack = 1e-12 * std::max(1.0, std::abs(fy));
    if (sq == 0.0 || fz <= fy + inner + 0.5 * L * sq + slack) return fz;
    L *= 2.0;
    if (L > kLipschitzCeiling) throw NumericalError("backtracking line search failed to find a step");
  }
}

void solve_gradient(const ScaledLoss& f, double lambda, double kkt_tol, const SolverOptions& opts,
                    SolveState& s, FitResult& out) {
  const std::size_t d = s.x.size();
  std::vector<double> y = s.x, gy = s.gx, z(d), x_prev(d);
  double fy = s.fx;
  double t = 1.0;
  bool y_is_x = true;

  while (s.kkt > kkt_tol && s.iter < opts.max_iter) {
    ++s.iter;
    if (!y_is_x) fy = f.value_gradient(y, gy);
    const double fz = prox_step(f, y, gy, fy, lambda, s.L, z);
    const double Fz = fz + lambda * l1(z);

    x_prev = s.x;
    const bool improved = Fz <= s.Fx + 1e-13 * std::max(1.0, std::abs(s.Fx));
    if (improved) {
      s.x = z;
      s.Fx = Fz;
    }
    if (opts.accelerate && improved) {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      const double momentum = (t - 1.0) / t_next;
      for (std::size_t i = 0; i < d; ++i) y[i] = s.x[i] + momentum * (s.x[i] - x_prev[i]);
      t = t_next;
      y_is_x = momentum == 0.0;
    } else {
      // Plain step, or an adaptive restart after a non-improving accelerated step.
      y = s.x;
      t = 1.0;
      y_is_x = true;
    }
    if (opts.record_history) out.history.push_back(s.Fx);

    if (y_is_x) {
      s.fx = f.value_gradient(s.x, s.gx);
      gy = s.gx;
      fy = s.fx;
      s.kkt = kkt_residual(s.x, s.gx, lambda);
    } else if (s.iter % kKktCheckEvery == 0) {
      s.fx = f.value_gradient(s.x, s.gx);
      s.kkt = kkt_residual(s.x, s.gx, lambda);
    }
  }
}

// Coordinate descent on  gᵀΔ + ½ ΔᵀHΔ + λ||x + Δ||_1, written in terms of
// w = x + Δ. `hd` tracks HΔ. Full sweeps alternate with sweeps restricted to
// the non-zero coordinates of w.
void solve_quadratic_model(std::span<const double> H, std::span<const double> x,
                           std::span<const double> g, double lambda, double damping, double tol,
                           std::size_t max_sweeps, std::vector<double>& w, std::vector<double>& hd,
                           std::vector<std::size_t>& active) {
  const std::size_t d = x.size();
  w.assign(x.begin(), x.end());
  std::fill(hd.begin(), hd.end(), 0.0);
  auto update = [&](std::size_t i) {
    const double a = H[i * d + i] + damping;
    const double c = g[i] + hd[i];
    const double target = soft_threshold(w[i] - c / a, lambda / a);
    const double change = target - w[i];
    if (change == 0.0) return 0.0;
    w[i] = target;
    const double* col = H.data() + i * d;
    for (std::size_t r = 0; r < d; ++r) hd[r] += col[r] * change;
    return std::abs(change);
  };
  std::size_t sweeps = 0;
  while (sweeps < max_sweeps) {
    double biggest = 0.0;
    for (std::size_t i = 0; i < d; ++i) biggest = std::max(biggest, update(i));
    ++sweeps;
    if (biggest <= tol) break;
    active.clear();
    for (std::size_t i = 0; i < d; ++i) {
      if (w[i] != 0.0) active.push_back(i);
    }
    while (sweeps < max_sweeps) {
      double inner = 0.0;
      for (std::size_t i : active) inner = std::max(inner, update(i));
      ++sweeps;
      if (inner <= tol) break;
    }
  }
}

void solve_newton(const PseudoLikelihood& loss, TimeRange range, double inv_scale, const ScaledLoss& f,
                  double lambda, double kkt_tol, const SolverOptions& opts, SolveState& s,
                  FitResult& out) {
  const std::size_t d = s.x.size();
  std::vector<double> H(d * d), w(d), hd(d), trial(d), g_trial(d), z(d);
  std::vector<std::size_t> active;
  constexpr double kArmijo = 1e-4;
  constexpr std::size_t kMaxHalvings = 40;
  constexpr std::size_t kMaxStalled = 3;
  // A Hessian is reused while each step still cuts the KKT residual tenfold.
  constexpr double kRefreshRatio = 0.1;
  std::size_t stalled = 0;
  bool fresh_hessian = false;
  double damping = 0.0;
  double diag_max = 0.0;

  while (s.kkt > kkt_tol && s.iter < opts.max_iter) {
    ++s.iter;
    if (!fresh_hessian) {
      loss.hessian(s.x, range, H);
      diag_max = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) H[i * d + j] *= inv_scale;
        diag_max = std::max(diag_max, H[i * d + i]);
      }
      damping = 1e-10 * std::max(diag_max, 1e-6);
    }
    const double inner_tol = std::max(1e-14, 1e-3 * s.kkt / std::max(diag_max, 1e-6));
    solve_quadratic_model(H, s.x, s.gx, lambda, damping, inner_tol,
                          std::min<std::size_t>(50 + 10 * s.iter, 1000), w, hd, active);

    double decrease = lambda * (l1(w) - l1(s.x));
    for (std::size_t i = 0; i < d; ++i) decrease += s.gx[i] * (w[i] - s.x[i]);

    bool accepted = false;
    auto take = [&](std::vector<double>& point, double Fp, double fp) {
      s.x.swap(point);
      s.gx.swap(g_trial);
      s.Fx = std::min(Fp, s.Fx);
      s.fx = fp;
      accepted = true;
    };
    if (decrease < 0.0) {
      // Near the optimum the predicted decrease falls below the resolution of F;
      // the full step is then taken as long as F does not rise beyond roundoff.
      const double roundoff = 1e-13 * std::max(1.0, std::abs(s.Fx));
      double alpha = 1.0;
      for (std::size_t h = 0; h < kMaxHalvings; ++h, alpha *= 0.5) {
        for (std::size_t i = 0; i < d; ++i) trial[i] = s.x[i] + alpha * (w[i] - s.x[i]);
        const double ft = f.value_gradient(trial, g_trial);
        const double Ft = ft + lambda * l1(trial);
        const bool tiny = h == 0 && -decrease <= roundoff && Ft <= s.Fx + roundoff;
        if (tiny || Ft <= s.Fx + kArmijo * alpha * decrease) {
          take(trial, Ft, ft);
          break;
        }
      }
    }
    if (!accepted) {
      // The quadratic model gave no usable direction; fall back to a gradient step.
      const double fz = prox_step(f, s.x, s.gx, s.fx, lambda, s.L, z);
      const double Fz = fz + lambda * l1(z);
      if (Fz <= s.Fx) {
        const double fz_again = f.value_gradient(z, g_trial);
        take(z, Fz, fz_again);
      }
    }
    if (opts.record_history) out.history.push_back(s.Fx);
    const double previous_kkt = s.kkt;
    s.kkt = kkt_residual(s.x, s.gx, lambda);
    fresh_hessian = accepted && s.kkt <= kRefreshRatio * previous_kkt;
    stalled = accepted ? 0 : stalled + 1;
    if (stalled >= kMaxStalled) break;
  }
}

}  // namespace

FitResult fit_penalized(const PseudoLikelihood& loss, TimeRange range, std::size_t scale_T,
                        double lambda, const SymmetricParams* init, const SolverOptions& opts,
                        double lipschitz_hint) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("λ must be positive and finite");
  if (scale_T == 0) throw InvalidArgument("scale_T must be positive");
  range.validate(loss.T());
  const std::size_t d = loss.dim();
  if (init != nullptr && init->dim() != d) throw InvalidArgument("initial parameters have the wrong size");

  const ScaledLoss f(loss, range, scale_T);
  SolveState s;
  s.x.assign(d, 0.0);
  if (init != nullptr) std::copy(init->packed().begin(), init->packed().end(), s.x.begin());
  s.gx.resize(d);
  s.fx = f.value_gradient(s.x, s.gx);
  s.Fx = s.fx + lambda * l1(s.x);
  s.kkt = kkt_residual(s.x, s.gx, lambda);
  s.L = lipschitz_hint > 0.0 ? lipschitz_hint : 1.0;
  const double kkt_tol = opts.tol * lambda;

  FitResult out;
  out.lambda = lambda;
  out.kkt_tolerance = kkt_tol;
  if (opts.record_history) out.history.push_back(s.Fx);

  if (opts.method == SolverMethod::proximal_newton) {
    solve_newton(loss, range, 1.0 / static_cast<double>(scale_T), f, lambda, kkt_tol, opts, s, out);
  } else {
    solve_gradient(f, lambda, kkt_tol, opts, s, out);
  }

  s.fx = f.value_gradient(s.x, s.gx);
  out.kkt_residual = kkt_residual(s.x, s.gx, lambda);
  out.converged = out.kkt_residual <= kkt_tol;
  out.loss = s.fx;
  out.objective_value = s.fx + lambda * l1(s.x);
  out.iterations = s.iter;
  out.lipschitz = s.L;
  out.theta_hat = SymmetricParams(loss.p(), std::move(s.x));
  return out;
}

FitResult fit_penalized(const ModelSpec& spec, const Dataset& data, TimeRange range,
                        std::size_t scale_T, double lambda, const SymmetricParams* init,
                        const SolverOptions& opts) {
  return fit_penalized(PseudoLikelihood(spec, data), range, scale_T, lambda, init, opts);
}

double bic_score(const PseudoLikelihood& loss, const SymmetricParams& theta_hat, TimeRange range) {
  range.validate(loss.T());
  const double n = static_cast<double>(range.length());
  return 2.0 * loss.sum(theta_hat.packed(), range) +
         std::log(n) * static_cast<double>(theta_hat.nonzeros());
}

double bic_score(const ModelSpec& spec, const SymmetricParams& theta_hat, const Dataset& data,
                 TimeRange range) {
  return bic_score(PseudoLikelihood(spec, data), theta_hat, range);
}

BicSelection select_lambda_bic(const PseudoLikelihood& loss, TimeRange range, std::size_t scale_T,
                               std::span<const double> grid, const SolverOptions& opts,
                               std::span<const SymmetricParams> warm_path, double lipschitz_hint) {
  if (grid.empty()) throw InvalidArgument("λ grid is empty");
  if (!warm_path.empty() && warm_path.size() != grid.size()) {
    throw InvalidArgument("warm-start path does not match the λ grid");
  }
  for (double v : grid) {
    if (!(v > 0.0)) throw InvalidArgument("λ grid values must be positive");
  }
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return grid[a] > grid[b]; });

  BicSelection sel;
  sel.scores.assign(grid.size(), 0.0);
  sel.path.assign(grid.size(), SymmetricParams{});
  double best = 0.0;
  bool have_best = false;
  double L = lipschitz_hint;
  const SymmetricParams* previous = nullptr;
  for (std::size_t i : order) {
    const SymmetricParams* init = warm_path.empty() ? previous : &warm_path[i];
    FitResult fit = fit_penalized(loss, range, scale_T, grid[i], init, opts, L);
    L = fit.lipschitz;
    const double score = bic_score(loss, fit.theta_hat, range);
    sel.scores[i] = score;
    sel.path[i] = fit.theta_hat;
    previous = &sel.path[i];
    if (!have_best || score < best) {
      best = score;
      have_best = true;
      sel.lambda = grid[i];
      sel.index = i;
      sel.fit = std::move(fit);
    }
  }
  sel.lipschitz = L;
  return sel;
}

BicSelection select_lambda_bic(const ModelSpec& spec, const Dataset& data, TimeRange range,
                               std::span<const double> grid, const SolverOptions& opts) {
  return select_lambda_bic(PseudoLikelihood(spec, data), range, data.T(), grid, opts);
}

std::vector<double> log_grid(double hi, double lo, std::size_t per_decade) {
  if (!(hi > 0.0) || !(lo > 0.0) || hi < lo || per_decade == 0) {
    throw InvalidArgument("log grid needs 0 < lo <= hi and a positive density");
  }
  const double decades = std::log10(hi / lo);
  const auto steps = static_cast<std::size_t>(std::ceil(decades * static_cast<double>(per_decade) - 1e-9));
  std::vector<double> out;
  out.reserve(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    const double frac = steps == 0 ? 0.0 : static_cast<double>(i) / static_cast<double>(steps);
    out.push_back(hi * std::pow(lo / hi, frac));
  }
  out.back() = lo;
  return out;
}

}  // namespace mrfcp
