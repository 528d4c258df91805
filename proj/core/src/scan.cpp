#include "mrfcp/scan.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mrfcp/errors.hpp"
#include "mrfcp/parallel.hpp"

namespace mrfcp {

SearchDomain build_domain(std::size_t T, std::size_t k_l, std::size_t k_u, std::size_t step) {
  if (k_l < 1 || k_u < 1) throw InvalidArgument("boundary margins must be at least 1");
  if (step < 1) throw InvalidArgument("domain step must be at least 1");
  if (k_l + k_u >= T) {
    throw InvalidArgument("search domain is empty: k_l + k_u = " + std::to_string(k_l + k_u) +
                          " >= T = " + std::to_string(T));
  }
  SearchDomain domain{k_l, k_u, step, {}};
  for (std::size_t tau = k_l; tau <= T - k_u; tau += step) domain.taus.push_back(tau);
  return domain;
}

std::size_t default_margin(std::size_t T) {
  const auto frac = static_cast<std::size_t>(std::ceil(0.08 * static_cast<double>(T)));
  std::size_t margin = std::max<std::size_t>(30, frac);
  if (2 * margin >= T) margin = T > 2 ? (T - 1) / 2 : 1;
  return std::max<std::size_t>(margin, 1);
}

std::vector<double> default_bic_grid() { return log_grid(2.0, 0.02, 20); }

namespace {

void check_tau(const PseudoLikelihood& loss, std::size_t tau) {
  if (tau < 1 || tau >= loss.T()) {
    throw InvalidArgument("change-point " + std::to_string(tau) + " outside [1, T-1]");
  }
}

double profile_value(const PseudoLikelihood& loss, std::size_t tau, const FitResult& first,
                     const FitResult& second) {
  const std::size_t T = loss.T();
  return (loss.sum(first.theta_hat.packed(), {1, tau}) +
          loss.sum(second.theta_hat.packed(), {tau + 1, T})) /
         static_cast<double>(T);
}

const SymmetricParams* single_warm(const std::vector<SymmetricParams>& v) {
  return v.size() == 1 ? &v.front() : nullptr;
}

}  // namespace

ProfilePoint profile_objective(const PseudoLikelihood& loss, std::size_t tau,
                               std::pair<double, double> lambdas, const SolverOptions& opts,
                               const WarmStart* warm) {
  check_tau(loss, tau);
  const std::size_t T = loss.T();
  ProfilePoint pt;
  pt.tau = tau;
  pt.lambda1 = lambdas.first;
  pt.lambda2 = lambdas.second;
  pt.first = fit_penalized(loss, {1, tau}, T, lambdas.first, warm ? single_warm(warm->first) : nullptr,
                           opts, warm ? warm->lipschitz_first : 0.0);
  pt.second = fit_penalized(loss, {tau + 1, T}, T, lambdas.second,
                            warm ? single_warm(warm->second) : nullptr, opts,
                            warm ? warm->lipschitz_second : 0.0);
  pt.objective = profile_value(loss, tau, pt.first, pt.second);
  return pt;
}

ProfilePoint profile_point(const PseudoLikelihood& loss, std::size_t tau, const ScanOptions& options,
                           WarmStart* warm) {
  check_tau(loss, tau);
  const std::size_t T = loss.T();
  const Tuning& tuning = options.tuning;
  const auto schedule = PenaltySchedule::for_problem(loss.spec(), loss.p(), T, tuning.a1, tuning.a2);

  if (tuning.mode == TuningMode::schedule) {
    ProfilePoint pt = profile_objective(
        loss, tau, {penalty_at(schedule, tau, Side::first), penalty_at(schedule, tau, Side::second)},
        options.solver, warm);
    pt.a1 = tuning.a1;
    pt.a2 = tuning.a2;
    if (warm != nullptr) {
      warm->first = {pt.first.theta_hat};
      warm->second = {pt.second.theta_hat};
      warm->lipschitz_first = pt.first.lipschitz;
      warm->lipschitz_second = pt.second.lipschitz;
    }
    return pt;
  }

  const std::vector<double> a_grid = tuning.a_grid.empty() ? default_bic_grid() : tuning.a_grid;
  auto side_grid = [&](std::size_t n) {
    std::vector<double> g(a_grid.size());
    const double unit = schedule.unit(n);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = a_grid[i] * unit;
    return g;
  };
  auto warm_path = [&](const std::vector<SymmetricParams>& v) {
    return v.size() == a_grid.size() ? std::span<const SymmetricParams>(v)
                                     : std::span<const SymmetricParams>();
  };
  const std::vector<double> grid1 = side_grid(tau);
  const std::vector<double> grid2 = side_grid(T - tau);
  BicSelection s1 = select_lambda_bic(loss, {1, tau}, T, grid1, options.solver,
                                      warm ? warm_path(warm->first) : std::span<const SymmetricParams>(),
                                      warm ? warm->lipschitz_first : 0.0);
  BicSelection s2 = select_lambda_bic(loss, {tau + 1, T}, T, grid2, options.solver,
                                      warm ? warm_path(warm->second) : std::span<const SymmetricParams>(),
                                      warm ? warm->lipschitz_second : 0.0);
  ProfilePoint pt;
  pt.tau = tau;
  pt.lambda1 = s1.lambda;
  pt.lambda2 = s2.lambda;
  pt.a1 = a_grid[s1.index];
  pt.a2 = a_grid[s2.index];
  pt.first = std::move(s1.fit);
  pt.second = std::move(s2.fit);
  pt.objective = profile_value(loss, tau, pt.first, pt.second);
  if (warm != nullptr) {
    warm->first = std::move(s1.path);
    warm->second = std::move(s2.path);
    warm->lipschitz_first = s1.lipschitz;
    warm->lipschitz_second = s2.lipschitz;
  }
  return pt;
}

std::vector<ProfilePoint> profile_curve(const PseudoLikelihood& loss, std::span<const std::size_t> taus,
                                        const ScanOptions& options) {
  std::vector<ProfilePoint> out(taus.size());
  if (!options.warm_start) {
    parallel_for(taus.size(), options.threads,
                 [&](std::size_t i) { out[i] = profile_point(loss, taus[i], options, nullptr); });
    return out;
  }
  const std::size_t chain = std::max<std::size_t>(options.chain_length, 1);
  const std::size_t chains = (taus.size() + chain - 1) / chain;
  parallel_for(chains, options.threads, [&](std::size_t c) {
    WarmStart warm;
    const std::size_t end = std::min(taus.size(), (c + 1) * chain);
    for (std::size_t i = c * chain; i < end; ++i) out[i] = profile_point(loss, taus[i], options, &warm);
  });
  return out;
}

std::vector<CurvePoint> nw_smooth(std::span<const CurvePoint> points, double bandwidth,
                                  std::size_t eval_lo, std::size_t eval_hi) {
  if (points.size() < 2) throw InvalidArgument("smoothing needs at least two points");
  if (!(bandwidth > 0.0)) throw InvalidArgument("bandwidth must be positive");
  if (eval_lo > eval_hi) throw InvalidArgument("empty evaluation range");
  const double inv_two_h2 = 1.0 / (2.0 * bandwidth * bandwidth);
  std::vector<CurvePoint> out;
  out.reserve(eval_hi - eval_lo + 1);
  for (std::size_t tau = eval_lo; tau <= eval_hi; ++tau) {
    double mass = 0.0;
    double acc = 0.0;
    for (const CurvePoint& pt : points) {
      const double gap = static_cast<double>(tau) - static_cast<double>(pt.tau);
      const double w = std::exp(-gap * gap * inv_two_h2);
      mass += w;
      acc += w * pt.objective;
    }
    if (mass == 0.0) {
      throw InvalidArgument("kernel mass vanishes at τ = " + std::to_string(tau) +
                            "; bandwidth is too small for the grid spacing");
    }
    out.push_back({tau, acc / mass});
  }
  return out;
}

std::size_t argmin_index(std::span<const CurvePoint> curve) {
  if (curve.empty()) throw InvalidArgument("argmin of an empty curve");
  std::size_t best = 0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (curve[i].objective < curve[best].objective) best = i;
  }
  return best;
}

namespace {

std::vector<CurvePoint> to_curve(std::span<const ProfilePoint> pts) {
  std::vector<CurvePoint> c;
  c.reserve(pts.size());
  for (const ProfilePoint& p : pts) c.push_back({p.tau, p.objective});
  return c;
}

}  // namespace

ScanResult basic_scan(const PseudoLikelihood& loss, const SearchDomain& domain,
                      const ScanOptions& options) {
  if (domain.taus.empty()) throw InvalidArgument("search domain is empty");
  std::vector<ProfilePoint> pts = profile_curve(loss, domain.taus, options);
  ScanResult res;
  res.T = loss.T();
  res.curve = to_curve(pts);
  const std::size_t best = argmin_index(res.curve);
  res.tau_hat = res.curve[best].tau;
  res.alpha_hat = static_cast<double>(res.tau_hat) / static_cast<double>(res.T);
  res.at_tau_hat = std::move(pts[best]);
  res.profile_fits = pts.size();
  res.tuning = options.tuning;
  return res;
}

ScanResult fast_scan(const PseudoLikelihood& loss, const FastScanOptions& fast,
                     const ScanOptions& options) {
  const std::vector<std::size_t>& t1 = fast.stage1.taus;
  if (t1.empty()) throw InvalidArgument("stage-1 grid is empty");
  if (fast.stage2_step < 1) throw InvalidArgument("stage-2 step must be at least 1");
  if (fast.stage2_halfwidth < fast.stage2_step) {
    throw InvalidArgument("stage-2 half-width must be at least the stage-2 step");
  }
  const std::size_t T = loss.T();
  std::map<std::size_t, ProfilePoint> cache;
  auto evaluate = [&](const std::vector<std::size_t>& taus) {
    std::vector<std::size_t> missing;
    for (std::size_t tau : taus) {
      if (!cache.contains(tau)) missing.push_back(tau);
    }
    std::vector<ProfilePoint> pts = profile_curve(loss, missing, options);
    for (ProfilePoint& p : pts) cache.emplace(p.tau, std::move(p));
    std::vector<CurvePoint> curve;
    for (std::size_t tau : taus) curve.push_back({tau, cache.at(tau).objective});
    return curve;
  };
  auto smooth = [](const std::vector<CurvePoint>& raw, double h) {
    if (raw.size() == 1) return raw;
    const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end(),
                                              [](auto& a, auto& b) { return a.tau < b.tau; });
    return nw_smooth(raw, h, lo->tau, hi->tau);
  };

  StageInfo s1;
  s1.step = std::max<std::size_t>(fast.stage1.step, 1);
  s1.bandwidth = fast.bandwidth1 > 0.0 ? fast.bandwidth1 : 1.5 * static_cast<double>(s1.step);
  s1.raw = evaluate(t1);
  s1.smoothed = smooth(s1.raw, s1.bandwidth);
  s1.lo = s1.smoothed.front().tau;
  s1.hi = s1.smoothed.back().tau;
  s1.tau_hat = s1.smoothed[argmin_index(s1.smoothed)].tau;

  StageInfo s2;
  s2.step = fast.stage2_step;
  s2.bandwidth = fast.bandwidth2 > 0.0 ? fast.bandwidth2 : 1.5 * static_cast<double>(s2.step);
  s2.lo = s1.tau_hat > fast.stage2_halfwidth ? s1.tau_hat - fast.stage2_halfwidth : 1;
  s2.hi = std::min(s1.tau_hat + fast.stage2_halfwidth, T - 1);
  if (s2.lo > s2.hi) throw InvalidArgument("stage-2 window is empty after clipping");
  std::vector<std::size_t> t2;
  for (std::size_t tau = s2.lo; tau <= s2.hi; tau += s2.step) t2.push_back(tau);
  s2.raw = evaluate(t2);
  s2.smoothed = smooth(s2.raw, s2.bandwidth);
  s2.tau_hat = s2.smoothed[argmin_index(s2.smoothed)].tau;

  evaluate({s2.tau_hat});

  ScanResult res;
  res.T = T;
  res.tau_hat = s2.tau_hat;
  res.alpha_hat = static_cast<double>(res.tau_hat) / static_cast<double>(T);
  res.curve = s2.raw;
  res.at_tau_hat = cache.at(res.tau_hat);
  res.profile_fits = cache.size();
  res.tuning = options.tuning;
  res.stage1 = std::move(s1);
  res.stage2 = std::move(s2);
  return res;
}

}  // namespace mrfcp
