#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "abcfrac/errors.hpp"
#include "abcfrac/grid.hpp"
#include "abcfrac/mittag_leffler.hpp"
#include "abcfrac/normalization.hpp"
#include "abcfrac/operators.hpp"

namespace abcfrac {

/// Right-hand side f(tau, omega) with the rectangle metadata the existence
/// machinery consumes. The Lipschitz/bound figures are a caller contract on
/// the declared box |omega - omega0| <= box_halfwidth_b; rhs_metadata_sampled_ok
/// spot-checks them.
struct RhsFunction {
  std::string name;
  std::function<double(double, double)> eval;
  double lipschitz_tau = 0.0;
  double lipschitz_omega = 0.0;
  double bound_M = 1.0;
  double box_halfwidth_b = 1.0;

  void validate() const {
    detail::require(static_cast<bool>(eval), ErrorCode::DomainError,
                    "RhsFunction: eval must be callable");
    detail::require(
        std::isfinite(lipschitz_tau) && lipschitz_tau >= 0.0 &&
            std::isfinite(lipschitz_omega) && lipschitz_omega >= 0.0,
        ErrorCode::DomainError,
        "RhsFunction: Lipschitz constants must be finite and nonnegative");
    detail::require(std::isfinite(bound_M) && bound_M > 0.0,
                    ErrorCode::DomainError,
                    "RhsFunction: bound_M must be positive");
    detail::require(std::isfinite(box_halfwidth_b) && box_halfwidth_b > 0.0,
                    ErrorCode::DomainError,
                    "RhsFunction: box_halfwidth_b must be positive");
  }
};

/// Spot-check of the declared Lipschitz constants and bound on a rectangle:
/// deterministic sample pairs, slack for roundoff. True means no violation
/// was observed, not a proof.
[[nodiscard]] inline bool rhs_metadata_sampled_ok(const RhsFunction& rhs,
                                                  double tau_lo, double tau_hi,
                                                  double omega_lo,
                                                  double omega_hi,
                                                  int n_samples = 200,
                                                  unsigned long long seed = 7) {
  rhs.validate();
  auto next = [state = seed]() mutable {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return double(state >> 11) * 0x1.0p-53;
  };
  const double slack = 1e-9 * (1.0 + rhs.bound_M);
  for (int i = 0; i < n_samples; ++i) {
    const double t1 = tau_lo + (tau_hi - tau_lo) * next();
    const double t2 = tau_lo + (tau_hi - tau_lo) * next();
    const double o1 = omega_lo + (omega_hi - omega_lo) * next();
    const double o2 = omega_lo + (omega_hi - omega_lo) * next();
    const double f1 = rhs.eval(t1, o1);
    const double f2 = rhs.eval(t2, o2);
    if (!std::isfinite(f1) || !std::isfinite(f2)) return false;
    if (std::abs(f1) > rhs.bound_M + slack) return false;
    const double cap = rhs.lipschitz_tau * std::abs(t1 - t2) +
                       rhs.lipschitz_omega * std::abs(o1 - o2);
    if (std::abs(f1 - f2) > cap + slack) return false;
  }
  return true;
}

struct IVProblem {
  RhsFunction rhs;
  double omega0 = 0.0;
  double horizon_T = 1.0;
  FractionalOrder alpha{0.5};
  Normalization B = Normalization::alpha_blend();

  void validate() const {
    rhs.validate();
    alpha.validate();
    detail::require(std::isfinite(omega0), ErrorCode::DomainError,
                    "IVProblem: omega0 must be finite");
    detail::require(std::isfinite(horizon_T) && horizon_T > 0.0,
                    ErrorCode::DomainError,
                    "IVProblem: horizon_T must be finite and positive");
  }
};

enum class ConsistencyMode { Warn, Strict };

struct SolverConfig {
  double step_h = 1e-2;
  double picard_tol = 1e-12;
  int picard_max_iter = 200;
  ConsistencyMode consistency_mode = ConsistencyMode::Warn;
  double consistency_tol = 1e-10;

  void validate() const {
    detail::require(std::isfinite(step_h) && step_h > 0.0,
                    ErrorCode::DomainError,
                    "SolverConfig: step_h must be positive");
    detail::require(std::isfinite(picard_tol) && picard_tol > 0.0,
                    ErrorCode::DomainError,
                    "SolverConfig: picard_tol must be positive");
    detail::require(picard_max_iter >= 1, ErrorCode::DomainError,
                    "SolverConfig: picard_max_iter must be >= 1");
    detail::require(std::isfinite(consistency_tol) && consistency_tol >= 0.0,
                    ErrorCode::DomainError,
                    "SolverConfig: consistency_tol must be nonnegative");
  }
};

/// Lagged-start data: the trajectory is fed its own past at lag epsilon, with
/// prescribed history on [-delta, 0].
struct DelayConfig {
  double epsilon = 0.1;
  double delta = 0.1;
  std::function<double(double)> history;

  /// Checks the structural invariants against the owning problem: exact match
  /// at 0 and the sampled box bound on [-delta, 0].
  void validate(double omega0, double box_halfwidth_b) const {
    detail::require(static_cast<bool>(history), ErrorCode::DomainError,
                    "DelayConfig: history must be callable");
    detail::require(std::isfinite(epsilon) && epsilon > 0.0,
                    ErrorCode::DomainError,
                    "DelayConfig: epsilon must be positive");
    detail::require(std::isfinite(delta) && delta >= epsilon,
                    ErrorCode::DomainError,
                    "DelayConfig: delta must be >= epsilon");
    detail::require(history(0.0) == omega0, ErrorCode::DomainError,
                    "DelayConfig: history(0) must equal omega0 exactly");
    for (int i = 0; i <= 32; ++i) {
      const double t = -delta * double(i) / 32.0;
      detail::require(std::abs(history(t) - omega0) <= box_halfwidth_b,
                      ErrorCode::DomainError,
                      "DelayConfig: history leaves the declared box");
    }
  }
};

struct SolveStats {
  int max_picard_iters = 0;
  double consistency_residual = 0.0;
  bool consistency_warned = false;
  double step_h_used = 0.0;
};

[[nodiscard]] inline bool consistency_check(const IVProblem& problem,
                                            double tol) {
  problem.validate();
  return std::abs(problem.rhs.eval(0.0, problem.omega0)) <= tol;
}

namespace detail {

/// Snap the step to divide the window exactly: n = round(window/h), at least 1.
inline std::pair<int, double> adjusted_steps(double window, double h) {
  const int n = std::max(1, int(std::lround(window / h)));
  return {n, window / n};
}

}  // namespace detail

/// Solves the initial value problem through its equivalent integral equation
///   omega(tau) = omega0 + (1-alpha)/B f(tau, omega(tau))
///              + alpha/(B Gamma(alpha)) int_0^tau (tau-s)^{alpha-1} f(s, omega(s)) ds,
/// product-trapezoidal in the memory integral, fixed-point in the implicit
/// scalar equation at each node. The iteration contracts because
/// L2 (1-alpha)/B < 1 is required up front.
[[nodiscard]] inline Trajectory solve_ivp(const IVProblem& problem,
                                          const SolverConfig& config,
                                          SolveStats* stats = nullptr) {
  problem.validate();
  config.validate();
  const double a = problem.alpha.alpha;
  const double bv = problem.B.value(a);
  detail::require(bv > 0.0, ErrorCode::DomainError,
                  "solve_ivp: B(alpha) must be positive");
  detail::require(problem.rhs.lipschitz_omega * (1.0 - a) / bv < 1.0,
                  ErrorCode::ContractionViolation,
                  "solve_ivp: L2 (1-alpha)/B(alpha) must be < 1");

  const double resid = std::abs(problem.rhs.eval(0.0, problem.omega0));
  SolveStats local;
  local.consistency_residual = resid;
  if (resid > config.consistency_tol) {
    detail::require(config.consistency_mode != ConsistencyMode::Strict,
                    ErrorCode::ConsistencyError,
                    "solve_ivp: f(0, omega0) != 0 within consistency_tol");
    local.consistency_warned = true;
  }

  const auto [n, h] = detail::adjusted_steps(problem.horizon_T, config.step_h);
  local.step_h_used = h;
  const UniformGrid grid{h, n + 1};
  detail::PowerTables pt(n + 1, a);
  std::vector<double> w;
  std::vector<double> om(n + 1), fv(n + 1);
  om[0] = problem.omega0;
  fv[0] = problem.rhs.eval(0.0, problem.omega0);
  const double local_coef = (1.0 - a) / bv;
  const double mem_coef = a / (bv * std::tgamma(a)) * std::pow(h, a);
  for (int k = 1; k <= n; ++k) {
    detail::rl_node_weights(k, a, pt, w);
    double known = 0.0;
    for (int j = 0; j < k; ++j) known += w[j] * fv[j];
    const double tk = grid.node(k);
    double x = om[k - 1];
    bool converged = false;
    for (int it = 1; it <= config.picard_max_iter; ++it) {
      const double fx = problem.rhs.eval(tk, x);
      const double x_new =
          problem.omega0 + local_coef * fx + mem_coef * (known + w[k] * fx);
      const double dx = std::abs(x_new - x);
      x = x_new;
      if (it > local.max_picard_iters) local.max_picard_iters = it;
      if (dx <= config.picard_tol) {
        converged = true;
        break;
      }
    }
    detail::require(converged, ErrorCode::NoConvergence,
                    "solve_ivp: fixed-point iteration exhausted "
                    "picard_max_iter");
    om[k] = x;
    fv[k] = problem.rhs.eval(tk, x);
  }
  if (stats) *stats = local;
  return Trajectory{grid, std::move(om)};
}

/// Guaranteed-existence window min{T, [Gamma(alpha)(b B - M(1-alpha))/M]^{1/alpha}}
/// for a rectangle bound |f| <= M with box halfwidth b. M = 0 means a vanishing
/// right-hand side; the window is then the whole horizon.
[[nodiscard]] inline double local_existence_interval(double M, double b,
                                                     FractionalOrder alpha,
                                                     const Normalization& B,
                                                     double T) {
  alpha.validate();
  detail::require(std::isfinite(M) && M >= 0.0, ErrorCode::DomainError,
                  "local_existence_interval: M must be nonnegative");
  detail::require(std::isfinite(b) && b > 0.0, ErrorCode::DomainError,
                  "local_existence_interval: b must be positive");
  detail::require(std::isfinite(T) && T > 0.0, ErrorCode::DomainError,
                  "local_existence_interval: T must be positive");
  const double a = alpha.alpha;
  const double bv = B.value(a);
  detail::require(M * (1.0 - a) < b * bv, ErrorCode::HypothesisViolation,
                  "local_existence_interval: requires M (1-alpha) < b B(alpha)");
  if (M == 0.0) return T;
  const double bracket =
      std::pow(std::tgamma(a) * (b * bv - M * (1.0 - a)) / M, 1.0 / a);
  return std::min(T, bracket);
}

/// Existence window for the perturbed two-sided construction; the perturbation
/// budget tightens the rectangle bound from M to 2M + b.
[[nodiscard]] inline double extremal_existence_interval(double M, double b,
                                                        FractionalOrder alpha,
                                                        const Normalization& B,
                                                        double T) {
  alpha.validate();
  detail::require(std::isfinite(M) && M > 0.0, ErrorCode::DomainError,
                  "extremal_existence_interval: M must be positive");
  detail::require(std::isfinite(b) && b > 0.0, ErrorCode::DomainError,
                  "extremal_existence_interval: b must be positive");
  detail::require(std::isfinite(T) && T > 0.0, ErrorCode::DomainError,
                  "extremal_existence_interval: T must be positive");
  const double a = alpha.alpha;
  const double bv = B.value(a);
  const double load = 2.0 * M + b;
  detail::require(load * (1.0 - a) < b * bv, ErrorCode::HypothesisViolation,
                  "extremal_existence_interval: requires "
                  "(2M + b)(1-alpha) < b B(alpha)");
  const double bracket =
      std::pow((b * bv - load * (1.0 - a)) * std::tgamma(a) / load, 1.0 / a);
  return std::min(T, bracket);
}

/// Uniform modulus of continuity for the solution family: time offsets below
/// the returned delta move any admissible trajectory by less than eps_tilde.
[[nodiscard]] inline double equicontinuity_modulus(double eps_tilde,
                                                   FractionalOrder alpha,
                                                   const Normalization& B,
                                                   double L1, double L2,
                                                   double M) {
  alpha.validate();
  detail::require(std::isfinite(eps_tilde) && eps_tilde >= 0.0,
                  ErrorCode::DomainError,
                  "equicontinuity_modulus: eps_tilde must be nonnegative");
  detail::require(std::isfinite(L1) && L1 >= 0.0 && std::isfinite(L2) &&
                      L2 >= 0.0 && std::isfinite(M) && M >= 0.0,
                  ErrorCode::DomainError,
                  "equicontinuity_modulus: constants must be nonnegative");
  const double a = alpha.alpha;
  const double bv = B.value(a);
  detail::require(L2 * (1.0 - a) < bv, ErrorCode::HypothesisViolation,
                  "equicontinuity_modulus: requires L2 < B(alpha)/(1-alpha)");
  const double g = std::tgamma(a);
  return eps_tilde * g * (bv - (1.0 - a) * L2) /
         (g * (1.0 - a) * L1 + 2.0 * M);
}

/// Lagged-argument variant: the right-hand side reads the trajectory at
/// tau - epsilon, so every node is explicit. Solves on the guaranteed window
/// [0, beta] from local_existence_interval, sweeping node by node; nodes with
/// tau <= epsilon read the prescribed history, later nodes read linear
/// interpolation of the already-computed solution, exactly the window-by-window
/// extension ([0, eps], [eps, 2 eps], ...) done at grid resolution.
[[nodiscard]] inline Trajectory solve_delay_approx(const IVProblem& problem,
                                                   const DelayConfig& dconf,
                                                   const SolverConfig& config) {
  problem.validate();
  config.validate();
  dconf.validate(problem.omega0, problem.rhs.box_halfwidth_b);
  const double a = problem.alpha.alpha;
  const double bv = problem.B.value(a);
  detail::require(bv > 0.0, ErrorCode::DomainError,
                  "solve_delay_approx: B(alpha) must be positive");
  detail::require(
      std::abs(problem.rhs.eval(0.0, dconf.history(-dconf.epsilon))) <=
          config.consistency_tol,
      ErrorCode::ConsistencyError,
      "solve_delay_approx: f(0, history(-epsilon)) != 0 within "
      "consistency_tol");

  const double beta =
      local_existence_interval(problem.rhs.bound_M, problem.rhs.box_halfwidth_b,
                               problem.alpha, problem.B, problem.horizon_T);
  const auto [n, h] = detail::adjusted_steps(beta, config.step_h);
  detail::require(dconf.epsilon >= h, ErrorCode::DomainError,
                  "solve_delay_approx: epsilon must be >= the grid step");
  const UniformGrid grid{h, n + 1};
  detail::PowerTables pt(n + 1, a);
  std::vector<double> w;
  std::vector<double> om(n + 1), fv(n + 1);
  om[0] = problem.omega0;

  // Reads the past: history for t <= 0, else linear interpolation restricted
  // to nodes 0..max_node, all already computed. epsilon >= h guarantees the
  // lagged time never reaches the node being solved.
  auto lagged = [&](double t, int max_node) {
    if (t <= 0.0) return dconf.history(std::max(t, -dconf.delta));
    const int i = std::max(0, std::min(max_node - 1, int(t / h)));
    const double frac = t / h - i;
    return om[i] + frac * (om[i + 1] - om[i]);
  };

  fv[0] = problem.rhs.eval(0.0, dconf.history(-dconf.epsilon));
  const double local_coef = (1.0 - a) / bv;
  const double mem_coef = a / (bv * std::tgamma(a)) * std::pow(h, a);
  for (int k = 1; k <= n; ++k) {
    const double tk = grid.node(k);
    fv[k] = problem.rhs.eval(tk, lagged(tk - dconf.epsilon, k - 1));
    detail::rl_node_weights(k, a, pt, w);
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) acc += w[j] * fv[j];
    om[k] = problem.omega0 + local_coef * fv[k] + mem_coef * acc;
  }
  return Trajectory{grid, std::move(om)};
}

struct ExtremalResult {
  Trajectory maximal;
  Trajectory minimal;
  int levels_used = 0;
  bool maximal_monotone_decreasing = true;
};

namespace detail {

inline IVProblem perturbed_problem(const IVProblem& base, double shift) {
  IVProblem p = base;
  auto f = base.rhs.eval;
  p.rhs.eval = [f, shift](double t, double o) { return f(t, o) + shift; };
  p.rhs.bound_M = base.rhs.bound_M + std::abs(shift);
  p.omega0 = base.omega0 + shift;
  return p;
}

inline double sup_distance(const Trajectory& a, const Trajectory& b) {
  double m = 0.0;
  for (int k = 0; k < a.grid.n_nodes; ++k)
    m = std::max(m, std::abs(a.values[k] - b.values[k]));
  return m;
}

}  // namespace detail

/// Two-sided perturbation sweep: level n solves f + eps_n starting at
/// omega0 + eps_n (upper branch) and f - eps_n at omega0 - eps_n (lower
/// branch), eps_n = eps0 * eps_factor^n, until consecutive levels agree to
/// stop_tol. Perturbation breaks f(0, omega0) = 0 by design, so the inner
/// solves always run in Warn mode.
[[nodiscard]] inline ExtremalResult solve_extremal(const IVProblem& problem,
                                                   const SolverConfig& config,
                                                   double eps0,
                                                   double eps_factor,
                                                   double stop_tol) {
  problem.validate();
  config.validate();
  detail::require(std::isfinite(eps0) && eps0 > 0.0 &&
                      eps0 <= problem.rhs.box_halfwidth_b / 2.0,
                  ErrorCode::PreconditionUnmet,
                  "solve_extremal: requires 0 < eps0 <= b/2");
  detail::require(std::isfinite(eps_factor) && eps_factor > 0.0 &&
                      eps_factor < 1.0,
                  ErrorCode::PreconditionUnmet,
                  "solve_extremal: eps_factor must lie in (0, 1)");
  detail::require(std::isfinite(stop_tol) && stop_tol > 0.0,
                  ErrorCode::DomainError,
                  "solve_extremal: stop_tol must be positive");
  SolverConfig inner = config;
  inner.consistency_mode = ConsistencyMode::Warn;

  ExtremalResult result;
  Trajectory prev_max, prev_min;
  for (int level = 0; level < 50; ++level) {
    const double eps = eps0 * std::pow(eps_factor, level);
    Trajectory cur_max =
        solve_ivp(detail::perturbed_problem(problem, +eps), inner);
    Trajectory cur_min =
        solve_ivp(detail::perturbed_problem(problem, -eps), inner);
    if (level > 0) {
      for (int k = 0; k < cur_max.grid.n_nodes; ++k)
        if (cur_max.values[k] > prev_max.values[k] + 1e-12)
          result.maximal_monotone_decreasing = false;
      const double moved = std::max(detail::sup_distance(cur_max, prev_max),
                                    detail::sup_distance(cur_min, prev_min));
      if (moved < stop_tol) {
        result.maximal = std::move(cur_max);
        result.minimal = std::move(cur_min);
        result.levels_used = level + 1;
        return result;
      }
    }
    prev_max = std::move(cur_max);
    prev_min = std::move(cur_min);
  }
  detail::fail(ErrorCode::NoConvergence,
               "solve_extremal: 50 eps-levels exhausted without meeting "
               "stop_tol");
}

/// Window-by-window continuation under a majorant: on each window the bound
/// solution eta of D^alpha u = g(tau, u) is solved first (its existence window,
/// with M re-sampled over the current box, sets the window length), then the
/// target problem restarts from its endpoint value, and |omega| <= eta is
/// asserted node-wise. Stops at T_max.
[[nodiscard]] inline Trajectory continue_globally(const IVProblem& problem,
                                                  const RhsFunction& majorant_g,
                                                  double u0,
                                                  const SolverConfig& config,
                                                  double T_max) {
  problem.validate();
  majorant_g.validate();
  config.validate();
  detail::require(std::isfinite(T_max) && T_max > 0.0, ErrorCode::DomainError,
                  "continue_globally: T_max must be positive");
  detail::require(std::isfinite(u0) && std::abs(problem.omega0) < u0,
                  ErrorCode::PreconditionUnmet,
                  "continue_globally: requires |omega0| < u0");

  const auto [n_total, h] = detail::adjusted_steps(T_max, config.step_h);
  const UniformGrid grid{h, n_total + 1};
  std::vector<double> om(n_total + 1), eta(n_total + 1);
  om[0] = problem.omega0;
  eta[0] = u0;
  const double b = majorant_g.box_halfwidth_b;
  const double dom_tol = 10.0 * h + 1e-10;
  SolverConfig inner = config;
  inner.consistency_mode = ConsistencyMode::Warn;

  int filled = 0;
  while (filled < n_total) {
    const double t_w = filled * h;
    const double remaining = (n_total - filled) * h;
    const double u_end = eta[filled];
    const double om_end = om[filled];

    double M_w = 0.0;
    for (int i = 0; i <= 20; ++i) {
      for (int j = 0; j <= 20; ++j) {
        const double t = t_w + remaining * double(i) / 20.0;
        const double u = u_end - b + 2.0 * b * double(j) / 20.0;
        const double g = majorant_g.eval(t, u);
        detail::require(std::isfinite(g), ErrorCode::MajorantBound,
                        "continue_globally: majorant not finite on the "
                        "working box");
        M_w = std::max(M_w, std::abs(g));
      }
    }

    double beta = remaining;
    if (M_w > 0.0) {
      try {
        beta = local_existence_interval(M_w, b, problem.alpha, problem.B,
                                        remaining);
      } catch (const Error& e) {
        detail::fail(ErrorCode::MajorantBound,
                     std::string("continue_globally: no existence window for "
                                 "the majorant: ") +
                         e.what());
      }
    }
    int steps = std::min(n_total - filled, int(beta / h + 1e-9));
    detail::require(steps >= 1, ErrorCode::DomainError,
                    "continue_globally: existence window shorter than one "
                    "grid step; refine step_h");
    const double window = steps * h;

    for (int i = 0; i <= 10; ++i) {
      for (int j = 0; j <= 10; ++j) {
        const double t = t_w + window * double(i) / 10.0;
        const double o =
            om_end - b + 2.0 * b * double(j) / 10.0;
        detail::require(std::abs(problem.rhs.eval(t, o)) <=
                            majorant_g.eval(t, std::abs(o)) + 1e-12,
                        ErrorCode::HypothesisViolation,
                        "continue_globally: |f(tau, omega)| <= g(tau, |omega|) "
                        "fails on the working box");
      }
    }

    IVProblem bound;
    bound.rhs = majorant_g;
    auto geval = majorant_g.eval;
    bound.rhs.eval = [geval, t_w](double s, double u) {
      return geval(t_w + s, u);
    };
    bound.rhs.bound_M = std::max(M_w, 1e-300);
    bound.omega0 = u_end;
    bound.horizon_T = window;
    bound.alpha = problem.alpha;
    bound.B = problem.B;
    Trajectory eta_w;
    try {
      eta_w = solve_ivp(bound, inner);
    } catch (const Error& e) {
      detail::fail(ErrorCode::MajorantBound,
                   std::string("continue_globally: majorant solve failed: ") +
                       e.what());
    }

    IVProblem target = problem;
    auto feval = problem.rhs.eval;
    target.rhs.eval = [feval, t_w](double s, double o) {
      return feval(t_w + s, o);
    };
    target.omega0 = om_end;
    target.horizon_T = window;
    const Trajectory om_w = solve_ivp(target, inner);

    for (int k = 1; k <= steps; ++k) {
      detail::require(std::abs(om_w.values[k]) <= eta_w.values[k] + dom_tol,
                      ErrorCode::DominationFailure,
                      "continue_globally: trajectory escaped the majorant "
                      "solution");
      om[filled + k] = om_w.values[k];
      eta[filled + k] = eta_w.values[k];
    }
    filled += steps;
  }
  return Trajectory{grid, std::move(om)};
}

}  // namespace abcfrac
