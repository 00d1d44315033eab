#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "abcfrac/errors.hpp"
#include "abcfrac/grid.hpp"
#include "abcfrac/mittag_leffler.hpp"
#include "abcfrac/normalization.hpp"
#include "abcfrac/operators.hpp"
#include "abcfrac/solver.hpp"

namespace abcfrac {

/// Outcome of one executable property check. Invariant:
/// passed == (worst_violation <= tolerance_used). Strict inequalities carry a
/// negative tolerance (a required margin); worst_violation is populated on
/// passing runs too, where it reports the observed margin as a negative value.
struct PropertyReport {
  std::string property_name;
  bool passed = false;
  double worst_violation = 0.0;
  double violation_location = 0.0;
  double tolerance_used = 0.0;
  std::string notes;
};

enum class StrictSide { LowerStrict, UpperStrict, None };

/// A candidate lower/upper solution pair for one comparison statement.
struct ComparisonPair {
  DifferentiableInput lower_v;
  DifferentiableInput upper_w;
  RhsFunction rhs_f;
  StrictSide strict_side = StrictSide::None;
};

namespace detail {

// Tolerance scale factors, all multiplied by the grid step so every check
// passes in the h -> 0 limit on hypothesis-satisfying inputs.
inline constexpr double kSlopeTolFactor = 10.0;    // derivative sign checks
inline constexpr double kCompareTolFactor = 1.0;   // nonstrict conclusions
inline constexpr double kStrictMarginFactor = 1.0; // strict conclusions
inline constexpr double kPreSlackFactor = 10.0;    // hypothesis sampling slack
inline constexpr double kSeriesFloor = 1e-12;      // pure series comparisons

inline PropertyReport finish_report(std::string name, double worst, double loc,
                                    double tol, std::string notes) {
  PropertyReport r;
  r.property_name = std::move(name);
  r.worst_violation = worst;
  r.violation_location = loc;
  r.tolerance_used = tol;
  r.passed = worst <= tol;
  r.notes = std::move(notes);
  return r;
}

/// Grid node index of tau0; rejects off-grid targets.
inline int node_index(const UniformGrid& grid, double tau0) {
  const int k = int(std::lround(tau0 / grid.step_h));
  require(k >= 1 && k < grid.n_nodes &&
              std::abs(tau0 - k * grid.step_h) <= 0.25 * grid.step_h,
          ErrorCode::DomainError,
          "check: tau0 must coincide with a positive grid node");
  return k;
}

inline std::vector<double> sample_values(const DifferentiableInput& input,
                                         const UniformGrid& grid) {
  std::vector<double> v(grid.n_nodes);
  for (int k = 0; k < grid.n_nodes; ++k) v[k] = input.value_fn(grid.node(k));
  return v;
}

/// Deterministic uniform samples in [0,1).
struct SampleStream {
  unsigned long long state;
  explicit SampleStream(unsigned long long seed) : state(seed) {}
  double next() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return double(state >> 11) * 0x1.0p-53;
  }
};

}  // namespace detail

/// Sign of the fractional slope when a trajectory touches zero from below:
/// m <= 0 on [0, tau0), m(tau0) = 0 force the slope at tau0 to be nonnegative.
[[nodiscard]] inline PropertyReport check_zero_crossing_max(
    const DifferentiableInput& m, double tau0, FractionalOrder alpha,
    const Normalization& B, const UniformGrid& grid) {
  alpha.validate();
  grid.validate();
  const int k0 = detail::node_index(grid, tau0);
  const double h = grid.step_h;
  const double pre_slack = detail::kPreSlackFactor * h;
  const std::vector<double> mv = detail::sample_values(m, grid);
  detail::require(std::abs(mv[k0]) <= pre_slack, ErrorCode::PreconditionUnmet,
                  "check_zero_crossing_max: m(tau0) must vanish");
  for (int k = 0; k < k0; ++k)
    detail::require(mv[k] <= pre_slack, ErrorCode::PreconditionUnmet,
                    "check_zero_crossing_max: m must be <= 0 before tau0");
  const Trajectory d = abc_derivative(m, alpha, B, grid);
  const double tol = detail::kSlopeTolFactor * h;
  return detail::finish_report(
      "zero_crossing_max", -d.values[k0], tau0, tol,
      "touching zero from below forces a nonnegative fractional slope; "
      "worst_violation = -slope(tau0)");
}

/// Mirror image: m >= 0 on [0, tau0), m(tau0) = 0 force a nonpositive slope.
[[nodiscard]] inline PropertyReport check_zero_crossing_min(
    const DifferentiableInput& m, double tau0, FractionalOrder alpha,
    const Normalization& B, const UniformGrid& grid) {
  alpha.validate();
  grid.validate();
  const int k0 = detail::node_index(grid, tau0);
  const double h = grid.step_h;
  const double pre_slack = detail::kPreSlackFactor * h;
  const std::vector<double> mv = detail::sample_values(m, grid);
  detail::require(std::abs(mv[k0]) <= pre_slack, ErrorCode::PreconditionUnmet,
                  "check_zero_crossing_min: m(tau0) must vanish");
  for (int k = 0; k < k0; ++k)
    detail::require(mv[k] >= -pre_slack, ErrorCode::PreconditionUnmet,
                    "check_zero_crossing_min: m must be >= 0 before tau0");
  const Trajectory d = abc_derivative(m, alpha, B, grid);
  const double tol = detail::kSlopeTolFactor * h;
  return detail::finish_report(
      "zero_crossing_min", d.values[k0], tau0, tol,
      "touching zero from above forces a nonpositive fractional slope; "
      "worst_violation = +slope(tau0)");
}

/// Fractional slope at the discrete maximizer is nonnegative. Ties break
/// toward the smallest tau so reports are deterministic.
[[nodiscard]] inline PropertyReport check_max_point_estimate(
    const DifferentiableInput& f, FractionalOrder alpha, const Normalization& B,
    const UniformGrid& grid) {
  alpha.validate();
  grid.validate();
  const std::vector<double> fv = detail::sample_values(f, grid);
  int k0 = 0;
  for (int k = 1; k < grid.n_nodes; ++k)
    if (fv[k] > fv[k0]) k0 = k;
  const Trajectory d = abc_derivative(f, alpha, B, grid);
  const double tol = detail::kSlopeTolFactor * grid.step_h;
  return detail::finish_report(
      "max_point_slope", -d.values[k0], grid.node(k0), tol,
      "fractional slope at the grid maximizer must be >= 0; "
      "worst_violation = -slope(argmax)");
}

/// Dual: fractional slope at the discrete minimizer is nonpositive.
[[nodiscard]] inline PropertyReport check_min_point_estimate(
    const DifferentiableInput& f, FractionalOrder alpha, const Normalization& B,
    const UniformGrid& grid) {
  alpha.validate();
  grid.validate();
  const std::vector<double> fv = detail::sample_values(f, grid);
  int k0 = 0;
  for (int k = 1; k < grid.n_nodes; ++k)
    if (fv[k] < fv[k0]) k0 = k;
  const Trajectory d = abc_derivative(f, alpha, B, grid);
  const double tol = detail::kSlopeTolFactor * grid.step_h;
  return detail::finish_report(
      "min_point_slope", d.values[k0], grid.node(k0), tol,
      "fractional slope at the grid minimizer must be <= 0; "
      "worst_violation = +slope(argmin)");
}

/// Strict comparison: lower and upper candidates with one strict differential
/// inequality and strictly ordered starts stay strictly ordered. The strict
/// hypothesis and the strict conclusion both carry a margin of one grid step,
/// checked away from tau = 0 where every fractional slope vanishes.
[[nodiscard]] inline PropertyReport check_strict_comparison(
    const ComparisonPair& pair, FractionalOrder alpha, const Normalization& B,
    const UniformGrid& grid) {
  alpha.validate();
  grid.validate();
  pair.rhs_f.validate();
  const double h = grid.step_h;
  const double slack = detail::kPreSlackFactor * h;
  const double margin = detail::kStrictMarginFactor * h;
  const std::vector<double> vv = detail::sample_values(pair.lower_v, grid);
  const std::vector<double> wv = detail::sample_values(pair.upper_w, grid);
  detail::require(vv[0] < wv[0], ErrorCode::PreconditionUnmet,
                  "check_strict_comparison: requires v(0) < w(0)");
  detail::require(pair.strict_side != StrictSide::None,
                  ErrorCode::PreconditionUnmet,
                  "check_strict_comparison: one differential inequality must "
                  "be declared strict");
  const Trajectory dv = abc_derivative(pair.lower_v, alpha, B, grid);
  const Trajectory dw = abc_derivative(pair.upper_w, alpha, B, grid);
  for (int k = 0; k < grid.n_nodes; ++k) {
    const double t = grid.node(k);
    const double fv = pair.rhs_f.eval(t, vv[k]);
    const double fw = pair.rhs_f.eval(t, wv[k]);
    detail::require(dv.values[k] <= fv + slack, ErrorCode::PreconditionUnmet,
                    "check_strict_comparison: hypothesis D v <= f(tau, v) "
                    "fails on the grid");
    detail::require(dw.values[k] >= fw - slack, ErrorCode::PreconditionUnmet,
                    "check_strict_comparison: hypothesis D w >= f(tau, w) "
                    "fails on the grid");
    if (k >= 1) {
      if (pair.strict_side == StrictSide::LowerStrict)
        detail::require(dv.values[k] <= fv - margin,
                        ErrorCode::PreconditionUnmet,
                        "check_strict_comparison: declared strict lower "
                        "inequality has no margin");
      else
        detail::require(dw.values[k] >= fw + margin,
                        ErrorCode::PreconditionUnmet,
                        "check_strict_comparison: declared strict upper "
                        "inequality has no margin");
    }
  }
  double worst = -1e300;
  double loc = 0.0;
  for (int k = 0; k < grid.n_nodes; ++k) {
    const double gap = vv[k] - wv[k];
    if (gap > worst) {
      worst = gap;
      loc = grid.node(k);
    }
  }
  return detail::finish_report(
      "comparison_strict", worst, loc, -margin,
      "strict conclusion v < w encoded as v - w <= -margin, margin = h; "
      "negative tolerance is the required strict gap");
}

/// Nonstrict comparison under a one-sided Lipschitz condition on f. Also
/// re-runs the inflation step w_eps = w + eps E_alpha(tau^alpha) for
/// eps in {1e-2, 1e-3} and verifies D w_eps > f(tau, w_eps) on [h, T] using
/// the closed-form slope of the inflation term. The interval starts at h:
/// the inflation term's classical derivative blows up like tau^(alpha-1) at 0.
[[nodiscard]] inline PropertyReport check_nonstrict_comparison(
    const ComparisonPair& pair, double L, FractionalOrder alpha,
    const Normalization& B, const UniformGrid& grid) {
  alpha.validate();
  grid.validate();
  pair.rhs_f.validate();
  const double a = alpha.alpha;
  const double bv = B.value(a);
  detail::require(std::isfinite(L) && L > 0.0 && L < bv / (1.0 - a),
                  ErrorCode::HypothesisViolation,
                  "check_nonstrict_comparison: requires 0 < L < "
                  "B(alpha)/(1-alpha)");
  const double h = grid.step_h;
  const double slack = detail::kPreSlackFactor * h;
  const std::vector<double> vv = detail::sample_values(pair.lower_v, grid);
  const std::vector<double> wv = detail::sample_values(pair.upper_w, grid);
  detail::require(vv[0] <= wv[0], ErrorCode::PreconditionUnmet,
                  "check_nonstrict_comparison: requires v(0) <= w(0)");

  const double T = grid.horizon();
  double lo = 1e300, hi = -1e300;
  for (int k = 0; k < grid.n_nodes; ++k) {
    lo = std::min(lo, std::min(vv[k], wv[k]));
    hi = std::max(hi, std::max(vv[k], wv[k]));
  }
  hi += 1e-2 * ml1(a, std::pow(T, a)) + 0.1;
  lo -= 0.1;
  detail::SampleStream rng(0x5eedULL);
  for (int i = 0; i < 100; ++i) {
    const double t = T * rng.next();
    double om = lo + (hi - lo) * rng.next();
    double et = lo + (hi - lo) * rng.next();
    if (om < et) std::swap(om, et);
    detail::require(pair.rhs_f.eval(t, om) - pair.rhs_f.eval(t, et) <=
                        L * (om - et) + 1e-12,
                    ErrorCode::PreconditionUnmet,
                    "check_nonstrict_comparison: one-sided Lipschitz "
                    "condition fails on sampled pairs");
  }

  const Trajectory dv = abc_derivative(pair.lower_v, alpha, B, grid);
  const Trajectory dw = abc_derivative(pair.upper_w, alpha, B, grid);
  for (int k = 0; k < grid.n_nodes; ++k) {
    const double t = grid.node(k);
    detail::require(dv.values[k] <= pair.rhs_f.eval(t, vv[k]) + slack,
                    ErrorCode::PreconditionUnmet,
                    "check_nonstrict_comparison: hypothesis D v <= f(tau, v) "
                    "fails on the grid");
    detail::require(dw.values[k] >= pair.rhs_f.eval(t, wv[k]) - slack,
                    ErrorCode::PreconditionUnmet,
                    "check_nonstrict_comparison: hypothesis D w >= f(tau, w) "
                    "fails on the grid");
  }

  const double tol = detail::kCompareTolFactor * h;
  double worst = -1e300;
  double loc = 0.0;
  for (int k = 0; k < grid.n_nodes; ++k) {
    const double gap = vv[k] - wv[k];
    if (gap > worst) {
      worst = gap;
      loc = grid.node(k);
    }
  }

  // Inflation replay: the lifted candidate must satisfy its differential
  // inequality strictly wherever it is defined.
  double inflation_excess = -1e300;
  double inflation_loc = 0.0;
  for (double eps : {1e-2, 1e-3}) {
    for (int k = 1; k < grid.n_nodes; ++k) {
      const double t = grid.node(k);
      const double lift = eps * ml1(a, std::pow(t, a));
      const double d_lift = eps * detail::abc_derivative_of_ml_exp(a, bv, t);
      const double gap = pair.rhs_f.eval(t, wv[k] + lift) -
                         (dw.values[k] + d_lift);
      if (gap > inflation_excess) {
        inflation_excess = gap;
        inflation_loc = t;
      }
    }
  }
  std::string notes =
      "conclusion v <= w with tol = h; inflation replay on [h, T] for "
      "eps in {1e-2, 1e-3}";
  if (inflation_excess >= 0.0) {
    // Fold the inflation failure into the report without breaking the
    // passed <=> worst <= tol invariant.
    worst = std::max(worst, tol + inflation_excess + 1e-15);
    loc = inflation_loc;
    notes += "; inflation step FAILED: D w_eps > f(tau, w_eps) violated";
  }
  return detail::finish_report("comparison_nonstrict", worst, loc, tol,
                               std::move(notes));
}

/// Growth envelope: a trajectory whose fractional slope is dominated by
/// (B/(1-alpha)) m stays below m0 E_alpha(tau^alpha). The slope domination is
/// the caller's assertion; here m(0) = m0 is enforced and the envelope is
/// evaluated per node.
[[nodiscard]] inline PropertyReport check_ml_growth_bound(const Trajectory& m,
                                                          double m0,
                                                          FractionalOrder
                                                              alpha) {
  alpha.validate();
  m.validate();
  const double h = m.grid.step_h;
  detail::require(std::abs(m.values[0] - m0) <= 1e-12,
                  ErrorCode::PreconditionUnmet,
                  "check_ml_growth_bound: m(0) must equal m0");
  const double a = alpha.alpha;
  const double tol = detail::kSlopeTolFactor * h;
  double worst = -1e300;
  double loc = 0.0;
  for (int k = 0; k < m.grid.n_nodes; ++k) {
    const double t = m.grid.node(k);
    const double gap = m.values[k] - m0 * ml1(a, std::pow(t, a));
    if (gap > worst) {
      worst = gap;
      loc = t;
    }
  }
  return detail::finish_report(
      "growth_ml_envelope", worst, loc, tol,
      "trajectory must stay below m0 E_alpha(tau^alpha) node-wise");
}

/// Series dominance used by the comparison proofs: the second-order kernel
/// sum dominates the first at every nonnegative argument, term by term.
[[nodiscard]] inline PropertyReport check_prabhakar_growth_inequality(
    FractionalOrder alpha, const UniformGrid& grid) {
  alpha.validate();
  grid.validate();
  const double a = alpha.alpha;
  double worst = -1e300;
  double loc = 0.0;
  for (int k = 0; k < grid.n_nodes; ++k) {
    const double x = std::pow(grid.node(k), a);
    const double gap = ml1(a, x) - ml3({a, 1.0, 2.0}, x);
    if (gap > worst) {
      worst = gap;
      loc = grid.node(k);
    }
  }
  return detail::finish_report(
      "growth_prabhakar_dominance", worst, loc, detail::kSeriesFloor,
      "E^2_{alpha,1}(x) >= E_alpha(x) for x >= 0; tolerance is the series "
      "accuracy floor, not h-scaled");
}

/// Periodic-boundary comparison. EXPERIMENTAL: reported but never gating —
/// see notes.
[[nodiscard]] inline PropertyReport check_periodic_comparison(
    const ComparisonPair& pair, FractionalOrder alpha,
    const Normalization& /*B: kept for signature uniformity*/,
    const UniformGrid& grid) {
  alpha.validate();
  grid.validate();
  pair.rhs_f.validate();
  const double h = grid.step_h;
  const double slack = detail::kPreSlackFactor * h;
  const double T = grid.horizon();
  const std::vector<double> vv = detail::sample_values(pair.lower_v, grid);
  const std::vector<double> wv = detail::sample_values(pair.upper_w, grid);
  detail::require(vv.front() <= vv.back() + slack,
                  ErrorCode::PreconditionUnmet,
                  "check_periodic_comparison: requires v(0) <= v(T)");
  detail::require(wv.front() >= wv.back() - slack,
                  ErrorCode::PreconditionUnmet,
                  "check_periodic_comparison: requires w(0) >= w(T)");
  double lo = 1e300, hi = -1e300;
  for (int k = 0; k < grid.n_nodes; ++k) {
    lo = std::min(lo, std::min(vv[k], wv[k]));
    hi = std::max(hi, std::max(vv[k], wv[k]));
  }
  lo -= 0.1;
  hi += 0.1;
  detail::SampleStream rng(0xfeedULL);
  for (int i = 0; i < 100; ++i) {
    const double t = T * rng.next();
    double om = lo + (hi - lo) * rng.next();
    double et = lo + (hi - lo) * rng.next();
    if (om < et) std::swap(om, et);
    detail::require(pair.rhs_f.eval(t, om) <= pair.rhs_f.eval(t, et) + 1e-12,
                    ErrorCode::PreconditionUnmet,
                    "check_periodic_comparison: f must be nonincreasing in "
                    "omega");
  }
  double worst = -1e300;
  double loc = 0.0;
  for (int k = 0; k < grid.n_nodes; ++k) {
    const double gap = vv[k] - wv[k];
    if (gap > worst) {
      worst = gap;
      loc = grid.node(k);
    }
  }
  return detail::finish_report(
      "periodic_comparison", worst, loc, detail::kCompareTolFactor * h,
      "EXPERIMENTAL: periodic-boundary comparison; reported, never gating");
}

/// Whether a report participates in pass/fail gating. Experimental checks
/// report but never gate.
[[nodiscard]] inline bool report_gates(const PropertyReport& r) {
  return r.notes.rfind("EXPERIMENTAL", 0) != 0;
}

/// Domination by the maximal solution of the majorant problem: a candidate m
/// with D m <= g(tau, m) and m(0) <= u0 stays below the maximal solution of
/// D u = g(tau, u), u(0) = u0, computed by the perturbation sweep.
[[nodiscard]] inline PropertyReport check_maximal_domination(
    const DifferentiableInput& m, const RhsFunction& g, double u0,
    FractionalOrder alpha, const Normalization& B, const SolverConfig& config,
    double horizon_T) {
  alpha.validate();
  config.validate();
  g.validate();
  detail::require(std::isfinite(horizon_T) && horizon_T > 0.0,
                  ErrorCode::DomainError,
                  "check_maximal_domination: horizon_T must be positive");
  const auto [n, h] = detail::adjusted_steps(horizon_T, config.step_h);
  const UniformGrid grid{h, n + 1};
  const double slack = detail::kPreSlackFactor * h;
  const std::vector<double> mv = detail::sample_values(m, grid);
  detail::require(mv[0] <= u0 + 1e-15, ErrorCode::PreconditionUnmet,
                  "check_maximal_domination: requires m(0) <= u0");
  const Trajectory dm = abc_derivative(m, alpha, B, grid);
  for (int k = 0; k < grid.n_nodes; ++k)
    detail::require(
        dm.values[k] <= g.eval(grid.node(k), mv[k]) + slack,
        ErrorCode::PreconditionUnmet,
        "check_maximal_domination: hypothesis D m <= g(tau, m) fails");

  IVProblem bound;
  bound.rhs = g;
  bound.omega0 = u0;
  bound.horizon_T = horizon_T;
  bound.alpha = alpha;
  bound.B = B;
  const ExtremalResult ext = solve_extremal(
      bound, config, g.box_halfwidth_b / 4.0, 0.5, std::max(1e-8, 0.01 * h));
  const double tol = detail::kSlopeTolFactor * h;
  double worst = -1e300;
  double loc = 0.0;
  for (int k = 0; k < grid.n_nodes; ++k) {
    const double gap = mv[k] - ext.maximal.values[k];
    if (gap > worst) {
      worst = gap;
      loc = grid.node(k);
    }
  }
  return detail::finish_report(
      "domination_maximal", worst, loc, tol,
      "candidate must stay below the maximal solution of the majorant "
      "problem node-wise");
}

namespace detail {

inline DifferentiableInput analytic_input(std::function<double(double)> f,
                                          std::function<double(double)> df) {
  DifferentiableInput in;
  in.value_fn = std::move(f);
  in.derivative_fn = std::move(df);
  return in;
}

}  // namespace detail

/// The standard fixture set: every check run once on a hypothesis-satisfying
/// input, reports sorted by property name. All fixtures are deterministic in
/// (alpha, B, step_h, horizon_T) and scale with the horizon; the zero-crossing
/// targets sit at tau = horizon_T on a doubled grid.
[[nodiscard]] inline std::vector<PropertyReport> run_standard_suite(
    FractionalOrder alpha, const Normalization& B, double step_h,
    double horizon_T = 1.0) {
  alpha.validate();
  detail::require(std::isfinite(step_h) && step_h > 0.0 && step_h <= 0.1,
                  ErrorCode::DomainError,
                  "run_standard_suite: step_h must lie in (0, 0.1]");
  detail::require(std::isfinite(horizon_T) && horizon_T >= 0.5 &&
                      horizon_T <= 2.0,
                  ErrorCode::DomainError,
                  "run_standard_suite: horizon_T must lie in [0.5, 2]");
  const double a = alpha.alpha;
  const double bv = B.value(a);
  const double rate = bv / (1.0 - a);
  const double T = horizon_T;
  std::vector<PropertyReport> reports;

  const auto [n1, h1] = detail::adjusted_steps(T, step_h);
  const UniformGrid unit{h1, n1 + 1};
  // Two half-intervals of n1 steps each keep tau = T exactly on a node.
  const UniformGrid twice{h1, 2 * n1 + 1};

  reports.push_back(check_zero_crossing_max(
      detail::analytic_input([T](double t) { return t - T; },
                             [](double) { return 1.0; }),
      T, alpha, B, twice));
  reports.push_back(check_zero_crossing_min(
      detail::analytic_input([T](double t) { return T - t; },
                             [](double) { return -1.0; }),
      T, alpha, B, twice));
  const double quarter_rate = 1.5707963267948966 / T;
  reports.push_back(check_max_point_estimate(
      detail::analytic_input(
          [quarter_rate](double t) { return std::sin(quarter_rate * t); },
          [quarter_rate](double t) {
            return quarter_rate * std::cos(quarter_rate * t);
          }),
      alpha, B, unit));
  reports.push_back(check_min_point_estimate(
      detail::analytic_input(
          [quarter_rate](double t) { return std::cos(quarter_rate * t); },
          [quarter_rate](double t) {
            return -quarter_rate * std::sin(quarter_rate * t);
          }),
      alpha, B, unit));

  {
    ComparisonPair pair;
    pair.lower_v = detail::analytic_input([](double) { return 0.0; },
                                          [](double) { return 0.0; });
    pair.upper_w = detail::analytic_input([](double t) { return 2.0 + t; },
                                          [](double) { return 1.0; });
    pair.rhs_f.eval = [](double t, double o) { return t + 1.0 - o; };
    pair.rhs_f.lipschitz_tau = 1.0;
    pair.rhs_f.lipschitz_omega = 1.0;
    pair.rhs_f.bound_M = T + 11.0;
    pair.rhs_f.box_halfwidth_b = 4.0;
    pair.strict_side = StrictSide::LowerStrict;
    reports.push_back(check_strict_comparison(pair, alpha, B, unit));
  }

  {
    const double c = 0.5 * rate;
    ComparisonPair pair;
    pair.lower_v = detail::analytic_input([](double) { return 0.0; },
                                          [](double) { return 0.0; });
    pair.upper_w = detail::analytic_input([](double t) { return 1.0 + t; },
                                          [](double) { return 1.0; });
    pair.rhs_f.eval = [c](double, double o) { return -c * o; };
    pair.rhs_f.lipschitz_tau = 0.0;
    pair.rhs_f.lipschitz_omega = c;
    pair.rhs_f.bound_M = c * (T + 2.0);
    pair.rhs_f.box_halfwidth_b = 4.0;
    reports.push_back(check_nonstrict_comparison(pair, c, alpha, B, unit));
  }

  {
    // Sub-eigenfunction fixture: m = E_alpha(c tau^alpha) with c = 1/2 obeys
    // the slope domination D m <= (B/(1-alpha)) m with pointwise margin and
    // sits strictly inside the c = 1 envelope, at every order.
    Trajectory m{unit, std::vector<double>(unit.n_nodes)};
    for (int k = 0; k < unit.n_nodes; ++k)
      m.values[k] = ml1(a, 0.5 * std::pow(unit.node(k), a));
    // The slope-domination hypothesis of the envelope statement, verified on
    // the grid before handing over.
    const Trajectory dm =
        abc_derivative(detail::as_input(m), alpha, B, m.grid);
    for (int k = 0; k < m.grid.n_nodes; ++k)
      detail::require(
          dm.values[k] <= rate * m.values[k] + detail::kPreSlackFactor *
                                                   m.grid.step_h * rate,
          ErrorCode::PreconditionUnmet,
          "growth fixture: slope domination fails on the grid");
    reports.push_back(check_ml_growth_bound(m, 1.0, alpha));
  }

  reports.push_back(check_prabhakar_growth_inequality(alpha, unit));

  {
    ComparisonPair pair;
    pair.lower_v = detail::analytic_input([](double) { return 0.0; },
                                          [](double) { return 0.0; });
    pair.upper_w = detail::analytic_input([](double) { return 1.0; },
                                          [](double) { return 0.0; });
    pair.rhs_f.eval = [](double, double o) { return -o; };
    pair.rhs_f.lipschitz_omega = 1.0;
    pair.rhs_f.bound_M = 2.0;
    pair.rhs_f.box_halfwidth_b = 2.0;
    reports.push_back(check_periodic_comparison(pair, alpha, B, unit));
  }

  {
    IVProblem target;
    target.rhs.eval = [](double t, double o) { return t - 0.1 * o; };
    target.rhs.lipschitz_tau = 1.0;
    target.rhs.lipschitz_omega = 0.1;
    target.rhs.bound_M = std::max(1.2, 1.1 * T);
    target.rhs.box_halfwidth_b = std::max(1.0, T * T);
    target.omega0 = 0.0;
    target.horizon_T = T;
    target.alpha = alpha;
    target.B = B;
    SolverConfig cfg;
    cfg.step_h = step_h;
    const Trajectory m = solve_ivp(target, cfg);
    RhsFunction g;
    g.eval = [](double t, double u) { return t + 0.1 * u; };
    g.lipschitz_tau = 1.0;
    g.lipschitz_omega = 0.1;
    g.bound_M = std::max(1.5, T + 0.1 * (0.5 + 2.0 * T));
    g.box_halfwidth_b = 2.0 * T;
    reports.push_back(check_maximal_domination(detail::as_input(m), g, 0.5,
                                               alpha, B, cfg, T));
  }

  std::sort(reports.begin(), reports.end(),
            [](const PropertyReport& x, const PropertyReport& y) {
              return x.property_name < y.property_name;
            });
  return reports;
}

struct NegativeControlOutcome {
  std::string name;
  bool raised_precondition = false;
};

/// Hypothesis-violating fixtures, one per check that owns a precondition.
/// Each must raise PreconditionUnmet; anything else is recorded as a miss.
[[nodiscard]] inline std::vector<NegativeControlOutcome> run_negative_controls(
    FractionalOrder alpha, const Normalization& B, double step_h) {
  alpha.validate();
  const double a = alpha.alpha;
  const double bv = B.value(a);
  const double rate = bv / (1.0 - a);
  const auto [n1, h1] = detail::adjusted_steps(1.0, step_h);
  const UniformGrid unit{h1, n1 + 1};
  const auto [n2, h2] = detail::adjusted_steps(2.0, step_h);
  const UniformGrid twice{h2, n2 + 1};

  std::vector<NegativeControlOutcome> out;
  auto record = [&out](const std::string& name, auto&& body) {
    NegativeControlOutcome o;
    o.name = name;
    try {
      body();
    } catch (const Error& e) {
      o.raised_precondition = e.code() == ErrorCode::PreconditionUnmet;
    }
    out.push_back(std::move(o));
  };

  record("zero_crossing_max", [&] {
    (void)check_zero_crossing_max(
        detail::analytic_input([](double t) { return 0.5 - t; },
                               [](double) { return -1.0; }),
        1.0, alpha, B, twice);
  });
  record("zero_crossing_min", [&] {
    (void)check_zero_crossing_min(
        detail::analytic_input([](double t) { return t - 0.5; },
                               [](double) { return 1.0; }),
        1.0, alpha, B, twice);
  });
  record("comparison_strict", [&] {
    ComparisonPair pair;
    pair.lower_v = detail::analytic_input([](double) { return 0.0; },
                                          [](double) { return 0.0; });
    pair.upper_w = detail::analytic_input([](double t) { return t; },
                                          [](double) { return 1.0; });
    pair.rhs_f.eval = [](double t, double o) { return t + 1.0 - o; };
    pair.rhs_f.lipschitz_tau = 1.0;
    pair.rhs_f.lipschitz_omega = 1.0;
    pair.rhs_f.bound_M = 6.0;
    pair.rhs_f.box_halfwidth_b = 4.0;
    pair.strict_side = StrictSide::LowerStrict;
    (void)check_strict_comparison(pair, alpha, B, unit);
  });
  record("comparison_nonstrict", [&] {
    const double c = 0.5 * rate;
    ComparisonPair pair;
    pair.lower_v = detail::analytic_input([](double) { return 0.0; },
                                          [](double) { return 0.0; });
    pair.upper_w = detail::analytic_input([](double t) { return 1.0 + t; },
                                          [](double) { return 1.0; });
    pair.rhs_f.eval = [c](double, double o) { return c * o; };
    pair.rhs_f.lipschitz_tau = 0.0;
    pair.rhs_f.lipschitz_omega = c;
    pair.rhs_f.bound_M = 4.0 * c + 1.0;
    pair.rhs_f.box_halfwidth_b = 4.0;
    (void)check_nonstrict_comparison(pair, c, alpha, B, unit);
  });
  record("growth_ml_envelope", [&] {
    Trajectory flat{unit, std::vector<double>(unit.n_nodes, 1.0)};
    (void)check_ml_growth_bound(flat, 2.0, alpha);
  });
  record("periodic_comparison", [&] {
    ComparisonPair pair;
    pair.lower_v = detail::analytic_input([](double) { return 0.0; },
                                          [](double) { return 0.0; });
    pair.upper_w = detail::analytic_input([](double) { return 1.0; },
                                          [](double) { return 0.0; });
    pair.rhs_f.eval = [](double, double o) { return o; };
    pair.rhs_f.lipschitz_omega = 1.0;
    pair.rhs_f.bound_M = 2.0;
    pair.rhs_f.box_halfwidth_b = 2.0;
    (void)check_periodic_comparison(pair, alpha, B, unit);
  });
  record("domination_maximal", [&] {
    RhsFunction g;
    g.eval = [](double, double) { return 0.0; };
    g.bound_M = 1e-12;
    g.box_halfwidth_b = 1.0;
    SolverConfig cfg;
    cfg.step_h = step_h;
    (void)check_maximal_domination(
        detail::analytic_input([](double) { return 1.0; },
                               [](double) { return 0.0; }),
        g, 0.5, alpha, B, cfg, 1.0);
  });
  return out;
}

}  // namespace abcfrac
