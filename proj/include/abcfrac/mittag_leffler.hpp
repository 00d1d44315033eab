#pragma once

#include <cmath>
#include <numbers>
#include <limits>
#include <string>

#include "abcfrac/errors.hpp"

namespace abcfrac {

/// Parameters of the three-parameter (Prabhakar) Mittag-Leffler function.
/// gamma = 1 reduces to the two-parameter function, gamma = beta = 1 to the
/// classical one.
struct MLParams {
  double alpha = 0.5;
  double beta = 1.0;
  double gamma = 1.0;

  void validate() const {
    detail::require(std::isfinite(alpha) && alpha > 0.0 && alpha <= 2.0,
                    ErrorCode::DomainError, "MLParams: alpha must lie in (0, 2]");
    detail::require(std::isfinite(beta) && beta > 0.0, ErrorCode::DomainError,
                    "MLParams: beta must be positive");
    detail::require(std::isfinite(gamma) && gamma >= 0.0, ErrorCode::DomainError,
                    "MLParams: gamma must be nonnegative");
  }
};

/// Knobs of the power-series evaluator. The stopping rule requires
/// `consecutive_small` successive terms below rel_tol relative to the partial
/// sum, and at least k_min terms, so alternating series cannot exit early.
struct SeriesControl {
  double rel_tol = 1e-14;
  int k_min = 8;
  int k_max = 2000;
  int consecutive_small = 3;
  /// ml1 switches to the Laplace-integral route when z < -spectral_switch.
  double spectral_switch = 5.0;

  void validate() const {
    detail::require(rel_tol > 0.0, ErrorCode::DomainError,
                    "SeriesControl: rel_tol must be positive");
    detail::require(k_min < k_max, ErrorCode::DomainError,
                    "SeriesControl: k_min must be below k_max");
  }
};

namespace detail {

/// Series sum with one lgamma per term: t_{k+1}/t_k carries the Pochhammer
/// ratio and the gamma ratio in log space, so terms never overflow on the way
/// to a finite sum.
inline double ml_series(double alpha, double beta, double gamma, double z,
                        const SeriesControl& ctrl) {
  double term = std::exp(-std::lgamma(beta));
  double sum = term;
  double lg_curr = std::lgamma(beta);
  int small_run = 0;
  for (int k = 0; k < ctrl.k_max; ++k) {
    const double lg_next = std::lgamma(alpha * (k + 1) + beta);
    term *= z * ((gamma + k) / (k + 1)) * std::exp(lg_curr - lg_next);
    lg_curr = lg_next;
    sum += term;
    if (std::abs(term) <= ctrl.rel_tol * std::abs(sum)) {
      ++small_run;
      if (small_run >= ctrl.consecutive_small && k + 1 >= ctrl.k_min) return sum;
    } else {
      small_run = 0;
    }
  }
  fail(ErrorCode::NonConvergence,
       "Mittag-Leffler series did not settle within k_max terms");
}

/// Adaptive Simpson with Richardson correction. `budget` counts integrand
/// evaluations across a whole ml_neg_spectral call.
template <class F>
double adaptive_simpson_step(const F& f, double a, double b, double fa, double fm,
                             double fb, double whole, double tol, int depth,
                             long& budget) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  budget -= 2;
  if (budget < 0)
    fail(ErrorCode::QuadratureFailure, "adaptive quadrature budget exhausted");
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double err = left + right - whole;
  if (depth >= 48 || std::abs(err) <= 15.0 * tol)
    return left + right + err / 15.0;
  return adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1,
                               budget) +
         adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1,
                               budget);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol, long& budget) {
  budget -= 3;
  if (budget < 0)
    fail(ErrorCode::QuadratureFailure, "adaptive quadrature budget exhausted");
  const double fa = f(a);
  const double fm = f(0.5 * (a + b));
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_step(f, a, b, fa, fm, fb, whole, tol, 0, budget);
}

}  // namespace detail

[[nodiscard]] double ml_neg_spectral(double alpha, double tau, double quad_tol);

/// Three-parameter Mittag-Leffler sum_{k>=0} (gamma)_k z^k / (Gamma(alpha k + beta) k!).
[[nodiscard]] inline double ml3(const MLParams& params, double z,
                                const SeriesControl& ctrl = {}) {
  params.validate();
  ctrl.validate();
  detail::require(std::isfinite(z), ErrorCode::DomainError, "ml3: z must be finite");
  return detail::ml_series(params.alpha, params.beta, params.gamma, z, ctrl);
}

/// Two-parameter Mittag-Leffler sum_{k>=0} z^k / Gamma(alpha k + beta).
[[nodiscard]] inline double ml2(double alpha, double beta, double z,
                                const SeriesControl& ctrl = {}) {
  return ml3({alpha, beta, 1.0}, z, ctrl);
}

/// One-parameter Mittag-Leffler E_alpha(z). Deeply negative arguments with
/// alpha in (0,1) are routed through the Laplace-integral representation,
/// where the power series loses digits to cancellation.
[[nodiscard]] inline double ml1(double alpha, double z,
                                const SeriesControl& ctrl = {}) {
  ctrl.validate();
  detail::require(std::isfinite(alpha) && alpha > 0.0 && alpha <= 2.0,
                  ErrorCode::DomainError, "ml1: alpha must lie in (0, 2]");
  detail::require(std::isfinite(z), ErrorCode::DomainError, "ml1: z must be finite");
  if (z < 0.0 && alpha < 1.0 && -z > ctrl.spectral_switch)
    return ml_neg_spectral(alpha, std::pow(-z, 1.0 / alpha), 1e-11);
  return detail::ml_series(alpha, 1.0, 1.0, z, ctrl);
}

/// Density K_alpha(r) of the representation E_alpha(-tau^alpha) =
/// int_0^inf exp(-r tau) K_alpha(r) dr. Strictly positive for r > 0.
[[nodiscard]] inline double spectral_kernel(double alpha, double r) {
  detail::require(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0,
                  ErrorCode::DomainError, "spectral_kernel: alpha must lie in (0, 1)");
  detail::require(std::isfinite(r) && r > 0.0, ErrorCode::DomainError,
                  "spectral_kernel: r must be positive");
  const double ra = std::pow(r, alpha);
  const double denom = ra * ra + 2.0 * ra * std::cos(alpha * std::numbers::pi) + 1.0;
  return std::sin(alpha * std::numbers::pi) * std::pow(r, alpha - 1.0) / (std::numbers::pi * denom);
}

/// E_alpha(-tau^alpha) by adaptive quadrature of the Laplace-type integral.
/// The substitution u = r^alpha on [0,1] and r = 1/s, u = s^alpha on the tail
/// turns both halves into smooth integrals over [0,1]:
///   E_alpha(-tau^alpha) = sin(alpha pi)/(alpha pi) *
///     int_0^1 [exp(-tau u^{1/alpha}) + exp(-tau u^{-1/alpha})] / D(u) du,
///   D(u) = u^2 + 2 u cos(alpha pi) + 1.
/// tau = 0 integrates to exactly 1, the continuous limit.
[[nodiscard]] inline double ml_neg_spectral(double alpha, double tau,
                                            double quad_tol) {
  detail::require(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0,
                  ErrorCode::DomainError,
                  "ml_neg_spectral: alpha must lie in (0, 1)");
  detail::require(std::isfinite(tau) && tau >= 0.0, ErrorCode::DomainError,
                  "ml_neg_spectral: tau must be nonnegative");
  detail::require(quad_tol > 0.0, ErrorCode::DomainError,
                  "ml_neg_spectral: quad_tol must be positive");
  const double c = std::cos(alpha * std::numbers::pi);
  const double pref = std::sin(alpha * std::numbers::pi) / (alpha * std::numbers::pi);
  const auto denom = [c](double u) { return u * u + 2.0 * u * c + 1.0; };
  const double inv_alpha = 1.0 / alpha;
  const auto head = [&](double u) {
    return std::exp(-tau * std::pow(u, inv_alpha)) / denom(u);
  };
  const auto tail = [&](double u) {
    if (u <= 0.0) return tau > 0.0 ? 0.0 : 1.0;
    const double x = tau * std::pow(u, -inv_alpha);
    return x > 745.0 ? 0.0 : std::exp(-x) / denom(u);
  };
  long budget = 400000;
  const double half = 0.5 * quad_tol;
  return pref * (detail::adaptive_simpson(head, 0.0, 1.0, half, budget) +
                 detail::adaptive_simpson(tail, 0.0, 1.0, half, budget));
}

}  // namespace abcfrac
