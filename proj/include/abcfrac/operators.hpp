#pragma once

#include <cmath>
#include <vector>

#include "abcfrac/errors.hpp"
#include "abcfrac/grid.hpp"
#include "abcfrac/mittag_leffler.hpp"
#include "abcfrac/normalization.hpp"

namespace abcfrac {

namespace detail {

/// Power tables d^alpha and d^{alpha+1} for d = 0..n-1, shared by the weight
/// assembly below.
struct PowerTables {
  std::vector<double> pow_a;
  std::vector<double> pow_a1;

  PowerTables(int n, double alpha) : pow_a(n), pow_a1(n) {
    for (int d = 0; d < n; ++d) {
      pow_a[d] = std::pow(double(d), alpha);
      pow_a1[d] = std::pow(double(d), alpha + 1.0);
    }
  }
};

/// Dimensionless product-trapezoidal weights for the left Riemann-Liouville
/// integral at node k: integrating the power kernel exactly against the
/// piecewise-linear interpolant. Multiply the weighted sum by
/// h^alpha / Gamma(alpha). Exact for constant and linear inputs.
inline void rl_node_weights(int k, double alpha, const PowerTables& pt,
                            std::vector<double>& w) {
  w.assign(k + 1, 0.0);
  for (int c = 0; c < k; ++c) {
    const int d = k - c;
    const double m0 = (pt.pow_a[d] - pt.pow_a[d - 1]) / alpha;
    const double m1 = (pt.pow_a1[d] - pt.pow_a1[d - 1]) / (alpha + 1.0);
    w[c] += (1.0 - d) * m0 + m1;
    w[c + 1] += d * m0 - m1;
  }
}

/// Closed-form ABC derivative of E_alpha(tau^alpha), obtained by Laplace
/// transform of the defining convolution:
///   D^alpha E_alpha(tau^alpha) =
///     B(alpha) * (E_alpha(tau^alpha) - E_alpha(-alpha/(1-alpha) tau^alpha)).
inline double abc_derivative_of_ml_exp(double alpha, double b_value, double tau) {
  const double ta = std::pow(tau, alpha);
  const double lam = alpha / (1.0 - alpha);
  return b_value * (ml1(alpha, ta) - ml1(alpha, -lam * ta));
}

}  // namespace detail

/// Riemann-Liouville fractional integral of sampled data on its own grid,
/// (1/Gamma(alpha)) int_0^tau (tau-sigma)^{alpha-1} omega(sigma) dsigma.
/// Product-trapezoidal weights integrate the singular kernel exactly, so the
/// endpoint singularity costs no accuracy. Node 0 is exactly 0.
[[nodiscard]] inline Trajectory rl_integral(const Trajectory& traj,
                                            FractionalOrder alpha) {
  traj.validate();
  alpha.validate();
  const double a = alpha.alpha;
  const int n = traj.grid.n_nodes;
  const double scale =
      std::pow(traj.grid.step_h, a) / std::tgamma(a);
  detail::PowerTables pt(n, a);
  std::vector<double> w;
  Trajectory out{traj.grid, std::vector<double>(n, 0.0)};
  for (int k = 1; k < n; ++k) {
    detail::rl_node_weights(k, a, pt, w);
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) acc += w[j] * traj.values[j];
    out.values[k] = scale * acc;
  }
  return out;
}

/// Fractional integral associated with the nonsingular-kernel derivative:
/// (1-alpha)/B(alpha) * omega + alpha/B(alpha) * RL integral of omega.
[[nodiscard]] inline Trajectory ab_integral(const Trajectory& traj,
                                            FractionalOrder alpha,
                                            const Normalization& B) {
  Trajectory rl = rl_integral(traj, alpha);
  const double a = alpha.alpha;
  const double bv = B.value(a);
  detail::require(bv > 0.0, ErrorCode::DomainError,
                  "ab_integral: B(alpha) must be positive");
  Trajectory out{traj.grid, std::vector<double>(traj.grid.n_nodes)};
  for (int k = 0; k < traj.grid.n_nodes; ++k)
    out.values[k] = (1.0 - a) / bv * traj.values[k] + a / bv * rl.values[k];
  return out;
}

/// Left fractional derivative with Mittag-Leffler kernel,
///   B(alpha)/(1-alpha) int_0^tau E_alpha(-alpha/(1-alpha) (tau-sigma)^alpha)
///     omega'(sigma) dsigma,
/// by composite trapezoid on the nodes: the kernel is smooth with values in
/// (0, 1], so no product integration is needed. Node 0 is exactly 0.
[[nodiscard]] inline Trajectory abc_derivative(const DifferentiableInput& input,
                                               FractionalOrder alpha,
                                               const Normalization& B,
                                               const UniformGrid& grid) {
  alpha.validate();
  grid.validate();
  const double a = alpha.alpha;
  const double bv = B.value(a);
  detail::require(bv > 0.0, ErrorCode::DomainError,
                  "abc_derivative: B(alpha) must be positive");
  const int n = grid.n_nodes;
  const double h = grid.step_h;
  const double lam = a / (1.0 - a);
  const std::vector<double> g = detail::derivative_samples(input, grid);
  std::vector<double> kernel(n);
  for (int i = 0; i < n; ++i)
    kernel[i] = ml1(a, -lam * std::pow(i * h, a));
  Trajectory out{grid, std::vector<double>(n, 0.0)};
  const double front = bv / (1.0 - a) * h;
  for (int k = 1; k < n; ++k) {
    double acc = 0.5 * (kernel[k] * g[0] + kernel[0] * g[k]);
    for (int i = 1; i < k; ++i) acc += kernel[k - i] * g[i];
    out.values[k] = front * acc;
  }
  return out;
}

/// Evaluates the closed-form candidate
///   B(alpha)/(1-alpha) * tau^{beta-1} * E^{1+sigma}_{alpha,beta}(lambda tau^alpha)
/// at the one rate lambda = -alpha/(1-alpha) where the candidate matches the
/// quadrature operator on the power family (checked by
/// prabhakar_identity_discrepancy for any other lambda).
[[nodiscard]] inline double prabhakar_derivative_closed_form(
    FractionalOrder alpha, double beta, double sigma, const Normalization& B,
    double tau) {
  alpha.validate();
  detail::require(std::isfinite(beta) && beta >= 1.0, ErrorCode::DomainError,
                  "prabhakar_derivative_closed_form: beta must be >= 1");
  detail::require(std::isfinite(sigma) && sigma >= 0.0, ErrorCode::DomainError,
                  "prabhakar_derivative_closed_form: sigma must be >= 0");
  detail::require(std::isfinite(tau) && tau >= 0.0, ErrorCode::DomainError,
                  "prabhakar_derivative_closed_form: tau must be >= 0");
  const double a = alpha.alpha;
  const double bv = B.value(a);
  const double lam = -a / (1.0 - a);
  return bv / (1.0 - a) * std::pow(tau, beta - 1.0) *
         ml3({a, beta, 1.0 + sigma}, lam * std::pow(tau, a));
}

/// Pointwise gap between the quadrature derivative of
/// tau^{beta-1} E^sigma_{alpha,beta}(lambda tau^alpha) and the closed-form
/// candidate at the same lambda. Needs beta >= 2 so the input has a bounded
/// derivative at the origin (d/dtau drops beta by one in the second slot).
[[nodiscard]] inline Trajectory prabhakar_identity_discrepancy(
    FractionalOrder alpha, double beta, double sigma, double lambda,
    const Normalization& B, const UniformGrid& grid) {
  alpha.validate();
  grid.validate();
  detail::require(std::isfinite(beta) && beta >= 2.0, ErrorCode::DomainError,
                  "prabhakar_identity_discrepancy: beta must be >= 2");
  detail::require(std::isfinite(sigma) && sigma >= 0.0, ErrorCode::DomainError,
                  "prabhakar_identity_discrepancy: sigma must be >= 0");
  const double a = alpha.alpha;
  const double bv = B.value(a);
  DifferentiableInput input;
  input.value_fn = [a, beta, sigma, lambda](double t) {
    return std::pow(t, beta - 1.0) *
           ml3({a, beta, sigma}, lambda * std::pow(t, a));
  };
  input.derivative_fn = [a, beta, sigma, lambda](double t) {
    return std::pow(t, beta - 2.0) *
           ml3({a, beta - 1.0, sigma}, lambda * std::pow(t, a));
  };
  Trajectory quad = abc_derivative(input, alpha, B, grid);
  Trajectory out{grid, std::vector<double>(grid.n_nodes)};
  for (int k = 0; k < grid.n_nodes; ++k) {
    const double t = grid.node(k);
    const double closed = bv / (1.0 - a) * std::pow(t, beta - 1.0) *
                          ml3({a, beta, 1.0 + sigma}, lambda * std::pow(t, a));
    out.values[k] = std::abs(quad.values[k] - closed);
  }
  return out;
}

}  // namespace abcfrac
