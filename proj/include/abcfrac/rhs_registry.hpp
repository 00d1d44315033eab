#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "abcfrac/errors.hpp"
#include "abcfrac/solver.hpp"

namespace abcfrac {

/// Parameters for a registry right-hand side: free coefficients plus the box
/// context the metadata bounds are computed over.
struct RhsSpec {
  std::string name;
  std::map<std::string, double> params;
  double omega0 = 0.0;
  double horizon_T = 1.0;
  double box_halfwidth_b = 1.0;
};

namespace detail {

inline double spec_param(const RhsSpec& spec, const std::string& key,
                         double fallback) {
  const auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

inline void reject_unknown_params(const RhsSpec& spec,
                                  std::initializer_list<const char*> known) {
  for (const auto& [key, value] : spec.params) {
    (void)value;
    const bool ok = std::any_of(known.begin(), known.end(),
                                [&key](const char* k) { return key == k; });
    require(ok, ErrorCode::DomainError,
            "rhs '" + spec.name + "': unknown parameter '" + key + "'");
  }
}

}  // namespace detail

/// Names accepted by make_registry_rhs, in registry order.
[[nodiscard]] inline std::vector<std::string> registry_names() {
  return {"zero", "linear_tau", "linear_omega", "logistic", "tau_cos_omega"};
}

/// Builds a named right-hand side with metadata (Lipschitz constants and the
/// rectangle bound M) computed analytically over
/// [0, horizon_T] x [omega0 - b, omega0 + b], so downstream hypothesis checks
/// see honest constants rather than placeholders.
[[nodiscard]] inline RhsFunction make_registry_rhs(const RhsSpec& spec) {
  detail::require(std::isfinite(spec.horizon_T) && spec.horizon_T > 0.0,
                  ErrorCode::DomainError,
                  "make_registry_rhs: horizon_T must be positive");
  detail::require(
      std::isfinite(spec.box_halfwidth_b) && spec.box_halfwidth_b > 0.0,
      ErrorCode::DomainError,
      "make_registry_rhs: box_halfwidth_b must be positive");
  detail::require(std::isfinite(spec.omega0), ErrorCode::DomainError,
                  "make_registry_rhs: omega0 must be finite");
  const double T = spec.horizon_T;
  const double lo = spec.omega0 - spec.box_halfwidth_b;
  const double hi = spec.omega0 + spec.box_halfwidth_b;
  const double abs_omega = std::max(std::abs(lo), std::abs(hi));

  RhsFunction rhs;
  rhs.name = spec.name;
  rhs.box_halfwidth_b = spec.box_halfwidth_b;

  if (spec.name == "zero") {
    detail::reject_unknown_params(spec, {});
    rhs.eval = [](double, double) { return 0.0; };
    rhs.lipschitz_tau = 0.0;
    rhs.lipschitz_omega = 0.0;
    rhs.bound_M = 1e-12;  // validate() needs M > 0; any positive M bounds 0
    return rhs;
  }
  if (spec.name == "linear_tau") {
    detail::reject_unknown_params(spec, {"scale"});
    const double c = detail::spec_param(spec, "scale", 1.0);
    rhs.eval = [c](double t, double) { return c * t; };
    rhs.lipschitz_tau = std::abs(c);
    rhs.lipschitz_omega = 0.0;
    rhs.bound_M = std::max(std::abs(c) * T, 1e-12);
    return rhs;
  }
  if (spec.name == "linear_omega") {
    detail::reject_unknown_params(spec, {"rate"});
    const double r = detail::spec_param(spec, "rate", -0.5);
    rhs.eval = [r](double, double o) { return r * o; };
    rhs.lipschitz_tau = 0.0;
    rhs.lipschitz_omega = std::abs(r);
    rhs.bound_M = std::max(std::abs(r) * abs_omega, 1e-12);
    return rhs;
  }
  if (spec.name == "logistic") {
    detail::reject_unknown_params(spec, {"rate", "capacity"});
    const double r = detail::spec_param(spec, "rate", 1.0);
    const double K = detail::spec_param(spec, "capacity", 1.0);
    detail::require(std::isfinite(K) && K != 0.0, ErrorCode::DomainError,
                    "rhs 'logistic': capacity must be nonzero");
    rhs.eval = [r, K](double, double o) { return r * o * (1.0 - o / K); };
    // |f| on the omega interval: |o - o^2/K| is extremal at the interval ends
    // or at the parabola vertex o = K/2 when the box contains it.
    double shape = std::max(std::abs(lo - lo * lo / K),
                            std::abs(hi - hi * hi / K));
    if (lo < K / 2.0 && K / 2.0 < hi) shape = std::max(shape, std::abs(K / 4.0));
    rhs.lipschitz_tau = 0.0;
    rhs.lipschitz_omega =
        std::abs(r) * std::max(std::abs(1.0 - 2.0 * lo / K),
                               std::abs(1.0 - 2.0 * hi / K));
    rhs.bound_M = std::max(std::abs(r) * shape, 1e-12);
    return rhs;
  }
  if (spec.name == "tau_cos_omega") {
    detail::reject_unknown_params(spec, {"scale"});
    const double c = detail::spec_param(spec, "scale", 1.0);
    rhs.eval = [c](double t, double o) { return c * t * std::cos(o); };
    rhs.lipschitz_tau = std::abs(c);
    rhs.lipschitz_omega = std::abs(c) * T;
    rhs.bound_M = std::max(std::abs(c) * T, 1e-12);
    return rhs;
  }
  detail::fail(ErrorCode::DomainError,
               "make_registry_rhs: unknown rhs name '" + spec.name + "'");
}

}  // namespace abcfrac
