#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "abcfrac/errors.hpp"

namespace abcfrac {

/// Order of the fractional operators. All operators require 0 < alpha < 1.
struct FractionalOrder {
  double alpha = 0.5;

  void validate() const {
    detail::require(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0,
                    ErrorCode::DomainError,
                    "FractionalOrder: alpha must lie strictly in (0, 1)");
  }
};

/// Equispaced nodes k*step_h for k = 0..n_nodes-1, anchored at the origin.
struct UniformGrid {
  double step_h = 1e-2;
  int n_nodes = 101;

  void validate() const {
    detail::require(std::isfinite(step_h) && step_h > 0.0, ErrorCode::DomainError,
                    "UniformGrid: step_h must be positive");
    detail::require(n_nodes >= 2, ErrorCode::DomainError,
                    "UniformGrid: need at least two nodes");
  }

  [[nodiscard]] double node(int k) const { return k * step_h; }
  [[nodiscard]] double horizon() const { return (n_nodes - 1) * step_h; }
};

/// A scalar function of time sampled on a uniform grid. Immutable by
/// convention once built.
struct Trajectory {
  UniformGrid grid;
  std::vector<double> values;

  void validate() const {
    grid.validate();
    detail::require(static_cast<int>(values.size()) == grid.n_nodes,
                    ErrorCode::DomainError,
                    "Trajectory: values length must match n_nodes");
    for (double v : values)
      detail::require(std::isfinite(v), ErrorCode::DomainError,
                      "Trajectory: values must be finite");
  }
};

/// Callable input with an optional exact derivative. When the derivative is
/// absent it is approximated on the grid by second-order differences.
struct DifferentiableInput {
  std::function<double(double)> value_fn;
  std::function<double(double)> derivative_fn;  // may be empty

  [[nodiscard]] bool has_derivative() const {
    return static_cast<bool>(derivative_fn);
  }
};

namespace detail {

/// Derivative samples at the grid nodes: exact when supplied, otherwise
/// central differences with one-sided second-order stencils at the ends.
inline std::vector<double> derivative_samples(const DifferentiableInput& input,
                                              const UniformGrid& grid) {
  const int n = grid.n_nodes;
  std::vector<double> g(n);
  if (input.has_derivative()) {
    for (int k = 0; k < n; ++k) g[k] = input.derivative_fn(grid.node(k));
    return g;
  }
  require(n >= 3, ErrorCode::DerivativeUnavailable,
          "finite-difference fallback needs at least three nodes");
  const double h = grid.step_h;
  std::vector<double> v(n);
  for (int k = 0; k < n; ++k) v[k] = input.value_fn(grid.node(k));
  g[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  for (int k = 1; k + 1 < n; ++k) g[k] = (v[k + 1] - v[k - 1]) / (2.0 * h);
  g[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
  return g;
}

/// View a sampled trajectory as a callable input (linear interpolation
/// between nodes; derivative left to the finite-difference fallback).
inline DifferentiableInput as_input(const Trajectory& traj) {
  const UniformGrid grid = traj.grid;
  const std::vector<double> vals = traj.values;
  DifferentiableInput input;
  input.value_fn = [grid, vals](double t) {
    const int last = grid.n_nodes - 1;
    if (t <= 0.0) return vals.front();
    if (t >= grid.horizon()) return vals.back();
    const double s = t / grid.step_h;
    const int i = std::min(static_cast<int>(s), last - 1);
    const double w = s - i;
    return vals[i] * (1.0 - w) + vals[i + 1] * w;
  };
  return input;
}

}  // namespace detail

}  // namespace abcfrac
