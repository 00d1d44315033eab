#pragma once

#include <cmath>
#include <functional>
#include <utility>

#include "abcfrac/errors.hpp"

namespace abcfrac {

/// Normalization weight B(alpha) of the fractional operators. Any admissible
/// choice satisfies B(0) = B(1) = 1 and stays positive in between.
struct Normalization {
  enum class Kind { ConstantOne, AlphaBlend, Custom };

  Kind kind = Kind::ConstantOne;
  std::function<double(double)> custom_eval;

  [[nodiscard]] static Normalization constant_one() { return {}; }

  /// B(alpha) = 1 - alpha + alpha / Gamma(alpha), a common literature choice.
  [[nodiscard]] static Normalization alpha_blend() {
    Normalization n;
    n.kind = Kind::AlphaBlend;
    return n;
  }

  /// Wraps a caller-supplied B. Endpoint and positivity requirements are
  /// checked on a coarse grid at construction.
  [[nodiscard]] static Normalization custom(std::function<double(double)> eval) {
    detail::require(static_cast<bool>(eval), ErrorCode::DomainError,
                    "Normalization: custom evaluator must be callable");
    Normalization n;
    n.kind = Kind::Custom;
    n.custom_eval = std::move(eval);
    detail::require(std::abs(n.value(0.0) - 1.0) <= 1e-12 &&
                        std::abs(n.value(1.0) - 1.0) <= 1e-12,
                    ErrorCode::DomainError,
                    "Normalization: custom B must satisfy B(0) = B(1) = 1");
    for (int i = 0; i <= 20; ++i)
      detail::require(n.value(i / 20.0) > 0.0, ErrorCode::DomainError,
                      "Normalization: custom B must stay positive on [0, 1]");
    return n;
  }

  [[nodiscard]] double value(double alpha) const {
    switch (kind) {
      case Kind::ConstantOne:
        return 1.0;
      case Kind::AlphaBlend:
        // alpha / Gamma(alpha) -> 0 as alpha -> 0, so both endpoints hit 1
        return alpha <= 0.0 ? 1.0 : 1.0 - alpha + alpha / std::tgamma(alpha);
      case Kind::Custom:
        return custom_eval(alpha);
    }
    return 1.0;
  }
};

}  // namespace abcfrac
