#pragma once

#include <stdexcept>
#include <string>

namespace abcfrac {

enum class ErrorCode {
  DomainError,
  NonConvergence,
  QuadratureFailure,
  DerivativeUnavailable,
  ContractionViolation,
  NoConvergence,
  ConsistencyError,
  HypothesisViolation,
  PreconditionUnmet,
  DominationFailure,
  MajorantBound,
};

/// Stable machine-readable identifier, used verbatim by the CLI error line.
[[nodiscard]] inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::DomainError: return "domain_error";
    case ErrorCode::NonConvergence: return "non_convergence";
    case ErrorCode::QuadratureFailure: return "quadrature_failure";
    case ErrorCode::DerivativeUnavailable: return "derivative_unavailable";
    case ErrorCode::ContractionViolation: return "contraction_violation";
    case ErrorCode::NoConvergence: return "no_convergence";
    case ErrorCode::ConsistencyError: return "consistency_error";
    case ErrorCode::HypothesisViolation: return "hypothesis_violation";
    case ErrorCode::PreconditionUnmet: return "precondition_unmet";
    case ErrorCode::DominationFailure: return "domination_failure";
    case ErrorCode::MajorantBound: return "majorant_bound";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }
  [[nodiscard]] const char* code_name() const noexcept { return error_code_name(code_); }

 private:
  ErrorCode code_;
};

namespace detail {

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool ok, ErrorCode code, const std::string& message) {
  if (!ok) fail(code, message);
}

}  // namespace detail

}  // namespace abcfrac
