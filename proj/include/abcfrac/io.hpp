#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "abcfrac/errors.hpp"
#include "abcfrac/grid.hpp"

namespace abcfrac {

namespace detail {

inline std::string format_g12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

inline std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

inline double parse_double(const std::string& token, const std::string& what) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &pos);
  } catch (const std::exception&) {
    fail(ErrorCode::DomainError, "csv: " + what + " is not a number: '" +
                                     token + "'");
  }
  require(pos == token.size(), ErrorCode::DomainError,
          "csv: trailing characters after " + what + ": '" + token + "'");
  require(std::isfinite(value), ErrorCode::DomainError,
          "csv: " + what + " must be finite");
  return value;
}

}  // namespace detail

/// Writes the fixed two-column schema: `tau,value` header, %.12g rows.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  traj.validate();
  out << "tau,value\n";
  for (int k = 0; k < traj.grid.n_nodes; ++k)
    out << detail::format_g12(traj.grid.node(k)) << ','
        << detail::format_g12(traj.values[k]) << '\n';
}

/// Reads the two-column schema back into a Trajectory. The tau column must
/// start at 0 and be uniformly spaced (within round-trip formatting noise);
/// anything else is a DomainError.
[[nodiscard]] inline Trajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  detail::require(static_cast<bool>(std::getline(in, line)),
                  ErrorCode::DomainError, "csv: empty input");
  detail::require(detail::strip_cr(line) == "tau,value", ErrorCode::DomainError,
                  "csv: first line must be the header 'tau,value'");
  std::vector<double> taus, values;
  while (std::getline(in, line)) {
    line = detail::strip_cr(line);
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    detail::require(comma != std::string::npos &&
                        line.find(',', comma + 1) == std::string::npos,
                    ErrorCode::DomainError,
                    "csv: each row must have exactly two columns");
    taus.push_back(detail::parse_double(line.substr(0, comma), "tau"));
    values.push_back(detail::parse_double(line.substr(comma + 1), "value"));
  }
  detail::require(taus.size() >= 2, ErrorCode::DomainError,
                  "csv: need at least two rows");
  detail::require(std::abs(taus.front()) <= 1e-12, ErrorCode::DomainError,
                  "csv: tau column must start at 0");
  const int n = static_cast<int>(taus.size());
  const double h = taus.back() / (n - 1);
  detail::require(std::isfinite(h) && h > 0.0, ErrorCode::DomainError,
                  "csv: tau column must be increasing");
  for (int k = 0; k < n; ++k)
    detail::require(std::abs(taus[k] - k * h) <=
                        1e-5 * h + 1e-9 * std::abs(taus[k]),
                    ErrorCode::DomainError,
                    "csv: tau column must be uniformly spaced");
  Trajectory traj{UniformGrid{h, n}, std::move(values)};
  traj.validate();
  return traj;
}

}  // namespace abcfrac
