#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "abcfrac/inequality.hpp"

using namespace abcfrac;
using Catch::Matchers::WithinAbs;

namespace {

auto has_code(ErrorCode c) {
  return Catch::Matchers::Predicate<Error>(
      [c](const Error& e) { return e.code() == c; });
}

DifferentiableInput value_only(std::function<double(double)> f) {
  DifferentiableInput in;
  in.value_fn = std::move(f);
  return in;
}

DifferentiableInput with_slope(std::function<double(double)> f,
                               std::function<double(double)> df) {
  DifferentiableInput in;
  in.value_fn = std::move(f);
  in.derivative_fn = std::move(df);
  return in;
}

UniformGrid grid_on(double horizon, double h) {
  const int n = int(std::lround(horizon / h));
  return UniformGrid{horizon / n, n + 1};
}

bool report_invariant_holds(const PropertyReport& r) {
  return r.passed == (r.worst_violation <= r.tolerance_used);
}

}  // namespace

TEST_CASE("zero-crossing slope checks accept touching trajectories",
          "[inequality]") {
  const FractionalOrder alpha{0.5};
  const Normalization B = Normalization::alpha_blend();
  const UniformGrid grid = grid_on(2.0, 1e-2);

  SECTION("a ramp crossing zero from below has nonnegative slope there") {
    const PropertyReport r = abcfrac::check_zero_crossing_max(
        with_slope([](double t) { return t - 1.0; },
                   [](double) { return 1.0; }),
        1.0, alpha, B, grid);
    CHECK(r.passed);
    CHECK(r.property_name == "zero_crossing_max");
    CHECK(r.violation_location == 1.0);
    CHECK_THAT(r.tolerance_used, WithinAbs(0.1, 1e-15));
    CHECK(r.worst_violation < 0.0);  // slope is strictly positive here
    CHECK(report_invariant_holds(r));
  }

  SECTION("the mirrored ramp passes the dual check") {
    const PropertyReport r = abcfrac::check_zero_crossing_min(
        with_slope([](double t) { return 1.0 - t; },
                   [](double) { return -1.0; }),
        1.0, alpha, B, grid);
    CHECK(r.passed);
    CHECK(r.worst_violation < 0.0);
    CHECK(report_invariant_holds(r));
  }

  SECTION("negating the input swaps the two checks exactly") {
    auto m = [](double t) { return 1.0 - t; };
    const PropertyReport rmin =
        abcfrac::check_zero_crossing_min(value_only(m), 1.0, alpha, B, grid);
    const PropertyReport rmax = abcfrac::check_zero_crossing_max(
        value_only([m](double t) { return -m(t); }), 1.0, alpha, B, grid);
    CHECK_THAT(rmin.worst_violation,
               WithinAbs(rmax.worst_violation, 1e-15));
    CHECK(rmin.violation_location == rmax.violation_location);
  }

  SECTION("a trajectory that misses zero at the target is rejected") {
    REQUIRE_THROWS_MATCHES(
        abcfrac::check_zero_crossing_max(
            value_only([](double t) { return 0.5 - t; }), 1.0, alpha, B, grid),
        Error, has_code(ErrorCode::PreconditionUnmet));
    REQUIRE_THROWS_MATCHES(
        abcfrac::check_zero_crossing_min(
            value_only([](double t) { return t - 0.5; }), 1.0, alpha, B, grid),
        Error, has_code(ErrorCode::PreconditionUnmet));
  }

  SECTION("a sign violation before the target is rejected") {
    // Positive bump before tau0 breaks the m <= 0 hypothesis even though
    // m(tau0) = 0.
    REQUIRE_THROWS_MATCHES(
        abcfrac::check_zero_crossing_max(
            value_only([](double t) { return std::sin(3.1415926535897932 * t); }),
            1.0, alpha, B, grid),
        Error, has_code(ErrorCode::PreconditionUnmet));
  }

  SECTION("off-grid and boundary targets are domain errors") {
    auto ramp = value_only([](double t) { return t - 1.0; });
    REQUIRE_THROWS_MATCHES(
        abcfrac::check_zero_crossing_max(ramp, 1.0037, alpha, B, grid), Error,
        has_code(ErrorCode::DomainError));
    REQUIRE_THROWS_MATCHES(
        abcfrac::check_zero_crossing_max(ramp, 0.0, alpha, B, grid), Error,
        has_code(ErrorCode::DomainError));
    REQUIRE_THROWS_MATCHES(
        abcfrac::check_zero_crossing_max(ramp, 5.0, alpha, B, grid), Error,
        has_code(ErrorCode::DomainError));
  }
}

TEST_CASE("extremum slope checks locate the grid extremum deterministically",
          "[inequality]") {
  const FractionalOrder alpha{0.5};
  const Normalization B = Normalization::alpha_blend();
  const UniformGrid grid = grid_on(1.0, 1e-2);
  const double half_pi = 1.5707963267948966;

  SECTION("rising sine peaks at the right endpoint") {
    const PropertyReport r = abcfrac::check_max_point_estimate(
        with_slope([half_pi](double t) { return std::sin(half_pi * t); },
                   [half_pi](double t) {
                     return half_pi * std::cos(half_pi * t);
                   }),
        alpha, B, grid);
    CHECK(r.passed);
    CHECK(r.property_name == "max_point_slope");
    CHECK(r.violation_location == 1.0);
    CHECK(report_invariant_holds(r));
  }

  SECTION("falling cosine bottoms out at the right endpoint") {
    const PropertyReport r = abcfrac::check_min_point_estimate(
        with_slope([half_pi](double t) { return std::cos(half_pi * t); },
                   [half_pi](double t) {
                     return -half_pi * std::sin(half_pi * t);
                   }),
        alpha, B, grid);
    CHECK(r.passed);
    CHECK(r.property_name == "min_point_slope");
    CHECK(r.violation_location == 1.0);
    CHECK(report_invariant_holds(r));
  }

  SECTION("ties break toward the smallest node") {
    const PropertyReport rmax = abcfrac::check_max_point_estimate(
        with_slope([](double) { return 1.0; }, [](double) { return 0.0; }),
        alpha, B, grid);
    const PropertyReport rmin = abcfrac::check_min_point_estimate(
        with_slope([](double) { return 1.0; }, [](double) { return 0.0; }),
        alpha, B, grid);
    CHECK(rmax.violation_location == 0.0);
    CHECK(rmin.violation_location == 0.0);
    CHECK(rmax.passed);
    CHECK(rmin.passed);
  }

  SECTION("an interior peak is found at its node") {
    // sin(pi t) peaks at t = 0.5, a grid node.
    const PropertyReport r = abcfrac::check_max_point_estimate(
        value_only([](double t) { return std::sin(3.1415926535897932 * t); }),
        alpha, B, grid);
    CHECK(r.passed);
    CHECK_THAT(r.violation_location, WithinAbs(0.5, 1e-12));
  }
}

TEST_CASE("strict comparison demands margins and ordered starts",
          "[inequality]") {
  const FractionalOrder alpha{0.5};
  const Normalization B = Normalization::alpha_blend();
  const UniformGrid grid = grid_on(1.0, 1e-2);

  ComparisonPair pair;
  pair.lower_v = with_slope([](double) { return 0.0; },
                            [](double) { return 0.0; });
  pair.upper_w = with_slope([](double t) { return 2.0 + t; },
                            [](double) { return 1.0; });
  pair.rhs_f.eval = [](double t, double o) { return t + 1.0 - o; };
  pair.rhs_f.lipschitz_tau = 1.0;
  pair.rhs_f.lipschitz_omega = 1.0;
  pair.rhs_f.bound_M = 6.0;
  pair.rhs_f.box_halfwidth_b = 4.0;
  pair.strict_side = StrictSide::LowerStrict;

  SECTION("a well-separated pair passes with a negative tolerance") {
    const PropertyReport r =
        abcfrac::check_strict_comparison(pair, alpha, B, grid);
    CHECK(r.passed);
    CHECK(r.property_name == "comparison_strict");
    CHECK_THAT(r.tolerance_used, WithinAbs(-1e-2, 1e-15));
    CHECK_THAT(r.worst_violation, WithinAbs(-2.0, 1e-12));
    CHECK(r.violation_location == 0.0);
    CHECK(report_invariant_holds(r));
  }

  SECTION("equal starting values are rejected") {
    pair.upper_w = with_slope([](double t) { return t; },
                              [](double) { return 1.0; });
    REQUIRE_THROWS_MATCHES(
        abcfrac::check_strict_comparison(pair, alpha, B, grid), Error,
        has_code(ErrorCode::PreconditionUnmet));
  }

  SECTION("an undeclared strict side is rejected") {
    pair.strict_side = StrictSide::None;
    REQUIRE_THROWS_MATCHES(
        abcfrac::check_strict_comparison(pair, alpha, B, grid), Error,
        has_code(ErrorCode::PreconditionUnmet));
  }

  SECTION("a strict declaration without an actual margin is rejected") {
    // With the upper side declared strict, D w >= f(tau, w) + h must hold
    // away from zero; here D w - f(tau, w) -> 1 only through the +1 offset
    // removed below, so the margin fails.
    pair.strict_side = StrictSide::UpperStrict;
    pair.rhs_f.eval = [](double t, double o) { return t + 4.0 - o; };
    REQUIRE_THROWS_MATCHES(
        abcfrac::check_strict_comparison(pair, alpha, B, grid), Error,
        has_code(ErrorCode::PreconditionUnmet));
  }
}

TEST_CASE("nonstrict comparison enforces the one-sided constant range",
          "[inequality]") {
  const FractionalOrder alpha{0.5};
  const Normalization B = Normalization::alpha_blend();
  const UniformGrid grid = grid_on(1.0, 1e-2);
  const double a = alpha.alpha;
  const double rate = B.value(a) / (1.0 - a);
  const double c = 0.5 * rate;

  ComparisonPair pair;
  pair.lower_v = with_slope([](double) { return 0.0; },
                            [](double) { return 0.0; });
  pair.upper_w = with_slope([](double t) { return 1.0 + t; },
                            [](double) { return 1.0; });
  pair.rhs_f.eval = [c](double, double o) { return -c * o; };
  pair.rhs_f.lipschitz_omega = c;
  pair.rhs_f.bound_M = 4.0 * c + 1.0;
  pair.rhs_f.box_halfwidth_b = 4.0;

  SECTION("a decaying forcing passes with tolerance h") {
    const PropertyReport r =
        abcfrac::check_nonstrict_comparison(pair, c, alpha, B, grid);
    CHECK(r.passed);
    CHECK(r.property_name == "comparison_nonstrict");
    CHECK_THAT(r.tolerance_used, WithinAbs(1e-2, 1e-15));
    CHECK_THAT(r.worst_violation, WithinAbs(-1.0, 1e-12));
    CHECK(r.notes.find("inflation") != std::string::npos);
    CHECK(r.notes.find("FAILED") == std::string::npos);
    CHECK(report_invariant_holds(r));
  }

  SECTION("constants at or beyond the admissible edge are rejected") {
    REQUIRE_THROWS_MATCHES(
        abcfrac::check_nonstrict_comparison(pair, rate, alpha, B, grid), Error,
        has_code(ErrorCode::HypothesisViolation));
    REQUIRE_THROWS_MATCHES(
        abcfrac::check_nonstrict_comparison(pair, 0.0, alpha, B, grid), Error,
        has_code(ErrorCode::HypothesisViolation));
    REQUIRE_THROWS_MATCHES(
        abcfrac::check_nonstrict_comparison(pair, -1.0, alpha, B, grid), Error,
        has_code(ErrorCode::HypothesisViolation));
  }

  SECTION("the sign-flipped forcing fails its differential hypothesis") {
    pair.rhs_f.eval = [c](double, double o) { return c * o; };
    REQUIRE_THROWS_MATCHES(
        abcfrac::check_nonstrict_comparison(pair, c, alpha, B, grid), Error,
        has_code(ErrorCode::PreconditionUnmet));
  }

  SECTION("a forcing steeper than its declared constant is caught") {
    pair.rhs_f.eval = [c](double, double o) { return -c * o + 3.0 * c * o; };
    REQUIRE_THROWS_MATCHES(
        abcfrac::check_nonstrict_comparison(pair, c, alpha, B, grid), Error,
        has_code(ErrorCode::PreconditionUnmet));
  }
}

TEST_CASE("inflation replay catches slack-only upper candidates",
          "[inequality]") {
  // w = 1 with f = 0.05 omega satisfies D w >= f(tau, w) only thanks to the
  // sampling slack (0 >= 0.05 - 0.1); the lifted candidate then fails its
  // strict inequality near tau = 0, and the report must fold that failure in
  // while keeping the passed <=> worst <= tolerance invariant.
  const FractionalOrder alpha{0.5};
  const Normalization B = Normalization::alpha_blend();
  const UniformGrid grid = grid_on(1.0, 1e-2);

  ComparisonPair pair;
  pair.lower_v = with_slope([](double) { return 0.0; },
                            [](double) { return 0.0; });
  pair.upper_w = with_slope([](double) { return 1.0; },
                            [](double) { return 0.0; });
  pair.rhs_f.eval = [](double, double o) { return 0.05 * o; };
  pair.rhs_f.lipschitz_omega = 0.05;
  pair.rhs_f.bound_M = 1.0;
  pair.rhs_f.box_halfwidth_b = 4.0;

  const PropertyReport r =
      abcfrac::check_nonstrict_comparison(pair, 0.05, alpha, B, grid);
  CHECK_FALSE(r.passed);
  CHECK(r.worst_violation > r.tolerance_used);
  CHECK(r.notes.find("inflation step FAILED") != std::string::npos);
  CHECK(r.violation_location > 0.0);
  CHECK(report_invariant_holds(r));
}

TEST_CASE("growth envelope bounds dominated trajectories", "[inequality]") {
  const FractionalOrder alpha{0.5};
  const double a = alpha.alpha;
  const UniformGrid grid = grid_on(1.0, 1e-2);

  SECTION("a damped multiple of the envelope stays inside it") {
    const double m0 = 2.0;
    std::vector<double> values(grid.n_nodes);
    for (int k = 0; k < grid.n_nodes; ++k) {
      const double t = grid.node(k);
      values[k] = m0 * abcfrac::ml1(a, std::pow(t, a)) * std::exp(-t);
    }
    const PropertyReport r =
        abcfrac::check_ml_growth_bound(Trajectory{grid, values}, m0, alpha);
    CHECK(r.passed);
    CHECK(r.property_name == "growth_ml_envelope");
    CHECK(r.worst_violation <= 0.0);
    CHECK(report_invariant_holds(r));
  }

  SECTION("a mismatched starting value is rejected") {
    const std::vector<double> flat(grid.n_nodes, 1.0);
    REQUIRE_THROWS_MATCHES(
        abcfrac::check_ml_growth_bound(Trajectory{grid, flat}, 2.0, alpha),
        Error, has_code(ErrorCode::PreconditionUnmet));
  }

  SECTION("an escaping trajectory fails the report without throwing") {
    std::vector<double> values(grid.n_nodes);
    for (int k = 0; k < grid.n_nodes; ++k) {
      const double t = grid.node(k);
      values[k] = abcfrac::ml1(a, std::pow(t, a)) + 2.0 * t;
    }
    const PropertyReport r =
        abcfrac::check_ml_growth_bound(Trajectory{grid, values}, 1.0, alpha);
    CHECK_FALSE(r.passed);
    CHECK_THAT(r.worst_violation, WithinAbs(2.0, 1e-12));
    CHECK(r.violation_location == 1.0);
    CHECK(report_invariant_holds(r));
  }
}

TEST_CASE("second-order kernel series dominates the first", "[inequality]") {
  const UniformGrid grid = grid_on(1.0, 1e-3);
  for (double a : {0.3, 0.5, 0.7}) {
    const PropertyReport r = abcfrac::check_prabhakar_growth_inequality(
        FractionalOrder{a}, grid);
    INFO("alpha = " << a);
    CHECK(r.passed);
    CHECK(r.property_name == "growth_prabhakar_dominance");
    CHECK(r.tolerance_used == 1e-12);
    // Equality holds at the origin, strict dominance after it.
    CHECK(r.worst_violation == 0.0);
    CHECK(r.violation_location == 0.0);
    CHECK(report_invariant_holds(r));
  }
}

TEST_CASE("periodic comparison reports but never gates", "[inequality]") {
  const FractionalOrder alpha{0.5};
  const Normalization B = Normalization::alpha_blend();
  const UniformGrid grid = grid_on(1.0, 1e-2);

  ComparisonPair pair;
  pair.lower_v = with_slope([](double) { return 0.0; },
                            [](double) { return 0.0; });
  pair.upper_w = with_slope([](double) { return 1.0; },
                            [](double) { return 0.0; });
  pair.rhs_f.eval = [](double, double o) { return -o; };
  pair.rhs_f.lipschitz_omega = 1.0;
  pair.rhs_f.bound_M = 2.0;
  pair.rhs_f.box_halfwidth_b = 2.0;

  SECTION("a monotone forcing with matched endpoints passes") {
    const PropertyReport r =
        abcfrac::check_periodic_comparison(pair, alpha, B, grid);
    CHECK(r.passed);
    CHECK(r.property_name == "periodic_comparison");
    CHECK(r.notes.rfind("EXPERIMENTAL", 0) == 0);
    CHECK_FALSE(abcfrac::report_gates(r));
    CHECK(report_invariant_holds(r));
  }

  SECTION("every other check gates") {
    const PropertyReport r = abcfrac::check_prabhakar_growth_inequality(
        alpha, grid);
    CHECK(abcfrac::report_gates(r));
  }

  SECTION("a forcing increasing in the state is rejected") {
    pair.rhs_f.eval = [](double, double o) { return o; };
    REQUIRE_THROWS_MATCHES(
        abcfrac::check_periodic_comparison(pair, alpha, B, grid), Error,
        has_code(ErrorCode::PreconditionUnmet));
  }

  SECTION("mismatched endpoint ordering is rejected") {
    pair.upper_w = with_slope([](double t) { return 1.0 + t; },
                              [](double) { return 1.0; });
    REQUIRE_THROWS_MATCHES(
        abcfrac::check_periodic_comparison(pair, alpha, B, grid), Error,
        has_code(ErrorCode::PreconditionUnmet));
  }
}

TEST_CASE("maximal domination bounds subsolutions by the upper envelope",
          "[inequality]") {
  const FractionalOrder alpha{0.5};
  const Normalization B = Normalization::alpha_blend();
  SolverConfig config;
  config.step_h = 1e-2;

  RhsFunction g;
  g.eval = [](double t, double u) { return t + 0.1 * u; };
  g.lipschitz_tau = 1.0;
  g.lipschitz_omega = 0.1;
  g.bound_M = 1.5;
  g.box_halfwidth_b = 2.0;

  SECTION("a solution of a smaller problem stays below the envelope") {
    IVProblem target;
    target.rhs.eval = [](double t, double o) { return t - 0.1 * o; };
    target.rhs.lipschitz_tau = 1.0;
    target.rhs.lipschitz_omega = 0.1;
    target.rhs.bound_M = 1.2;
    target.rhs.box_halfwidth_b = 1.0;
    target.omega0 = 0.0;
    target.horizon_T = 1.0;
    target.alpha = alpha;
    target.B = B;
    const Trajectory m = abcfrac::solve_ivp(target, config);
    const PropertyReport r = abcfrac::check_maximal_domination(
        abcfrac::detail::as_input(m), g, 0.5, alpha, B, config, 1.0);
    CHECK(r.passed);
    CHECK(r.property_name == "domination_maximal");
    CHECK(r.worst_violation < 0.0);
    CHECK(report_invariant_holds(r));
  }

  SECTION("a candidate starting above the envelope start is rejected") {
    REQUIRE_THROWS_MATCHES(
        abcfrac::check_maximal_domination(
            with_slope([](double) { return 1.0; }, [](double) { return 0.0; }),
            g, 0.5, alpha, B, config, 1.0),
        Error, has_code(ErrorCode::PreconditionUnmet));
  }

  SECTION("a candidate outrunning the majorant is rejected") {
    // D m of the steep ramp exceeds g(tau, m) well past the slack.
    REQUIRE_THROWS_MATCHES(
        abcfrac::check_maximal_domination(
            with_slope([](double t) { return 4.0 * t; },
                       [](double) { return 4.0; }),
            g, 0.5, alpha, B, config, 1.0),
        Error, has_code(ErrorCode::PreconditionUnmet));
  }
}

TEST_CASE("standard suite runs green, sorted, and deterministic",
          "[inequality][suite]") {
  const FractionalOrder alpha{0.5};
  const Normalization B = Normalization::alpha_blend();
  const std::vector<PropertyReport> reports =
      abcfrac::run_standard_suite(alpha, B, 1e-2);

  const std::vector<std::string> expected = {
      "comparison_nonstrict",      "comparison_strict",
      "domination_maximal",        "growth_ml_envelope",
      "growth_prabhakar_dominance", "max_point_slope",
      "min_point_slope",           "periodic_comparison",
      "zero_crossing_max",         "zero_crossing_min"};

  REQUIRE(reports.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    INFO("report " << i << ": " << reports[i].property_name);
    CHECK(reports[i].property_name == expected[i]);
    CHECK(reports[i].passed);
    CHECK(report_invariant_holds(reports[i]));
  }

  SECTION("exactly one report is exempt from gating") {
    int non_gating = 0;
    for (const PropertyReport& r : reports)
      if (!abcfrac::report_gates(r)) ++non_gating;
    CHECK(non_gating == 1);
  }

  SECTION("a second run reproduces every field exactly") {
    const std::vector<PropertyReport> again =
        abcfrac::run_standard_suite(alpha, B, 1e-2);
    REQUIRE(again.size() == reports.size());
    for (std::size_t i = 0; i < reports.size(); ++i) {
      CHECK(again[i].property_name == reports[i].property_name);
      CHECK(again[i].passed == reports[i].passed);
      CHECK(again[i].worst_violation == reports[i].worst_violation);
      CHECK(again[i].violation_location == reports[i].violation_location);
      CHECK(again[i].tolerance_used == reports[i].tolerance_used);
      CHECK(again[i].notes == reports[i].notes);
    }
  }

  SECTION("the suite runs green at other orders") {
    for (double a : {0.3, 0.7}) {
      const std::vector<PropertyReport> sweep =
          abcfrac::run_standard_suite(FractionalOrder{a}, B, 2e-2);
      REQUIRE(sweep.size() == expected.size());
      for (const PropertyReport& r : sweep) {
        INFO("alpha = " << a << ", report " << r.property_name);
        CHECK(r.passed);
        CHECK(report_invariant_holds(r));
      }
    }
  }

  SECTION("oversized steps are rejected") {
    REQUIRE_THROWS_MATCHES(abcfrac::run_standard_suite(alpha, B, 0.5), Error,
                           has_code(ErrorCode::DomainError));
  }
}

TEST_CASE("negative controls all trip their preconditions",
          "[inequality][suite]") {
  const FractionalOrder alpha{0.5};
  const Normalization B = Normalization::alpha_blend();
  const std::vector<abcfrac::NegativeControlOutcome> outcomes =
      abcfrac::run_negative_controls(alpha, B, 1e-2);

  const std::vector<std::string> expected = {
      "zero_crossing_max", "zero_crossing_min",  "comparison_strict",
      "comparison_nonstrict", "growth_ml_envelope", "periodic_comparison",
      "domination_maximal"};
  REQUIRE(outcomes.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    INFO("control " << outcomes[i].name);
    CHECK(outcomes[i].name == expected[i]);
    CHECK(outcomes[i].raised_precondition);
  }
}
