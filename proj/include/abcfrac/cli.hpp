#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "abcfrac/errors.hpp"
#include "abcfrac/grid.hpp"
#include "abcfrac/inequality.hpp"
#include "abcfrac/io.hpp"
#include "abcfrac/mittag_leffler.hpp"
#include "abcfrac/normalization.hpp"
#include "abcfrac/operators.hpp"
#include "abcfrac/rhs_registry.hpp"
#include "abcfrac/solver.hpp"

namespace abcfrac::cli {

enum class Subcommand { Ml, Deriv, Integ, Solve, Extremal, Continue, Interval,
                        Verify };

/// Parsed invocation shape. Kept independent of the parser so the input
/// requirements can be validated (and tested) as plain data.
struct CliConfig {
  Subcommand subcommand = Subcommand::Ml;
  std::optional<std::string> input_path;
  std::optional<std::string> output_path;
  std::vector<std::pair<std::string, std::string>> json_overrides;

  void validate() const {
    const bool needs_input =
        subcommand == Subcommand::Deriv || subcommand == Subcommand::Integ ||
        subcommand == Subcommand::Solve ||
        subcommand == Subcommand::Extremal ||
        subcommand == Subcommand::Continue;
    abcfrac::detail::require(
        !needs_input || input_path.has_value(), ErrorCode::DomainError,
        "CliConfig: this subcommand requires --input");
  }
};

namespace detail {

using Json = nlohmann::ordered_json;

inline Normalization parse_normalization(const std::string& name) {
  if (name == "unit") return Normalization::constant_one();
  if (name == "blend") return Normalization::alpha_blend();
  abcfrac::detail::fail(ErrorCode::DomainError,
                        "normalization must be 'unit' or 'blend', got '" +
                            name + "'");
}

inline double parse_number(const std::string& token,
                           const std::string& what) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &pos);
  } catch (const std::exception&) {
    abcfrac::detail::fail(ErrorCode::DomainError,
                          what + " is not a number: '" + token + "'");
  }
  abcfrac::detail::require(pos == token.size() && std::isfinite(value),
                           ErrorCode::DomainError,
                           what + " is not a finite number: '" + token + "'");
  return value;
}

inline std::pair<std::string, std::string> split_key_value(
    const std::string& kv, const std::string& what) {
  const std::size_t eq = kv.find('=');
  abcfrac::detail::require(eq != std::string::npos && eq > 0,
                           ErrorCode::DomainError,
                           what + " must look like key=value, got '" + kv +
                               "'");
  return {kv.substr(0, eq), kv.substr(eq + 1)};
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  abcfrac::detail::require(in.good(), ErrorCode::DomainError,
                           "cannot open input file: " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    abcfrac::detail::fail(ErrorCode::DomainError,
                          std::string("json parse failure: ") + e.what());
  }
}

inline void apply_overrides(
    Json& doc, const std::vector<std::pair<std::string, std::string>>& kvs) {
  for (const auto& [key, value] : kvs) {
    std::string pointer = "/" + key;
    for (char& c : pointer)
      if (c == '.') c = '/';
    Json parsed;
    try {
      parsed = Json::parse(value);
    } catch (const nlohmann::json::exception&) {
      parsed = value;  // bare words become strings
    }
    try {
      doc[Json::json_pointer(pointer)] = parsed;
    } catch (const nlohmann::json::exception& e) {
      abcfrac::detail::fail(ErrorCode::DomainError,
                            "cannot apply override '" + key +
                                "': " + e.what());
    }
  }
}

template <typename T>
T field_or(const Json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    abcfrac::detail::fail(ErrorCode::DomainError,
                          std::string("field '") + key + "': " + e.what());
  }
}

struct LoadedProblem {
  IVProblem problem;
  SolverConfig config;
  double box_b = 1.0;
};

/// Problem JSON schema:
///   {"rhs": {"name": ..., "params": {...}}, "omega0": 0, "horizon_T": 1,
///    "alpha": 0.5, "normalization": "unit"|"blend", "box_b": 1,
///    "solver": {"step_h": 0.01, "picard_tol": 1e-12, "picard_max_iter": 200,
///               "consistency": "warn"|"strict", "consistency_tol": 1e-10}}
/// Only rhs.name is required.
inline LoadedProblem problem_from_json(const Json& doc) {
  abcfrac::detail::require(doc.is_object(), ErrorCode::DomainError,
                           "problem spec must be a json object");
  abcfrac::detail::require(
      doc.contains("rhs") && doc.at("rhs").is_object() &&
          doc.at("rhs").contains("name"),
      ErrorCode::DomainError, "problem spec needs rhs.name");
  RhsSpec spec;
  try {
    spec.name = doc.at("rhs").at("name").get<std::string>();
    if (doc.at("rhs").contains("params")) {
      const Json& params = doc.at("rhs").at("params");
      abcfrac::detail::require(params.is_object(), ErrorCode::DomainError,
                               "rhs.params must be a json object");
      for (const auto& [k, v] : params.items())
        spec.params[k] = v.get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    abcfrac::detail::fail(ErrorCode::DomainError,
                          std::string("rhs spec: ") + e.what());
  }
  spec.omega0 = field_or(doc, "omega0", 0.0);
  spec.horizon_T = field_or(doc, "horizon_T", 1.0);
  spec.box_halfwidth_b = field_or(doc, "box_b", 1.0);

  LoadedProblem loaded;
  loaded.problem.rhs = make_registry_rhs(spec);
  loaded.problem.omega0 = spec.omega0;
  loaded.problem.horizon_T = spec.horizon_T;
  loaded.problem.alpha = FractionalOrder{field_or(doc, "alpha", 0.5)};
  loaded.problem.B = parse_normalization(
      field_or<std::string>(doc, "normalization", "unit"));
  loaded.box_b = spec.box_halfwidth_b;
  if (doc.contains("solver")) {
    const Json& s = doc.at("solver");
    abcfrac::detail::require(s.is_object(), ErrorCode::DomainError,
                             "solver section must be a json object");
    loaded.config.step_h = field_or(s, "step_h", loaded.config.step_h);
    loaded.config.picard_tol =
        field_or(s, "picard_tol", loaded.config.picard_tol);
    loaded.config.picard_max_iter =
        field_or(s, "picard_max_iter", loaded.config.picard_max_iter);
    const std::string mode = field_or<std::string>(s, "consistency", "warn");
    if (mode == "warn") {
      loaded.config.consistency_mode = ConsistencyMode::Warn;
    } else if (mode == "strict") {
      loaded.config.consistency_mode = ConsistencyMode::Strict;
    } else {
      abcfrac::detail::fail(ErrorCode::DomainError,
                            "solver.consistency must be 'warn' or 'strict'");
    }
    loaded.config.consistency_tol =
        field_or(s, "consistency_tol", loaded.config.consistency_tol);
  }
  return loaded;
}

inline Trajectory read_csv_file(const std::string& path) {
  std::ifstream in(path);
  abcfrac::detail::require(in.good(), ErrorCode::DomainError,
                           "cannot open input file: " + path);
  return read_trajectory_csv(in);
}

inline void emit_trajectory(const Trajectory& traj,
                            const std::optional<std::string>& path,
                            std::ostream& out) {
  if (path.has_value()) {
    std::ofstream f(*path);
    abcfrac::detail::require(f.good(), ErrorCode::DomainError,
                             "cannot open output file: " + *path);
    write_trajectory_csv(f, traj);
  } else {
    write_trajectory_csv(out, traj);
  }
}

inline Json report_to_json(const PropertyReport& r) {
  return Json{{"property_name", r.property_name},
              {"passed", r.passed},
              {"worst_violation", r.worst_violation},
              {"violation_location", r.violation_location},
              {"tolerance_used", r.tolerance_used},
              {"notes", r.notes}};
}

}  // namespace detail

/// Parses argv and dispatches. All user-facing text goes to `out`, warnings
/// and machine-parsable error lines to `err`. Exit codes: 0 success, 1
/// domain/hypothesis error, 2 verification failure, 64 usage error.
inline int run(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err) {
  CLI::App app{
      "fractional-calculus toolkit: Mittag-Leffler evaluation, "
      "nonsingular-kernel operators on tabulated data, IVP solvers, and an "
      "executable inequality suite",
      "abcfrac"};
  app.require_subcommand(1);

  double alpha_value = 0.5;
  double ml_z = 0.0, ml_beta = 1.0, ml_gamma = 1.0;
  std::string input_path, output_path, norm_name = "unit";
  std::vector<std::string> set_kvs;

  auto* ml_cmd = app.add_subcommand("ml", "evaluate Mittag-Leffler functions");
  ml_cmd->add_option("--alpha", alpha_value, "first parameter, alpha > 0")
      ->required();
  ml_cmd->add_option("--z", ml_z, "argument")->required();
  auto* beta_opt =
      ml_cmd->add_option("--beta", ml_beta, "second parameter (default 1)");
  ml_cmd->add_option("--gamma", ml_gamma, "third (Prabhakar) parameter")
      ->needs(beta_opt);

  auto* deriv_cmd = app.add_subcommand(
      "deriv", "fractional derivative of a tabulated trajectory");
  auto* integ_cmd = app.add_subcommand(
      "integ", "blended fractional integral of a tabulated trajectory");
  auto* solve_cmd =
      app.add_subcommand("solve", "solve an IVP from a json problem spec");
  auto* extremal_cmd = app.add_subcommand(
      "extremal", "two-sided extremal solutions of an IVP spec");
  auto* continue_cmd = app.add_subcommand(
      "continue", "window-by-window continuation under a majorant");
  auto* interval_cmd = app.add_subcommand(
      "interval", "guaranteed existence intervals and moduli");
  auto* verify_cmd = app.add_subcommand(
      "verify", "run the inequality suite and its negative controls");

  for (auto* cmd :
       {deriv_cmd, integ_cmd, solve_cmd, extremal_cmd, continue_cmd})
    cmd->add_option("--input", input_path,
                    "input file (csv trajectory or json problem spec)")
        ->required();
  for (auto* cmd :
       {deriv_cmd, integ_cmd, solve_cmd, extremal_cmd, continue_cmd})
    cmd->add_option("--output", output_path,
                    "output csv path (stdout when absent)");
  for (auto* cmd : {solve_cmd, extremal_cmd, continue_cmd})
    cmd->add_option("--set", set_kvs,
                    "json override as dotted.path=value (repeatable)");
  for (auto* cmd : {deriv_cmd, integ_cmd, interval_cmd, verify_cmd})
    cmd->add_option("--normalization", norm_name,
                    "normalization weight: unit (B = 1) or blend")
        ->check(CLI::IsMember({"unit", "blend"}));
  for (auto* cmd : {deriv_cmd, integ_cmd})
    cmd->add_option("--alpha", alpha_value, "order in (0, 1)")->required();

  double eps0 = 0.0, eps_factor = 0.5, stop_tol = 1e-6;
  std::string branch = "max";
  auto* eps0_opt = extremal_cmd->add_option(
      "--eps0", eps0, "initial perturbation size (default box_b / 4)");
  extremal_cmd->add_option("--factor", eps_factor,
                           "perturbation shrink factor in (0, 1)");
  extremal_cmd->add_option("--stop-tol", stop_tol,
                           "sup-distance convergence threshold");
  extremal_cmd->add_option("--branch", branch, "which trajectory to emit")
      ->check(CLI::IsMember({"max", "min"}));

  std::string majorant_name;
  std::vector<std::string> mparam_kvs;
  double u0 = 0.0, t_max = 0.0, mbox = 1.0;
  continue_cmd->add_option("--majorant", majorant_name,
                           "registry name of the majorant g")
      ->required();
  continue_cmd->add_option("--mparam", mparam_kvs,
                           "majorant parameter key=value (repeatable)");
  continue_cmd->add_option("--u0", u0, "majorant start, |omega0| < u0")
      ->required();
  auto* tmax_opt = continue_cmd->add_option(
      "--T-max", t_max, "continuation horizon (default: problem horizon)");
  continue_cmd->add_option("--mbox", mbox, "majorant box halfwidth");

  bool mode_local = false, mode_extremal = false, mode_equi = false;
  double int_M = 0.0, int_b = 0.0, int_T = 0.0;
  double eps_tilde = 0.0, int_L1 = 0.0, int_L2 = 0.0;
  auto* mode_group = interval_cmd->add_option_group("mode");
  mode_group->add_flag("--local", mode_local, "local existence interval");
  mode_group->add_flag("--extremal", mode_extremal,
                       "two-sided extremal existence interval");
  mode_group->add_flag("--equicontinuity", mode_equi,
                       "uniform equicontinuity modulus");
  mode_group->require_option(1);
  auto* alpha_opt =
      interval_cmd->add_option("--alpha", alpha_value, "order in (0, 1)")
          ->required();
  auto* m_opt =
      interval_cmd->add_option("--M", int_M, "rectangle bound on |f|");
  auto* b_opt = interval_cmd->add_option("--b", int_b, "box halfwidth");
  auto* t_opt = interval_cmd->add_option("--T", int_T, "horizon cap");
  auto* eps_opt = interval_cmd->add_option("--eps-tilde", eps_tilde,
                                           "target displacement bound");
  auto* l1_opt =
      interval_cmd->add_option("--L1", int_L1, "Lipschitz constant in tau");
  auto* l2_opt =
      interval_cmd->add_option("--L2", int_L2, "Lipschitz constant in omega");
  (void)alpha_opt;

  double grid_h = 2e-3, suite_T = 1.0;
  verify_cmd->add_option("--grid-h", grid_h, "suite grid step in (0, 0.1]");
  verify_cmd->add_option("--T", suite_T, "suite horizon in [0.5, 2]");
  verify_cmd->add_option("--alpha", alpha_value, "order in (0, 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 64;
  }

  CliConfig config;
  if (ml_cmd->parsed()) config.subcommand = Subcommand::Ml;
  if (deriv_cmd->parsed()) config.subcommand = Subcommand::Deriv;
  if (integ_cmd->parsed()) config.subcommand = Subcommand::Integ;
  if (solve_cmd->parsed()) config.subcommand = Subcommand::Solve;
  if (extremal_cmd->parsed()) config.subcommand = Subcommand::Extremal;
  if (continue_cmd->parsed()) config.subcommand = Subcommand::Continue;
  if (interval_cmd->parsed()) config.subcommand = Subcommand::Interval;
  if (verify_cmd->parsed()) config.subcommand = Subcommand::Verify;
  if (!input_path.empty()) config.input_path = input_path;
  if (!output_path.empty()) config.output_path = output_path;

  try {
    for (const std::string& kv : set_kvs)
      config.json_overrides.push_back(
          detail::split_key_value(kv, "--set argument"));
    config.validate();
    const Normalization B = detail::parse_normalization(norm_name);

    switch (config.subcommand) {
      case Subcommand::Ml: {
        double result = 0.0;
        if (ml_cmd->count("--gamma") > 0)
          result = ml3({alpha_value, ml_beta, ml_gamma}, ml_z);
        else if (beta_opt->count() > 0)
          result = ml2(alpha_value, ml_beta, ml_z);
        else
          result = ml1(alpha_value, ml_z);
        out << abcfrac::detail::format_g12(result) << "\n";
        return 0;
      }
      case Subcommand::Deriv: {
        const Trajectory traj = detail::read_csv_file(*config.input_path);
        const Trajectory d =
            abc_derivative(abcfrac::detail::as_input(traj),
                           FractionalOrder{alpha_value}, B, traj.grid);
        detail::emit_trajectory(d, config.output_path, out);
        return 0;
      }
      case Subcommand::Integ: {
        const Trajectory traj = detail::read_csv_file(*config.input_path);
        const Trajectory integrated =
            ab_integral(traj, FractionalOrder{alpha_value}, B);
        detail::emit_trajectory(integrated, config.output_path, out);
        return 0;
      }
      case Subcommand::Solve: {
        detail::Json doc = detail::load_json_file(*config.input_path);
        detail::apply_overrides(doc, config.json_overrides);
        const detail::LoadedProblem loaded = detail::problem_from_json(doc);
        SolveStats stats;
        const Trajectory traj =
            solve_ivp(loaded.problem, loaded.config, &stats);
        if (stats.consistency_warned)
          err << "warning:consistency_residual:"
              << abcfrac::detail::format_g12(stats.consistency_residual)
              << "\n";
        detail::emit_trajectory(traj, config.output_path, out);
        return 0;
      }
      case Subcommand::Extremal: {
        detail::Json doc = detail::load_json_file(*config.input_path);
        detail::apply_overrides(doc, config.json_overrides);
        const detail::LoadedProblem loaded = detail::problem_from_json(doc);
        const double eps_start =
            eps0_opt->count() > 0 ? eps0 : loaded.box_b / 4.0;
        const ExtremalResult ext = solve_extremal(
            loaded.problem, loaded.config, eps_start, eps_factor, stop_tol);
        err << "info:levels_used:" << ext.levels_used << "\n";
        err << "info:maximal_monotone_decreasing:"
            << (ext.maximal_monotone_decreasing ? "true" : "false") << "\n";
        detail::emit_trajectory(branch == "max" ? ext.maximal : ext.minimal,
                                config.output_path, out);
        return 0;
      }
      case Subcommand::Continue: {
        detail::Json doc = detail::load_json_file(*config.input_path);
        detail::apply_overrides(doc, config.json_overrides);
        const detail::LoadedProblem loaded = detail::problem_from_json(doc);
        const double horizon = tmax_opt->count() > 0
                                   ? t_max
                                   : loaded.problem.horizon_T;
        RhsSpec mspec;
        mspec.name = majorant_name;
        for (const std::string& kv : mparam_kvs) {
          const auto [k, v] = detail::split_key_value(kv, "--mparam argument");
          mspec.params[k] = detail::parse_number(v, "--mparam value");
        }
        mspec.omega0 = u0;
        mspec.horizon_T = horizon;
        mspec.box_halfwidth_b = mbox;
        const RhsFunction g = make_registry_rhs(mspec);
        const Trajectory traj = continue_globally(loaded.problem, g, u0,
                                                  loaded.config, horizon);
        detail::emit_trajectory(traj, config.output_path, out);
        return 0;
      }
      case Subcommand::Interval: {
        auto need = [&](std::initializer_list<CLI::Option*> opts) {
          for (CLI::Option* o : opts)
            if (o->count() == 0) {
              err << "error: interval mode requires " << o->get_name()
                  << "\n\n"
                  << interval_cmd->help();
              return false;
            }
          return true;
        };
        double result = 0.0;
        if (mode_local) {
          if (!need({m_opt, b_opt, t_opt})) return 64;
          result = local_existence_interval(
              int_M, int_b, FractionalOrder{alpha_value}, B, int_T);
        } else if (mode_extremal) {
          if (!need({m_opt, b_opt, t_opt})) return 64;
          result = extremal_existence_interval(
              int_M, int_b, FractionalOrder{alpha_value}, B, int_T);
        } else {
          if (!need({eps_opt, l1_opt, l2_opt, m_opt})) return 64;
          result = equicontinuity_modulus(eps_tilde,
                                          FractionalOrder{alpha_value}, B,
                                          int_L1, int_L2, int_M);
        }
        out << abcfrac::detail::format_g12(result) << "\n";
        return 0;
      }
      case Subcommand::Verify: {
        const std::vector<PropertyReport> reports = run_standard_suite(
            FractionalOrder{alpha_value}, B, grid_h, suite_T);
        const std::vector<NegativeControlOutcome> controls =
            run_negative_controls(FractionalOrder{alpha_value}, B, grid_h);
        detail::Json arr = detail::Json::array();
        for (const PropertyReport& r : reports)
          arr.push_back(detail::report_to_json(r));
        out << arr.dump(2) << "\n";
        bool ok = true;
        for (const PropertyReport& r : reports)
          if (report_gates(r) && !r.passed) ok = false;
        for (const NegativeControlOutcome& c : controls) {
          err << "info:negative_control:" << c.name << ":"
              << (c.raised_precondition ? "ok" : "MISS") << "\n";
          if (!c.raised_precondition) ok = false;
        }
        return ok ? 0 : 2;
      }
    }
    return 0;
  } catch (const Error& e) {
    err << "error:" << e.code_name() << ":" << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error:domain_error:" << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error:internal_error:" << e.what() << "\n";
    return 1;
  }
}

}  // namespace abcfrac::cli
