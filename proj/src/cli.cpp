#include "magswim/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>

#include "magswim/config.hpp"
#include "magswim/controllability.hpp"
#include "magswim/errors.hpp"
#include "magswim/linear_analysis.hpp"
#include "magswim/ode_sim.hpp"
#include "magswim/trajectory_io.hpp"
#include "magswim/validation.hpp"

namespace magswim {

using nlohmann::ordered_json;

namespace {

struct Options {
  std::string config_path;
  std::string report_path;
  std::uint64_t seed = kDefaultValidationSeed;
  int sets = 10;
  std::vector<double> thetas{0.0, 0.3, -0.3, 0.7, -0.7};
};

/// An expected analysis property did not hold; the report is still written.
struct AssertionFailure {
  ordered_json report;
  std::string message;
};

unsigned worker_count() {
  if (const char* env = std::getenv(kWorkersEnv)) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ordered_json mat_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

ordered_json vec_json(const Eigen::VectorXd& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_report(const std::filesystem::path& path, const ordered_json& report) {
  write_text(path, report.dump(2) + "\n");
}

ordered_json base_report(const std::string& command, const RunConfig& config) {
  ordered_json r{{"version", kArtifactVersion}, {"command", command}, {"status", "ok"}};
  r["run"] = run_metadata(config);
  r["warnings"] = config.warnings;
  return r;
}

std::filesystem::path output_path(const RunConfig& config, const std::string& name) {
  return std::filesystem::path(config.output.directory) / name;
}

std::vector<std::string> export_all(const Trajectory& traj, const RunConfig& config) {
  std::vector<std::string> files;
  for (const auto& fmt : config.output.formats) {
    const TrajectoryFormat f = parse_trajectory_format(fmt);
    const auto path = output_path(config, f == TrajectoryFormat::kCsv ? "trajectory.csv"
                                                                        : "trajectory.jsonl");
    export_trajectory(traj, path, f, run_metadata(config));
    files.push_back(path.string());
  }
  return files;
}

ordered_json cmd_simulate(const RunConfig& c, std::ostream& out) {
  const Trajectory traj = integrate(c.params, c.initial, c.field, c.solver.t_final, c.solver.dt);
  ordered_json r = base_report("simulate", c);
  const Configuration& last = traj.states.back();
  r["samples"] = traj.size();
  r["final_state"] = {last.x, last.y, last.theta, last.alpha2, last.alpha3};
  r["files"] = export_all(traj, c);
  out << "simulated " << traj.size() << " samples to t = " << format_double(traj.times.back())
      << "\n";
  return r;
}

ordered_json cmd_displacement(const RunConfig& c, std::ostream& out) {
  if (c.field.kind() != FieldProgram::Kind::kSinusoidal || c.field.hx0() != 1.0) {
    throw ConfigError("displacement needs [field.sinusoidal] with hx0 = 1", 0, "field");
  }
  const double eps = c.field.epsilon();
  const double omega = c.field.omega();
  const DisplacementReport d = displacement_per_period(
      c.params, c.initial, eps, omega, c.solver.burn_in_periods, c.solver.measure_periods,
      DisplacementOptions{static_cast<int>(std::lround(*c.field.period() / c.solver.dt))});
  ordered_json r = base_report("displacement", c);
  r["delta_x"] = d.delta_x;
  r["delta_y"] = d.delta_y;
  r["delta_x_over_eps2"] = eps != 0.0 ? d.delta_x / (eps * eps) : 0.0;
  r["burn_in_periods"] = d.burn_in_periods;
  r["periods_used"] = d.periods_used;
  r["theta_drift"] = d.theta_drift;
  r["converged"] = d.converged;
  r["periodicity_residual"] = d.periodicity_residual;
  if (!d.converged) r["warnings"].push_back("angles not periodic to 1e-8 after burn-in");
  try {
    const QuadraticDisplacement q = net_displacement_quadratic(c.params, omega);
    r["quadratic_prediction"] = {{"dx2", q.value}, {"delta_x", q.value * eps * eps}};
  } catch (const PreconditionError& e) {
    r["quadratic_prediction"] = nullptr;
    r["warnings"].push_back(std::string("no quadratic prediction: ") + e.what());
  }
  out << "delta_x per period = " << format_double(d.delta_x) << "\n";
  return r;
}

ordered_json cmd_symmetry(const RunConfig& c, std::ostream& out) {
  const Trajectory traj = integrate(c.params, c.initial, c.field, c.solver.t_final, c.solver.dt);
  SymmetryReport s = symmetry_experiment(c.params, c.initial, c.field, c.solver.t_final, c.solver.dt);
  ordered_json r = base_report("symmetry", c);
  r["max_alpha_gap"] = s.max_alpha_gap;
  r["max_abs_x"] = s.max_abs_x;
  r["max_abs_y"] = s.max_abs_y;
  r["steps"] = s.steps;
  r["hypothesis_holds"] = s.hypothesis_holds;
  r["tolerance"] = 1e-9;
  r["files"] = export_all(traj, c);
  out << "max |alpha2 - alpha3| = " << format_double(s.max_alpha_gap) << "\n";
  if (s.hypothesis_holds && std::max({s.max_alpha_gap, s.max_abs_x, s.max_abs_y}) > 1e-9) {
    r["status"] = "fail";
    throw AssertionFailure{r, "symmetric swimmer drifted beyond 1e-9"};
  }
  return r;
}

ordered_json cmd_linearize(const RunConfig& c, std::ostream& out) {
  const LinearizedModel lin = linearize_angles(c.params);
  const CubicCoefficients cp = char_poly(lin.a);
  const Eigen::EigenSolver<Mat3> eig(lin.a);
  ordered_json r = base_report("linearize", c);
  r["A"] = mat_json(lin.a);
  r["b"] = vec_json(lin.b);
  r["step_halving_change"] = lin.step_halving_change;
  ordered_json ev = ordered_json::array();
  for (int i = 0; i < 3; ++i) ev.push_back({{"re", eig.eigenvalues()[i].real()}, {"im", eig.eigenvalues()[i].imag()}});
  r["eigenvalues"] = ev;
  r["char_coeffs"] = {cp.a3, cp.a2, cp.a1, cp.a0};
  const bool stable = routh_hurwitz_stable(cp);
  r["routh_hurwitz_stable"] = stable;
  if (c.params.eta[1] == c.params.eta[2]) {
    const LinearizedModel closed = closed_form_linearization(c.params);
    const double diff = (lin.a - closed.a).cwiseAbs().maxCoeff() / closed.a.cwiseAbs().maxCoeff();
    const CubicCoefficients cc = closed_form_char_coeffs(c.params);
    r["closed_form"] = {{"A", mat_json(closed.a)},
                        {"char_coeffs", {cc.a3, cc.a2, cc.a1, cc.a0}},
                        {"max_relative_difference", diff},
                        {"agrees", diff <= 1e-5}};
    if (diff > 1e-5) {
      r["warnings"].push_back("closed-form A differs from the numeric Jacobian by " +
                              format_double(diff) + "; the numeric value is used");
    }
  } else {
    r["closed_form"] = nullptr;
  }
  out << "Routh-Hurwitz: " << (stable ? "stable" : "not stable") << "\n";
  return r;
}

ordered_json cmd_sweep(const RunConfig& c, std::ostream& out) {
  const DisplacementCurve curve =
      frequency_sweep(c.params, c.analysis.omega_min, c.analysis.omega_max,
                      static_cast<std::size_t>(c.analysis.n_grid), worker_count());
  std::ostringstream csv;
  csv << "omega,dx2\n";
  for (std::size_t i = 0; i < curve.omegas.size(); ++i) {
    csv << format_double(curve.omegas[i]) << ',' << format_double(curve.dx2[i]) << '\n';
  }
  const auto csv_path = output_path(c, "sweep.csv");
  write_text(csv_path, csv.str());
  ordered_json r = base_report("sweep", c);
  r["omega_star"] = curve.omega_star;
  r["dx2_star"] = curve.dx2_star;
  r["grid_argmax"] = curve.grid_argmax;
  r["scale"] = curve.scale;
  r["negligible"] = curve.negligible;
  r["search_history"] = curve.search_history;
  for (const auto& w : curve.warnings) r["warnings"].push_back(w);
  r["curve"] = {{"omega", curve.omegas}, {"dx2", curve.dx2}};
  r["files"] = {csv_path.string()};
  out << "omega* = " << format_double(curve.omega_star)
      << "  dx2* = " << format_double(curve.dx2_star) << "\n";
  for (const auto& w : curve.warnings) out << "warning: " << w << "\n";
  return r;
}

ordered_json cmd_controllability(const RunConfig& c, const Options& o, std::ostream& out) {
  ordered_json r = base_report("controllability", c);
  ordered_json rows = ordered_json::array();
  bool ok = true;
  for (double theta : o.thetas) {
    const EquilibriumIdentityReport id = equilibrium_identities(c.params, theta);
    const RankReport rank = lie_rank(c.params, Configuration{0.0, 0.0, theta, 0.0, 0.0},
                                     c.analysis.bracket_depth);
    const bool fx_ok = id.fx_relative() <= 1e-8;
    const bool br_ok = id.bracket_relative() <= 1e-5;
    const bool rank_ok = rank.rank == 4;
    ok = ok && fx_ok && br_ok && rank_ok;
    rows.push_back({{"theta", theta},
                    {"fy_norm", id.fy_norm},
                    {"fx_relative_residual", id.fx_relative()},
                    {"fx_identity", fx_ok ? "pass" : "fail"},
                    {"bracket_relative_residual", id.bracket_relative()},
                    {"bracket_identity", br_ok ? "pass" : "fail"},
                    {"rank", rank.rank},
                    {"rank_is_4", rank_ok ? "pass" : "fail"},
                    {"depth", rank.depth},
                    {"tolerance", rank.tolerance},
                    {"singular_values", rank.singular_values},
                    {"generators", rank.labels},
                    {"notes", rank.notes}});
    out << "theta " << format_double(theta) << ": rank " << rank.rank << ", fx "
        << (fx_ok ? "pass" : "fail") << ", bracket " << (br_ok ? "pass" : "fail") << "\n";
  }
  r["equilibria"] = rows;
  if (!ok) {
    r["status"] = "fail";
    throw AssertionFailure{r, "an equilibrium check failed"};
  }
  return r;
}

ordered_json cmd_validate(const Options& o, std::ostream& out) {
  const ValidationReport v = run_validation(o.seed, o.sets);
  for (const auto& ch : v.checks) {
    out << (ch.passed ? "PASS " : "FAIL ") << ch.name << "  " << format_double(ch.value) << ' '
        << ch.relation << ' ' << format_double(ch.threshold) << "\n";
  }
  ordered_json r = v.to_json();
  if (!v.all_passed()) {
    throw AssertionFailure{r, "validation checks failed"};
  }
  return r;
}

ordered_json error_record(const std::string& command, const std::string& kind,
                          const std::string& message) {
  return {{"version", kArtifactVersion},
          {"command", command},
          {"status", "error"},
          {"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Magneto-elastic three-link swimmer toolkit", "magswim"};
  app.require_subcommand(1, 1);
  Options o;

  const auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("-c,--config", o.config_path, "run configuration file");
    if (config_required) opt->required();
    sub->add_option("-r,--report", o.report_path,
                    "report file (default: <output.directory>/<command>.json)");
  };
  add_common(app.add_subcommand("simulate", "integrate and export the trajectory"), true);
  add_common(app.add_subcommand("displacement", "net displacement per forcing period"), true);
  add_common(app.add_subcommand("symmetry", "equal-coefficient symmetry experiment"), true);
  add_common(app.add_subcommand("linearize", "small-angle model, eigenvalues and stability"), true);
  add_common(app.add_subcommand("sweep", "quadratic displacement versus frequency"), true);
  auto* ctrl = app.add_subcommand("controllability", "equilibrium identities and Lie rank");
  add_common(ctrl, true);
  ctrl->add_option("--theta", o.thetas, "straight-equilibrium orientations");
  auto* val = app.add_subcommand("validate", "seeded cross-check suite");
  add_common(val, false);
  val->add_option("--seed", o.seed, "random seed");
  val->add_option("--sets", o.sets, "random parameter sets")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  std::optional<std::filesystem::path> report_path;
  if (!o.report_path.empty()) report_path = o.report_path;

  const auto emit_error = [&](const std::string& message, const ordered_json& record) {
    err << "error: " << message << "\n";
    if (report_path) {
      try {
        write_report(*report_path, record);
      } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
      }
    }
  };

  RunConfig config;
  try {
    if (!o.config_path.empty()) {
      config = load_config(o.config_path);
      for (const auto& d : config.defaults_applied) err << "default: " << d << "\n";
      for (const auto& w : config.warnings) err << "warning: " << w << "\n";
      if (!report_path) report_path = output_path(config, command + ".json");
    }
  } catch (const ConfigError& e) {
    ordered_json rec = error_record(command, "config", e.what());
    rec["error"]["line"] = e.line();
    rec["error"]["key"] = e.key();
    emit_error(e.what(), rec);
    return kExitUsage;
  } catch (const std::exception& e) {
    emit_error(e.what(), error_record(command, "config", e.what()));
    return kExitUsage;
  }

  try {
    ordered_json report;
    if (command == "simulate") report = cmd_simulate(config, out);
    else if (command == "displacement") report = cmd_displacement(config, out);
    else if (command == "symmetry") report = cmd_symmetry(config, out);
    else if (command == "linearize") report = cmd_linearize(config, out);
    else if (command == "sweep") report = cmd_sweep(config, out);
    else if (command == "controllability") report = cmd_controllability(config, o, out);
    else report = cmd_validate(o, out);
    if (report_path) write_report(*report_path, report);
    return kExitOk;
  } catch (const AssertionFailure& f) {
    err << "error: " << f.message << "\n";
    if (report_path) write_report(*report_path, f.report);
    return kExitAnalysisFailure;
  } catch (const ConfigError& e) {
    ordered_json rec = error_record(command, "config", e.what());
    rec["error"]["line"] = e.line();
    rec["error"]["key"] = e.key();
    emit_error(e.what(), rec);
    return kExitUsage;
  } catch (const PreconditionError& e) {
    emit_error(e.what(), error_record(command, "precondition", e.what()));
    return kExitUsage;
  } catch (const SingularConfigurationError& e) {
    ordered_json rec = error_record(command, "singular_configuration", e.what());
    rec["error"]["condition"] = e.condition();
    emit_error(e.what(), rec);
    return kExitAnalysisFailure;
  } catch (const IntegrationError& e) {
    emit_error(e.what(), error_record(command, "integration", e.what()));
    return kExitAnalysisFailure;
  } catch (const AnalysisError& e) {
    emit_error(e.what(), error_record(command, "analysis", e.what()));
    return kExitAnalysisFailure;
  } catch (const std::exception& e) {
    emit_error(e.what(), error_record(command, "io", e.what()));
    return kExitAnalysisFailure;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace magswim
