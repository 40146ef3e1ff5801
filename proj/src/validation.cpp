#include "magswim/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <random>
#include <unistd.h>

#include <Eigen/Eigenvalues>

#include "magswim/controllability.hpp"
#include "magswim/errors.hpp"
#include "magswim/linear_analysis.hpp"
#include "magswim/numerics.hpp"
#include "magswim/ode_sim.hpp"
#include "magswim/rft_dynamics.hpp"
#include "magswim/trajectory_io.hpp"

namespace magswim {

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

nlohmann::ordered_json ValidationReport::to_json() const {
  nlohmann::ordered_json checks_json = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    checks_json.push_back({{"name", c.name},
                           {"status", c.passed ? "pass" : "fail"},
                           {"value", c.value},
                           {"relation", c.relation},
                           {"threshold", c.threshold},
                           {"detail", c.detail}});
  }
  return {{"version", kArtifactVersion},
          {"command", "validate"},
          {"seed", seed},
          {"status", all_passed() ? "pass" : "fail"},
          {"checks", checks_json}};
}

namespace {

double rel_max(const Mat3& got, const Mat3& want) {
  return (got - want).cwiseAbs().maxCoeff() / want.cwiseAbs().maxCoeff();
}

ValidationCheck at_most(std::string name, double value, double threshold, std::string detail) {
  return {std::move(name), value <= threshold, value, threshold, "<=", std::move(detail)};
}

ValidationCheck at_least(std::string name, double value, double threshold, std::string detail) {
  return {std::move(name), value >= threshold, value, threshold, ">=", std::move(detail)};
}

ValidationCheck equals(std::string name, double value, double expected, std::string detail) {
  return {std::move(name), value == expected, value, expected, "==", std::move(detail)};
}

class ParamSampler {
 public:
  explicit ParamSampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  /// Head-asymmetric swimmer with every constant in [0.1, 10].
  SwimmerParams head_swimmer() {
    const double length = uniform(0.1, 10.0);
    const double xi = uniform(0.1, 10.0);
    const double eta = uniform(0.1, 10.0);
    double xi1 = uniform(0.1, 10.0);
    double eta1 = uniform(0.1, 10.0);
    if (std::abs(eta1 - eta) < 1e-3) eta1 = eta + 0.5;
    if (std::abs(xi1 - xi) < 1e-3) xi1 = xi + 0.5;
    return SwimmerParams::with_head(length, xi, eta, xi1, eta1, uniform(0.1, 10.0),
                                    uniform(0.1, 10.0));
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

ValidationReport run_validation(std::uint64_t seed, int parameter_sets) {
  if (parameter_sets < 1) throw PreconditionError("validation needs at least one parameter set");
  ValidationReport rep;
  rep.seed = seed;
  ParamSampler sampler(seed);
  std::vector<SwimmerParams> sets;
  for (int i = 0; i < parameter_sets; ++i) sets.push_back(sampler.head_swimmer());
  const std::string over = std::to_string(parameter_sets) + " random head swimmers";

  double lin_err = 0.0, coeff_err = 0.0, grad_err = 0.0, grad_y = 0.0, route_err = 0.0;
  double max_real = -std::numeric_limits<double>::infinity();
  int unstable = 0;
  for (const auto& p : sets) {
    const LinearizedModel numeric = linearize_angles(p);
    const LinearizedModel closed = closed_form_linearization(p);
    lin_err = std::max(lin_err, rel_max(numeric.a, closed.a));

    const CubicCoefficients cn = char_poly(numeric.a);
    const CubicCoefficients cc = closed_form_char_coeffs(p);
    coeff_err = std::max({coeff_err, std::abs(cn.a2 - cc.a2) / std::max(std::abs(cc.a2), 1.0),
                          std::abs(cn.a1 - cc.a1) / std::max(std::abs(cc.a1), 1.0),
                          std::abs(cn.a0 - cc.a0) / std::max(std::abs(cc.a0), 1.0)});
    const bool negative = cc.a3 < 0 && cc.a2 < 0 && cc.a1 < 0 && cc.a0 < 0;
    const Eigen::EigenSolver<Mat3> eig(numeric.a);
    const double re = eig.eigenvalues().real().maxCoeff();
    max_real = std::max(max_real, re);
    if (!negative || !routh_hurwitz_stable(cc) || re >= 0.0) ++unstable;

    grad_err = std::max(grad_err, rel_max(grad_gx_origin(p), closed_form_grad_gx(p)));
    grad_y = std::max(grad_y, grad_gy_origin(p).cwiseAbs().maxCoeff());

    const DisplacementModel model = DisplacementModel::build(p);
    for (double omega : numerics::log_space(1e-2, 1e2, 5)) {
      const QuadraticDisplacement q = net_displacement_quadratic(model, omega);
      route_err = std::max(route_err,
                           std::abs(q.value - q.quadrature) / std::max(1.0, std::abs(q.value)));
    }
  }
  rep.checks.push_back(at_most("linearization_matches_closed_form", lin_err, 1e-5,
                               "max relative entry error of A over " + over));
  rep.checks.push_back(at_most("char_coeffs_match_closed_form", coeff_err, 1e-5,
                               "relative error of a2, a1, a0 over " + over));
  rep.checks.push_back(equals("straight_state_stable", unstable, 0.0,
                              "sets failing sign, Routh-Hurwitz or eigenvalue test; max Re = " +
                                  format_double(max_real)));
  rep.checks.push_back(at_most("grad_gx_matches_closed_form", grad_err, 1e-5,
                               "max relative entry error over " + over));
  rep.checks.push_back(at_most("grad_gy_vanishes", grad_y, 1e-6, "max |entry| over " + over));
  rep.checks.push_back(at_most("displacement_routes_agree", route_err, 1e-8,
                               "resolvent vs quadrature at 5 frequencies per set"));

  {
    const SwimmerParams& p = sets.front();
    const auto lambda = Eigen::EigenSolver<Mat3>(linearize_angles(p).a).eigenvalues().cwiseAbs();
    const DisplacementCurve curve =
        frequency_sweep(p, 1e-3 * lambda.minCoeff(), 1e3 * lambda.maxCoeff(), 48, 1);
    const double lo = net_displacement_quadratic(p, 1e-4 * curve.omega_star).value;
    const double hi = net_displacement_quadratic(p, 1e4 * curve.omega_star).value;
    const double ratio = std::max(std::abs(lo), std::abs(hi)) / std::abs(curve.dx2_star);
    rep.checks.push_back(at_most("displacement_vanishes_off_peak", ratio, 1e-3,
                                 "|dx2| at 1e-4 and 1e4 times omega* = " +
                                     format_double(curve.omega_star) + ", relative to the peak"));
    const double interior = (curve.grid_argmax > 0 && curve.grid_argmax + 1 < curve.omegas.size()) ? 1 : 0;
    rep.checks.push_back(equals("sweep_interior_maximum", interior, 1.0, "grid argmax is not an endpoint"));
  }

  {
    const SwimmerParams p = SwimmerParams::uniform(sampler.uniform(0.5, 2.0), sampler.uniform(0.2, 1.0),
                                                   sampler.uniform(1.0, 2.0), sampler.uniform(0.5, 3.0),
                                                   sampler.uniform(0.5, 3.0));
    const double period = 2.0 * M_PI;
    std::vector<TabulatedPoint> table;
    for (int k = 0; k <= 40; ++k) {
      table.push_back({k * 2.0 * period / 40.0, sampler.uniform(-2.0, 2.0), sampler.uniform(-2.0, 2.0)});
    }
    const double a = sampler.uniform(-0.5, 0.5);
    const SymmetryReport s = symmetry_experiment(p, Configuration{0.0, 0.0, 0.2, a, a},
                                                 FieldProgram::tabulated(table), 2.0 * period,
                                                 period / 2000.0);
    rep.checks.push_back(at_most("symmetric_swimmer_does_not_move",
                                 std::max({s.max_alpha_gap, s.max_abs_x, s.max_abs_y}), 1e-9,
                                 "max of |alpha2 - alpha3|, |x|, |y| over 2 periods of a random field"));
  }

  {
    const SwimmerParams& p = sets.front();
    double fx_res = 0.0, br_res = 0.0, min_gap = std::numeric_limits<double>::infinity();
    int bad_rank = 0;
    for (double theta : {0.0, 0.3, -0.3, 0.7, -0.7}) {
      const EquilibriumIdentityReport id = equilibrium_identities(p, theta);
      fx_res = std::max(fx_res, id.fx_relative());
      br_res = std::max(br_res, id.bracket_relative());
      const RankReport r = lie_rank(p, Configuration{0.0, 0.0, theta, 0.0, 0.0}, 3);
      if (r.rank != 4) ++bad_rank;
      min_gap = std::min(min_gap, r.gap(4));
    }
    rep.checks.push_back(at_most("fx_parallel_to_fy", fx_res, 1e-8,
                                 "|fx + tan(theta) fy| / |fy| at straight equilibria"));
    rep.checks.push_back(at_most("bracket_fx_fy_identity", br_res, 1e-5,
                                 "|[fx,fy] - fy[theta] fy| / |fy|^2 at straight equilibria"));
    rep.checks.push_back(equals("lie_rank_straight", bad_rank, 0.0,
                                "equilibria where the depth-3 rank differs from 4"));
    rep.checks.push_back(at_least("lie_rank_gap", min_gap, 1e4, "min sigma4 / sigma5"));
  }

  {
    const SwimmerParams& p = sets.back();
    const Configuration init{0.0, 0.0, sampler.uniform(-0.5, 0.5), sampler.uniform(-0.5, 0.5),
                             sampler.uniform(-0.5, 0.5)};
    const FieldProgram field = FieldProgram::sinusoidal(1.0, 0.5, 2.0);
    const ControlFields cf = control_fields(init, p);
    const double rate = linearize_angles(p).a.cwiseAbs().maxCoeff() + cf.f0.norm() + 1.0;
    const double dt = 0.05 / rate;
    const double t1 = 200.0 * dt;
    const Vec5 y1 = integrate_final(p, init, field, 0.0, t1, dt).as_vector();
    const Vec5 y2 = integrate_final(p, init, field, 0.0, t1, dt / 2).as_vector();
    const Vec5 y4 = integrate_final(p, init, field, 0.0, t1, dt / 4).as_vector();
    const double order = std::log2((y1 - y2).norm() / (y2 - y4).norm());
    rep.checks.push_back(at_least("rk4_self_convergence_order", order, 3.9,
                                  "Richardson order from dt, dt/2, dt/4"));
  }

  {
    const SwimmerParams& p = sets.front();
    const Trajectory traj = integrate(p, Configuration{0.0, 0.0, 0.1, 0.2, -0.1},
                                      FieldProgram::sinusoidal(1.0, 0.3, 1.0), 1.0, 1e-2);
    const auto path = std::filesystem::temp_directory_path() /
                      ("magswim-validate-" + std::to_string(::getpid()) + ".csv");
    export_trajectory(traj, path, TrajectoryFormat::kCsv);
    const Trajectory back = read_trajectory_csv(path);
    std::filesystem::remove(path);
    int mismatches = back.size() == traj.size() ? 0 : 1;
    for (std::size_t i = 0; mismatches == 0 && i < traj.size(); ++i) {
      const Vec5 a = traj.states[i].as_vector();
      const Vec5 b = back.states[i].as_vector();
      if (std::memcmp(&traj.times[i], &back.times[i], sizeof(double)) != 0 ||
          std::memcmp(a.data(), b.data(), sizeof(double) * 5) != 0 ||
          !(traj.field_samples[i] == back.field_samples[i])) {
        ++mismatches;
      }
    }
    rep.checks.push_back(equals("csv_round_trip_bit_exact", mismatches, 0.0,
                                "rows that differ after export and re-import"));
  }
  return rep;
}

}  // namespace magswim
