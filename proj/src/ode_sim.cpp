#include "magswim/ode_sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "magswim/errors.hpp"
#include "magswim/numerics.hpp"
#include "magswim/rft_dynamics.hpp"

namespace magswim {
namespace {

void check_step_inputs(double t_final, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionError("integration requires dt > 0");
  if (!(t_final > 0.0) || !std::isfinite(t_final)) {
    throw PreconditionError("integration requires t_final > 0");
  }
}

// Number of steps of size dt covering span; a final fractional step below
// 1e-9 dt is absorbed rather than taken.
std::size_t step_count(double span, double dt) {
  const double n = span / dt;
  const double rounded = std::round(n);
  if (std::abs(n - rounded) < 1e-9 * std::max(1.0, n)) return static_cast<std::size_t>(rounded);
  return static_cast<std::size_t>(std::ceil(n));
}

class Stepper {
 public:
  Stepper(const SwimmerParams& params, const FieldProgram& field)
      : params_(params), field_(field) {}

  Vec5 step(double t, const Vec5& q, double h) const {
    auto f = [this](double time, const Vec5& state) -> Vec5 {
      return rhs(Configuration::from_vector(state), field_.at(time), params_);
    };
    Vec5 next = numerics::rk4_step(f, t, q, h);
    if (!next.allFinite()) {
      std::ostringstream msg;
      msg << "non-finite state after step at t = " << t << " (h = " << h << ")";
      throw IntegrationError(msg.str());
    }
    return next;
  }

 private:
  const SwimmerParams& params_;
  const FieldProgram& field_;
};

Vec3 angles_of(const Configuration& c) { return {c.theta, c.alpha2, c.alpha3}; }

}  // namespace

Trajectory integrate(const SwimmerParams& params, const Configuration& initial,
                     const FieldProgram& field, double t_final, double dt,
                     const IntegrationOptions& options) {
  check_step_inputs(t_final, dt);
  params.validate();
  if (!initial.finite()) throw PreconditionError("initial configuration must be finite");

  const std::size_t n = step_count(t_final, dt);
  const std::size_t stride = std::max<std::size_t>(1, options.record_stride);
  const double t_end = options.t0 + t_final;
  const Stepper stepper(params, field);

  Trajectory traj;
  traj.times.reserve(n / stride + 2);
  traj.states.reserve(n / stride + 2);
  traj.field_samples.reserve(n / stride + 2);
  auto record = [&](double t, const Vec5& q) {
    traj.times.push_back(t);
    traj.states.push_back(Configuration::from_vector(q));
    traj.field_samples.push_back(field.at(t));
  };

  Vec5 q = initial.as_vector();
  record(options.t0, q);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = options.t0 + static_cast<double>(k) * dt;
    const double t_next = (k + 1 == n) ? t_end : options.t0 + static_cast<double>(k + 1) * dt;
    q = stepper.step(t, q, t_next - t);
    if ((k + 1) % stride == 0 || k + 1 == n) record(t_next, q);
  }
  return traj;
}

Configuration integrate_final(const SwimmerParams& params, const Configuration& initial,
                              const FieldProgram& field, double t0, double t1, double dt) {
  check_step_inputs(t1 - t0, dt);
  const std::size_t n = step_count(t1 - t0, dt);
  const Stepper stepper(params, field);
  Vec5 q = initial.as_vector();
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    const double t_next = (k + 1 == n) ? t1 : t0 + static_cast<double>(k + 1) * dt;
    q = stepper.step(t, q, t_next - t);
  }
  return Configuration::from_vector(q);
}

DisplacementReport displacement_per_period(const SwimmerParams& params,
                                           const Configuration& initial, double epsilon,
                                           double omega, int burn_in_periods,
                                           int measure_periods,
                                           const DisplacementOptions& options) {
  if (!(epsilon >= 0.0)) throw PreconditionError("displacement requires epsilon >= 0");
  if (!(omega > 0.0)) throw PreconditionError("displacement requires omega > 0");
  if (burn_in_periods < 1 || measure_periods < 1 || options.steps_per_period < 1) {
    throw PreconditionError("displacement requires at least one burn-in and one measured period");
  }
  params.validate();

  const FieldProgram field = FieldProgram::sinusoidal(1.0, epsilon, omega);
  const double period = 2.0 * M_PI / omega;
  const double dt = period / options.steps_per_period;
  auto advance = [&](const Configuration& c, int k) {
    return integrate_final(params, c, field, k * period, (k + 1) * period, dt);
  };

  DisplacementReport rep;
  Configuration state = initial;
  Configuration previous = initial;
  int elapsed = 0;
  int target = burn_in_periods;
  for (int doubling = 0;; ++doubling) {
    while (elapsed < target) {
      previous = state;
      state = advance(state, elapsed);
      ++elapsed;
    }
    rep.periodicity_residual = (angles_of(state) - angles_of(previous)).cwiseAbs().maxCoeff();
    if (rep.periodicity_residual < options.periodicity_tol) break;
    if (doubling == options.max_burn_in_doublings) {
      rep.converged = false;
      break;
    }
    target *= 2;
  }
  rep.burn_in_periods = elapsed;

  const Configuration start = state;
  for (int k = 0; k < measure_periods; ++k) {
    state = advance(state, elapsed);
    ++elapsed;
  }
  rep.periods_used = measure_periods;
  rep.delta_x = (state.x - start.x) / measure_periods;
  rep.delta_y = (state.y - start.y) / measure_periods;
  rep.theta_drift = (state.theta - start.theta) / measure_periods;
  return rep;
}

SymmetryReport symmetry_defects(const Trajectory& trajectory) {
  SymmetryReport rep;
  rep.steps = trajectory.size();
  for (const auto& s : trajectory.states) {
    rep.max_alpha_gap = std::max(rep.max_alpha_gap, std::abs(s.alpha2 - s.alpha3));
    rep.max_abs_x = std::max(rep.max_abs_x, std::abs(s.x));
    rep.max_abs_y = std::max(rep.max_abs_y, std::abs(s.y));
  }
  return rep;
}

SymmetryReport symmetry_experiment(const SwimmerParams& params, const Configuration& initial,
                                   const FieldProgram& field, double t_final, double dt) {
  if (!params.equal_coefficients()) {
    throw PreconditionError(
        "symmetry experiment requires identical drag coefficients on all links");
  }
  SymmetryReport rep = symmetry_defects(integrate(params, initial, field, t_final, dt));
  rep.hypothesis_holds = initial.alpha2 == initial.alpha3 && initial.x == 0.0 && initial.y == 0.0;
  return rep;
}

}  // namespace magswim
