#pragma once

#include <cstddef>
#include <vector>

#include "magswim/core_model.hpp"

namespace magswim {

struct Trajectory {
  std::vector<double> times;
  std::vector<Configuration> states;
  std::vector<FieldSample> field_samples;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
};

struct IntegrationOptions {
  double t0 = 0.0;
  /// Keep every n-th step in the trajectory (the final state is always kept).
  std::size_t record_stride = 1;
};

/// Fixed-step classical RK4 from t0 to t0 + t_final; the last step is shortened
/// to land on the final time exactly. Throws IntegrationError on a non-finite
/// state and propagates SingularConfigurationError.
Trajectory integrate(const SwimmerParams& params, const Configuration& initial,
                     const FieldProgram& field, double t_final, double dt,
                     const IntegrationOptions& options = {});

/// End state only; no trajectory storage.
Configuration integrate_final(const SwimmerParams& params, const Configuration& initial,
                              const FieldProgram& field, double t0, double t1, double dt);

struct DisplacementReport {
  double delta_x = 0.0;
  double delta_y = 0.0;
  int periods_used = 0;
  int burn_in_periods = 0;
  double theta_drift = 0.0;
  bool converged = true;           // periodicity check passed before measuring
  double periodicity_residual = 0.0;  // |angles(t+T) - angles(t)| at the end of burn-in
};

struct DisplacementOptions {
  int steps_per_period = 2000;
  double periodicity_tol = 1e-8;
  int max_burn_in_doublings = 4;
};

/// Drives the swimmer with H = (1, epsilon sin(omega t)), discards the burn-in
/// periods and reports the mean displacement per period over measure_periods.
DisplacementReport displacement_per_period(const SwimmerParams& params,
                                           const Configuration& initial, double epsilon,
                                           double omega, int burn_in_periods,
                                           int measure_periods,
                                           const DisplacementOptions& options = {});

struct SymmetryReport {
  double max_alpha_gap = 0.0;  // max |alpha2 - alpha3|
  double max_abs_x = 0.0;
  double max_abs_y = 0.0;
  std::size_t steps = 0;
  bool hypothesis_holds = true;  // symmetric start at the origin
};

/// Integrates an equal-coefficient swimmer and records the symmetry defects.
/// Throws PreconditionError if the links do not share drag coefficients.
SymmetryReport symmetry_experiment(const SwimmerParams& params, const Configuration& initial,
                                   const FieldProgram& field, double t_final, double dt);

SymmetryReport symmetry_defects(const Trajectory& trajectory);

}  // namespace magswim
