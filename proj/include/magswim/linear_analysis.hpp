#pragma once

#include <complex>
#include <string>
#include <vector>

#include "magswim/core_model.hpp"

namespace magswim {

using Complex = std::complex<double>;
using CVec3 = Eigen::Matrix<Complex, 3, 1>;
using CMat3 = Eigen::Matrix<Complex, 3, 3>;

/// Small-angle dynamics qdot = A q + b sin(omega t) of q = (theta, alpha2, alpha3)
/// about the straight swimmer aligned with H = (1, 0).
struct LinearizedModel {
  enum class Source { kNumeric, kClosedForm };

  Mat3 a = Mat3::Zero();
  Vec3 b = Vec3::Zero();
  Source source = Source::kNumeric;
  /// Max entry difference between step h and h/2 Jacobians, relative to max|A|.
  double step_halving_change = 0.0;
};

/// A = d(g0 + gx)/dq at q = 0 by central differences; b = gy(0).
LinearizedModel linearize_angles(const SwimmerParams& params);

/// Closed-form A for a swimmer whose links 2 and 3 share eta. b is taken from
/// the RFT assembly. Throws PreconditionError if eta2 != eta3.
LinearizedModel closed_form_linearization(const SwimmerParams& params);

/// det(A - lambda I) = a3 lambda^3 + a2 lambda^2 + a1 lambda + a0.
struct CubicCoefficients {
  double a3 = 0.0;
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;

  Complex evaluate(Complex lambda) const {
    return ((a3 * lambda + a2) * lambda + a1) * lambda + a0;
  }
};

CubicCoefficients char_poly(const Mat3& a);

/// Closed-form characteristic coefficients for the eta2 == eta3 swimmer.
CubicCoefficients closed_form_char_coeffs(const SwimmerParams& params);

/// All four coefficients share one strict sign and a2 a1 > a3 a0.
/// Throws PreconditionError if a3 == 0.
bool routh_hurwitz_stable(const CubicCoefficients& c);

struct Resolvents {
  CMat3 plus;   // (-A + i omega I)^-1
  CMat3 minus;  // (-A - i omega I)^-1
};

Resolvents resolvents(const Mat3& a, double omega);

struct PeriodicOrbit {
  CVec3 c_plus = CVec3::Zero();
  CVec3 c_minus = CVec3::Zero();
  double omega = 1.0;

  /// (1/2i)(c+ e^{i w t} - c- e^{-i w t}); the imaginary residue is dropped.
  Vec3 at(double t) const;
  Vec3 rate(double t) const;
  /// Largest imaginary part of the reconstruction at t.
  double imaginary_residue(double t) const;
};

PeriodicOrbit steady_periodic(const Mat3& a, const Vec3& b, double omega);

/// Row j holds d(G_i . e_x)/dq_j for i = 1..3, by central differences at q = 0.
Mat3 grad_gx_origin(const SwimmerParams& params);
Mat3 grad_gy_origin(const SwimmerParams& params);
/// Closed form of grad_gx_origin for a swimmer whose links 2 and 3 are identical.
Mat3 closed_form_grad_gx(const SwimmerParams& params);

struct QuadraticDisplacement {
  double value = 0.0;         // resolvent form, the reported Delta x / epsilon^2
  double quadrature = 0.0;    // trapezoid integral of q^T grad(G^x) qdot over one period
  double imaginary_residue = 0.0;
};

/// Inputs shared by every frequency of a sweep.
struct DisplacementModel {
  LinearizedModel linear;
  Mat3 grad_gx = Mat3::Zero();

  static DisplacementModel build(const SwimmerParams& params);
};

inline constexpr int kQuadratureSamples = 4096;

/// Net x-displacement per period divided by epsilon^2. Both routes are computed;
/// an AnalysisError is thrown if they disagree beyond 1e-8 max(1, |value|).
QuadraticDisplacement net_displacement_quadratic(const DisplacementModel& model, double omega);
QuadraticDisplacement net_displacement_quadratic(const SwimmerParams& params, double omega);

/// Unit kernel vector of grad(G^x) - grad(G^x)^T, oriented like the closed form.
Vec3 skew_kernel(const SwimmerParams& params);
/// Unnormalized closed-form kernel vector.
Vec3 closed_form_skew_kernel(const SwimmerParams& params);

/// det(u, A^- b, A^+ b); decays like omega^-3 for large omega.
Complex kernel_independence_det(const DisplacementModel& model, const Vec3& u, double omega);

struct DisplacementCurve {
  std::vector<double> omegas;
  std::vector<double> dx2;
  double omega_star = 0.0;
  double dx2_star = 0.0;
  std::size_t grid_argmax = 0;
  std::vector<double> search_history;  // best |dx2| after each golden-section step
  double scale = 0.0;                  // natural magnitude of the quadratic form
  bool negligible = false;             // max |dx2| below 1e-12 scale
  std::vector<std::string> warnings;
};

/// Log-spaced sweep of dx2 with golden-section refinement of argmax |dx2|.
/// Grid points are evaluated on `workers` threads (0 = hardware concurrency).
DisplacementCurve frequency_sweep(const SwimmerParams& params, double omega_min,
                                  double omega_max, std::size_t n_grid, unsigned workers = 0);

}  // namespace magswim
