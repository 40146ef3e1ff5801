#include "magswim/linear_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "magswim/errors.hpp"
#include "magswim/numerics.hpp"
#include "magswim/rft_dynamics.hpp"

namespace magswim {
namespace {

constexpr double kAngleStep = 1e-6;

Configuration at_angles(const Vec3& q) { return {0.0, 0.0, q[0], q[1], q[2]}; }

double max_abs(const Mat3& m) { return m.cwiseAbs().maxCoeff(); }

void require_eta_tail(const SwimmerParams& params) {
  if (params.eta[1] != params.eta[2]) {
    throw PreconditionError("closed form requires eta2 == eta3");
  }
}

// Transposed Jacobian of the first or second row of the position coupling.
Mat3 grad_position_row(const SwimmerParams& params, int row) {
  auto g = [&](const Vec3& q) -> Vec3 {
    return control_fields(at_angles(q), params).position_coupling.row(row).transpose();
  };
  return numerics::central_jacobian<3, 3>(g, Vec3::Zero().eval(), kAngleStep).transpose();
}

}  // namespace

LinearizedModel linearize_angles(const SwimmerParams& params) {
  params.validate();
  auto drift = [&](const Vec3& q) -> Vec3 {
    const ControlFields cf = control_fields(at_angles(q), params);
    return cf.g0 + cf.gx;
  };
  LinearizedModel lm;
  lm.source = LinearizedModel::Source::kNumeric;
  lm.a = numerics::central_jacobian<3, 3>(drift, Vec3::Zero().eval(), kAngleStep);
  const Mat3 half = numerics::central_jacobian<3, 3>(drift, Vec3::Zero().eval(), kAngleStep / 2);
  const double scale = max_abs(lm.a);
  lm.step_halving_change = scale > 0.0 ? max_abs(lm.a - half) / scale : max_abs(lm.a - half);
  if (lm.step_halving_change > 1e-4) {
    std::ostringstream msg;
    msg << "finite-difference linearization is not converged (step-halving change "
        << lm.step_halving_change << ")";
    throw AnalysisError(msg.str());
  }
  lm.b = control_fields(Configuration{}, params).gy;
  return lm;
}

LinearizedModel closed_form_linearization(const SwimmerParams& params) {
  params.validate();
  require_eta_tail(params);
  const double e = params.eta[1], e1 = params.eta[0];
  const double K = params.spring, M = params.magnetization, L = params.length;
  const double delta = 6.0 / (L * L * L * e * e1 * (8.0 * e + 7.0 * e1));

  Mat3 a;
  a(0, 0) = M * e1 * (5.0 * e + e1);
  a(0, 1) = (19.0 * K + 9.0 * M) * e * e1 + 2.0 * K * e1 * e1;
  a(0, 2) = 2.0 * (8.0 * K + 3.0 * M) * e * e1 + (5.0 * K + 3.0 * M) * e1 * e1;
  a(1, 0) = -M * (4.0 * e * e + 13.0 * e1 * e + e1 * e1);
  a(1, 1) = -4.0 * (K + M) * e * e - (42.0 * K + 23.0 * M) * e1 * e - 2.0 * K * e1 * e1;
  a(1, 2) = -(28.0 * K + 9.0 * M) * e * e1 - (5.0 * K + 3.0 * M) * e1 * e1;
  a(2, 0) = -6.0 * M * (2.0 * e * e1 + e1 * e1);
  a(2, 1) = -4.0 * (7.0 * K + 3.0 * M) * e * e1 - 5.0 * K * e1 * e1;
  a(2, 2) = -16.0 * (2.0 * K + M) * e * e1 - (16.0 * K + 11.0 * M) * e1 * e1;

  LinearizedModel lm;
  lm.source = LinearizedModel::Source::kClosedForm;
  lm.a = delta * a;
  lm.b = control_fields(Configuration{}, params).gy;
  return lm;
}

CubicCoefficients char_poly(const Mat3& a) {
  const double minors = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) + a(0, 0) * a(2, 2) -
                        a(0, 2) * a(2, 0) + a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
  return {-1.0, a.trace(), -minors, a.determinant()};
}

CubicCoefficients closed_form_char_coeffs(const SwimmerParams& params) {
  params.validate();
  require_eta_tail(params);
  const double e = params.eta[1], e1 = params.eta[0];
  const double K = params.spring, M = params.magnetization, L = params.length;
  const double L3 = L * L * L;
  const double shape = e1 * (8.0 * e + 7.0 * e1);  // 8 eta eta1 + 7 eta1^2

  CubicCoefficients c;
  c.a3 = -1.0;
  c.a2 = -12.0 *
         (M * (2.0 * e * e + 17.0 * e * e1 + 5.0 * e1 * e1) +
          K * (2.0 * e * e + 37.0 * e * e1 + 9.0 * e1 * e1)) /
         (L3 * e * shape);
  c.a1 = -36.0 *
         (M * M * (10.0 * e * e + 28.0 * e * e1 + e1 * e1) +
          K * K * (16.0 * e * e + 64.0 * e * e1 + e1 * e1) +
          K * M * (31.0 * e * e + 98.0 * e * e1 + 3.0 * e1 * e1)) /
         (L3 * L3 * e * e * shape);
  c.a0 = -432.0 * M * (3.0 * K * K + 4.0 * K * M + M * M) * (2.0 * e + e1) /
         (L3 * L3 * L3 * e * e * shape);
  return c;
}

bool routh_hurwitz_stable(const CubicCoefficients& c) {
  if (c.a3 == 0.0) throw PreconditionError("Routh-Hurwitz test requires a3 != 0");
  const bool all_pos = c.a3 > 0 && c.a2 > 0 && c.a1 > 0 && c.a0 > 0;
  const bool all_neg = c.a3 < 0 && c.a2 < 0 && c.a1 < 0 && c.a0 < 0;
  return (all_pos || all_neg) && c.a2 * c.a1 > c.a3 * c.a0;
}

Resolvents resolvents(const Mat3& a, double omega) {
  const Complex iw(0.0, omega);
  const CMat3 ac = a.cast<Complex>();
  const CMat3 id = CMat3::Identity();
  const CMat3 plus_m = -ac + iw * id;
  const CMat3 minus_m = -ac - iw * id;
  const Eigen::FullPivLU<CMat3> plus_lu(plus_m);
  const Eigen::FullPivLU<CMat3> minus_lu(minus_m);
  if (!plus_lu.isInvertible() || !minus_lu.isInvertible()) {
    throw PreconditionError("resolvent requested at an eigenvalue of A");
  }
  return {plus_lu.solve(id), minus_lu.solve(id)};
}

Vec3 PeriodicOrbit::at(double t) const {
  const Complex ep = std::exp(Complex(0.0, omega * t));
  const CVec3 v = (c_plus * ep - c_minus * std::conj(ep)) / Complex(0.0, 2.0);
  return v.real();
}

Vec3 PeriodicOrbit::rate(double t) const {
  const Complex ep = std::exp(Complex(0.0, omega * t));
  const CVec3 v = 0.5 * omega * (c_plus * ep + c_minus * std::conj(ep));
  return v.real();
}

double PeriodicOrbit::imaginary_residue(double t) const {
  const Complex ep = std::exp(Complex(0.0, omega * t));
  const CVec3 v = (c_plus * ep - c_minus * std::conj(ep)) / Complex(0.0, 2.0);
  return v.imag().cwiseAbs().maxCoeff();
}

PeriodicOrbit steady_periodic(const Mat3& a, const Vec3& b, double omega) {
  const Resolvents r = resolvents(a, omega);
  const CVec3 bc = b.cast<Complex>();
  return {r.plus * bc, r.minus * bc, omega};
}

Mat3 grad_gx_origin(const SwimmerParams& params) {
  params.validate();
  return grad_position_row(params, 0);
}

Mat3 grad_gy_origin(const SwimmerParams& params) {
  params.validate();
  return grad_position_row(params, 1);
}

Mat3 closed_form_grad_gx(const SwimmerParams& params) {
  params.validate();
  if (!params.tail_links_equal()) {
    throw PreconditionError("closed form requires identical links 2 and 3");
  }
  const double e = params.eta[1], e1 = params.eta[0];
  const double x = params.xi[1], x1 = params.xi[0];
  const double s = 2.0 * x + x1;
  Mat3 g;
  g << 2.0 * (e - e1), -e1, e,
      -(6.0 * e * e1 - 4.0 * e * x1 + e1 * x1) / s, -e1 * (2.0 * e + x1) / s, -e * (e1 - x1) / s,
      (2.0 * e * e + 4.0 * e * e1 - 3.0 * e1 * x) / s, e1 * (e - x) / s, e * (e + e1 + x) / s;
  return params.length / (2.0 * (2.0 * e + e1)) * g;
}

DisplacementModel DisplacementModel::build(const SwimmerParams& params) {
  return {linearize_angles(params), grad_gx_origin(params)};
}

QuadraticDisplacement net_displacement_quadratic(const DisplacementModel& model, double omega) {
  if (!(omega > 0.0)) throw PreconditionError("net displacement requires omega > 0");
  if (!routh_hurwitz_stable(char_poly(model.linear.a))) {
    throw PreconditionError("net displacement requires a Hurwitz linearization");
  }
  const PeriodicOrbit orbit = steady_periodic(model.linear.a, model.linear.b, omega);
  const Mat3& grad = model.grad_gx;
  const double period = 2.0 * M_PI / omega;

  // Resolvent route: T (omega / 4i) c+^T (G - G^T) c-.
  const CMat3 skew = (grad - grad.transpose()).cast<Complex>();
  const Complex form = orbit.c_plus.transpose() * skew * orbit.c_minus;
  const Complex resolvent = period * omega / 4.0 * form / Complex(0.0, 1.0);

  QuadraticDisplacement out;
  out.value = resolvent.real();
  out.imaginary_residue = std::abs(resolvent.imag());

  // Quadrature route over one period of the reconstructed orbit.
  const double h = period / kQuadratureSamples;
  double sum = 0.0;
  for (int k = 0; k < kQuadratureSamples; ++k) {
    const double t = k * h;
    sum += orbit.at(t).dot(grad * orbit.rate(t));
  }
  out.quadrature = sum * h;

  if (std::abs(out.quadrature - out.value) > 1e-8 * std::max(1.0, std::abs(out.value))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "displacement routes disagree at omega = " << omega << ": resolvent " << out.value
        << ", quadrature " << out.quadrature;
    throw AnalysisError(msg.str());
  }
  return out;
}

QuadraticDisplacement net_displacement_quadratic(const SwimmerParams& params, double omega) {
  return net_displacement_quadratic(DisplacementModel::build(params), omega);
}

Vec3 closed_form_skew_kernel(const SwimmerParams& params) {
  const double e = params.eta[1], e1 = params.eta[0];
  const double x = params.xi[1], x1 = params.xi[0];
  return {e1 * x + e * x1 - 2.0 * e * e1,
          2.0 * e * e + 4.0 * e1 * e - 2.0 * x * e - x1 * e - 3.0 * e1 * x,
          6.0 * e * e1 - 2.0 * x * e1 - 4.0 * e * x1};
}

Vec3 skew_kernel(const SwimmerParams& params) {
  const Mat3 g = grad_gx_origin(params);
  const Mat3 s = g - g.transpose();
  // For skew S, S v = 0 with v = (S21, S02, S10).
  Vec3 v(s(2, 1), s(0, 2), s(1, 0));
  const double n = v.norm();
  if (n == 0.0) throw AnalysisError("grad(G^x) is symmetric; kernel is not one-dimensional");
  v /= n;
  if (v.dot(closed_form_skew_kernel(params)) < 0.0) v = -v;
  return v;
}

Complex kernel_independence_det(const DisplacementModel& model, const Vec3& u, double omega) {
  const PeriodicOrbit orbit = steady_periodic(model.linear.a, model.linear.b, omega);
  CMat3 m;
  m.col(0) = u.cast<Complex>();
  m.col(1) = orbit.c_minus;
  m.col(2) = orbit.c_plus;
  return m.determinant();
}

DisplacementCurve frequency_sweep(const SwimmerParams& params, double omega_min,
                                  double omega_max, std::size_t n_grid, unsigned workers) {
  if (!(omega_min > 0.0) || !(omega_max > omega_min)) {
    throw PreconditionError("frequency sweep requires 0 < omega_min < omega_max");
  }
  if (n_grid < 16) throw PreconditionError("frequency sweep requires n_grid >= 16");

  const DisplacementModel model = DisplacementModel::build(params);
  DisplacementCurve curve;
  curve.omegas = numerics::log_space(omega_min, omega_max, n_grid);
  curve.dx2.assign(n_grid, 0.0);

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(n_grid));
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n_grid; i += workers) {
            curve.dx2[i] = net_displacement_quadratic(model, curve.omegas[i]).value;
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  double peak_orbit = 0.0;
  for (double w : curve.omegas) {
    peak_orbit = std::max(peak_orbit,
                          steady_periodic(model.linear.a, model.linear.b, w).c_plus.squaredNorm());
  }
  curve.scale = 0.5 * M_PI * peak_orbit * 2.0 * max_abs(model.grad_gx);

  std::size_t k = 0;
  for (std::size_t i = 1; i < n_grid; ++i) {
    if (std::abs(curve.dx2[i]) > std::abs(curve.dx2[k])) k = i;
  }
  curve.grid_argmax = k;
  const double peak = std::abs(curve.dx2[k]);
  curve.negligible = peak <= 1e-12 * curve.scale;
  if (curve.negligible) {
    curve.warnings.push_back("curve ~ 0: identical links produce no net displacement at order epsilon^2");
    curve.omega_star = curve.omegas[k];
    curve.dx2_star = curve.dx2[k];
    return curve;
  }
  if (k == 0 || k + 1 == n_grid) {
    curve.warnings.push_back("argmax at grid boundary; widen [omega_min, omega_max]");
  }

  const double lo = std::log(curve.omegas[k == 0 ? 0 : k - 1]);
  const double hi = std::log(curve.omegas[std::min(k + 1, n_grid - 1)]);
  auto objective = [&](double log_w) {
    return std::abs(net_displacement_quadratic(model, std::exp(log_w)).value);
  };
  numerics::GoldenSectionResult gs = numerics::golden_section_maximize(objective, lo, hi, 1e-6);
  if (gs.max >= peak) {
    curve.omega_star = std::exp(gs.argmax);
  } else {
    curve.omega_star = curve.omegas[k];
  }
  curve.search_history = std::move(gs.best_history);
  curve.dx2_star = net_displacement_quadratic(model, curve.omega_star).value;
  return curve;
}

}  // namespace magswim
