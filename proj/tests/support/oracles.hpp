#pragma once

// Reference computations written independently of the library: quadrature
// over the slender-body drag densities and the closed forms transcribed by
// hand. Library results are checked against these.

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "magswim/core_model.hpp"

namespace oracle {

using magswim::Configuration;
using magswim::SwimmerParams;
using Mat3 = Eigen::Matrix3d;
using Mat5 = Eigen::Matrix<double, 5, 5>;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec5 = Eigen::Matrix<double, 5, 1>;

inline Vec2 dir(double a) { return {std::cos(a), std::sin(a)}; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Point at arclength s in [0, L] on link k (0-based) for state q.
inline Vec2 point(const Vec5& q, double length, int link, double s) {
  const Vec2 center(q[0], q[1]);
  const double th2 = q[2], th1 = q[2] + q[3], th3 = q[2] + q[4];
  const Vec2 a2 = center - 0.5 * length * dir(th2);
  const Vec2 a3 = center + 0.5 * length * dir(th2);
  switch (link) {
    case 0: return a2 - length * dir(th1) + s * dir(th1);
    case 1: return a2 + s * dir(th2);
    default: return a3 + s * dir(th3);
  }
}

inline Vec2 joint(const Vec5& q, double length, int k) {  // A1..A3, k = 0..2
  return point(q, length, k, 0.0);
}

/// Mh by 3-point Gauss-Legendre quadrature (exact for the quadratic
/// integrands) with point velocities from central differences in q.
inline Mat5 grand_resistance(const Configuration& c, const SwimmerParams& p) {
  const Vec5 q = c.as_vector();
  const double L = p.length;
  const std::array<double, 3> nodes{-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  const std::array<double, 3> weights{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const double angles[3] = {q[2] + q[3], q[2], q[2] + q[4]};
  Mat5 mh = Mat5::Zero();
  for (int col = 0; col < 5; ++col) {
    const double h = 1e-6;
    Vec5 qp = q, qm = q;
    qp[col] += h;
    qm[col] -= h;
    for (int link = 0; link < 3; ++link) {
      const Vec2 t = dir(angles[link]);
      const Vec2 n(-t.y(), t.x());
      for (int g = 0; g < 3; ++g) {
        const double s = 0.5 * L * (nodes[g] + 1.0);
        const double w = 0.5 * L * weights[g];
        const Vec2 v = (point(qp, L, link, s) - point(qm, L, link, s)) / (2 * h);
        const Vec2 f = p.xi[link] * v.dot(t) * t + p.eta[link] * v.dot(n) * n;
        const Vec2 x = point(q, L, link, s);
        mh(0, col) += w * f.x();
        mh(1, col) += w * f.y();
        for (int row = 0; row < 3; ++row) {
          if (link >= row) mh(2 + row, col) += w * cross(x - joint(q, L, row), f);
        }
      }
    }
  }
  return mh;
}

/// Closed-form linearization for eta2 = eta3 = eta, eta1 (head).
inline Mat3 matrix_a(const SwimmerParams& p) {
  const double e = p.eta[1], e1 = p.eta[0], K = p.spring, M = p.magnetization, L = p.length;
  const double delta = 6.0 / (L * L * L * e * e1 * (8 * e + 7 * e1));
  Mat3 a;
  a(0, 0) = M * e1 * (5 * e + e1);
  a(0, 1) = (19 * K + 9 * M) * e * e1 + 2 * K * e1 * e1;
  a(0, 2) = 2 * (8 * K + 3 * M) * e * e1 + (5 * K + 3 * M) * e1 * e1;
  a(1, 0) = -M * (4 * e * e + 13 * e1 * e + e1 * e1);
  a(1, 1) = -4 * (K + M) * e * e - (42 * K + 23 * M) * e1 * e - 2 * K * e1 * e1;
  a(1, 2) = -(28 * K + 9 * M) * e * e1 - (5 * K + 3 * M) * e1 * e1;
  a(2, 0) = -6 * M * (2 * e * e1 + e1 * e1);
  a(2, 1) = -4 * (7 * K + 3 * M) * e * e1 - 5 * K * e1 * e1;
  a(2, 2) = -16 * (2 * K + M) * e * e1 - (16 * K + 11 * M) * e1 * e1;
  return delta * a;
}

/// Gradient of the x-coupling at the straight state, tail links identical.
inline Mat3 grad_gx(const SwimmerParams& p) {
  const double e = p.eta[1], e1 = p.eta[0], x = p.xi[1], x1 = p.xi[0];
  const double d = 2 * x + x1;
  Mat3 g;
  g(0, 0) = 2 * (e - e1);
  g(0, 1) = -e1;
  g(0, 2) = e;
  g(1, 0) = -(6 * e * e1 - 4 * e * x1 + e1 * x1) / d;
  g(1, 1) = -e1 * (2 * e + x1) / d;
  g(1, 2) = -e * (e1 - x1) / d;
  g(2, 0) = (2 * e * e + 4 * e * e1 - 3 * e1 * x) / d;
  g(2, 1) = e1 * (e - x) / d;
  g(2, 2) = e * (e + e1 + x) / d;
  return p.length / (2 * (2 * e + e1)) * g;
}

inline Vec3 kernel_u(const SwimmerParams& p) {
  const double e = p.eta[1], e1 = p.eta[0], x = p.xi[1], x1 = p.xi[0];
  return {e1 * x + e * x1 - 2 * e * e1, 2 * e * e + 4 * e1 * e - 2 * x * e - x1 * e - 3 * e1 * x,
          6 * e * e1 - 2 * x * e1 - 4 * e * x1};
}

/// Steady response to qdot = A q + b sin(w t), by direct real 6x6 solve for
/// q = s sin(w t) + c cos(w t).
struct RealOrbit {
  Vec3 s, c;
  double w;
  Vec3 at(double t) const { return s * std::sin(w * t) + c * std::cos(w * t); }
  Vec3 rate(double t) const { return w * (s * std::cos(w * t) - c * std::sin(w * t)); }
};

inline RealOrbit real_orbit(const Mat3& a, const Vec3& b, double w) {
  // sin terms: -w c = A s + b ; cos terms: w s = A c.
  Eigen::Matrix<double, 6, 6> m = Eigen::Matrix<double, 6, 6>::Zero();
  m.topLeftCorner<3, 3>() = a;
  m.topRightCorner<3, 3>() = w * Mat3::Identity();
  m.bottomLeftCorner<3, 3>() = -w * Mat3::Identity();
  m.bottomRightCorner<3, 3>() = a;
  Eigen::Matrix<double, 6, 1> rhs;
  rhs << -b, Vec3::Zero();
  const Eigen::Matrix<double, 6, 1> sol = m.fullPivLu().solve(rhs);
  return {sol.head<3>(), sol.tail<3>(), w};
}

/// Per-period integral of q^T G qdot over the real orbit: w (T/2)(c^T G s - s^T G c).
inline double quadratic_displacement(const Mat3& a, const Vec3& b, const Mat3& g, double w) {
  const RealOrbit o = real_orbit(a, b, w);
  return M_PI * (o.c.dot(g * o.s) - o.s.dot(g * o.c));
}

}  // namespace oracle
