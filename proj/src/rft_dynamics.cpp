#include "magswim/rft_dynamics.hpp"

#include <cmath>
#include <sstream>

#include "magswim/errors.hpp"

namespace magswim {
namespace {

using Mat25 = Eigen::Matrix<double, 2, 5>;
using Row5 = Eigen::Matrix<double, 1, 5>;

// z-component of u x (each column of m).
Row5 cross_columns(const Vec2& u, const Mat25& m) { return u.x() * m.row(1) - u.y() * m.row(0); }

// Point velocity on one link, linear in arclength s measured from the link's
// start point: v(s) = (offset + s * slope) * qdot.
struct LinkKinematics {
  Vec2 start;
  Mat25 offset;
  Mat25 slope;
};

std::array<LinkKinematics, 3> link_kinematics(const SegmentFrames& fr, double L) {
  Row5 w1 = Row5::Zero();  // angular rate of link 1: thetadot + alpha2dot
  w1(2) = 1.0;
  w1(3) = 1.0;
  Row5 w2 = Row5::Zero();
  w2(2) = 1.0;
  Row5 w3 = Row5::Zero();
  w3(2) = 1.0;
  w3(4) = 1.0;

  Mat25 center_velocity = Mat25::Zero();
  center_velocity(0, 0) = 1.0;
  center_velocity(1, 1) = 1.0;

  const Mat25 spin2 = fr.normals[1] * w2;
  const Mat25 v_a2 = center_velocity - 0.5 * L * spin2;
  const Mat25 v_a3 = center_velocity + 0.5 * L * spin2;
  const Mat25 spin1 = fr.normals[0] * w1;
  const Mat25 spin3 = fr.normals[2] * w3;

  return {{{fr.endpoints[0], v_a2 - L * spin1, spin1},
           {fr.endpoints[1], v_a2, spin2},
           {fr.endpoints[2], v_a3, spin3}}};
}

double norm1(const Mat5& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

}  // namespace

GrandResistance grand_resistance(const Configuration& config, const SwimmerParams& params) {
  const SegmentFrames fr = segment_frames(config, params);
  const double L = params.length;
  const auto links = link_kinematics(fr, L);
  const double l1 = L, l2 = L * L / 2.0, l3 = L * L * L / 3.0;

  GrandResistance gr;
  gr.mh.setZero();
  for (int i = 0; i < 3; ++i) {
    const Vec2& e = fr.tangents[i];
    const Vec2& n = fr.normals[i];
    const Mat2 resist = params.xi[i] * e * e.transpose() + params.eta[i] * n * n.transpose();
    const Mat25 ra = resist * links[i].offset;
    const Mat25 rb = resist * links[i].slope;

    gr.mh.topRows<2>() += l1 * ra + l2 * rb;
    // Subsystem r (torque about A_{r+1}) contains links r..2.
    for (int r = 0; r <= i; ++r) {
      const Vec2 p0 = links[i].start - fr.endpoints[r];
      gr.mh.row(2 + r) += l1 * cross_columns(p0, ra) +
                          l2 * (cross_columns(p0, rb) + cross_columns(e, ra)) +
                          l3 * cross_columns(e, rb);
    }
  }

  const Eigen::PartialPivLU<Mat5> lu(gr.mh);
  gr.condition = norm1(gr.mh) * norm1(lu.inverse());
  if (!std::isfinite(gr.condition) || gr.condition > kSingularConditionLimit) {
    std::ostringstream msg;
    msg << "grand-resistance matrix is near-singular (cond = " << gr.condition << ")";
    throw SingularConfigurationError(msg.str(), gr.condition);
  }
  return gr;
}

MagneticCoupling magnetic_coupling(const Configuration& config, const SwimmerParams& params) {
  const auto th = link_angles(config);
  const double m = params.magnetization;
  // Link torque M (cos(th) Hy - sin(th) Hx) enters as -mx Hx - my Hy.
  const double s1 = m * std::sin(th[0]), s2 = m * std::sin(th[1]), s3 = m * std::sin(th[2]);
  const double c1 = m * std::cos(th[0]), c2 = m * std::cos(th[1]), c3 = m * std::cos(th[2]);
  MagneticCoupling mc;
  mc.mx << 0.0, 0.0, s1 + s2 + s3, s2 + s3, s3;
  mc.my << 0.0, 0.0, -(c1 + c2 + c3), -(c2 + c3), -c3;
  return mc;
}

Vec5 elastic_load(const Configuration& config, const SwimmerParams& params) {
  Vec5 out;
  out << 0.0, 0.0, 0.0, params.spring * config.alpha2, -params.spring * config.alpha3;
  return out;
}

ControlFields control_fields(const Configuration& config, const SwimmerParams& params) {
  const GrandResistance gr = grand_resistance(config, params);
  const MagneticCoupling mc = magnetic_coupling(config, params);
  const Vec5 el = elastic_load(config, params);

  ControlFields cf;
  const Eigen::PartialPivLU<Mat5> lu(gr.mh);
  cf.f0 = lu.solve(el);
  cf.fx = -lu.solve(mc.mx);
  cf.fy = -lu.solve(mc.my);

  const Eigen::PartialPivLU<Mat2> ah_lu(gr.ah());
  cf.position_coupling = -ah_lu.solve(gr.bh());
  const Mat3 reduced = gr.ch() + gr.lower_left() * cf.position_coupling;
  const Eigen::PartialPivLU<Mat3> red_lu(reduced);
  cf.g0 = red_lu.solve(el.tail<3>());
  cf.gx = -red_lu.solve(mc.mx.tail<3>());
  cf.gy = -red_lu.solve(mc.my.tail<3>());
  return cf;
}

Vec5 rhs(const Configuration& config, const FieldSample& field, const SwimmerParams& params) {
  const GrandResistance gr = grand_resistance(config, params);
  const MagneticCoupling mc = magnetic_coupling(config, params);
  const Vec5 load = elastic_load(config, params) - field.hx * mc.mx - field.hy * mc.my;
  return gr.mh.partialPivLu().solve(load);
}

}  // namespace magswim
