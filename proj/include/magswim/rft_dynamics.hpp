#pragma once

#include "magswim/core_model.hpp"

namespace magswim {

using Mat23 = Eigen::Matrix<double, 2, 3>;
using Mat32 = Eigen::Matrix<double, 3, 2>;

/// Hydrodynamic grand-resistance matrix.
///
/// Columns are the generalized rates (xdot, ydot, thetadot, alpha2dot, alpha3dot).
/// Rows are minus the hydrodynamic loads: total force (x, y), z-torque about A1
/// on links {1,2,3}, about A2 on links {2,3}, and about A3 on link {3}. The
/// matrix is not symmetric because the torque rows use different reference
/// points, so the lower-left block is kept separately from Bh.
struct GrandResistance {
  Mat5 mh;
  double condition = 1.0;  // 1-norm condition number

  Mat2 ah() const { return mh.topLeftCorner<2, 2>(); }
  Mat23 bh() const { return mh.topRightCorner<2, 3>(); }
  Mat32 lower_left() const { return mh.bottomLeftCorner<3, 2>(); }
  Mat3 ch() const { return mh.bottomRightCorner<3, 3>(); }
};

/// Magnetic generalized loads: the balance carries -mx * Hx - my * Hy.
struct MagneticCoupling {
  Vec5 mx = Vec5::Zero();
  Vec5 my = Vec5::Zero();
};

/// Drift f0, control fields fx/fy, their angle blocks g0/gx/gy, and the
/// position coupling xdot = G * (thetadot, alpha2dot, alpha3dot).
struct ControlFields {
  Vec5 f0 = Vec5::Zero();
  Vec5 fx = Vec5::Zero();
  Vec5 fy = Vec5::Zero();
  Vec3 g0 = Vec3::Zero();
  Vec3 gx = Vec3::Zero();
  Vec3 gy = Vec3::Zero();
  Mat23 position_coupling = Mat23::Zero();  // columns G1, G2, G3
};

inline constexpr double kSingularConditionLimit = 1e12;

/// Throws SingularConfigurationError when cond(Mh) exceeds kSingularConditionLimit.
GrandResistance grand_resistance(const Configuration& config, const SwimmerParams& params);

MagneticCoupling magnetic_coupling(const Configuration& config, const SwimmerParams& params);

/// Spring torques on the subsystems {2,3} and {3}: (0, 0, 0, K alpha2, -K alpha3).
/// With theta1 = theta + alpha2 the spring at A2 pulls link 2 toward link 1
/// (torque K (theta1 - theta2)) and the spring at A3 pulls link 3 toward link 2.
Vec5 elastic_load(const Configuration& config, const SwimmerParams& params);

ControlFields control_fields(const Configuration& config, const SwimmerParams& params);

/// f0 + Hx fx + Hy fy.
Vec5 rhs(const Configuration& config, const FieldSample& field, const SwimmerParams& params);

}  // namespace magswim
