#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace magswim {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat5 = Eigen::Matrix<double, 5, 5>;

/// Physical constants of the three-link swimmer.
///
/// Index 0 of `xi`/`eta` is the leftmost link (the "head" when its drag differs
/// from the other two). Drag coefficients are per unit length; `magnetization`
/// is the total moment of one link, so the torque on link i is M e_i x H.
struct SwimmerParams {
  double length = 1.0;
  std::array<double, 3> xi{0.5, 0.5, 0.5};
  std::array<double, 3> eta{1.0, 1.0, 1.0};
  double spring = 1.0;         // K, torque per radian
  double magnetization = 1.0;  // M, torque per unit field

  /// Links 2 and 3 share (xi, eta); link 1 carries (xi1, eta1).
  static SwimmerParams with_head(double length, double xi, double eta, double xi1, double eta1,
                                 double spring, double magnetization);
  static SwimmerParams uniform(double length, double xi, double eta, double spring,
                               double magnetization);

  /// Throws PreconditionError naming the violated invariant.
  void validate() const;
  /// Soft invariant violations (eta_i < xi_i), one message each.
  std::vector<std::string> warnings() const;

  bool equal_coefficients() const;
  bool tail_links_equal() const;  // eta2 == eta3 and xi2 == xi3
};

/// Lab-frame position of the middle link's center, its orientation and the
/// two joint angles. Angles are never wrapped.
struct Configuration {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double alpha2 = 0.0;
  double alpha3 = 0.0;

  Vec5 as_vector() const { return (Vec5() << x, y, theta, alpha2, alpha3).finished(); }
  static Configuration from_vector(const Vec5& q) { return {q[0], q[1], q[2], q[3], q[4]}; }
  bool finite() const;
  bool operator==(const Configuration&) const = default;
};

struct FieldSample {
  double hx = 0.0;
  double hy = 0.0;
  bool operator==(const FieldSample&) const = default;
};

struct TabulatedPoint {
  double t = 0.0;
  double hx = 0.0;
  double hy = 0.0;
};

/// Time-dependent uniform external field.
class FieldProgram {
 public:
  enum class Kind { kConstant, kSinusoidal, kTabulated };

  static FieldProgram constant(double hx, double hy);
  /// H(t) = (hx0, epsilon sin(omega t)).
  static FieldProgram sinusoidal(double hx0, double epsilon, double omega);
  /// Linear interpolation; held constant outside the sampled range.
  static FieldProgram tabulated(std::vector<TabulatedPoint> samples);

  FieldSample at(double t) const;
  Kind kind() const { return kind_; }
  /// 2 pi / omega for sinusoidal programs.
  std::optional<double> period() const;
  /// The same program with H replaced by -H.
  FieldProgram negated() const;

  double hx0() const { return hx0_; }
  double hy0() const { return hy0_; }
  double epsilon() const { return epsilon_; }
  double omega() const { return omega_; }
  const std::vector<TabulatedPoint>& samples() const { return samples_; }

 private:
  FieldProgram() = default;

  Kind kind_ = Kind::kConstant;
  double hx0_ = 0.0;
  double hy0_ = 0.0;
  double epsilon_ = 0.0;
  double omega_ = 1.0;
  std::vector<TabulatedPoint> samples_;
};

std::string to_string(FieldProgram::Kind kind);

struct SegmentFrames {
  std::array<Vec2, 4> endpoints;  // A1..A4
  std::array<Vec2, 3> centers;
  std::array<Vec2, 3> tangents;
  std::array<Vec2, 3> normals;  // tangent rotated by +pi/2
  std::array<double, 3> angles;
};

inline Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Absolute link angles: theta1 = theta + alpha2, theta2 = theta, theta3 = theta + alpha3.
std::array<double, 3> link_angles(const Configuration& config);

SegmentFrames segment_frames(const Configuration& config, const SwimmerParams& params);

/// Rotation by pi about the lab origin: (x, y, theta, a2, a3; H) -> (-x, -y, theta, a3, a2; -H).
std::pair<Configuration, FieldSample> apply_r_transform(const Configuration& config,
                                                        const FieldSample& field);

}  // namespace magswim
