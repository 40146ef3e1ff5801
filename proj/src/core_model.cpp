#include "magswim/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "magswim/errors.hpp"

namespace magswim {

SwimmerParams SwimmerParams::with_head(double length, double xi, double eta, double xi1,
                                       double eta1, double spring, double magnetization) {
  SwimmerParams p;
  p.length = length;
  p.xi = {xi1, xi, xi};
  p.eta = {eta1, eta, eta};
  p.spring = spring;
  p.magnetization = magnetization;
  return p;
}

SwimmerParams SwimmerParams::uniform(double length, double xi, double eta, double spring,
                                     double magnetization) {
  return with_head(length, xi, eta, xi, eta, spring, magnetization);
}

void SwimmerParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw PreconditionError(std::string("invalid swimmer parameters: ") + what);
  };
  require(std::isfinite(length) && length > 0.0, "L > 0");
  require(std::isfinite(spring) && spring >= 0.0, "K >= 0");
  require(std::isfinite(magnetization) && magnetization >= 0.0, "M >= 0");
  for (double v : xi) require(std::isfinite(v) && v > 0.0, "xi_i > 0");
  for (double v : eta) require(std::isfinite(v) && v > 0.0, "eta_i > 0");
}

std::vector<std::string> SwimmerParams::warnings() const {
  std::vector<std::string> out;
  for (int i = 0; i < 3; ++i) {
    if (eta[i] < xi[i]) {
      std::ostringstream msg;
      msg << "eta" << i + 1 << " < xi" << i + 1 << " (outside the slender-body regime)";
      out.push_back(msg.str());
    }
  }
  return out;
}

bool SwimmerParams::equal_coefficients() const {
  return xi[0] == xi[1] && xi[1] == xi[2] && eta[0] == eta[1] && eta[1] == eta[2];
}

bool SwimmerParams::tail_links_equal() const { return xi[1] == xi[2] && eta[1] == eta[2]; }

bool Configuration::finite() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(theta) && std::isfinite(alpha2) &&
         std::isfinite(alpha3);
}

FieldProgram FieldProgram::constant(double hx, double hy) {
  if (!std::isfinite(hx) || !std::isfinite(hy)) {
    throw PreconditionError("constant field must be finite");
  }
  FieldProgram f;
  f.kind_ = Kind::kConstant;
  f.hx0_ = hx;
  f.hy0_ = hy;
  return f;
}

FieldProgram FieldProgram::sinusoidal(double hx0, double epsilon, double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw PreconditionError("sinusoidal field requires omega > 0");
  }
  if (!std::isfinite(hx0) || !std::isfinite(epsilon)) {
    throw PreconditionError("sinusoidal field must be finite");
  }
  FieldProgram f;
  f.kind_ = Kind::kSinusoidal;
  f.hx0_ = hx0;
  f.epsilon_ = epsilon;
  f.omega_ = omega;
  return f;
}

FieldProgram FieldProgram::tabulated(std::vector<TabulatedPoint> samples) {
  if (samples.empty()) throw PreconditionError("tabulated field requires at least one sample");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!std::isfinite(s.t) || !std::isfinite(s.hx) || !std::isfinite(s.hy)) {
      throw PreconditionError("tabulated field samples must be finite");
    }
    if (i > 0 && !(s.t > samples[i - 1].t)) {
      throw PreconditionError("tabulated field samples must be strictly increasing in t");
    }
  }
  FieldProgram f;
  f.kind_ = Kind::kTabulated;
  f.samples_ = std::move(samples);
  return f;
}

FieldSample FieldProgram::at(double t) const {
  switch (kind_) {
    case Kind::kConstant:
      return {hx0_, hy0_};
    case Kind::kSinusoidal:
      return {hx0_, epsilon_ * std::sin(omega_ * t)};
    case Kind::kTabulated: {
      if (t <= samples_.front().t) return {samples_.front().hx, samples_.front().hy};
      if (t >= samples_.back().t) return {samples_.back().hx, samples_.back().hy};
      auto hi = std::upper_bound(samples_.begin(), samples_.end(), t,
                                 [](double v, const TabulatedPoint& p) { return v < p.t; });
      auto lo = hi - 1;
      const double w = (t - lo->t) / (hi->t - lo->t);
      return {lo->hx + w * (hi->hx - lo->hx), lo->hy + w * (hi->hy - lo->hy)};
    }
  }
  return {};
}

std::optional<double> FieldProgram::period() const {
  if (kind_ == Kind::kSinusoidal) return 2.0 * M_PI / omega_;
  return std::nullopt;
}

FieldProgram FieldProgram::negated() const {
  FieldProgram f = *this;
  f.hx0_ = -hx0_;
  f.hy0_ = -hy0_;
  f.epsilon_ = -epsilon_;
  for (auto& s : f.samples_) {
    s.hx = -s.hx;
    s.hy = -s.hy;
  }
  return f;
}

std::string to_string(FieldProgram::Kind kind) {
  switch (kind) {
    case FieldProgram::Kind::kConstant:
      return "constant";
    case FieldProgram::Kind::kSinusoidal:
      return "sinusoidal";
    case FieldProgram::Kind::kTabulated:
      return "tabulated";
  }
  return "unknown";
}

std::array<double, 3> link_angles(const Configuration& config) {
  return {config.theta + config.alpha2, config.theta, config.theta + config.alpha3};
}

SegmentFrames segment_frames(const Configuration& config, const SwimmerParams& params) {
  SegmentFrames fr;
  fr.angles = link_angles(config);
  for (int i = 0; i < 3; ++i) {
    fr.tangents[i] = unit(fr.angles[i]);
    fr.normals[i] = Vec2(-fr.tangents[i].y(), fr.tangents[i].x());
  }
  const double L = params.length;
  const Vec2 center(config.x, config.y);
  fr.endpoints[1] = center - 0.5 * L * fr.tangents[1];
  fr.endpoints[2] = center + 0.5 * L * fr.tangents[1];
  fr.endpoints[0] = fr.endpoints[1] - L * fr.tangents[0];
  fr.endpoints[3] = fr.endpoints[2] + L * fr.tangents[2];
  for (int i = 0; i < 3; ++i) fr.centers[i] = 0.5 * (fr.endpoints[i] + fr.endpoints[i + 1]);
  return fr;
}

std::pair<Configuration, FieldSample> apply_r_transform(const Configuration& config,
                                                        const FieldSample& field) {
  return {{-config.x, -config.y, config.theta, config.alpha3, config.alpha2},
          {-field.hx, -field.hy}};
}

}  // namespace magswim
