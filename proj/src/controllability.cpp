#include "magswim/controllability.hpp"

#include <cmath>
#include <limits>

#include "magswim/errors.hpp"
#include "magswim/numerics.hpp"
#include "magswim/rft_dynamics.hpp"

namespace magswim {

VectorFieldHandle drift_field(const SwimmerParams& params) {
  return {[params](const Vec5& x) { return control_fields(Configuration::from_vector(x), params).f0; },
          "f0"};
}

VectorFieldHandle control_field_x(const SwimmerParams& params) {
  return {[params](const Vec5& x) { return control_fields(Configuration::from_vector(x), params).fx; },
          "fx"};
}

VectorFieldHandle control_field_y(const SwimmerParams& params) {
  return {[params](const Vec5& x) { return control_fields(Configuration::from_vector(x), params).fy; },
          "fy"};
}

Mat5 field_jacobian(const VectorFieldHandle& field, const Vec5& x, double rel_step) {
  return numerics::central_jacobian<5, 5>(field.evaluate, x, rel_step);
}

Vec5 lie_bracket(const VectorFieldHandle& f, const VectorFieldHandle& g, const Vec5& x,
                 double rel_step) {
  return field_jacobian(g, x, rel_step) * f(x) - field_jacobian(f, x, rel_step) * g(x);
}

VectorFieldHandle bracket_field(const VectorFieldHandle& f, const VectorFieldHandle& g,
                                double rel_step) {
  return {[f, g, rel_step](const Vec5& x) { return lie_bracket(f, g, x, rel_step); },
          "[" + f.label + "," + g.label + "]"};
}

EquilibriumIdentityReport equilibrium_identities(const SwimmerParams& params, double theta) {
  if (!std::isfinite(theta) || std::abs(std::abs(theta) - M_PI / 2) < 1e-3 ||
      std::abs(theta) > M_PI / 2) {
    throw PreconditionError("equilibrium identities need |theta| < pi/2 (tan(theta) finite)");
  }
  params.validate();
  const Vec5 xe = Configuration{0.0, 0.0, theta, 0.0, 0.0}.as_vector();
  const VectorFieldHandle fx = control_field_x(params);
  const VectorFieldHandle fy = control_field_y(params);

  EquilibriumIdentityReport rep;
  rep.theta = theta;
  const Vec5 fy_e = fy(xe);
  rep.fy_norm = fy_e.norm();
  rep.fx_residual = (fx(xe) + std::tan(theta) * fy_e).norm();
  rep.bracket_residual = (lie_bracket(fx, fy, xe) - fy_e[2] * fy_e).norm();
  return rep;
}

double RankReport::gap(int k) const {
  if (k < 1 || k >= static_cast<int>(singular_values.size())) return 0.0;
  const double next = singular_values[k];
  if (next == 0.0) return std::numeric_limits<double>::infinity();
  return singular_values[k - 1] / next;
}

namespace {

struct Generator {
  std::string label;
  VectorFieldHandle field;
};

std::vector<Generator> generators(const SwimmerParams& params, int depth) {
  const std::vector<VectorFieldHandle> base{drift_field(params), control_field_x(params),
                                            control_field_y(params)};
  std::vector<Generator> out;
  for (const auto& b : base) out.push_back({b.label, b});
  if (depth < 2) return out;

  std::vector<VectorFieldHandle> previous;
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (std::size_t j = i + 1; j < base.size(); ++j) {
      previous.push_back(bracket_field(base[i], base[j]));
      out.push_back({previous.back().label, previous.back()});
    }
  }
  for (int d = 3; d <= depth; ++d) {
    std::vector<VectorFieldHandle> level;
    for (const auto& a : base) {
      for (const auto& w : previous) {
        level.push_back(bracket_field(a, w));
        out.push_back({level.back().label, level.back()});
      }
    }
    previous = std::move(level);
  }
  return out;
}

}  // namespace

std::vector<std::string> generator_words(int depth) {
  std::vector<std::string> out;
  for (const auto& g : generators(SwimmerParams{}, depth)) out.push_back(g.label);
  return out;
}

RankReport lie_rank(const SwimmerParams& params, const Configuration& state, int depth) {
  if (depth < 2) throw PreconditionError("lie_rank requires depth >= 2");
  params.validate();

  RankReport rep;
  rep.depth = depth;
  rep.equilibrium = state;
  const Vec5 x = state.as_vector();
  const auto gens = generators(params, depth);
  Eigen::MatrixXd stack(static_cast<Eigen::Index>(gens.size()), 5);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const Vec5 v = gens[i].field(x);
    rep.labels.push_back(gens[i].label);
    rep.basis_vectors.push_back(v);
    stack.row(static_cast<Eigen::Index>(i)) = v.transpose();
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(stack);
  const Eigen::VectorXd sv = svd.singularValues();
  rep.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double sigma1 = rep.singular_values.empty() ? 0.0 : rep.singular_values.front();
  rep.tolerance = kRankRelativeTolerance * sigma1;
  for (double s : rep.singular_values) {
    if (sigma1 > 0.0 && s > rep.tolerance) ++rep.rank;
  }

  const bool straight = state.alpha2 == 0.0 && state.alpha3 == 0.0;
  if (!straight) {
    rep.notes.push_back("state is not straight; the straight-equilibrium rank bound does not apply");
    if (rep.rank == 5) {
      rep.notes.push_back(
          "full rank away from straight shapes: the field directions are not confined there");
    }
  }
  return rep;
}

}  // namespace magswim
