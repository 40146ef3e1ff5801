#pragma once

#include <functional>
#include <string>
#include <vector>

#include "magswim/core_model.hpp"

namespace magswim {

/// A vector field on the state (x, y, theta, alpha2, alpha3).
struct VectorFieldHandle {
  std::function<Vec5(const Vec5&)> evaluate;
  std::string label;

  Vec5 operator()(const Vec5& x) const { return evaluate(x); }
};

VectorFieldHandle drift_field(const SwimmerParams& params);      // f0
VectorFieldHandle control_field_x(const SwimmerParams& params);  // fx
VectorFieldHandle control_field_y(const SwimmerParams& params);  // fy

inline constexpr double kJacobianStep = 1e-6;
inline constexpr double kNestedJacobianStep = 1e-4;

/// Central differences with per-coordinate step rel_step * max(1, |X_i|).
Mat5 field_jacobian(const VectorFieldHandle& field, const Vec5& x,
                    double rel_step = kJacobianStep);

/// [f, g](X) = Dg(X) f(X) - Df(X) g(X).
Vec5 lie_bracket(const VectorFieldHandle& f, const VectorFieldHandle& g, const Vec5& x,
                 double rel_step = kJacobianStep);

/// The bracket [f, g] as a field, labelled "[f,g]", for nesting.
VectorFieldHandle bracket_field(const VectorFieldHandle& f, const VectorFieldHandle& g,
                                double rel_step = kNestedJacobianStep);

struct EquilibriumIdentityReport {
  double theta = 0.0;
  double fy_norm = 0.0;
  double fx_residual = 0.0;       // |fx + tan(theta) fy|
  double bracket_residual = 0.0;  // |[fx, fy] - fy[2] fy|
  double fx_relative() const { return fy_norm > 0.0 ? fx_residual / fy_norm : fx_residual; }
  double bracket_relative() const {
    return fy_norm > 0.0 ? bracket_residual / (fy_norm * fy_norm) : bracket_residual;
  }
};

/// Evaluates the straight-equilibrium identities at X_e = (0, 0, theta, 0, 0).
/// Throws PreconditionError for |theta| within 1e-3 of pi/2.
EquilibriumIdentityReport equilibrium_identities(const SwimmerParams& params, double theta);

struct RankReport {
  std::vector<std::string> labels;
  std::vector<Vec5> basis_vectors;
  std::vector<double> singular_values;  // descending
  int rank = 0;
  int depth = 0;
  double tolerance = 0.0;  // absolute threshold on singular values
  Configuration equilibrium;
  std::vector<std::string> notes;

  /// sigma_k / sigma_{k+1} with 1-based k; infinity when sigma_{k+1} == 0.
  double gap(int k) const;
};

inline constexpr double kRankRelativeTolerance = 1e-8;

/// Generators in word order: f0, fx, fy, then for each depth d >= 2 the
/// brackets [a, w] with a in (f0, fx, fy) and w running over the depth d-1
/// words, skipping [a, a] and brackets already generated with swapped order
/// at depth 2. Rank counts singular values above 1e-8 sigma_1.
RankReport lie_rank(const SwimmerParams& params, const Configuration& state, int depth);

/// Words used by lie_rank at the given depth.
std::vector<std::string> generator_words(int depth);

}  // namespace magswim
