#include <gtest/gtest.h>

#include <random>

#include "magswim/controllability.hpp"
#include "magswim/errors.hpp"

using namespace magswim;

namespace {

const SwimmerParams kHead = SwimmerParams::with_head(1.0, 0.5, 1.0, 0.3, 0.4, 2.0, 1.5);

Vec5 random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return (Vec5() << u(rng), u(rng), u(rng), u(rng), u(rng)).finished();
}

}  // namespace

TEST(FieldJacobian, DriftIgnoresPosition) {
  std::mt19937_64 rng(71);
  const VectorFieldHandle f0 = drift_field(kHead);
  for (int k = 0; k < 10; ++k) {
    const Mat5 j = field_jacobian(f0, random_state(rng));
    // Position columns are pure finite-difference roundoff.
    EXPECT_LT(j.col(0).norm(), 1e-7 * (1 + j.norm()));
    EXPECT_LT(j.col(1).norm(), 1e-7 * (1 + j.norm()));
  }
}

TEST(FieldJacobian, ConstantFieldHasZeroJacobian) {
  const Vec5 c = (Vec5() << 1, 2, 3, 4, 5).finished();
  const VectorFieldHandle f{[c](const Vec5&) { return c; }, "c"};
  EXPECT_EQ(field_jacobian(f, Vec5::Ones()), Mat5::Zero());
}

TEST(FieldJacobian, StepHalvingAgreesToFourDigits) {
  std::mt19937_64 rng(73);
  const VectorFieldHandle fy = control_field_y(kHead);
  const Vec5 x = random_state(rng);
  const Mat5 a = field_jacobian(fy, x, 1e-6);
  const Mat5 b = field_jacobian(fy, x, 5e-7);
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-4 * a.cwiseAbs().maxCoeff());
}

TEST(LieBracket, Antisymmetry) {
  std::mt19937_64 rng(79);
  const VectorFieldHandle fx = control_field_x(kHead), fy = control_field_y(kHead);
  const Vec5 x = random_state(rng);
  EXPECT_LT(lie_bracket(fx, fx, x).norm(), 1e-9);
  EXPECT_LT((lie_bracket(fx, fy, x) + lie_bracket(fy, fx, x)).norm(), 1e-9);
}

TEST(LieBracket, BilinearInSecondArgument) {
  std::mt19937_64 rng(83);
  const VectorFieldHandle f0 = drift_field(kHead), fx = control_field_x(kHead),
                          fy = control_field_y(kHead);
  const VectorFieldHandle sum{[fx, fy](const Vec5& x) { return Vec5(fx(x) + fy(x)); }, "fx+fy"};
  const Vec5 x = random_state(rng);
  const Vec5 lhs = lie_bracket(f0, sum, x);
  const Vec5 rhs = lie_bracket(f0, fx, x) + lie_bracket(f0, fy, x);
  EXPECT_LT((lhs - rhs).norm(), 1e-5 * (1 + lhs.norm()));
}

TEST(LieBracket, DriftAndHorizontalControlCommuteAtEquilibrium) {
  const VectorFieldHandle f0 = drift_field(kHead), fx = control_field_x(kHead);
  for (double x : {0.0, 1.3, -4.0}) {
    const Vec5 xe = Configuration{x, 0.5 * x, 0, 0, 0}.as_vector();
    EXPECT_LT(lie_bracket(f0, fx, xe).norm(), 1e-9);
  }
}

TEST(EquilibriumIdentities, HorizontalFieldVanishes) {
  const EquilibriumIdentityReport r = equilibrium_identities(kHead, 0.0);
  EXPECT_LE(r.fx_residual, 1e-10);
  EXPECT_GT(r.fy_norm, 0.0);
}

TEST(EquilibriumIdentities, HorizontalControlParallelToVertical) {
  std::mt19937_64 rng(89);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int k = 0; k < 10; ++k) {
    const SwimmerParams p =
        SwimmerParams::with_head(u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng));
    EXPECT_LE(equilibrium_identities(p, 0.7).fx_relative(), 1e-8);
  }
}

TEST(EquilibriumIdentities, BracketIdentity) {
  const EquilibriumIdentityReport r = equilibrium_identities(kHead, 0.7);
  EXPECT_LE(r.bracket_relative(), 1e-5)
      << "[fx,fy] - fy[theta] fy residual relative to |fy|^2";
}

TEST(EquilibriumIdentities, RejectsVerticalOrientation) {
  EXPECT_THROW(equilibrium_identities(kHead, M_PI / 2), PreconditionError);
  EXPECT_THROW(equilibrium_identities(kHead, -M_PI / 2 + 1e-5), PreconditionError);
  EXPECT_THROW(equilibrium_identities(kHead, 2.0), PreconditionError);
}

TEST(LieRank, StraightEquilibriumHasRankFour) {
  std::mt19937_64 rng(97);
  std::uniform_real_distribution<double> u(0.2, 5.0);
  for (int k = 0; k < 5; ++k) {
    const SwimmerParams p =
        SwimmerParams::with_head(u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng));
    for (double theta : {0.0, 0.3, -0.7}) {
      const RankReport r = lie_rank(p, Configuration{0, 0, theta, 0, 0}, 3);
      EXPECT_EQ(r.rank, 4);
      EXPECT_GE(r.gap(4), 1e4);
      EXPECT_EQ(r.singular_values.size(), 5u);
      EXPECT_EQ(r.labels.size(), r.basis_vectors.size());
      EXPECT_TRUE(r.notes.empty());
    }
  }
}

TEST(LieRank, NonStraightStateIsReportedNotAsserted) {
  const RankReport r = lie_rank(kHead, Configuration{0, 0, 0.2, 0.4, -0.3}, 3);
  EXPECT_GE(r.rank, 4);
  EXPECT_FALSE(r.notes.empty());
}

TEST(LieRank, NoLoadsGiveRankZero) {
  SwimmerParams p = kHead;
  p.spring = 0.0;
  p.magnetization = 0.0;
  EXPECT_EQ(lie_rank(p, Configuration{}, 3).rank, 0);
}

TEST(LieRank, WordOrder) {
  const std::vector<std::string> words = generator_words(3);
  ASSERT_EQ(words.size(), 15u);
  EXPECT_EQ(words[0], "f0");
  EXPECT_EQ(words[2], "fy");
  EXPECT_EQ(words[3], "[f0,fx]");
  EXPECT_EQ(words[5], "[fx,fy]");
  EXPECT_EQ(words[6], "[f0,[f0,fx]]");
  EXPECT_EQ(words.back(), "[fy,[fx,fy]]");
  EXPECT_THROW(lie_rank(kHead, Configuration{}, 1), PreconditionError);
}
