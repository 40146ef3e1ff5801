#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "magswim/errors.hpp"
#include "magswim/linear_analysis.hpp"
#include "magswim/numerics.hpp"
#include "support/oracles.hpp"

using namespace magswim;

namespace {

const SwimmerParams kHead = SwimmerParams::with_head(1.0, 0.5, 1.0, 0.3, 0.4, 2.0, 1.5);

SwimmerParams random_head(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 10.0);
  return SwimmerParams::with_head(u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng));
}

double rel(const Mat3& a, const Mat3& b) {
  return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

}  // namespace

TEST(Linearize, MatchesClosedForm) {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 50; ++k) {
    const SwimmerParams p = random_head(rng);
    const LinearizedModel lin = linearize_angles(p);
    EXPECT_LT(rel(lin.a, oracle::matrix_a(p)), 1e-5);
    EXPECT_LT(rel(closed_form_linearization(p).a, oracle::matrix_a(p)), 1e-12);
    EXPECT_LT(lin.step_halving_change, 1e-4);
  }
}

TEST(Linearize, NoLoadsGiveZeroModel) {
  SwimmerParams p = kHead;
  p.spring = 0.0;
  p.magnetization = 0.0;
  const LinearizedModel lin = linearize_angles(p);
  EXPECT_EQ(lin.a, Mat3::Zero());
  EXPECT_EQ(lin.b, Vec3::Zero());
  EXPECT_EQ(closed_form_linearization(p).a, Mat3::Zero());
}

TEST(Linearize, IndependentOfParallelDrag) {
  SwimmerParams p = kHead;
  const Mat3 a0 = linearize_angles(p).a;
  p.xi = {2.0, 0.1, 0.1};
  EXPECT_LT(rel(linearize_angles(p).a, a0), 1e-5);
}

TEST(Linearize, ClosedFormEntryAndPrecondition) {
  const SwimmerParams& p = kHead;
  const double e = 1.0, e1 = 0.4, K = 2.0, M = 1.5;
  const double delta = 6.0 / (e * e1 * (8 * e + 7 * e1));
  EXPECT_NEAR(closed_form_linearization(p).a(2, 2),
              delta * (-16 * (2 * K + M) * e * e1 - (16 * K + 11 * M) * e1 * e1), 1e-12);
  SwimmerParams q = p;
  q.eta[2] = 1.5;
  EXPECT_THROW(closed_form_linearization(q), PreconditionError);
}

TEST(CharPoly, KnownMatrices) {
  const CubicCoefficients c = char_poly(-Mat3::Identity());
  EXPECT_DOUBLE_EQ(c.a3, -1);
  EXPECT_DOUBLE_EQ(c.a2, -3);
  EXPECT_DOUBLE_EQ(c.a1, -3);
  EXPECT_DOUBLE_EQ(c.a0, -1);
  const CubicCoefficients z = char_poly(Mat3::Zero());
  EXPECT_EQ(z.a3, -1.0);
  EXPECT_EQ(z.a2, 0.0);
  EXPECT_EQ(z.a1, 0.0);
  EXPECT_EQ(z.a0, 0.0);
}

TEST(CharPoly, VanishesAtEigenvalues) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int k = 0; k < 20; ++k) {
    Mat3 a;
    for (int i = 0; i < 9; ++i) a.data()[i] = u(rng);
    const CubicCoefficients c = char_poly(a);
    const Eigen::EigenSolver<Mat3> eig(a);
    for (int i = 0; i < 3; ++i) {
      const Complex l = eig.eigenvalues()[i];
      const double scale = 1 + std::pow(std::abs(l), 3);
      EXPECT_LT(std::abs(c.evaluate(l)), 1e-9 * scale);
    }
  }
}

TEST(CharPoly, ClosedFormCoefficients) {
  std::mt19937_64 rng(47);
  for (int k = 0; k < 50; ++k) {
    const SwimmerParams p = random_head(rng);
    const CubicCoefficients cc = closed_form_char_coeffs(p);
    const CubicCoefficients ref = char_poly(oracle::matrix_a(p));
    EXPECT_EQ(cc.a3, -1.0);
    EXPECT_LT(cc.a2, 0.0);
    EXPECT_LT(cc.a1, 0.0);
    EXPECT_LT(cc.a0, 0.0);
    EXPECT_NEAR(cc.a2, ref.a2, 1e-10 * std::abs(ref.a2));
    EXPECT_NEAR(cc.a1, ref.a1, 1e-10 * std::abs(ref.a1));
    EXPECT_NEAR(cc.a0, ref.a0, 1e-10 * std::abs(ref.a0));
    EXPECT_NEAR(cc.a2, oracle::matrix_a(p).trace(), 1e-10 * std::abs(cc.a2));
    EXPECT_TRUE(routh_hurwitz_stable(cc));
  }
}

TEST(RouthHurwitz, Cases) {
  EXPECT_TRUE(routh_hurwitz_stable({1, 3, 3, 1}));
  EXPECT_TRUE(routh_hurwitz_stable({-1, -3, -3, -1}));
  EXPECT_FALSE(routh_hurwitz_stable({1, 1, 1, 1}));
  EXPECT_FALSE(routh_hurwitz_stable({1, -3, 3, -1}));
  EXPECT_FALSE(routh_hurwitz_stable({1, 3, 3, 0}));
  EXPECT_THROW(routh_hurwitz_stable({0, 1, 1, 1}), PreconditionError);
}

TEST(Resolvents, IdentityCase) {
  const Resolvents r = resolvents(-Mat3::Identity(), 1.0);
  const CMat3 expected = CMat3::Identity() / Complex(1, 1);
  EXPECT_LT((r.plus - expected).norm(), 1e-15);
  EXPECT_LT((r.minus - expected.conjugate()).norm(), 1e-15);
}

TEST(Resolvents, Limits) {
  const Mat3 a = linearize_angles(kHead).a;
  const CMat3 inv = (-a.inverse()).cast<Complex>();
  const Resolvents low = resolvents(a, 1e-9);
  EXPECT_LT((low.plus - inv).norm(), 1e-6 * inv.norm());
  EXPECT_LT((low.minus - inv).norm(), 1e-6 * inv.norm());
  double prev = 0.0;
  for (double w : {1e3, 1e4}) {
    const Resolvents r = resolvents(a, w);
    const CMat3 approx = CMat3::Identity() / Complex(0, w) - a.cast<Complex>() / (w * w);
    const double err = (r.plus - approx).norm() * w * w;
    const double err_m = (r.minus - (-CMat3::Identity() / Complex(0, w) - a.cast<Complex>() / (w * w))).norm() * w * w;
    // Remainder after the 1/w^2 term is A^2/(iw)^3 to leading order.
    EXPECT_LT(err, 1.5 * (a * a).norm() / w);
    EXPECT_LT(err_m, 1.5 * (a * a).norm() / w);
    if (prev > 0) EXPECT_LT(err, prev / 5);
    prev = err;
  }
}

TEST(PeriodicOrbit, SolvesForcedSystem) {
  const LinearizedModel lin = linearize_angles(kHead);
  for (double w : {0.1, 2.0, 30.0}) {
    const PeriodicOrbit o = steady_periodic(lin.a, lin.b, w);
    EXPECT_LT((o.c_minus - o.c_plus.conjugate()).norm(), 1e-14 * o.c_plus.norm());
    const oracle::RealOrbit ref = oracle::real_orbit(lin.a, lin.b, w);
    for (double t : {0.0, 0.3, 1.7, 5.1}) {
      const Vec3 resid = o.rate(t) - lin.a * o.at(t) - lin.b * std::sin(w * t);
      EXPECT_LT(resid.norm(), 1e-10 * (1 + lin.b.norm()));
      EXPECT_LT(o.imaginary_residue(t), 1e-12 * (1 + o.c_plus.norm()));
      EXPECT_LT((o.at(t) - ref.at(t)).norm(), 1e-10 * (1 + ref.s.norm()));
    }
  }
  const PeriodicOrbit z = steady_periodic(lin.a, Vec3::Zero(), 1.0);
  EXPECT_EQ(z.at(0.7), Vec3::Zero());
}

TEST(GradG, MatchesClosedForm) {
  std::mt19937_64 rng(53);
  for (int k = 0; k < 50; ++k) {
    const SwimmerParams p = random_head(rng);
    EXPECT_LT(rel(grad_gx_origin(p), oracle::grad_gx(p)), 1e-5);
    EXPECT_LT(rel(closed_form_grad_gx(p), oracle::grad_gx(p)), 1e-13);
    EXPECT_LE(grad_gy_origin(p).cwiseAbs().maxCoeff(), 1e-6);
  }
  const SwimmerParams& p = kHead;
  EXPECT_NEAR(grad_gx_origin(p)(0, 0), 2 * (1.0 - 0.4) / (2 * (2 * 1.0 + 0.4)), 1e-8);
}

TEST(Displacement, TwoRoutesAndOracle) {
  std::mt19937_64 rng(59);
  for (int k = 0; k < 10; ++k) {
    const SwimmerParams p = random_head(rng);
    const DisplacementModel m = DisplacementModel::build(p);
    for (double w : numerics::log_space(1e-2, 1e2, 7)) {
      const QuadraticDisplacement q = net_displacement_quadratic(m, w);
      const double ref = oracle::quadratic_displacement(m.linear.a, m.linear.b, m.grad_gx, w);
      EXPECT_LE(std::abs(q.value - q.quadrature), 1e-8 * std::max(1.0, std::abs(q.value)));
      EXPECT_LE(std::abs(q.value - ref), 1e-9 * std::max(1e-12, std::abs(ref)));
    }
  }
}

TEST(Displacement, VanishesAtBothEnds) {
  const DisplacementCurve c = frequency_sweep(kHead, 1e-2, 1e3, 64, 1);
  const double peak = std::abs(c.dx2_star);
  // Low-frequency decay is linear in omega.
  const double lo1 = net_displacement_quadratic(kHead, 1e-4 * c.omega_star).value;
  const double lo2 = net_displacement_quadratic(kHead, 1e-5 * c.omega_star).value;
  EXPECT_LT(std::abs(lo1), 1e-3 * peak);
  EXPECT_NEAR(lo1 / lo2, 10.0, 0.01);
  EXPECT_LT(std::abs(net_displacement_quadratic(kHead, 1e4 * c.omega_star).value), 1e-3 * peak);
}

TEST(Displacement, EqualCoefficientsGiveZero) {
  const SwimmerParams p = SwimmerParams::uniform(1.0, 0.5, 1.0, 2.0, 1.5);
  const DisplacementModel m = DisplacementModel::build(p);
  for (double w : {0.01, 1.0, 100.0}) {
    EXPECT_LE(std::abs(net_displacement_quadratic(m, w).value), 1e-12 * m.grad_gx.norm() * m.linear.b.squaredNorm());
  }
}

TEST(Displacement, RequiresPositiveFrequency) {
  EXPECT_THROW(net_displacement_quadratic(kHead, 0.0), PreconditionError);
}

TEST(SkewKernel, NullVectorOfSkewPart) {
  std::mt19937_64 rng(61);
  for (int k = 0; k < 20; ++k) {
    const SwimmerParams p = random_head(rng);
    const Mat3 g = grad_gx_origin(p);
    const Vec3 u = skew_kernel(p);
    EXPECT_NEAR(u.norm(), 1.0, 1e-14);
    EXPECT_LT(((g - g.transpose()) * u).norm(), 1e-10 * g.norm());
    const Vec3 cf = oracle::kernel_u(p);
    EXPECT_LT(((g - g.transpose()) * cf).norm(), 1e-6 * g.norm() * cf.norm());
    EXPECT_LT((u - cf.normalized()).norm(), 1e-6);
  }
  // Isotropic drag on every link.
  const SwimmerParams iso = SwimmerParams::with_head(1.0, 1.0, 1.0, 0.5, 0.5, 1.0, 1.0);
  const Mat3 g = oracle::grad_gx(iso);
  EXPECT_LT(((g - g.transpose()) * oracle::kernel_u(iso)).norm(), 1e-12);
}

TEST(SkewKernel, IndependenceDeterminantDecaysCubically) {
  const DisplacementModel m = DisplacementModel::build(kHead);
  const Vec3 u = skew_kernel(kHead);
  const double d1 = std::abs(kernel_independence_det(m, u, 1e4));
  const double d2 = std::abs(kernel_independence_det(m, u, 1e5));
  EXPECT_GT(d1, 0.0);
  EXPECT_NEAR(d1 / d2, 1e3, 10.0);
}

TEST(Sweep, InteriorMaximumAndRefinement) {
  const DisplacementCurve c = frequency_sweep(kHead, 1e-2, 1e3, 64, 2);
  ASSERT_EQ(c.omegas.size(), 64u);
  EXPECT_GT(c.grid_argmax, 0u);
  EXPECT_LT(c.grid_argmax, 63u);
  EXPECT_GE(c.omega_star, c.omegas[c.grid_argmax - 1]);
  EXPECT_LE(c.omega_star, c.omegas[c.grid_argmax + 1]);
  EXPECT_GE(std::abs(c.dx2_star), std::abs(c.dx2[c.grid_argmax]));
  for (std::size_t i = 1; i < c.search_history.size(); ++i) {
    EXPECT_GE(c.search_history[i], c.search_history[i - 1]);
  }
  EXPECT_FALSE(c.negligible);
  EXPECT_TRUE(c.warnings.empty());
}

TEST(Sweep, DeterministicAcrossWorkerCounts) {
  const DisplacementCurve a = frequency_sweep(kHead, 1e-2, 1e3, 40, 1);
  const DisplacementCurve b = frequency_sweep(kHead, 1e-2, 1e3, 40, 4);
  EXPECT_EQ(a.dx2, b.dx2);
  EXPECT_EQ(a.omega_star, b.omega_star);
}

TEST(Sweep, EqualCoefficientsFlaggedNegligible) {
  const DisplacementCurve c =
      frequency_sweep(SwimmerParams::uniform(1.0, 0.5, 1.0, 2.0, 1.5), 1e-2, 1e3, 32, 1);
  EXPECT_TRUE(c.negligible);
  ASSERT_FALSE(c.warnings.empty());
  for (double v : c.dx2) EXPECT_LE(std::abs(v), 1e-12 * c.scale);
}

TEST(Sweep, RejectsBadGrid) {
  EXPECT_THROW(frequency_sweep(kHead, 1.0, 0.5, 32), PreconditionError);
  EXPECT_THROW(frequency_sweep(kHead, 1e-2, 1e2, 8), PreconditionError);
}

TEST(GoldenSection, FindsParabolaPeak) {
  const auto r = numerics::golden_section_maximize([](double x) { return -(x - 0.3) * (x - 0.3); },
                                                   -1.0, 2.0, 1e-8);
  EXPECT_NEAR(r.argmax, 0.3, 1e-7);
  EXPECT_GT(r.iterations, 10);
}
