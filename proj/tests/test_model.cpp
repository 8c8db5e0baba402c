#include <cmath>

#include <gtest/gtest.h>

#include "rdlab/model.hpp"
#include "support.hpp"

using namespace rdlab;

namespace {

ReactionParams params(double a, double b, double g) {
  ReactionParams p;
  p.alpha = a;
  p.beta = b;
  p.gamma = g;
  return p;
}

void expect_conserves(const ReactionParams& p, const MassPair& m, const Equilibrium& e) {
  EXPECT_NEAR(p.gamma * e.a_inf + p.alpha * e.c_inf, m.m1, 1e-12 * m.m1);
  EXPECT_NEAR(p.gamma * e.b_inf + p.beta * e.c_inf, m.m2, 1e-12 * m.m2);
}

}  // namespace

TEST(Power, IntegerAndRealExponents) {
  EXPECT_EQ(power(3.0, 2.0), 9.0);
  EXPECT_EQ(power(0.0, 3.0), 0.0);
  EXPECT_EQ(power(2.0, 0.0), 1.0);
  EXPECT_NEAR(power(2.0, 1.5), std::pow(2.0, 1.5), 1e-15);
  EXPECT_EQ(power(0.0, 1.5), 0.0);
}

TEST(ReactionParams, RejectsInvalid) {
  EXPECT_THROW(params(0.5, 1, 1).validate(), InvalidParameter);
  ReactionParams p;
  p.d2 = 0.0;
  EXPECT_THROW(p.validate(), InvalidParameter);
  p = ReactionParams{};
  p.ell = -1.0;
  EXPECT_THROW(p.validate(), InvalidParameter);
  EXPECT_NO_THROW(ReactionParams{}.validate());
}

TEST(Rescale, IdentityRates) {
  const RescaleReport r = rescale_params(params(1, 1, 1), 1.0);
  EXPECT_FALSE(r.balanced);
  EXPECT_EQ(r.concentration_factor, 1.0);
  EXPECT_EQ(r.time_factor, 1.0);
  EXPECT_EQ(r.space_factor, 1.0);
  EXPECT_EQ(r.third_equation_factor, 1.0);
  EXPECT_TRUE(r.rescaled.is_rescaled());
}

TEST(Rescale, UnequalRates) {
  ReactionParams p = params(1, 1, 1);
  p.ell = 4.0;
  p.k = 2.0;
  const RescaleReport r = rescale_params(p, 1.0);
  EXPECT_NEAR(r.concentration_factor, 0.5, 1e-15);
  EXPECT_NEAR(r.time_factor, 0.5, 1e-15);
  EXPECT_TRUE(r.rescaled.is_rescaled());
}

TEST(Rescale, BalancedStoichiometry) {
  ReactionParams p = params(1, 2, 3);
  p.ell = 8.0;
  p.k = 1.0;
  const RescaleReport r = rescale_params(p, 1.0);
  EXPECT_TRUE(r.balanced);
  EXPECT_NEAR(r.third_equation_factor, 2.0, 1e-15);
  EXPECT_NEAR(r.rescaled.w_factor, 2.0, 1e-15);
  EXPECT_TRUE(r.rescaled.is_rescaled());
}

TEST(Rescale, RejectsInvalidInput) {
  EXPECT_THROW(rescale_params(params(0.5, 1, 1), 1.0), InvalidParameter);
  EXPECT_THROW(rescale_params(params(1, 1, 1), 0.0), InvalidParameter);
}

TEST(Rescale, RoundTripProperty) {
  rdtest::Gen gen(7);
  for (int i = 0; i < 200; ++i) {
    ReactionParams p = params(gen.integer(1, 3), gen.integer(1, 3), gen.integer(1, 4));
    p.ell = gen.log_uniform(1e-2, 1e2);
    p.k = gen.log_uniform(1e-2, 1e2);
    p.d1 = gen.log_uniform(1e-2, 1e2);
    p.d2 = gen.log_uniform(1e-2, 1e2);
    p.d3 = gen.log_uniform(1e-2, 1e2);
    const double L = gen.log_uniform(0.1, 10.0);
    const RescaleReport r = rescale_params(p, L);
    EXPECT_GT(r.time_factor, 0.0);
    EXPECT_GT(r.space_factor, 0.0);
    EXPECT_GT(r.concentration_factor, 0.0);
    EXPECT_GT(r.third_equation_factor, 0.0);
    const ReactionParams back = unapply_rescaling(r);
    for (auto [x, y] : {std::pair{back.ell, p.ell}, {back.k, p.k}, {back.d1, p.d1},
                        {back.d2, p.d2}, {back.d3, p.d3}}) {
      EXPECT_NEAR(x, y, 1e-14 * y);
    }
    EXPECT_EQ(back.alpha, p.alpha);
    EXPECT_EQ(back.gamma, p.gamma);
  }
}

TEST(Equilibrium, SymmetricCaseIsExact) {
  const ReactionParams p = params(1, 1, 1);
  const Equilibrium e = compute_equilibrium(p, {2.0, 2.0});
  EXPECT_NEAR(e.a_inf, 1.0, 1e-14);
  EXPECT_NEAR(e.b_inf, 1.0, 1e-14);
  EXPECT_NEAR(e.c_inf, 1.0, 1e-14);
}

TEST(Equilibrium, QuadraticCase) {
  const ReactionParams p = params(1, 1, 1);
  const Equilibrium e = compute_equilibrium(p, {3.0, 2.0});
  const double s3 = std::sqrt(3.0);
  EXPECT_NEAR(e.a_inf, s3, 1e-14);
  EXPECT_NEAR(e.b_inf, s3 - 1.0, 1e-14);
  EXPECT_NEAR(e.c_inf, 3.0 - s3, 1e-14);
  expect_conserves(p, {3.0, 2.0}, e);
}

TEST(Equilibrium, CubicCaseMatchesIndependentBisection) {
  // (2 - 2c)^2 (1 - c) = c has the root c = 1/2 on [0, 1]; a 40-digit
  // bisection run ahead of the build gives 0.5 to all digits.
  const ReactionParams p = params(2, 1, 1);
  const Equilibrium e = compute_equilibrium(p, {2.0, 1.0});
  EXPECT_NEAR(e.c_inf, 0.5, 1e-14);
  EXPECT_NEAR(e.a_inf, 1.0, 1e-14);
  EXPECT_NEAR(e.b_inf, 0.5, 1e-14);
}

TEST(Equilibrium, RequiresRescaledPositiveInput) {
  ReactionParams p = params(1, 1, 1);
  EXPECT_THROW(compute_equilibrium(p, {0.0, 1.0}), InvalidParameter);
  p.ell = 2.0;
  EXPECT_THROW(compute_equilibrium(p, {1.0, 1.0}), InvalidParameter);
}

TEST(Equilibrium, RandomConfigsProperty) {
  rdtest::Gen gen(11);
  for (int i = 0; i < 200; ++i) {
    const ReactionParams p = params(gen.integer(1, 3), gen.integer(1, 3), gen.integer(1, 3));
    const MassPair m{gen.uniform(0.5, 10.0), gen.uniform(0.5, 10.0)};
    const Equilibrium e = compute_equilibrium(p, m);
    EXPECT_GT(e.a_inf, 0.0);
    EXPECT_GT(e.b_inf, 0.0);
    EXPECT_GT(e.c_inf, 0.0);
    expect_conserves(p, m, e);
    EXPECT_LE(e.residual, equilibrium_residual_bound(p, m));
    EXPECT_EQ(e.residual, equilibrium_residual(e, p));
  }
}

TEST(Equilibrium, MonotoneInFirstMass) {
  rdtest::Gen gen(13);
  for (int i = 0; i < 50; ++i) {
    const ReactionParams p = params(gen.integer(1, 3), gen.integer(1, 3), gen.integer(1, 3));
    const double m2 = gen.uniform(0.5, 10.0);
    double prev = 0.0;
    for (double m1 = 0.5; m1 <= 10.0; m1 += 0.25) {
      const double c = compute_equilibrium(p, {m1, m2}).c_inf;
      EXPECT_GE(c, prev - 1e-14);
      prev = c;
    }
  }
}

TEST(Equilibrium, ThirdEquationFactorKeepsWeightedMasses) {
  ReactionParams p = params(1, 2, 3);
  p.w_factor = 2.0;
  const MassPair m{4.0, 5.0};
  const Equilibrium e = compute_equilibrium(p, m);
  EXPECT_NEAR(p.gamma * p.w_factor * e.a_inf + p.alpha * e.c_inf, m.m1, 1e-12 * m.m1);
  EXPECT_NEAR(p.gamma * p.w_factor * e.b_inf + p.beta * e.c_inf, m.m2, 1e-12 * m.m2);
  EXPECT_LE(e.residual, equilibrium_residual_bound(p, m));
}

TEST(EquilibriumResidual, Examples) {
  const ReactionParams p = params(1, 1, 1);
  Equilibrium e;
  e.a_inf = e.b_inf = e.c_inf = 1.0;
  EXPECT_EQ(equilibrium_residual(e, p), 0.0);
  const double s3 = std::sqrt(3.0);
  e.a_inf = s3;
  e.b_inf = s3 - 1.0;
  e.c_inf = 3.0 - s3;
  EXPECT_LE(equilibrium_residual(e, p), 1e-15);
  e.a_inf = 1.0;
  e.b_inf = 1.0;
  e.c_inf = 2.0;
  EXPECT_EQ(equilibrium_residual(e, p), 1.0);
}

TEST(WeightedMasses, Definition) {
  const ReactionParams p = params(2, 3, 5);
  const MassPair m = weighted_masses(p, 1.0, 2.0, 3.0);
  EXPECT_EQ(m.m1, 5.0 * 1.0 + 2.0 * 3.0);
  EXPECT_EQ(m.m2, 5.0 * 2.0 + 3.0 * 3.0);
}
