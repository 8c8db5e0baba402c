#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "rdlab/grid.hpp"
#include "support.hpp"

using namespace rdlab;
using std::numbers::pi;

TEST(Grid, Geometry) {
  const Grid1D g(4);
  EXPECT_EQ(g.n_cells(), 4u);
  EXPECT_EQ(g.dx(), 0.25);
  EXPECT_EQ(g.center(0), 0.125);
  EXPECT_EQ(g.left_face(3), 0.75);
  EXPECT_THROW(Grid1D(1), InvalidParameter);
}

TEST(Integrate, Examples) {
  EXPECT_DOUBLE_EQ(integrate(Grid1D(10), Field(10, 2.0)), 2.0);
  EXPECT_EQ(integrate(Grid1D(2), Field{1.0, 3.0}), 2.0);
  const Grid1D g(200);
  const Field f = sample_centers(g, [](double x) { return std::sin(pi * x); });
  EXPECT_NEAR(integrate(g, f), 2.0 / pi, 1e-4);
}

TEST(Integrate, LengthMismatch) {
  EXPECT_THROW(integrate(Grid1D(3), Field(4, 1.0)), InvalidParameter);
  EXPECT_THROW(laplacian_neumann(Grid1D(3), Field(2, 1.0)), InvalidParameter);
  EXPECT_THROW(fisher_information(Grid1D(3), Field(2, 1.0), 1.0), InvalidParameter);
}

TEST(Laplacian, ConstantIsZero) {
  const Field out = laplacian_neumann(Grid1D(7), Field(7, 3.5));
  for (double x : out) EXPECT_EQ(x, 0.0);
}

TEST(Laplacian, TwoCells) {
  const Grid1D g(2);
  const double a = 1.5, b = 4.0, dx2 = g.dx() * g.dx();
  const Field out = laplacian_neumann(g, Field{a, b});
  EXPECT_DOUBLE_EQ(out[0], (b - a) / dx2);
  EXPECT_DOUBLE_EQ(out[1], (a - b) / dx2);
}

TEST(Laplacian, CosineEigenfunction) {
  double prev_err = 0.0;
  for (std::size_t n : {100u, 200u, 400u}) {
    const Grid1D g(n);
    const Field f = sample_centers(g, [](double x) { return std::cos(pi * x); });
    const Field lf = laplacian_neumann(g, f);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      err = std::max(err, std::abs(lf[i] + pi * pi * f[i]));
    }
    EXPECT_LT(err, 10.0 * g.dx() * g.dx());
    if (prev_err > 0.0) {
      EXPECT_GT(prev_err / err, 3.5);
    }
    prev_err = err;
  }
}

TEST(Laplacian, ZeroIntegralAndLinearityProperty) {
  rdtest::Gen gen(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.integer(2, 64));
    const Grid1D g(n);
    Field f(n), h(n), comb(n);
    const double a = gen.uniform(-3, 3), b = gen.uniform(-3, 3);
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = gen.uniform(0, 5);
      h[i] = gen.uniform(0, 5);
      comb[i] = a * f[i] + b * h[i];
    }
    const Field lf = laplacian_neumann(g, f), lh = laplacian_neumann(g, h);
    const Field lc = laplacian_neumann(g, comb);
    double scale = 0.0;
    for (double x : lf) scale = std::max(scale, std::abs(x));
    EXPECT_NEAR(integrate(g, lf), 0.0, 1e-13 * scale);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(lc[i], a * lf[i] + b * lh[i], 1e-12 * (1.0 + std::abs(lc[i])) * scale);
    }
  }
}

TEST(Fisher, ConstantIsZero) { EXPECT_EQ(fisher_information(Grid1D(9), Field(9, 2.0), 3.0), 0.0); }

TEST(Fisher, QuadraticProfile) {
  // sqrt f = 1 + x exactly, so each face contributes dx^2 and the discrete
  // value is 4 (n - 1) dx = 4 (1 - dx): first order in dx, 3.99 at n = 400.
  for (std::size_t n : {100u, 200u, 400u}) {
    const Grid1D g(n);
    const Field f = sample_centers(g, [](double x) { return (1 + x) * (1 + x); });
    EXPECT_NEAR(fisher_information(g, f, 1.0), 4.0 * (1.0 - g.dx()), 1e-12);
  }
}

TEST(Fisher, QuadraticProfileRefinementIsMonotone) {
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t n : {100u, 200u, 400u}) {
    const Grid1D g(n);
    const Field f = sample_centers(g, [](double x) { return (1 + x) * (1 + x); });
    const double err = std::abs(fisher_information(g, f, 1.0) - 4.0);
    EXPECT_LT(err, prev);
    prev = err;
  }
}

TEST(Fisher, NeumannCompatibleProfileIsSecondOrder) {
  // f = (2 + cos pi x)^2 has zero slope at both ends; 4 int |(sqrt f)'|^2 = 2 pi^2.
  double prev = 0.0;
  for (std::size_t n : {100u, 200u, 400u}) {
    const Grid1D g(n);
    const Field f = sample_centers(g, [](double x) {
      const double r = 2.0 + std::cos(pi * x);
      return r * r;
    });
    const double err = std::abs(fisher_information(g, f, 1.0) - 2.0 * pi * pi);
    if (prev > 0.0) {
      EXPECT_GT(prev / err, 3.5);
    }
    prev = err;
  }
}

TEST(Fisher, ZeroCellIsFinite) {
  Field f(10, 1.0);
  f[4] = 0.0;
  const double v = fisher_information(Grid1D(10), f, 1.0);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_DOUBLE_EQ(v, 4.0 * 2.0 / 0.1);
}

TEST(Fisher, NegativeEntryRejected) {
  Field f(4, 1.0);
  f[2] = -1e-300;
  EXPECT_THROW(fisher_information(Grid1D(4), f, 1.0), InvalidParameter);
}

TEST(Fisher, ZeroIffConstantProperty) {
  rdtest::Gen gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.integer(2, 50));
    const Grid1D g(n);
    Field f(n, gen.uniform(0, 4));
    EXPECT_EQ(fisher_information(g, f, 1.0), 0.0);
    f[static_cast<std::size_t>(gen.integer(0, static_cast<int>(n) - 1))] += gen.uniform(0.01, 1);
    EXPECT_GT(fisher_information(g, f, 1.0), 0.0);
  }
}
