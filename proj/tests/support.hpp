#pragma once

// Small helpers shared by the test binaries: a seeded generator for
// property tests and the classical RK4 integrator used as an ODE oracle.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>

namespace rdtest {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  // log-uniform on [lo, hi], lo > 0
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

 private:
  std::mt19937_64 engine_;
};

/// Integrates u' = -a R, v' = -b R, w' = g R with R = u^a v^b - w^g by RK4.
inline std::array<double, 3> rk4_homogeneous(double alpha, double beta, double gamma,
                                             std::array<double, 3> y, double t_end, double dt) {
  auto f = [&](const std::array<double, 3>& s) {
    const double r = std::pow(s[0], alpha) * std::pow(s[1], beta) - std::pow(s[2], gamma);
    return std::array<double, 3>{-alpha * r, -beta * r, gamma * r};
  };
  auto axpy = [](const std::array<double, 3>& s, double h, const std::array<double, 3>& k) {
    return std::array<double, 3>{s[0] + h * k[0], s[1] + h * k[1], s[2] + h * k[2]};
  };
  const auto steps = static_cast<long>(std::llround(t_end / dt));
  for (long i = 0; i < steps; ++i) {
    const auto k1 = f(y);
    const auto k2 = f(axpy(y, dt / 2, k1));
    const auto k3 = f(axpy(y, dt / 2, k2));
    const auto k4 = f(axpy(y, dt, k3));
    for (int j = 0; j < 3; ++j) y[j] += dt / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
  }
  return y;
}

}  // namespace rdtest
