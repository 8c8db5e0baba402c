#pragma once

#include <cmath>
#include <limits>

#include "rdlab/grid.hpp"
#include "rdlab/model.hpp"
#include "rdlab/state.hpp"

namespace rdlab {

/// x (ln x - 1), extended by 0 at x = 0.
inline double entropy_density(double x) {
  return x > 0.0 ? x * (std::log(x) - 1.0) : 0.0;
}

/// (1 + eps) ln(1 + eps) - eps, accurate for small |eps|.
inline double relative_entropy_kernel(double eps) {
  if (std::abs(eps) < 1e-2) {
    // sum_{k>=2} (-1)^k eps^k / (k (k - 1))
    double term = eps * eps;
    double sum = 0.0;
    for (int k = 2; k <= 12; ++k) {
      sum += term / (k * (k - 1.0));
      term *= -eps;
    }
    return sum;
  }
  if (eps <= -1.0) return 1.0;
  return (1.0 + eps) * std::log1p(eps) - eps;
}

/// x ln(x / x_inf) - (x - x_inf), extended by x_inf at x = 0. Requires x_inf > 0.
inline double relative_entropy_density(double x, double x_inf) {
  if (x <= 0.0) return x_inf;
  return x_inf * relative_entropy_kernel((x - x_inf) / x_inf);
}

/// (a - b) ln(a / b) for a, b >= 0: zero when a == b, +inf when exactly one vanishes.
inline double reaction_density(double a, double b) {
  if (a == b) return 0.0;
  if (a == 0.0 || b == 0.0) return std::numeric_limits<double>::infinity();
  return (a - b) * (std::log(a) - std::log(b));
}

/// Entropy, relative entropy and the split of the entropy dissipation.
/// The dissipation identities assume w_factor == 1.
struct EntropyReport {
  double E = 0.0;
  double E_rel = std::numeric_limits<double>::quiet_NaN();  // NaN unless an equilibrium was given
  double D = 0.0;
  double fisher_u = 0.0;
  double fisher_v = 0.0;
  double fisher_w = 0.0;
  double reaction_term = 0.0;

  /// Some cell has exactly one of u^alpha v^beta, w^gamma equal to zero.
  bool infinite() const { return std::isinf(reaction_term); }
};

inline double entropy(const Grid1D& g, const State& s) {
  s.require_grid(g);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.n_cells(); ++i) {
    sum += entropy_density(s.u[i]) + entropy_density(s.v[i]) + entropy_density(s.w[i]);
  }
  return g.dx() * sum;
}

namespace detail {
inline void require_positive_equilibrium(const Equilibrium& e) {
  if (!(e.a_inf > 0.0 && e.b_inf > 0.0 && e.c_inf > 0.0)) {
    throw InvalidParameter("equilibrium has a non-positive component");
  }
}
}  // namespace detail

inline double relative_entropy(const Grid1D& g, const State& s, const Equilibrium& e) {
  s.require_grid(g);
  detail::require_positive_equilibrium(e);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.n_cells(); ++i) {
    sum += relative_entropy_density(s.u[i], e.a_inf) +
           relative_entropy_density(s.v[i], e.b_inf) +
           relative_entropy_density(s.w[i], e.c_inf);
  }
  return g.dx() * sum;
}

/// dx * sum_i (a_i - b_i) ln(a_i / b_i) with a = u^alpha v^beta, b = w^gamma.
inline double reaction_dissipation(const Grid1D& g, const ReactionParams& p, const State& s) {
  s.require_grid(g);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.n_cells(); ++i) {
    const double u = s.u[i], v = s.v[i], w = s.w[i];
    const bool a_zero = u == 0.0 || v == 0.0;
    const bool b_zero = w == 0.0;
    if (a_zero && b_zero) continue;
    if (a_zero != b_zero) return std::numeric_limits<double>::infinity();
    const double log_a = p.alpha * std::log(u) + p.beta * std::log(v);
    const double log_b = p.gamma * std::log(w);
    const double diff = power(u, p.alpha) * power(v, p.beta) - power(w, p.gamma);
    sum += diff * (log_a - log_b);
  }
  return g.dx() * sum;
}

inline EntropyReport dissipation(const Grid1D& g, const ReactionParams& p, const State& s) {
  s.require_grid(g);
  s.require_nonnegative();
  EntropyReport r;
  r.E = entropy(g, s);
  r.fisher_u = fisher_information(g, s.u, p.d1);
  r.fisher_v = fisher_information(g, s.v, p.d2);
  r.fisher_w = fisher_information(g, s.w, p.d3);
  r.reaction_term = reaction_dissipation(g, p, s);
  r.D = r.fisher_u + r.fisher_v + r.fisher_w + r.reaction_term;
  return r;
}

inline EntropyReport entropy_report(const Grid1D& g, const ReactionParams& p, const State& s,
                                    const Equilibrium& e) {
  EntropyReport r = dissipation(g, p, s);
  r.E_rel = relative_entropy(g, s, e);
  return r;
}

/// int |f - c|
inline double l1_distance(const Grid1D& g, const Field& f, double c) {
  double sum = 0.0;
  for (double x : f) sum += std::abs(x - c);
  return g.dx() * sum;
}

/// Weighted masses of a state.
inline MassPair state_masses(const Grid1D& g, const ReactionParams& p, const State& s) {
  return weighted_masses(p, integrate(g, s.u), integrate(g, s.v), integrate(g, s.w));
}

struct CkGap {
  double lhs = 0.0;  // relative entropy
  double rhs = 0.0;  // sum of squared L1 distances to the equilibrium
};

inline constexpr double kCkMassTolerance = 1e-10;

/// Both sides of the Csiszar-Kullback type bound E - E_inf >= C * rhs.
/// The state must carry the equilibrium's masses.
inline CkGap ck_gap(const Grid1D& g, const ReactionParams& p, const State& s,
                    const Equilibrium& e) {
  s.require_grid(g);
  s.require_nonnegative();
  const MassPair m = state_masses(g, p, s);
  auto mismatch = [](double a, double b) {
    return std::abs(a - b) > kCkMassTolerance * std::max(std::abs(a), std::abs(b));
  };
  if (mismatch(m.m1, e.masses.m1) || mismatch(m.m2, e.masses.m2)) {
    throw DomainError("ck_gap: state masses do not match the equilibrium masses");
  }
  const double du = l1_distance(g, s.u, e.a_inf);
  const double dv = l1_distance(g, s.v, e.b_inf);
  const double dw = l1_distance(g, s.w, e.c_inf);
  return {relative_entropy(g, s, e), du * du + dv * dv + dw * dw};
}

/// Both sides of the classical Csiszar-Kullback-Pinsker bound
/// int f ln(f / mean) >= ||f - mean||_1^2 / (2 mean) for a nonnegative field.
inline CkGap ckp_gap(const Grid1D& g, const Field& f) {
  const double mean = integrate(g, f);
  if (!(mean > 0.0)) throw InvalidParameter("ckp_gap: field has zero mean");
  // int f ln(f/mean) == int [f ln(f/mean) - (f - mean)] since the mean deviation vanishes
  double sum = 0.0;
  for (double x : f) sum += relative_entropy_density(x, mean);
  const double l1 = l1_distance(g, f, mean);
  return {g.dx() * sum, l1 * l1 / (2.0 * mean)};
}

}  // namespace rdlab
