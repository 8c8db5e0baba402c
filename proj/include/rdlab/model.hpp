#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "rdlab/error.hpp"

namespace rdlab {

/// x^e for e >= 1. Small integral exponents use repeated multiplication,
/// everything else goes through exp/log.
inline double power(double x, double e) {
  if (e == std::floor(e) && e >= 0.0 && e <= 16.0) {
    double result = 1.0;
    for (int i = 0; i < static_cast<int>(e); ++i) result *= x;
    return result;
  }
  if (x == 0.0) return 0.0;
  return std::exp(e * std::log(x));
}

/// Stoichiometry, reaction rates and diffusivities of alpha U + beta V <=> gamma W.
///
/// `w_factor` multiplies the reaction term of the W equation only. It is 1
/// except for rescaled systems with alpha + beta == gamma, where the rates
/// cannot be normalised completely (see rescale_params).
struct ReactionParams {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  double ell = 1.0;
  double k = 1.0;
  double d1 = 1.0;
  double d2 = 1.0;
  double d3 = 1.0;
  double w_factor = 1.0;

  void validate() const {
    auto require = [](bool ok, const char* msg) {
      if (!ok) throw InvalidParameter(msg);
    };
    require(std::isfinite(alpha) && alpha >= 1.0, "alpha must be >= 1");
    require(std::isfinite(beta) && beta >= 1.0, "beta must be >= 1");
    require(std::isfinite(gamma) && gamma >= 1.0, "gamma must be >= 1");
    require(std::isfinite(ell) && ell > 0.0, "ell must be > 0");
    require(std::isfinite(k) && k > 0.0, "k must be > 0");
    require(std::isfinite(d1) && d1 > 0.0, "d1 must be > 0");
    require(std::isfinite(d2) && d2 > 0.0, "d2 must be > 0");
    require(std::isfinite(d3) && d3 > 0.0, "d3 must be > 0");
    require(std::isfinite(w_factor) && w_factor > 0.0, "w_factor must be > 0");
  }

  bool is_rescaled() const { return ell == 1.0 && k == 1.0; }
};

/// Conserved masses gamma*int(u) + alpha*int(w) and gamma*int(v) + beta*int(w)
/// on the unit interval.
struct MassPair {
  double m1 = 0.0;
  double m2 = 0.0;

  void validate() const {
    if (!(std::isfinite(m1) && m1 > 0.0)) throw InvalidParameter("m1 must be > 0");
    if (!(std::isfinite(m2) && m2 > 0.0)) throw InvalidParameter("m2 must be > 0");
  }
};

/// Weighted masses from the three species integrals.
inline MassPair weighted_masses(const ReactionParams& p, double int_u, double int_v,
                                double int_w) {
  const double gf = p.gamma * p.w_factor;
  return {gf * int_u + p.alpha * int_w, gf * int_v + p.beta * int_w};
}

struct Equilibrium {
  double a_inf = 0.0;
  double b_inf = 0.0;
  double c_inf = 0.0;
  double residual = 0.0;
  MassPair masses{};
  int iterations = 0;
};

/// |a^alpha b^beta - c^gamma|
inline double equilibrium_residual(const Equilibrium& e, const ReactionParams& p) {
  return std::abs(power(e.a_inf, p.alpha) * power(e.b_inf, p.beta) -
                  power(e.c_inf, p.gamma));
}

/// Admissible residual for a computed equilibrium at masses m.
inline double equilibrium_residual_bound(const ReactionParams& p, const MassPair& m) {
  const double scale = std::max({1.0, m.m1, m.m2});
  return 1e-12 * std::pow(scale, std::max(p.alpha + p.beta, p.gamma));
}

inline constexpr double kEquilibriumTolerance = 1e-14;
inline constexpr int kEquilibriumMaxIterations = 200;

/// Detailed-balance equilibrium for a rescaled system.
///
/// The left side of the balance, written in terms of c through the two
/// conservation laws, decreases strictly on [0, min(M1/alpha, M2/beta)] while
/// c^gamma increases strictly, so the difference has exactly one sign change
/// and bisection always converges.
inline Equilibrium compute_equilibrium(const ReactionParams& p, const MassPair& m) {
  p.validate();
  m.validate();
  if (!p.is_rescaled()) {
    throw InvalidParameter("compute_equilibrium expects rescaled parameters (ell = k = 1)");
  }
  const double gf = p.gamma * p.w_factor;
  auto a_of = [&](double c) { return std::max(0.0, (m.m1 - p.alpha * c) / gf); };
  auto b_of = [&](double c) { return std::max(0.0, (m.m2 - p.beta * c) / gf); };
  auto defect = [&](double c) {
    return power(a_of(c), p.alpha) * power(b_of(c), p.beta) - power(c, p.gamma);
  };

  double lo = 0.0;
  double hi = std::min(m.m1 / p.alpha, m.m2 / p.beta);
  int it = 0;
  for (; it < kEquilibriumMaxIterations; ++it) {
    if (hi - lo <= kEquilibriumTolerance) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at ulp resolution
    const double f = defect(mid);
    if (f > 0.0) {
      lo = mid;
    } else if (f < 0.0) {
      hi = mid;
    } else {
      lo = hi = mid;
      break;
    }
  }
  const double width = hi - lo;
  if (width > kEquilibriumTolerance &&
      width > 4.0 * std::numeric_limits<double>::epsilon() * hi) {
    std::ostringstream os;
    os << "equilibrium bisection did not converge after " << it
       << " iterations (bracket width " << width << ")";
    throw InternalError(os.str());
  }

  const double c = std::abs(defect(lo)) <= std::abs(defect(hi)) ? lo : hi;
  Equilibrium e;
  e.c_inf = c;
  e.a_inf = (m.m1 - p.alpha * c) / gf;
  e.b_inf = (m.m2 - p.beta * c) / gf;
  e.masses = m;
  e.iterations = it;
  e.residual = equilibrium_residual(e, p);
  if (!(e.a_inf > 0.0 && e.b_inf > 0.0 && e.c_inf > 0.0)) {
    throw InternalError("equilibrium has a vanishing component for positive masses");
  }
  return e;
}

/// Scale factors relating a system with general rates to its rescaled form.
/// Original quantities are recovered as u = concentration_factor * u~,
/// t = time_factor * t~, x = space_factor * x~.
struct RescaleReport {
  double time_factor = 1.0;
  double space_factor = 1.0;
  double concentration_factor = 1.0;
  double third_equation_factor = 1.0;
  bool balanced = false;  // alpha + beta == gamma
  ReactionParams rescaled{};
};

inline RescaleReport rescale_params(const ReactionParams& p, double domain_measure) {
  p.validate();
  if (!(std::isfinite(domain_measure) && domain_measure > 0.0)) {
    throw InvalidParameter("domain_measure must be > 0");
  }
  RescaleReport r;
  r.space_factor = domain_measure;  // |Omega|^(1/N), N = 1
  const double order = p.alpha + p.beta - p.gamma;
  r.balanced = order == 0.0;
  if (!r.balanced) {
    const double ratio = p.k / p.ell;
    r.concentration_factor = std::pow(ratio, 1.0 / order);
    r.time_factor = std::pow(ratio, (1.0 - p.gamma) / order) / p.k;
  } else {
    // Only the first two equations normalise; the W equation keeps a
    // residual multiplier.
    r.concentration_factor = 1.0;
    r.time_factor = 1.0 / p.ell;
    r.third_equation_factor = std::pow(p.ell / p.k, 1.0 / p.gamma);
  }
  const double diff_scale = r.time_factor / (r.space_factor * r.space_factor);
  r.rescaled = p;
  r.rescaled.ell = 1.0;
  r.rescaled.k = 1.0;
  r.rescaled.d1 = p.d1 * diff_scale;
  r.rescaled.d2 = p.d2 * diff_scale;
  r.rescaled.d3 = p.d3 * diff_scale;
  r.rescaled.w_factor = p.w_factor * r.third_equation_factor;
  return r;
}

/// Inverse of rescale_params: original rates and diffusivities.
inline ReactionParams unapply_rescaling(const RescaleReport& r) {
  ReactionParams p = r.rescaled;
  const double t = r.time_factor;
  const double l = r.space_factor;
  if (!r.balanced) {
    const double c = r.concentration_factor;
    p.ell = 1.0 / (t * std::pow(c, p.alpha + p.beta - 1.0));
    p.k = 1.0 / (t * std::pow(c, p.gamma - 1.0));
  } else {
    p.ell = 1.0 / t;
    p.k = p.ell / std::pow(r.third_equation_factor, p.gamma);
  }
  p.d1 = r.rescaled.d1 * l * l / t;
  p.d2 = r.rescaled.d2 * l * l / t;
  p.d3 = r.rescaled.d3 * l * l / t;
  p.w_factor = r.rescaled.w_factor / r.third_equation_factor;
  return p;
}

}  // namespace rdlab
