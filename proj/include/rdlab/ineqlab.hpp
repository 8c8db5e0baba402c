#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "rdlab/entropy.hpp"
#include "rdlab/grid.hpp"
#include "rdlab/model.hpp"
#include "rdlab/solver.hpp"
#include "rdlab/state.hpp"

namespace rdlab {

// ---------------------------------------------------------------------------
// Ratio bookkeeping

/// Extremal ratios over a family of samples (or scan points) and the
/// inequality constant they imply.
struct RatioReport {
  std::size_t n_samples = 0;      // evaluated
  std::size_t n_informative = 0;  // contributed a ratio
  std::size_t n_excluded = 0;     // skipped (at equilibrium, degenerate)
  std::size_t n_infinite = 0;     // ratio +inf
  std::size_t n_flagged = 0;      // reported anomalies, see the producing function
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = -std::numeric_limits<double>::infinity();
  std::size_t argmin = 0;
  std::size_t argmax = 0;
  double argmin_param = std::numeric_limits<double>::quiet_NaN();
  double argmax_param = std::numeric_limits<double>::quiet_NaN();
  double constant_estimate = std::numeric_limits<double>::quiet_NaN();

  void add(std::size_t index, double ratio, double param = std::numeric_limits<double>::quiet_NaN()) {
    ++n_informative;
    if (std::isinf(ratio)) ++n_infinite;
    if (ratio < min_ratio) {
      min_ratio = ratio;
      argmin = index;
      argmin_param = param;
    }
    if (ratio > max_ratio) {
      max_ratio = ratio;
      argmax = index;
      argmax_param = param;
    }
  }
};

// ---------------------------------------------------------------------------
// Homogeneous (spatially constant) states on the conservation manifold

struct Lemma31Report {
  RatioReport ratios;
  double mu_c_max = 0.0;
  double ratio_at_lower_end = 0.0;  // mu_c = -1
  double ratio_at_upper_end = 0.0;  // mu_c = mu_c_max
  double limit_left = 0.0;          // extrapolated ratio as mu_c -> 0-
  double limit_right = 0.0;         // extrapolated ratio as mu_c -> 0+
  double limit = 0.0;
};

inline constexpr double kLemma31DeletedHalfWidth = 1e-6;

/// Parametrises the constant states (a, b, c) with gamma a^2 + alpha c^2 = M1,
/// gamma b^2 + beta c^2 = M2 (a, b, c are square roots of concentrations) by
/// the relative perturbation mu_c of c around its equilibrium value.
class HomogeneousPerturbation {
 public:
  HomogeneousPerturbation(const ReactionParams& p, const Equilibrium& e)
      : p_(p),
        a_inf_(std::sqrt(e.a_inf)),
        b_inf_(std::sqrt(e.b_inf)),
        c_inf_(std::sqrt(e.c_inf)) {
    const double gf = p.gamma * p.w_factor;
    coef_a_ = p.alpha * e.c_inf / (gf * e.a_inf);
    coef_b_ = p.beta * e.c_inf / (gf * e.b_inf);
    mu_c_max_ = -1.0 + std::sqrt(1.0 + std::min(1.0 / coef_a_, 1.0 / coef_b_));
    c_gamma_ = power(c_inf_, p.gamma);
  }

  double mu_c_max() const { return mu_c_max_; }
  double mu_a(double mu_c) const { return dependent(coef_a_, mu_c); }
  double mu_b(double mu_c) const { return dependent(coef_b_, mu_c); }

  /// ((a-A)^2 + (b-B)^2 + (c-C)^2) / (a^alpha b^beta - c^gamma)^2
  double ratio(double mu_c) const {
    const double ma = mu_a(mu_c), mb = mu_b(mu_c);
    const double num = a_inf_ * a_inf_ * ma * ma + b_inf_ * b_inf_ * mb * mb +
                       c_inf_ * c_inf_ * mu_c * mu_c;
    double diff;
    if (ma > -1.0 && mb > -1.0 && mu_c > -1.0) {
      // a^alpha b^beta - c^gamma = C^gamma (1+mu_c)^gamma expm1(log ratio), using A^alpha B^beta = C^gamma
      const double log_ratio = p_.alpha * std::log1p(ma) + p_.beta * std::log1p(mb) -
                               p_.gamma * std::log1p(mu_c);
      diff = c_gamma_ * power(1.0 + mu_c, p_.gamma) * std::expm1(log_ratio);
    } else {
      diff = power(a_inf_ * (1.0 + ma), p_.alpha) * power(b_inf_ * (1.0 + mb), p_.beta) -
             power(c_inf_ * (1.0 + mu_c), p_.gamma);
    }
    return num / (diff * diff);
  }

 private:
  // sqrt(1 - coef * mu (2 + mu)) - 1 in cancellation-free form, clamped at -1.
  static double dependent(double coef, double mu_c) {
    const double s = coef * mu_c * (2.0 + mu_c);
    if (s >= 1.0) return -1.0;
    return -s / (std::sqrt(1.0 - s) + 1.0);
  }

  ReactionParams p_;
  double a_inf_, b_inf_, c_inf_;
  double coef_a_ = 0.0, coef_b_ = 0.0;
  double mu_c_max_ = 0.0;
  double c_gamma_ = 0.0;
};

/// Sweeps the admissible homogeneous perturbations and records the ratio of
/// squared distance to equilibrium over squared reaction defect. The removable
/// 0/0 at mu_c = 0 is cut out and its limit extrapolated from both sides.
inline Lemma31Report lemma31_scan(const ReactionParams& p, const MassPair& m,
                                  std::size_t n_grid) {
  if (n_grid < 100) throw InvalidParameter("lemma31_scan needs n_grid >= 100");
  const Equilibrium e = compute_equilibrium(p, m);
  const HomogeneousPerturbation hp(p, e);

  Lemma31Report rep;
  rep.mu_c_max = hp.mu_c_max();
  const double lo = -1.0, hi = rep.mu_c_max;
  for (std::size_t j = 0; j < n_grid; ++j) {
    const double mu = j + 1 == n_grid ? hi : lo + (hi - lo) * static_cast<double>(j) /
                                                     static_cast<double>(n_grid - 1);
    ++rep.ratios.n_samples;
    if (std::abs(mu) < kLemma31DeletedHalfWidth) {
      ++rep.ratios.n_excluded;
      continue;
    }
    const double r = hp.ratio(mu);
    if (!std::isfinite(r)) ++rep.ratios.n_flagged;
    rep.ratios.add(j, r, mu);
  }
  rep.ratio_at_lower_end = hp.ratio(lo);
  rep.ratio_at_upper_end = hp.ratio(hi);

  // ratio(h) = L + c1 h + O(h^2) on each side; 2 r(h/2) - r(h) removes c1.
  const double h = 1e-4;
  rep.limit_right = 2.0 * hp.ratio(0.5 * h) - hp.ratio(h);
  rep.limit_left = 2.0 * hp.ratio(-0.5 * h) - hp.ratio(-h);
  rep.limit = 0.5 * (rep.limit_left + rep.limit_right);
  rep.ratios.constant_estimate = std::max(rep.ratios.max_ratio, rep.limit);
  return rep;
}

// ---------------------------------------------------------------------------
// Random admissible fields

/// Deterministic, library-independent random stream (mt19937_64 output is
/// fixed by the standard; the distributions below are hand-written so that
/// samples do not depend on the standard library implementation).
class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double exponential() { return -std::log1p(-uniform()); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * n) % n; }

 private:
  std::mt19937_64 engine_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed of the i-th sample drawn from a base seed; independent of threading.
inline std::uint64_t sample_seed(std::uint64_t base, std::size_t index) {
  return splitmix64(base ^ splitmix64(static_cast<std::uint64_t>(index)));
}

struct SamplerOptions {
  double floor_delta = 0.0;  // 0 selects 1e-6 * min(M1, M2)
  bool homogeneous = false;
  std::size_t max_pieces = 8;
};

inline double default_floor(const MassPair& m) { return 1e-6 * std::min(m.m1, m.m2); }

struct AdmissibleSample {
  State state;
  MassPair masses;
  std::uint64_t seed = 0;
};

namespace detail {

// Nonnegative piecewise-constant shape with mean exactly representable as 1.
inline std::vector<double> random_shape(SampleRng& rng, std::size_t n, std::size_t max_pieces) {
  const std::size_t pieces = 1 + rng.below(std::min(n, std::max<std::size_t>(max_pieces, 1)));
  std::vector<std::size_t> cuts;
  while (cuts.size() + 1 < pieces) {
    const std::size_t c = 1 + rng.below(n - 1);
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(n);

  std::vector<double> shape(n);
  std::size_t start = 0;
  double total = 0.0;
  for (std::size_t c : cuts) {
    double value = 0.0;
    if (rng.uniform() >= 0.25) {
      const double x = rng.exponential();
      value = x * x;
    }
    for (std::size_t i = start; i < c; ++i) shape[i] = value;
    total += value * static_cast<double>(c - start);
    start = c;
  }
  if (!(total > 0.0)) {
    std::fill(shape.begin(), shape.end(), 1.0);
    return shape;
  }
  const double mean = total / static_cast<double>(n);
  for (double& x : shape) x /= mean;
  return shape;
}

// Fraction in [0, 1] with extra weight near both ends.
inline double biased_fraction(SampleRng& rng) {
  const double sel = rng.uniform();
  const double x = rng.uniform();
  if (sel < 0.1) return 1e-3 * x;
  if (sel < 0.2) return 1.0 - 1e-3 * x;
  return x;
}

}  // namespace detail

/// Draws a nonnegative triple with every cell >= floor_delta that carries
/// exactly the masses m: w first (bounded so that u and v keep their floor),
/// then u and v are scaled to the means the conservation laws leave them.
inline AdmissibleSample sample_admissible(const ReactionParams& p, const MassPair& m,
                                          const Grid1D& g, std::uint64_t seed,
                                          const SamplerOptions& opt = {}) {
  p.validate();
  m.validate();
  const double delta = opt.floor_delta > 0.0 ? opt.floor_delta : default_floor(m);
  const double gf = p.gamma * p.w_factor;
  const double w_max = std::min((m.m1 - gf * delta) / p.alpha, (m.m2 - gf * delta) / p.beta);
  if (!(w_max > delta)) throw InvalidParameter("sample_admissible: infeasible floor_delta");

  SampleRng rng(seed);
  const std::size_t n = g.n_cells();
  auto shape = [&] {
    return opt.homogeneous ? std::vector<double>(n, 1.0)
                           : detail::random_shape(rng, n, opt.max_pieces);
  };

  AdmissibleSample out;
  out.seed = seed;
  out.masses = m;
  out.state.u = Field(n);
  out.state.v = Field(n);
  out.state.w = Field(n);

  const double w_mean = delta + detail::biased_fraction(rng) * (w_max - delta);
  const auto sw = shape();
  for (std::size_t i = 0; i < n; ++i) out.state.w[i] = delta + (w_mean - delta) * sw[i];
  const double int_w = integrate(g, out.state.w);

  const double u_mean = (m.m1 - p.alpha * int_w) / gf;
  const double v_mean = (m.m2 - p.beta * int_w) / gf;
  const auto su = shape();
  const auto sv = shape();
  for (std::size_t i = 0; i < n; ++i) {
    out.state.u[i] = delta + std::max(0.0, u_mean - delta) * su[i];
    out.state.v[i] = delta + std::max(0.0, v_mean - delta) * sv[i];
  }
  return out;
}

/// Runs fn(i) for i in [0, n) on `threads` workers; results keep index order.
template <typename Result, typename Fn>
std::vector<Result> parallel_map(std::size_t n, unsigned threads, Fn fn) {
  std::vector<Result> out(n);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += threads) out[i] = fn(i);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

inline std::vector<AdmissibleSample> draw_samples(const ReactionParams& p, const MassPair& m,
                                                  const Grid1D& g, std::size_t n_samples,
                                                  std::uint64_t seed,
                                                  const SamplerOptions& opt = {},
                                                  unsigned threads = 1) {
  return parallel_map<AdmissibleSample>(n_samples, threads, [&](std::size_t i) {
    return sample_admissible(p, m, g, sample_seed(seed, i), opt);
  });
}

// ---------------------------------------------------------------------------
// Inhomogeneous estimates

/// Terms of the square-root distance estimate for one state.
struct Lemma33Parts {
  double lhs = 0.0;    // ||U-A||^2 + ||V-B||^2 + ||W-C||^2
  double part1 = 0.0;  // ||W^gamma - U^alpha V^beta||^2
  double part2 = 0.0;  // sum of ||X - mean(X)||^2
};

namespace detail {
// ||f - mean f||^2 with the mean taken relative to f[0], so constant fields give exactly 0.
inline double variance(const Grid1D& g, const std::vector<double>& f) {
  double shift = 0.0;
  for (double x : f) shift += x - f[0];
  const double mean = f[0] + g.dx() * shift;
  double sum = 0.0;
  for (double x : f) sum += (x - mean) * (x - mean);
  return g.dx() * sum;
}
}  // namespace detail

inline Lemma33Parts lemma33_parts(const Grid1D& g, const ReactionParams& p, const Equilibrium& e,
                                  const State& s) {
  s.require_grid(g);
  s.require_nonnegative();
  const std::size_t n = g.n_cells();
  std::vector<double> U(n), V(n), W(n);
  for (std::size_t i = 0; i < n; ++i) {
    U[i] = std::sqrt(s.u[i]);
    V[i] = std::sqrt(s.v[i]);
    W[i] = std::sqrt(s.w[i]);
  }
  const double A = std::sqrt(e.a_inf), B = std::sqrt(e.b_inf), C = std::sqrt(e.c_inf);
  Lemma33Parts parts;
  double lhs = 0.0, part1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lhs += (U[i] - A) * (U[i] - A) + (V[i] - B) * (V[i] - B) + (W[i] - C) * (W[i] - C);
    const double defect = power(W[i], p.gamma) - power(U[i], p.alpha) * power(V[i], p.beta);
    part1 += defect * defect;
  }
  parts.lhs = g.dx() * lhs;
  parts.part1 = g.dx() * part1;
  parts.part2 = detail::variance(g, U) + detail::variance(g, V) + detail::variance(g, W);
  return parts;
}

/// Smallest K2 with lhs <= k1 * part1 + K2 * part2 on the given states.
/// Per-state ratios are (lhs - k1 part1) / part2; states with part2 == 0 are
/// excluded when k1 * part1 already dominates and flagged otherwise.
inline RatioReport verify_lemma33(const Grid1D& g, const ReactionParams& p, const Equilibrium& e,
                                  std::span<const State> states, double k1) {
  if (!(k1 > 0.0)) throw InvalidParameter("k1 must be > 0");
  RatioReport rep;
  for (std::size_t i = 0; i < states.size(); ++i) {
    ++rep.n_samples;
    const Lemma33Parts parts = lemma33_parts(g, p, e, states[i]);
    const double excess = parts.lhs - k1 * parts.part1;
    if (parts.part2 == 0.0) {
      if (excess > 0.0) {
        ++rep.n_flagged;
      } else {
        ++rep.n_excluded;
      }
      continue;
    }
    rep.add(i, excess / parts.part2);
  }
  rep.constant_estimate = rep.n_informative ? std::max(0.0, rep.max_ratio) : 0.0;
  return rep;
}

inline std::vector<State> states_of(const std::vector<AdmissibleSample>& samples) {
  std::vector<State> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.state);
  return out;
}

inline RatioReport verify_lemma33(const ReactionParams& p, const MassPair& m, const Grid1D& g,
                                  std::size_t n_samples, double k1, std::uint64_t seed,
                                  const SamplerOptions& opt = {}, unsigned threads = 1) {
  const Equilibrium e = compute_equilibrium(p, m);
  const auto states = states_of(draw_samples(p, m, g, n_samples, seed, opt, threads));
  return verify_lemma33(g, p, e, states, k1);
}

inline constexpr double kInformativeEntropy = 1e-12;

/// Minimum of D / (E - E_inf) over the given states; states closer than
/// 1e-12 in relative entropy are excluded. Infinite dissipation counts as +inf.
inline RatioReport estimate_K_eed(const Grid1D& g, const ReactionParams& p, const Equilibrium& e,
                                  std::span<const State> states, unsigned threads = 1) {
  const auto reports = parallel_map<EntropyReport>(
      states.size(), threads, [&](std::size_t i) { return entropy_report(g, p, states[i], e); });
  RatioReport rep;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    ++rep.n_samples;
    if (reports[i].E_rel < kInformativeEntropy) {
      ++rep.n_excluded;
      continue;
    }
    rep.add(i, reports[i].infinite() ? std::numeric_limits<double>::infinity()
                                     : reports[i].D / reports[i].E_rel);
  }
  if (rep.n_informative == 0) throw DomainError("no informative samples");
  rep.constant_estimate = rep.min_ratio;
  return rep;
}

inline RatioReport estimate_K_eed(const ReactionParams& p, const MassPair& m, const Grid1D& g,
                                  std::size_t n_samples, std::uint64_t seed,
                                  const SamplerOptions& opt = {}, unsigned threads = 1) {
  if (n_samples < 1) throw InvalidParameter("n_samples must be >= 1");
  const Equilibrium e = compute_equilibrium(p, m);
  const auto states = states_of(draw_samples(p, m, g, n_samples, seed, opt, threads));
  return estimate_K_eed(g, p, e, states, threads);
}

/// Minimum of D / (E - E_inf) along the recorded rows of a trajectory.
/// The argmin parameter is the row time.
inline RatioReport estimate_K_trajectory(const Trajectory& traj) {
  RatioReport rep;
  for (std::size_t i = 0; i < traj.rows.size(); ++i) {
    const DiagnosticsRow& row = traj.rows[i];
    ++rep.n_samples;
    if (!(row.E_rel >= kInformativeEntropy)) {
      ++rep.n_excluded;
      continue;
    }
    rep.add(i, std::isinf(row.D) ? std::numeric_limits<double>::infinity() : row.D / row.E_rel,
            row.t);
  }
  if (rep.n_informative == 0) throw DomainError("no informative rows");
  rep.constant_estimate = rep.min_ratio;
  return rep;
}

struct CkReport {
  RatioReport ratios;           // (E - E_inf) / sum of squared L1 distances
  std::size_t ckp_checks = 0;   // per-species Csiszar-Kullback-Pinsker evaluations
  std::size_t ckp_violations = 0;
  double ckp_min_ratio = std::numeric_limits<double>::infinity();  // min lhs / rhs
};

inline CkReport verify_ck(const Grid1D& g, const ReactionParams& p, const Equilibrium& e,
                          std::span<const State> states) {
  CkReport rep;
  for (std::size_t i = 0; i < states.size(); ++i) {
    ++rep.ratios.n_samples;
    const CkGap gap = ck_gap(g, p, states[i], e);
    if (gap.lhs < kInformativeEntropy || gap.rhs == 0.0) {
      ++rep.ratios.n_excluded;
    } else {
      rep.ratios.add(i, gap.lhs / gap.rhs);
    }
    for (const Field* f : {&states[i].u, &states[i].v, &states[i].w}) {
      const CkGap ckp = ckp_gap(g, *f);
      ++rep.ckp_checks;
      // Pinsker is an equality only for constant fields, where both sides vanish.
      if (ckp.lhs < ckp.rhs * (1.0 - 1e-12)) ++rep.ckp_violations;
      if (ckp.rhs > 0.0) rep.ckp_min_ratio = std::min(rep.ckp_min_ratio, ckp.lhs / ckp.rhs);
    }
  }
  if (rep.ratios.n_informative == 0) throw DomainError("no informative samples");
  rep.ratios.constant_estimate = rep.ratios.min_ratio;
  return rep;
}

inline CkReport verify_ck(const ReactionParams& p, const MassPair& m, const Grid1D& g,
                          std::size_t n_samples, std::uint64_t seed,
                          const SamplerOptions& opt = {}, unsigned threads = 1) {
  if (n_samples < 1) throw InvalidParameter("n_samples must be >= 1");
  const Equilibrium e = compute_equilibrium(p, m);
  const auto states = states_of(draw_samples(p, m, g, n_samples, seed, opt, threads));
  return verify_ck(g, p, e, states);
}

// ---------------------------------------------------------------------------

/// (b - a) / (a + b) for a = min, b = max of two diffusivities. Values below 1
/// satisfy the L^2 duality closeness condition; smaller means more room.
inline double duality_margin(double d_a, double d_b) {
  if (!(d_a > 0.0 && d_b > 0.0)) throw InvalidParameter("diffusivities must be > 0");
  const double a = std::min(d_a, d_b), b = std::max(d_a, d_b);
  return (b - a) / (a + b);
}

}  // namespace rdlab
