#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

#include "rdlab/entropy.hpp"
#include "rdlab/grid.hpp"
#include "rdlab/model.hpp"
#include "rdlab/state.hpp"

namespace rdlab {

/// Net forward rate u^alpha v^beta - w^gamma. Positive values consume u and v.
inline double reaction_rate(const ReactionParams& p, double u, double v, double w) {
  return power(u, p.alpha) * power(v, p.beta) - power(w, p.gamma);
}

/// max_i beta*gamma*u + alpha*gamma*v + 2*alpha*beta*w. With equal diffusivities
/// this combination solves a pure heat equation, so its maximum cannot grow.
inline double z_linf(const ReactionParams& p, const State& s) {
  double z_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.n_cells(); ++i) {
    const double z = p.beta * p.gamma * s.u[i] + p.alpha * p.gamma * s.v[i] +
                     2.0 * p.alpha * p.beta * s.w[i];
    z_max = std::max(z_max, z);
  }
  return z_max;
}

namespace detail {

// Thomas algorithm for (I - coef * L) x = rhs; off-diagonals are all -r.
inline Field solve_diffusion_matrix(const Grid1D& g, std::span<const double> rhs, double coef) {
  const std::size_t n = g.n_cells();
  const double r = coef / (g.dx() * g.dx());
  std::vector<double> c_prime(n);
  std::vector<double> d_prime(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double diag = 1.0 + r * ((i == 0 || i + 1 == n) ? 1.0 : 2.0);
    const double lower = i == 0 ? 0.0 : -r;
    const double upper = i + 1 == n ? 0.0 : -r;
    const double denom = diag - lower * (i == 0 ? 0.0 : c_prime[i - 1]);
    if (!(denom > 0.0)) throw InternalError("singular diffusion matrix");
    c_prime[i] = upper / denom;
    d_prime[i] = (rhs[i] - lower * (i == 0 ? 0.0 : d_prime[i - 1])) / denom;
  }
  Field x(n);
  x[n - 1] = d_prime[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d_prime[i] - c_prime[i] * x[i + 1];
  return x;
}

}  // namespace detail

/// Solves (I - coef * L) x = rhs with the Neumann Laplacian L (coef = dt * d).
/// The matrix is a symmetric M-matrix with unit column sums, so the solve
/// preserves the integral and maps nonnegative data to nonnegative data.
///
/// The solve is done for the increment x - rhs, whose right-hand side
/// coef * L rhs is formed from face fluxes; rounding then scales with the
/// size of the update instead of the size of the field, which keeps the
/// integral drift at the level of single ulps even over long runs. If that
/// form rounds some cell below zero the direct solve is used instead.
inline Field backward_euler_diffusion(const Grid1D& g, const Field& rhs, double coef) {
  if (!(coef > 0.0) || !std::isfinite(coef)) {
    throw InternalError("diffusion solve needs a positive finite dt * d");
  }
  Field increment_rhs = laplacian_neumann(g, rhs);
  for (double& x : increment_rhs) x *= coef;
  Field x = detail::solve_diffusion_matrix(g, increment_rhs.values(), coef);
  bool nonnegative = true;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] += rhs[i];
    nonnegative = nonnegative && x[i] >= 0.0;
  }
  if (nonnegative) return x;
  return detail::solve_diffusion_matrix(g, rhs.values(), coef);
}

struct StepConfig {
  double dt_init = 1e-2;
  double dt_min = 1e-12;
  double safety = 0.2;       // max pointwise relative change of the reaction update
  double change_floor = 1e-3;  // relative changes are measured against x + change_floor * max(state)
  double t_end = 10.0;
  std::size_t record_every = 1;

  void validate() const {
    if (!(dt_min > 0.0 && dt_min <= dt_init && std::isfinite(dt_init))) {
      throw InvalidParameter("step config requires 0 < dt_min <= dt_init");
    }
    if (!(safety > 0.0 && safety <= 1.0)) throw InvalidParameter("safety must be in (0, 1]");
    if (!(change_floor > 0.0)) throw InvalidParameter("change_floor must be > 0");
    if (!(t_end > 0.0 && std::isfinite(t_end))) throw InvalidParameter("t_end must be > 0");
    if (record_every < 1) throw InvalidParameter("record_every must be >= 1");
  }
};

enum class StepRejection { none, negative_reaction, excessive_change, negative_diffusion };

struct StepResult {
  std::optional<State> state;
  StepRejection reason = StepRejection::none;

  bool accepted() const { return state.has_value(); }
};

/// One IMEX step: pointwise explicit reaction, then backward Euler diffusion
/// per species. Rejects instead of clipping when the reaction update leaves
/// the nonnegative cone or changes some cell by more than `safety`.
inline StepResult step_imex(const Grid1D& g, const ReactionParams& p, const State& s, double dt,
                            double safety = 0.2, double change_floor = 1e-3) {
  s.require_grid(g);
  if (!(dt > 0.0)) throw InvalidParameter("dt must be > 0");
  const std::size_t n = g.n_cells();
  double max_conc = 0.0;
  for (const Field* f : {&s.u, &s.v, &s.w}) {
    for (double x : *f) max_conc = std::max(max_conc, x);
  }
  const double floor = change_floor * max_conc;

  Field u(n), v(n), w(n);
  const double gw = p.gamma * p.w_factor;
  for (std::size_t i = 0; i < n; ++i) {
    const double rate = reaction_rate(p, s.u[i], s.v[i], s.w[i]);
    u[i] = s.u[i] - dt * p.alpha * rate;
    v[i] = s.v[i] - dt * p.beta * rate;
    w[i] = s.w[i] + dt * gw * rate;
    if (!(u[i] >= 0.0 && v[i] >= 0.0 && w[i] >= 0.0)) {
      return {std::nullopt, StepRejection::negative_reaction};
    }
    auto too_large = [&](double old_x, double new_x) {
      return std::abs(new_x - old_x) > safety * (old_x + floor);
    };
    if (too_large(s.u[i], u[i]) || too_large(s.v[i], v[i]) || too_large(s.w[i], w[i])) {
      return {std::nullopt, StepRejection::excessive_change};
    }
  }

  State next{s.t + dt, backward_euler_diffusion(g, u, dt * p.d1),
             backward_euler_diffusion(g, v, dt * p.d2), backward_euler_diffusion(g, w, dt * p.d3)};
  if (next.min_concentration() < 0.0) return {std::nullopt, StepRejection::negative_diffusion};
  return {std::move(next), StepRejection::none};
}

/// One recorded line of a trajectory; the column order is the CSV schema.
struct DiagnosticsRow {
  double t = 0.0;
  double dt = 0.0;
  double mass1 = 0.0;
  double mass2 = 0.0;
  double E = 0.0;
  double E_rel = 0.0;
  double D = 0.0;
  double fisher_u = 0.0;
  double fisher_v = 0.0;
  double fisher_w = 0.0;
  double reaction_term = 0.0;
  double l1_u = 0.0;
  double l1_v = 0.0;
  double l1_w = 0.0;
  double min_conc = 0.0;

  double l1_total() const { return l1_u + l1_v + l1_w; }
};

inline DiagnosticsRow diagnose(const Grid1D& g, const ReactionParams& p, const State& s,
                               const Equilibrium& e, double dt) {
  const EntropyReport r = entropy_report(g, p, s, e);
  const MassPair m = state_masses(g, p, s);
  DiagnosticsRow row;
  row.t = s.t;
  row.dt = dt;
  row.mass1 = m.m1;
  row.mass2 = m.m2;
  row.E = r.E;
  row.E_rel = r.E_rel;
  row.D = r.D;
  row.fisher_u = r.fisher_u;
  row.fisher_v = r.fisher_v;
  row.fisher_w = r.fisher_w;
  row.reaction_term = r.reaction_term;
  row.l1_u = l1_distance(g, s.u, e.a_inf);
  row.l1_v = l1_distance(g, s.v, e.b_inf);
  row.l1_w = l1_distance(g, s.w, e.c_inf);
  row.min_conc = s.min_concentration();
  return row;
}

struct Trajectory {
  Grid1D grid{2};
  ReactionParams params{};
  Equilibrium equilibrium{};
  std::vector<State> snapshots;
  std::vector<DiagnosticsRow> rows;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  /// max over accepted steps of (E_{n+1} - E_n) / (1 + |E_n|)
  double max_entropy_increase = -std::numeric_limits<double>::infinity();
  /// max of z_linf over every accepted state, including the initial one
  double max_z_linf = 0.0;
};

inline constexpr std::size_t kGrowAfterAccepted = 10;

/// Integrates to cfg.t_end, halving dt on rejection and doubling it (capped
/// at dt_init) after every 10 consecutive accepted steps. The initial state
/// and every record_every-th accepted state are recorded, and so is the
/// final one.
inline Trajectory run(const Grid1D& g, const ReactionParams& p, const State& s0,
                      const StepConfig& cfg) {
  p.validate();
  cfg.validate();
  s0.require_grid(g);
  s0.require_nonnegative();

  Trajectory traj;
  traj.grid = g;
  traj.params = p;
  traj.equilibrium = compute_equilibrium(p, state_masses(g, p, s0));

  State s = s0;
  s.t = 0.0;
  traj.snapshots.push_back(s);
  traj.rows.push_back(diagnose(g, p, s, traj.equilibrium, 0.0));
  traj.max_z_linf = z_linf(p, s);
  double e_prev = traj.rows.front().E;

  double dt = cfg.dt_init;
  std::size_t since_change = 0;
  std::size_t since_record = 0;
  bool last_recorded = true;
  while (s.t < cfg.t_end) {
    const double remaining = cfg.t_end - s.t;
    const bool final_step = dt >= remaining;
    const double h = final_step ? remaining : dt;
    StepResult res = step_imex(g, p, s, h, cfg.safety, cfg.change_floor);
    if (!res.accepted()) {
      ++traj.rejected_steps;
      dt = std::min(dt, h) * 0.5;
      since_change = 0;
      if (dt < cfg.dt_min) {
        double lo = s.min_concentration(), hi = 0.0;
        for (const Field* f : {&s.u, &s.v, &s.w}) {
          for (double x : *f) hi = std::max(hi, x);
        }
        std::ostringstream os;
        os << "time step underflow at t = " << s.t << " (dt < " << cfg.dt_min
           << "); concentrations in [" << lo << ", " << hi << "]";
        throw DomainError(os.str());
      }
      continue;
    }
    s = std::move(*res.state);
    if (final_step) s.t = cfg.t_end;
    ++traj.accepted_steps;

    const double e_now = entropy(g, s);
    traj.max_entropy_increase =
        std::max(traj.max_entropy_increase, (e_now - e_prev) / (1.0 + std::abs(e_prev)));
    e_prev = e_now;
    traj.max_z_linf = std::max(traj.max_z_linf, z_linf(p, s));

    last_recorded = false;
    if (++since_record >= cfg.record_every) {
      since_record = 0;
      traj.snapshots.push_back(s);
      traj.rows.push_back(diagnose(g, p, s, traj.equilibrium, h));
      last_recorded = true;
    }
    if (++since_change >= kGrowAfterAccepted) {
      dt = std::min(2.0 * dt, cfg.dt_init);
      since_change = 0;
    }
    if (final_step && !last_recorded) {
      traj.snapshots.push_back(s);
      traj.rows.push_back(diagnose(g, p, s, traj.equilibrium, h));
    }
  }
  return traj;
}

}  // namespace rdlab
