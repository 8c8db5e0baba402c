#pragma once

// Command implementations behind the rdlab executable. Each returns the
// process exit code: 0 success / PASS, 1 domain error / FAIL, 2 usage error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "rdlab/config.hpp"
#include "rdlab/entropy.hpp"
#include "rdlab/fit.hpp"
#include "rdlab/ineqlab.hpp"
#include "rdlab/io.hpp"
#include "rdlab/model.hpp"
#include "rdlab/solver.hpp"

namespace rdlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

inline void write_report(const std::string& path, const Report& report) {
  std::ofstream out(path);
  if (!out) throw InvalidParameter("cannot open report file '" + path + "'");
  out << report;
}

inline SamplerOptions sampler_options(const RunConfig& cfg) {
  SamplerOptions opt;
  opt.floor_delta = cfg.floor_delta;
  return opt;
}

inline void add_params(Report& r, const ReactionParams& p, const MassPair& m) {
  r.add("alpha", p.alpha).add("beta", p.beta).add("gamma", p.gamma);
  r.add("d1", p.d1).add("d2", p.d2).add("d3", p.d3);
  r.add("m1", m.m1).add("m2", m.m2);
}

inline void add_ratios(Report& r, const RatioReport& rr) {
  r.add("n_samples", rr.n_samples)
      .add("n_informative", rr.n_informative)
      .add("n_excluded", rr.n_excluded)
      .add("n_infinite", rr.n_infinite)
      .add("n_flagged", rr.n_flagged)
      .add("min_ratio", rr.min_ratio)
      .add("max_ratio", rr.max_ratio)
      .add("argmin", rr.argmin)
      .add("argmax", rr.argmax)
      .add("constant_estimate", rr.constant_estimate);
}

inline const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

}  // namespace detail

inline int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const Grid1D g = cfg.grid();
  const ReactionParams p = cfg.model_params();
  const Trajectory traj = run(g, p, cfg.initial_state(), cfg.step);
  {
    std::ofstream csv(cfg.output);
    if (!csv) throw InvalidParameter("cannot open output file '" + cfg.output + "'");
    write_csv(csv, traj.rows);
  }
  const DiagnosticsRow& last = traj.rows.back();
  out << "t=" << format_double(last.t) << " rows=" << traj.rows.size()
      << " accepted=" << traj.accepted_steps << " rejected=" << traj.rejected_steps
      << " E_rel=" << format_double(last.E_rel) << " l1=" << format_double(last.l1_total())
      << " csv=" << cfg.output << '\n';
  return kExitOk;
}

inline int cmd_equilibrium(const RunConfig& cfg, std::ostream& out) {
  const ReactionParams p = cfg.model_params();
  const MassPair m = cfg.resolved_masses();
  const Equilibrium e = compute_equilibrium(p, m);
  out << "a_inf=" << format_double(e.a_inf) << " b_inf=" << format_double(e.b_inf)
      << " c_inf=" << format_double(e.c_inf);
  if (e.residual <= 1e-12) {
    out << " residual<=1e-12\n";
  } else {
    out << " residual=" << format_double(e.residual) << '\n';
  }
  return e.residual <= equilibrium_residual_bound(p, m) ? kExitOk : kExitDomain;
}

inline int cmd_lemma31(const RunConfig& cfg, std::ostream& out) {
  const ReactionParams p = cfg.model_params();
  const MassPair m = cfg.resolved_masses();
  const Lemma31Report rep = lemma31_scan(p, m, cfg.n_grid);
  const bool pass = std::isfinite(rep.ratios.constant_estimate) &&
                    rep.ratios.constant_estimate > 0.0 && rep.ratios.n_flagged == 0;
  Report r;
  r.add("command", std::string("lemma31"));
  detail::add_params(r, p, m);
  r.add("n_grid", cfg.n_grid).add("mu_c_max", rep.mu_c_max);
  detail::add_ratios(r, rep.ratios);
  r.add("argmax_mu_c", rep.ratios.argmax_param)
      .add("ratio_at_lower_end", rep.ratio_at_lower_end)
      .add("ratio_at_upper_end", rep.ratio_at_upper_end)
      .add("limit_left", rep.limit_left)
      .add("limit_right", rep.limit_right)
      .add("limit", rep.limit)
      .add("verdict", std::string(detail::verdict(pass)));
  detail::write_report(cfg.report, r);
  out << detail::verdict(pass) << " lemma31 constant=" << format_double(rep.ratios.constant_estimate)
      << " limit=" << format_double(rep.limit) << '\n';
  return pass ? kExitOk : kExitDomain;
}

inline int cmd_verify_eed(const RunConfig& cfg, std::ostream& out) {
  const ReactionParams p = cfg.model_params();
  const MassPair m = cfg.resolved_masses();
  const RatioReport rep = estimate_K_eed(p, m, cfg.grid(), cfg.n_samples, cfg.seed,
                                         detail::sampler_options(cfg), cfg.threads);
  const bool pass = rep.min_ratio > 0.0;
  Report r;
  r.add("command", std::string("verify-eed"));
  detail::add_params(r, p, m);
  r.add("n_cells", cfg.n_cells).add("seed", std::to_string(cfg.seed));
  detail::add_ratios(r, rep);
  r.add("verdict", std::string(detail::verdict(pass)));
  detail::write_report(cfg.report, r);
  out << detail::verdict(pass) << " verify-eed K=" << format_double(rep.constant_estimate)
      << " samples=" << rep.n_samples << '\n';
  return pass ? kExitOk : kExitDomain;
}

inline int cmd_verify_lemma33(const RunConfig& cfg, std::ostream& out) {
  const ReactionParams p = cfg.model_params();
  const MassPair m = cfg.resolved_masses();
  double k1 = cfg.k1;
  if (k1 == 0.0) k1 = 2.0 * lemma31_scan(p, m, cfg.n_grid).ratios.constant_estimate;
  const RatioReport rep = verify_lemma33(p, m, cfg.grid(), cfg.n_samples, k1, cfg.seed,
                                         detail::sampler_options(cfg), cfg.threads);
  const bool pass = std::isfinite(rep.constant_estimate) && rep.n_flagged == 0;
  Report r;
  r.add("command", std::string("verify-lemma33"));
  detail::add_params(r, p, m);
  r.add("n_cells", cfg.n_cells).add("seed", std::to_string(cfg.seed)).add("k1", k1);
  detail::add_ratios(r, rep);
  r.add("verdict", std::string(detail::verdict(pass)));
  detail::write_report(cfg.report, r);
  out << detail::verdict(pass) << " verify-lemma33 k1=" << format_double(k1)
      << " K2=" << format_double(rep.constant_estimate) << '\n';
  return pass ? kExitOk : kExitDomain;
}

inline int cmd_verify_ck(const RunConfig& cfg, std::ostream& out) {
  const ReactionParams p = cfg.model_params();
  const MassPair m = cfg.resolved_masses();
  const CkReport rep = verify_ck(p, m, cfg.grid(), cfg.n_samples, cfg.seed,
                                 detail::sampler_options(cfg), cfg.threads);
  const bool pass = rep.ratios.min_ratio > 0.0 && rep.ckp_violations == 0;
  Report r;
  r.add("command", std::string("verify-ck"));
  detail::add_params(r, p, m);
  r.add("n_cells", cfg.n_cells).add("seed", std::to_string(cfg.seed));
  detail::add_ratios(r, rep.ratios);
  r.add("ckp_checks", rep.ckp_checks)
      .add("ckp_violations", rep.ckp_violations)
      .add("ckp_min_ratio", rep.ckp_min_ratio)
      .add("verdict", std::string(detail::verdict(pass)));
  detail::write_report(cfg.report, r);
  out << detail::verdict(pass) << " verify-ck C=" << format_double(rep.ratios.constant_estimate)
      << " ckp_violations=" << rep.ckp_violations << '\n';
  return pass ? kExitOk : kExitDomain;
}

/// Fits an exponential to one CSV column; `l1` selects l1_u + l1_v + l1_w.
inline int cmd_fit_rate(const std::string& csv_path, const std::string& column, std::ostream& out) {
  std::ifstream in(csv_path);
  if (!in) throw InvalidParameter("cannot open CSV '" + csv_path + "'");
  const auto rows = read_csv(in);
  std::vector<std::pair<double, double>> series;
  if (column == "l1") {
    for (const auto& r : rows) series.emplace_back(r.t, r.l1_total());
  } else {
    const std::size_t idx = csv_column_index(column);
    for (const auto& r : rows) series.emplace_back(r.t, row_values(r)[idx]);
  }
  const RateFit fit = fit_rate(series);
  out << "K_fit=" << format_double(fit.rate) << " intercept=" << format_double(fit.intercept)
      << " r_squared=" << format_double(fit.r_squared) << " n_points=" << fit.n_points << '\n';
  return kExitOk;
}

inline int cmd_duality(double d_a, double d_b, std::ostream& out) {
  const double margin = duality_margin(d_a, d_b);
  out << "margin=" << format_double(margin)
      << " condition_p2=" << (margin < 1.0 ? "SATISFIED" : "VIOLATED") << '\n';
  return kExitOk;
}

inline int cmd_validate(const std::string& csv_path, std::ostream& out) {
  std::ifstream in(csv_path);
  if (!in) throw InvalidParameter("cannot open CSV '" + csv_path + "'");
  const CsvValidation v = validate_rows(read_csv(in));
  out << detail::verdict(v.ok) << " validate mass_drift=" << format_double(v.max_mass_drift)
      << " min_conc=" << format_double(v.min_conc);
  for (const auto& p : v.problems) out << " problem=\"" << p << '"';
  out << '\n';
  return v.ok ? kExitOk : kExitDomain;
}

}  // namespace rdlab::cli
