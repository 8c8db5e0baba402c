#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rdlab/error.hpp"
#include "rdlab/grid.hpp"
#include "rdlab/io.hpp"
#include "rdlab/model.hpp"
#include "rdlab/solver.hpp"
#include "rdlab/state.hpp"

namespace rdlab {

/// Closed-form initial datum, sampled at cell centers.
///   homogeneous(c)         c
///   cosine-bump(m, a)      m * (1 - a cos(2 pi x)),  0 <= a <= 1
///   two-blocks(l, r)       l on [0, 1/2), r on [1/2, 1]
struct InitialProfile {
  enum class Kind { homogeneous, cosine_bump, two_blocks };
  Kind kind = Kind::homogeneous;
  double first = 0.0;
  double second = 0.0;

  Field render(const Grid1D& g) const {
    switch (kind) {
      case Kind::homogeneous:
        return Field(g.n_cells(), first);
      case Kind::cosine_bump:
        return sample_centers(g, [&](double x) {
          return first * (1.0 - second * std::cos(2.0 * std::numbers::pi * x));
        });
      case Kind::two_blocks:
        return sample_centers(g, [&](double x) { return x < 0.5 ? first : second; });
    }
    return Field(g.n_cells(), first);
  }

  std::string describe() const {
    switch (kind) {
      case Kind::homogeneous:
        return "homogeneous(" + format_double(first) + ")";
      case Kind::cosine_bump:
        return "cosine-bump(" + format_double(first) + ", " + format_double(second) + ")";
      case Kind::two_blocks:
        return "two-blocks(" + format_double(first) + ", " + format_double(second) + ")";
    }
    return {};
  }
};

/// Everything needed to reproduce a run or a verification.
struct RunConfig {
  ReactionParams params{};
  double domain_measure = 1.0;
  std::optional<MassPair> masses;
  InitialProfile u0{InitialProfile::Kind::cosine_bump, 2.0, 1.0};
  InitialProfile v0{InitialProfile::Kind::homogeneous, 2.0, 0.0};
  InitialProfile w0{InitialProfile::Kind::homogeneous, 0.0, 0.0};
  std::size_t n_cells = 200;
  StepConfig step{};
  std::string output = "trajectory.csv";
  std::string report = "report.txt";
  std::uint64_t seed = 1;
  std::size_t n_samples = 1000;
  double k1 = 0.0;  // 0 selects twice the homogeneous scan constant
  std::size_t n_grid = 2000;
  unsigned threads = 1;
  double floor_delta = 0.0;  // 0 selects 1e-6 * min(m1, m2)

  RunConfig() {
    step.t_end = 10.0;
    step.dt_init = 1e-2;
  }

  Grid1D grid() const { return Grid1D(n_cells); }

  /// Rates normalised to ell = k = 1; identity when they already are.
  ReactionParams model_params() const {
    if (params.is_rescaled() && domain_measure == 1.0) return params;
    return rescale_params(params, domain_measure).rescaled;
  }

  State initial_state() const {
    const Grid1D g = grid();
    return State{0.0, u0.render(g), v0.render(g), w0.render(g)};
  }

  /// Explicit masses if configured, otherwise those of the initial data.
  MassPair resolved_masses() const {
    if (masses) return *masses;
    const Grid1D g = grid();
    const MassPair m = state_masses(g, model_params(), initial_state());
    m.validate();
    return m;
  }
};

struct ConfigKey {
  std::string_view name;
  std::string_view default_value;
  std::string_view help;
};

inline constexpr ConfigKey kConfigKeys[] = {
    {"alpha", "1", "stoichiometric exponent of U (>= 1)"},
    {"beta", "1", "stoichiometric exponent of V (>= 1)"},
    {"gamma", "1", "stoichiometric exponent of W (>= 1)"},
    {"ell", "1", "forward rate (> 0); rates != 1 are normalised before use"},
    {"k", "1", "backward rate (> 0)"},
    {"d1", "1", "diffusivity of U (> 0)"},
    {"d2", "1", "diffusivity of V (> 0)"},
    {"d3", "1", "diffusivity of W (> 0)"},
    {"domain_measure", "1", "length of the physical interval (> 0)"},
    {"m1", "from initial data", "mass gamma*int(u) + alpha*int(w) (> 0)"},
    {"m2", "from initial data", "mass gamma*int(v) + beta*int(w) (> 0)"},
    {"u0", "cosine-bump(2, 1)", "initial u: homogeneous(c) | cosine-bump(m, a) | two-blocks(l, r)"},
    {"v0", "homogeneous(2)", "initial v"},
    {"w0", "homogeneous(0)", "initial w"},
    {"n_cells", "200", "number of grid cells (>= 2)"},
    {"t_end", "10", "final time (> 0)"},
    {"dt_init", "0.01", "initial and maximal time step"},
    {"dt_min", "1e-12", "time step floor; reaching it aborts the run"},
    {"safety", "0.2", "max relative change per step of the reaction update, in (0, 1]"},
    {"change_floor", "0.001", "relative-change reference floor, fraction of the max concentration"},
    {"record_every", "1", "record diagnostics every N accepted steps"},
    {"output", "trajectory.csv", "trajectory CSV path"},
    {"report", "report.txt", "verification report path"},
    {"seed", "1", "base seed for admissible samples"},
    {"n_samples", "1000", "number of admissible samples"},
    {"k1", "2 * scan constant", "weight of the reaction defect in the square-root estimate"},
    {"n_grid", "2000", "points of the homogeneous perturbation scan (>= 100)"},
    {"threads", "1", "worker threads for sampling; results do not depend on it"},
    {"floor_delta", "1e-6 * min(m1, m2)", "lower bound of sampled concentrations"},
};

inline std::string config_help() {
  std::ostringstream os;
  os << "Configuration keys (`key = value`, `#` starts a comment):\n";
  for (const auto& k : kConfigKeys) {
    os << "  " << k.name << std::string(16 - std::min<std::size_t>(15, k.name.size()), ' ')
       << k.help << " [default: " << k.default_value << "]\n";
  }
  return os.str();
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline bool known_key(std::string_view key) {
  for (const auto& k : kConfigKeys) {
    if (k.name == key) return true;
  }
  return false;
}

inline double parse_real(std::size_t line, std::string_view key, std::string_view value) {
  double x = 0.0;
  if (!parse_double(value, x) || !std::isfinite(x)) {
    throw ParseError(line, std::string(key) + ": expected a number, got '" + std::string(value) + "'");
  }
  return x;
}

inline std::uint64_t parse_unsigned(std::size_t line, std::string_view key, std::string_view value) {
  std::uint64_t x = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
    throw ParseError(line, std::string(key) + ": expected a nonnegative integer, got '" +
                               std::string(value) + "'");
  }
  return x;
}

inline InitialProfile parse_profile(std::size_t line, std::string_view key, std::string_view value) {
  const auto open = value.find('(');
  const auto close = value.rfind(')');
  if (open == std::string_view::npos || close != value.size() - 1 || close < open) {
    throw ParseError(line, std::string(key) + ": expected name(args), got '" + std::string(value) + "'");
  }
  const std::string_view name = trim(value.substr(0, open));
  std::vector<double> args;
  std::string_view rest = value.substr(open + 1, close - open - 1);
  while (!trim(rest).empty()) {
    const auto comma = rest.find(',');
    args.push_back(parse_real(line, key, trim(rest.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  InitialProfile p;
  std::size_t expected = 2;
  if (name == "homogeneous") {
    p.kind = InitialProfile::Kind::homogeneous;
    expected = 1;
  } else if (name == "cosine-bump") {
    p.kind = InitialProfile::Kind::cosine_bump;
  } else if (name == "two-blocks") {
    p.kind = InitialProfile::Kind::two_blocks;
  } else {
    throw ParseError(line, std::string(key) + ": unknown profile '" + std::string(name) + "'");
  }
  if (args.size() != expected) {
    throw ParseError(line, std::string(key) + ": " + std::string(name) + " takes " +
                               std::to_string(expected) + " argument(s)");
  }
  p.first = args[0];
  p.second = expected > 1 ? args[1] : 0.0;
  if (p.first < 0.0 || p.second < 0.0) {
    throw ParseError(line, std::string(key) + ": profile values must be >= 0");
  }
  if (p.kind == InitialProfile::Kind::cosine_bump && p.second > 1.0) {
    throw ParseError(line, std::string(key) + ": cosine-bump amplitude must be in [0, 1]");
  }
  return p;
}

}  // namespace detail

/// Parses `key = value` lines. Later `overrides` (same syntax, e.g. from the
/// command line) replace file values instead of counting as duplicates.
inline RunConfig parse_config(std::string_view text,
                              const std::vector<std::string>& overrides = {}) {
  std::map<std::string, std::pair<std::string, std::size_t>> values;  // key -> (value, line)

  auto split = [](std::size_t line, std::string_view raw) -> std::optional<std::pair<std::string, std::string>> {
    const auto hash = raw.find('#');
    const std::string_view body = detail::trim(raw.substr(0, hash));
    if (body.empty()) return std::nullopt;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError(line, "expected `key = value`");
    const std::string key(detail::trim(body.substr(0, eq)));
    const std::string value(detail::trim(body.substr(eq + 1)));
    if (key.empty()) throw ParseError(line, "missing key");
    if (!detail::known_key(key)) throw ParseError(line, "unknown key '" + key + "'");
    if (value.empty()) throw ParseError(line, key + ": missing value");
    return std::make_pair(key, value);
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    if (auto kv = split(line_no, raw)) {
      auto [it, inserted] = values.try_emplace(kv->first, kv->second, line_no);
      if (!inserted) {
        throw ParseError(line_no, "duplicate key '" + kv->first + "' (lines " +
                                      std::to_string(it->second.second) + " and " +
                                      std::to_string(line_no) + ")");
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  for (const auto& ov : overrides) {
    if (auto kv = split(0, ov)) values[kv->first] = {kv->second, 0};
  }

  RunConfig cfg;
  auto line_of = [&](const std::string& key) {
    auto it = values.find(key);
    return it == values.end() ? std::size_t{0} : it->second.second;
  };
  auto real = [&](const std::string& key, double& dst) {
    if (auto it = values.find(key); it != values.end()) {
      dst = detail::parse_real(it->second.second, key, it->second.first);
    }
  };
  auto count = [&](const std::string& key, auto& dst) {
    if (auto it = values.find(key); it != values.end()) {
      dst = static_cast<std::remove_reference_t<decltype(dst)>>(
          detail::parse_unsigned(it->second.second, key, it->second.first));
    }
  };
  auto text_value = [&](const std::string& key, std::string& dst) {
    if (auto it = values.find(key); it != values.end()) dst = it->second.first;
  };
  auto profile = [&](const std::string& key, InitialProfile& dst) {
    if (auto it = values.find(key); it != values.end()) {
      dst = detail::parse_profile(it->second.second, key, it->second.first);
    }
  };

  real("alpha", cfg.params.alpha);
  real("beta", cfg.params.beta);
  real("gamma", cfg.params.gamma);
  real("ell", cfg.params.ell);
  real("k", cfg.params.k);
  real("d1", cfg.params.d1);
  real("d2", cfg.params.d2);
  real("d3", cfg.params.d3);
  real("domain_measure", cfg.domain_measure);
  profile("u0", cfg.u0);
  profile("v0", cfg.v0);
  profile("w0", cfg.w0);
  count("n_cells", cfg.n_cells);
  real("t_end", cfg.step.t_end);
  real("dt_init", cfg.step.dt_init);
  real("dt_min", cfg.step.dt_min);
  real("safety", cfg.step.safety);
  real("change_floor", cfg.step.change_floor);
  count("record_every", cfg.step.record_every);
  text_value("output", cfg.output);
  text_value("report", cfg.report);
  count("seed", cfg.seed);
  count("n_samples", cfg.n_samples);
  real("k1", cfg.k1);
  count("n_grid", cfg.n_grid);
  count("threads", cfg.threads);
  real("floor_delta", cfg.floor_delta);

  const bool has_m1 = values.count("m1") > 0, has_m2 = values.count("m2") > 0;
  if (has_m1 != has_m2) {
    throw ParseError(line_of(has_m1 ? "m1" : "m2"), "m1 and m2 must be given together");
  }
  if (has_m1) {
    MassPair m;
    real("m1", m.m1);
    real("m2", m.m2);
    cfg.masses = m;
  }

  // Invariant checks, reported against the offending key.
  auto check = [&](bool ok, const std::string& key, const std::string& msg) {
    if (!ok) throw ParseError(line_of(key), msg);
  };
  const auto& p = cfg.params;
  check(p.alpha >= 1.0, "alpha", "alpha must be >= 1");
  check(p.beta >= 1.0, "beta", "beta must be >= 1");
  check(p.gamma >= 1.0, "gamma", "gamma must be >= 1");
  check(p.ell > 0.0, "ell", "ell must be > 0");
  check(p.k > 0.0, "k", "k must be > 0");
  check(p.d1 > 0.0, "d1", "d1 must be > 0");
  check(p.d2 > 0.0, "d2", "d2 must be > 0");
  check(p.d3 > 0.0, "d3", "d3 must be > 0");
  check(cfg.domain_measure > 0.0, "domain_measure", "domain_measure must be > 0");
  if (cfg.masses) {
    check(cfg.masses->m1 > 0.0, "m1", "m1 must be > 0");
    check(cfg.masses->m2 > 0.0, "m2", "m2 must be > 0");
  }
  check(cfg.n_cells >= 2, "n_cells", "n_cells must be >= 2");
  check(cfg.step.t_end > 0.0, "t_end", "t_end must be > 0");
  check(cfg.step.dt_init > 0.0, "dt_init", "dt_init must be > 0");
  check(cfg.step.dt_min > 0.0 && cfg.step.dt_min <= cfg.step.dt_init, "dt_min",
        "dt_min must be in (0, dt_init]");
  check(cfg.step.safety > 0.0 && cfg.step.safety <= 1.0, "safety", "safety must be in (0, 1]");
  check(cfg.step.change_floor > 0.0, "change_floor", "change_floor must be > 0");
  check(cfg.step.record_every >= 1, "record_every", "record_every must be >= 1");
  check(cfg.n_samples >= 1, "n_samples", "n_samples must be >= 1");
  check(cfg.k1 >= 0.0, "k1", "k1 must be >= 0");
  check(cfg.n_grid >= 100, "n_grid", "n_grid must be >= 100");
  check(cfg.threads >= 1, "threads", "threads must be >= 1");
  check(cfg.floor_delta >= 0.0, "floor_delta", "floor_delta must be >= 0");
  return cfg;
}

}  // namespace rdlab
