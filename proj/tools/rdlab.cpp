// rdlab: simulate alpha U + beta V <=> gamma W on [0, 1] and check its
// entropy inequalities numerically.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rdlab/commands.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rdlab::InvalidParameter("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Adds `--flag VALUE` that becomes the config override `key = VALUE`.
void override_flag(CLI::App* app, const std::string& flag, const std::string& key,
                   std::vector<std::string>& overrides, const std::string& help) {
  app->add_option_function<std::string>(
      flag, [&overrides, key](const std::string& v) { overrides.push_back(key + " = " + v); },
      help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reaction-diffusion laboratory for alpha U + beta V <=> gamma W"};
  app.require_subcommand(1);
  app.fallthrough();
  app.footer(rdlab::config_help());

  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "configuration file (key = value lines)");
  override_flag(&app, "--out", "output", overrides, "trajectory CSV path");
  override_flag(&app, "--report", "report", overrides, "verification report path");
  override_flag(&app, "--seed", "seed", overrides, "base sample seed");
  override_flag(&app, "--threads", "threads", overrides, "sampling threads (default 1)");
  app.add_option_function<std::vector<std::string>>(
         "--set",
         [&overrides](const std::vector<std::string>& v) {
           overrides.insert(overrides.end(), v.begin(), v.end());
         },
         "override any config key, e.g. --set t_end=20")
      ->allow_extra_args(false);

  auto model_flags = [&](CLI::App* sub) {
    for (const char* key : {"alpha", "beta", "gamma", "m1", "m2", "d1", "d2", "d3"}) {
      override_flag(sub, std::string("--") + key, key, overrides, std::string("override ") + key);
    }
  };
  auto sample_flags = [&](CLI::App* sub) {
    model_flags(sub);
    override_flag(sub, "--samples", "n_samples", overrides, "number of admissible samples");
    override_flag(sub, "--n-cells", "n_cells", overrides, "grid cells");
  };

  auto* simulate = app.add_subcommand("simulate", "integrate and write the trajectory CSV");
  model_flags(simulate);
  override_flag(simulate, "--t-end", "t_end", overrides, "final time");
  override_flag(simulate, "--n-cells", "n_cells", overrides, "grid cells");
  override_flag(simulate, "--dt-init", "dt_init", overrides, "initial time step");

  auto* equilibrium = app.add_subcommand("equilibrium", "detailed-balance equilibrium");
  model_flags(equilibrium);

  auto* lemma31 = app.add_subcommand("lemma31", "scan homogeneous perturbations of the equilibrium");
  model_flags(lemma31);
  override_flag(lemma31, "--n-grid", "n_grid", overrides, "scan points");

  auto* verify_eed = app.add_subcommand("verify-eed", "estimate K in D >= K (E - E_inf)");
  sample_flags(verify_eed);

  auto* verify_l33 =
      app.add_subcommand("verify-lemma33", "estimate K2 of the square-root distance bound");
  sample_flags(verify_l33);
  override_flag(verify_l33, "--k1", "k1", overrides, "reaction-defect weight");

  auto* verify_ck = app.add_subcommand("verify-ck", "check the Csiszar-Kullback type bound");
  sample_flags(verify_ck);

  std::string csv_path = "trajectory.csv";
  std::string column = "E_rel";
  auto* fit = app.add_subcommand("fit-rate", "fit an exponential decay rate to a CSV column");
  fit->add_option("--csv", csv_path, "trajectory CSV")->capture_default_str();
  fit->add_option("--column", column, "column name, or l1 for the summed L1 distances")
      ->capture_default_str();

  double d_a = 0.0, d_b = 0.0;
  auto* duality = app.add_subcommand("duality", "margin of the L2 duality closeness condition");
  duality->add_option("--d-a", d_a, "first diffusivity (default: d1 from config)");
  duality->add_option("--d-b", d_b, "second diffusivity (default: d3 from config)");

  auto* validate = app.add_subcommand("validate", "re-check invariants of a trajectory CSV");
  validate->add_option("--csv", csv_path, "trajectory CSV")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return rdlab::cli::kExitUsage;
  }

  rdlab::RunConfig cfg;
  try {
    const std::string text = config_path.empty() ? std::string() : read_file(config_path);
    cfg = rdlab::parse_config(text, overrides);
  } catch (const rdlab::Error& e) {
    std::cerr << "rdlab: " << (config_path.empty() ? "" : config_path + ": ") << e.what() << '\n';
    return rdlab::cli::kExitUsage;
  }

  try {
    using namespace rdlab::cli;
    if (*simulate) return cmd_simulate(cfg, std::cout);
    if (*equilibrium) return cmd_equilibrium(cfg, std::cout);
    if (*lemma31) return cmd_lemma31(cfg, std::cout);
    if (*verify_eed) return cmd_verify_eed(cfg, std::cout);
    if (*verify_l33) return cmd_verify_lemma33(cfg, std::cout);
    if (*verify_ck) return cmd_verify_ck(cfg, std::cout);
    if (*fit) return cmd_fit_rate(csv_path, column, std::cout);
    if (*duality) {
      if (d_a == 0.0) d_a = cfg.params.d1;
      if (d_b == 0.0) d_b = cfg.params.d3;
      return cmd_duality(d_a, d_b, std::cout);
    }
    if (*validate) return cmd_validate(csv_path, std::cout);
  } catch (const rdlab::InvalidParameter& e) {
    std::cerr << "rdlab: " << e.what() << '\n';
    return rdlab::cli::kExitUsage;
  } catch (const rdlab::ParseError& e) {
    std::cerr << "rdlab: " << e.what() << '\n';
    return rdlab::cli::kExitUsage;
  } catch (const rdlab::Error& e) {
    std::cerr << "rdlab: " << e.what() << '\n';
    return rdlab::cli::kExitDomain;
  }
  return rdlab::cli::kExitUsage;
}
