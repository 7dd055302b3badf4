#include <chrono>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "riskavg/config.hpp"
#include "riskavg/experiments.hpp"

namespace {

void print_error_record(const std::string& where, const std::string& what) {
  nlohmann::ordered_json err;
  err["error"] = what;
  err["where"] = where;
  std::cerr << err.dump() << "\n";
}

int run_one(const std::string& experiment, const std::string& config_path,
            const riskavg::CliOverrides& overrides) {
  auto start = std::chrono::steady_clock::now();
  riskavg::ExperimentConfig cfg = riskavg::load_config(config_path, experiment, overrides);
  riskavg::RunOutput out = riskavg::run_experiment(cfg);
  auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const std::string& f : out.files) std::cout << "wrote " << f << "\n";
  if (!out.summary.empty()) std::cout << out.summary << "\n";
  std::printf("done in %.2f s\n", elapsed);
  return 0;
}

int run_validate(const std::string& config_path) {
  auto diags = riskavg::validate_config(config_path);
  bool ok = true;
  for (const auto& d : diags) {
    std::printf("%-28s -> %-48s %s\n", d.key.c_str(), d.module.c_str(), d.status.c_str());
    if (d.status != "ok") ok = false;
  }
  std::cout << (ok ? "valid" : "invalid") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel-weighted averaging-robust risk experiments"};
  app.require_subcommand(1);

  std::string config_path;
  riskavg::CliOverrides overrides;
  std::optional<std::uint64_t> seed, draws;
  std::optional<std::string> out_dir;
  bool plots = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config file (JSON)")->required();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--out", out_dir, "override the output directory");
    sub->add_option("--draws", draws, "override the Monte Carlo draw count");
    sub->add_flag("--plots", plots, "also emit SVG panels");
  };

  for (const std::string& id : riskavg::experiment_ids()) add_common(app.add_subcommand(id));
  auto* validate = app.add_subcommand("validate", "check a config without running");
  validate->add_option("--config", config_path, "experiment config file (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  overrides.seed = seed;
  overrides.out_dir = out_dir;
  overrides.n_draws = draws;
  if (plots) overrides.plots = true;

  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    if (sub == "validate") return run_validate(config_path);
    return run_one(sub, config_path, overrides);
  } catch (const riskavg::ConfigError& e) {
    print_error_record(e.where(), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error_record(sub, e.what());
    return 2;
  }
}
