#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "riskavg/config.hpp"
#include "riskavg/experiments.hpp"

using namespace riskavg;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  fs::path p = fs::temp_directory_path() / "riskavg-tests";
  fs::create_directories(p);
  return p;
}

fs::path write_config(const std::string& name, const nlohmann::json& j) {
  fs::path p = scratch_dir() / name;
  std::ofstream f(p);
  f << j.dump(2);
  return p;
}

nlohmann::json dominance_config() {
  return {{"experiment", "dominance"},
          {"seed", 4242},
          {"out_dir", (scratch_dir() / "out").string()},
          {"n_draws", 4000},
          {"params",
           {{"mu_x", 0.0},
            {"sigma_x", 1.0},
            {"level", 0.95},
            {"lambda", 2.0},
            {"prior", {{"alpha_ng", 25.0}, {"k", 4.0}}},
            {"r_grid", {0.5, 1.0, 2.0}}}}};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

bool all_ok(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.status != "ok") return false;
  return true;
}

std::string first_failure(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.status != "ok") return d.key + ": " + d.status;
  return "";
}

}  // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("shipped default config validates cleanly") {
  auto path = write_config("ok.json", dominance_config());
  auto diags = validate_config(path.string());
  CHECK(all_ok(diags));
  // diagnostics name the owning module per parameter
  bool saw_prior_binding = false;
  for (const auto& d : diags)
    if (d.key == "params.prior.alpha_ng" && d.module.find("bayes-wasserstein") != std::string::npos)
      saw_prior_binding = true;
  CHECK(saw_prior_binding);
}

TEST_CASE("shape constraint and range violations are caught before running") {
  auto bad_shape = dominance_config();
  bad_shape["params"]["prior"]["alpha_ng"] = 0.5;
  auto diags = validate_config(write_config("bad_shape.json", bad_shape).string());
  CHECK(!all_ok(diags));
  CHECK(first_failure(diags).find("shape > 1") != std::string::npos);

  auto bad_radius = dominance_config();
  bad_radius["params"]["r_grid"] = {-1.0, 0.5};
  diags = validate_config(write_config("bad_radius.json", bad_radius).string());
  CHECK(!all_ok(diags));
  CHECK(first_failure(diags).find("r_grid") != std::string::npos);

  auto unknown = dominance_config();
  unknown["params"]["mystery"] = 1;
  diags = validate_config(write_config("unknown.json", unknown).string());
  CHECK(!all_ok(diags));
  CHECK(first_failure(diags).find("unknown key") != std::string::npos);

  CHECK_THROWS_AS(validate_config((scratch_dir() / "missing.json").string()), ConfigError);

  fs::path mangled = scratch_dir() / "mangled.json";
  std::ofstream(mangled) << "{ not json";
  CHECK_THROWS_AS(validate_config(mangled.string()), ConfigError);
}

TEST_CASE("load_config honors override precedence") {
  auto path = write_config("prec.json", dominance_config());
  setenv("RISKAVG_SEED", "777", 1);
  auto from_env = load_config(path.string(), "dominance", {});
  CHECK(from_env.seed == 777);
  CliOverrides cli;
  cli.seed = 888;
  auto from_cli = load_config(path.string(), "dominance", cli);
  CHECK(from_cli.seed == 888);
  unsetenv("RISKAVG_SEED");
  auto from_file = load_config(path.string(), "dominance", {});
  CHECK(from_file.seed == 4242);

  CHECK_THROWS_AS(load_config(path.string(), "sensitivity", {}), ConfigError);
}

TEST_CASE("dominance run: schema, files, determinism") {
  auto path = write_config("run.json", dominance_config());
  auto cfg = load_config(path.string(), "dominance", {});
  auto out1 = run_experiment(cfg);
  REQUIRE(!out1.files.empty());
  CHECK(fs::exists(out1.files.front()));

  std::string csv1 = slurp(out1.files.front());
  CHECK(csv1.rfind("r,rho_base,rho_avg,se_avg,rho_qagg,rho_dagg,se_dagg,rho_wc,acceptance_rate,flags\n",
                   0) == 0);
  // LF only
  CHECK(csv1.find('\r') == std::string::npos);

  auto out2 = run_experiment(cfg);
  CHECK(slurp(out2.files.front()) == csv1);

  // the meta sidecar echoes the config
  fs::path meta = fs::path(out1.files.front()).replace_extension("").string() + ".meta.json";
  auto echoed = nlohmann::json::parse(slurp(meta));
  CHECK(echoed["config"]["seed"] == 4242);
  CHECK(echoed["config"]["params"]["lambda"] == 2.0);

  // rerun from the echoed config block reproduces the bytes
  auto path2 = write_config("echo.json", echoed["config"]);
  auto cfg2 = load_config(path2.string(), "dominance", {});
  auto out3 = run_experiment(cfg2);
  CHECK(slurp(out3.files.front()) == csv1);
}

TEST_CASE("plots emit svg panels") {
  auto j = dominance_config();
  j["plots"] = true;
  j["seed"] = 11;
  auto cfg = load_config(write_config("plots.json", j).string(), "dominance", {});
  auto out = run_experiment(cfg);
  bool has_svg = false;
  for (const auto& f : out.files)
    if (f.size() > 4 && f.substr(f.size() - 4) == ".svg") {
      has_svg = true;
      std::string svg = slurp(f);
      CHECK(svg.find("<svg") != std::string::npos);
      CHECK(svg.find("polyline") != std::string::npos);
    }
  CHECK(has_svg);
}

TEST_CASE("remaining experiments run end to end") {
  // chisq-verify
  nlohmann::json j{{"experiment", "chisq-verify"},
                   {"seed", 3},
                   {"out_dir", (scratch_dir() / "out").string()},
                   {"params", {{"n_triples", 5}}}};
  auto out = run_experiment(load_config(write_config("cv.json", j).string(), "chisq-verify", {}));
  CHECK(out.summary.find("max |gap|") != std::string::npos);

  // counterexample
  j = {{"experiment", "counterexample"},
       {"seed", 3},
       {"out_dir", (scratch_dir() / "out").string()},
       {"n_draws", 200000},
       {"params", {{"r_grid", {0.1, 1.0, 50.0}}}}};
  out = run_experiment(load_config(write_config("cx.json", j).string(), "counterexample", {}));
  std::string csv = slurp(out.files.front());
  CHECK(csv.rfind("r,estimate,std_error,acceptance_rate,flags\n", 0) == 0);

  // radius-sweep reuses the dominance parameter block
  j = dominance_config();
  j["experiment"] = "radius-sweep";
  j["n_draws"] = 20000;
  out = run_experiment(load_config(write_config("rs.json", j).string(), "radius-sweep", {}));
  CHECK(out.table.rows().size() == 3);

  // hilbert-linear / quadratic
  j = {{"experiment", "hilbert-linear"},
       {"seed", 9},
       {"out_dir", (scratch_dir() / "out").string()},
       {"n_draws", 50000},
       {"params", {{"dims", {2, 4}}, {"r_grid", {0.5, 1.0}}}}};
  out = run_experiment(load_config(write_config("hl.json", j).string(), "hilbert-linear", {}));
  CHECK(out.table.rows().size() == 4);

  j["experiment"] = "hilbert-quadratic";
  j["params"] = {{"dims", {4}}, {"r_grid", {3.0}}};
  out = run_experiment(load_config(write_config("hq.json", j).string(), "hilbert-quadratic", {}));
  CHECK(out.table.rows().size() == 1);

  // sensitivity
  j = {{"experiment", "sensitivity"},
       {"seed", 5},
       {"out_dir", (scratch_dir() / "out").string()},
       {"n_draws", 20000},
       {"params",
        {{"mu_x", 0.0},
         {"sigma_x", 1.0},
         {"level", 0.95},
         {"lambda_fixed", 2.0},
         {"priors", {{25.0, 4.0}, {5.0, 1.0}}},
         {"prior_fixed", {25.0, 4.0}},
         {"lambdas", {0.5, 2.0}},
         {"r_grid", {0.5, 1.0}}}}};
  out = run_experiment(load_config(write_config("sv.json", j).string(), "sensitivity", {}));
  CHECK(out.table.rows().size() == 8);
}

#ifdef RISKAVG_CLI_PATH
TEST_CASE("cli binary round trip") {
  auto path = write_config("cli.json", dominance_config());
  std::string cmd = std::string(RISKAVG_CLI_PATH) + " validate --config " + path.string() +
                    " > /dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  cmd = std::string(RISKAVG_CLI_PATH) + " dominance --config " + path.string() +
        " --seed 1 --draws 2000 > /dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  // config/subcommand mismatch is a usage error
  cmd = std::string(RISKAVG_CLI_PATH) + " sensitivity --config " + path.string() +
        " > /dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) != 0);
}
#endif

TEST_SUITE_END();
