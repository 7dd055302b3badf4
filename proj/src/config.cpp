#include "riskavg/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

namespace riskavg {

namespace {

using nlohmann::json;

bool is_uint(const json& v) { return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0); }

struct Checker {
  std::vector<Diagnostic> diags;

  void pass(const std::string& key, const std::string& module) {
    diags.push_back({key, module, "ok"});
  }
  void fail(const std::string& key, const std::string& module, const std::string& why) {
    diags.push_back({key, module, why});
  }
  void check(bool cond, const std::string& key, const std::string& module,
             const std::string& why) {
    if (cond)
      pass(key, module);
    else
      fail(key, module, why);
  }

  void unknown_keys(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (std::find_if(allowed.begin(), allowed.end(),
                       [&](const char* k) { return it.key() == k; }) == allowed.end())
        fail(where + "." + it.key(), "cli-harness", "unknown key");
    }
  }

  void check_level(const json& p, const std::string& where) {
    if (!p.contains("level")) return fail(where + ".level", "risk-core", "missing");
    const json& v = p["level"];
    check(v.is_number() && v.get<double>() > 0.0 && v.get<double>() < 1.0, where + ".level",
          "risk-core (EsLevel a in (0,1))", "must lie strictly inside (0,1)");
  }

  void check_base_law(const json& p, const std::string& where) {
    if (!p.contains("mu_x"))
      fail(where + ".mu_x", "risk-core", "missing");
    else
      check(p["mu_x"].is_number(), where + ".mu_x", "risk-core (GaussianLaw mean)",
            "must be a number");
    if (!p.contains("sigma_x"))
      fail(where + ".sigma_x", "risk-core", "missing");
    else
      check(p["sigma_x"].is_number() && p["sigma_x"].get<double>() > 0.0, where + ".sigma_x",
            "risk-core (GaussianLaw stddev > 0)", "must be positive");
  }

  void check_lambda(const json& v, const std::string& where) {
    check(v.is_number() && v.get<double>() >= 0.0, where,
          "kernel-ball (kernel decay >= 0)", "must be nonnegative");
  }

  void check_r_grid(const json& p, const std::string& where, bool allow_zero = true) {
    if (!p.contains("r_grid")) return fail(where + ".r_grid", "kernel-ball", "missing");
    const json& g = p["r_grid"];
    if (!g.is_array() || g.empty())
      return fail(where + ".r_grid", "kernel-ball", "must be a nonempty array");
    double prev = -1.0;
    for (const json& v : g) {
      if (!v.is_number() || v.get<double>() < 0.0 || (!allow_zero && v.get<double>() == 0.0))
        return fail(where + ".r_grid", "kernel-ball (BallSpec radius >= 0)",
                    "radii must be nonnegative");
      if (v.get<double>() < prev)
        return fail(where + ".r_grid", "kernel-ball (radius sweep)", "grid must be sorted");
      prev = v.get<double>();
    }
    pass(where + ".r_grid", "kernel-ball (BallSpec radius >= 0, sorted grid)");
  }

  void check_prior(const json& p, const std::string& where) {
    if (!p.contains("prior")) return fail(where + ".prior", "bayes-wasserstein", "missing");
    const json& pr = p["prior"];
    if (!pr.is_object()) return fail(where + ".prior", "bayes-wasserstein", "must be an object");
    unknown_keys(pr, where + ".prior", {"alpha_ng", "k"});
    if (!pr.contains("alpha_ng"))
      fail(where + ".prior.alpha_ng", "bayes-wasserstein", "missing");
    else
      check(pr["alpha_ng"].is_number() && pr["alpha_ng"].get<double>() > 1.0,
            where + ".prior.alpha_ng", "bayes-wasserstein (gamma sampler shape > 1)",
            "the rejection gamma sampler requires shape > 1");
    if (!pr.contains("k"))
      fail(where + ".prior.k", "bayes-wasserstein", "missing");
    else
      check(pr["k"].is_number() && pr["k"].get<double>() > 0.0, where + ".prior.k",
            "bayes-wasserstein (precision scaling k > 0)", "must be positive");
  }
};

void check_params(Checker& c, const std::string& experiment, const json& params) {
  const std::string w = "params";
  if (experiment == "dominance" || experiment == "radius-sweep") {
    c.unknown_keys(params, w, {"mu_x", "sigma_x", "level", "lambda", "prior", "r_grid"});
    c.check_base_law(params, w);
    c.check_level(params, w);
    if (params.contains("lambda"))
      c.check_lambda(params["lambda"], w + ".lambda");
    else
      c.fail(w + ".lambda", "kernel-ball", "missing");
    c.check_prior(params, w);
    c.check_r_grid(params, w);
  } else if (experiment == "sensitivity") {
    c.unknown_keys(params, w,
                   {"mu_x", "sigma_x", "level", "lambda_fixed", "priors", "prior_fixed",
                    "lambdas", "r_grid"});
    c.check_base_law(params, w);
    c.check_level(params, w);
    if (params.contains("lambda_fixed"))
      c.check_lambda(params["lambda_fixed"], w + ".lambda_fixed");
    else
      c.fail(w + ".lambda_fixed", "kernel-ball", "missing");
    if (!params.contains("priors") || !params["priors"].is_array() || params["priors"].empty())
      c.fail(w + ".priors", "bayes-wasserstein", "must be a nonempty array of [alpha_ng, k]");
    else {
      bool ok = true;
      for (const json& pr : params["priors"])
        ok = ok && pr.is_array() && pr.size() == 2 && pr[0].is_number() &&
             pr[0].get<double>() > 1.0 && pr[1].is_number() && pr[1].get<double>() > 0.0;
      c.check(ok, w + ".priors", "bayes-wasserstein (gamma sampler shape > 1)",
              "each entry must be [alpha_ng > 1, k > 0]");
    }
    if (!params.contains("prior_fixed") || !params["prior_fixed"].is_array() ||
        params["prior_fixed"].size() != 2)
      c.fail(w + ".prior_fixed", "bayes-wasserstein", "must be [alpha_ng, k]");
    else
      c.check(params["prior_fixed"][0].get<double>() > 1.0 &&
                  params["prior_fixed"][1].get<double>() > 0.0,
              w + ".prior_fixed", "bayes-wasserstein (gamma sampler shape > 1)",
              "must be [alpha_ng > 1, k > 0]");
    if (!params.contains("lambdas") || !params["lambdas"].is_array() || params["lambdas"].empty())
      c.fail(w + ".lambdas", "kernel-ball", "must be a nonempty array");
    else {
      bool ok = true;
      for (const json& v : params["lambdas"]) ok = ok && v.is_number() && v.get<double>() >= 0.0;
      c.check(ok, w + ".lambdas", "kernel-ball (kernel decay >= 0)", "must be nonnegative");
    }
    c.check_r_grid(params, w);
  } else if (experiment == "hilbert-linear" || experiment == "hilbert-quadratic") {
    c.unknown_keys(params, w, {"dims", "r_grid"});
    if (!params.contains("dims") || !params["dims"].is_array() || params["dims"].empty())
      c.fail(w + ".dims", "gaussian-hilbert", "must be a nonempty array of dimensions");
    else {
      bool ok = true;
      for (const json& v : params["dims"]) ok = ok && is_uint(v) && v.get<long long>() >= 1;
      c.check(ok, w + ".dims", "gaussian-hilbert (dim >= 1)", "dimensions must be >= 1");
    }
    c.check_r_grid(params, w, /*allow_zero=*/false);
  } else if (experiment == "chisq-verify") {
    c.unknown_keys(params, w, {"n_triples"});
    if (!params.contains("n_triples"))
      c.fail(w + ".n_triples", "noncentral-chisq", "missing");
    else
      c.check(is_uint(params["n_triples"]) && params["n_triples"].get<long long>() >= 1,
              w + ".n_triples", "noncentral-chisq (triples >= 1)", "must be >= 1");
  } else if (experiment == "counterexample") {
    c.unknown_keys(params, w, {"r_grid"});
    c.check_r_grid(params, w, /*allow_zero=*/false);
  }
}

json parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(path, "cannot open config file");
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + " (byte " + std::to_string(e.byte) + ")", e.what());
  }
}

std::vector<Diagnostic> run_checks(const json& doc) {
  Checker c;
  c.unknown_keys(doc, "$", {"experiment", "seed", "out_dir", "n_draws", "plots", "params"});

  std::string experiment;
  if (!doc.contains("experiment") || !doc["experiment"].is_string()) {
    c.fail("$.experiment", "cli-harness", "missing experiment id");
  } else {
    experiment = doc["experiment"].get<std::string>();
    const auto& ids = experiment_ids();
    c.check(std::find(ids.begin(), ids.end(), experiment) != ids.end(), "$.experiment",
            "cli-harness (experiment dispatch)", "unknown experiment id");
  }
  if (doc.contains("seed"))
    c.check(is_uint(doc["seed"]), "$.seed", "cli-harness (64-bit seed)",
            "must be a nonnegative integer");
  if (doc.contains("n_draws"))
    c.check(is_uint(doc["n_draws"]) && doc["n_draws"].get<long long>() >= 1, "$.n_draws",
            "cli-harness (draw count >= 1)", "must be >= 1");
  if (doc.contains("out_dir"))
    c.check(doc["out_dir"].is_string(), "$.out_dir", "cli-harness (output directory)",
            "must be a string");
  if (doc.contains("plots"))
    c.check(doc["plots"].is_boolean(), "$.plots", "cli-harness (plot toggle)",
            "must be a boolean");

  if (!doc.contains("params") || !doc["params"].is_object()) {
    c.fail("$.params", "cli-harness", "missing params object");
  } else if (!experiment.empty()) {
    check_params(c, experiment, doc["params"]);
  }
  return c.diags;
}

}  // namespace

std::vector<Diagnostic> validate_config(const std::string& path) {
  return run_checks(parse_file(path));
}

nlohmann::ordered_json ExperimentConfig::echo() const {
  nlohmann::ordered_json j;
  j["experiment"] = experiment;
  j["seed"] = seed;
  j["out_dir"] = out_dir;
  j["n_draws"] = n_draws;
  j["plots"] = plots;
  j["params"] = params;
  return j;
}

ExperimentConfig load_config(const std::string& path, const std::string& expected_experiment,
                             const CliOverrides& overrides) {
  json doc = parse_file(path);
  for (const Diagnostic& d : run_checks(doc)) {
    if (d.status != "ok") throw ConfigError(d.key, d.status + " [" + d.module + "]");
  }

  ExperimentConfig cfg;
  cfg.experiment = doc["experiment"].get<std::string>();
  if (!expected_experiment.empty() && cfg.experiment != expected_experiment)
    throw ConfigError("$.experiment", "config is for '" + cfg.experiment +
                                          "' but the subcommand is '" + expected_experiment + "'");
  if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("out_dir")) cfg.out_dir = doc["out_dir"].get<std::string>();
  if (doc.contains("n_draws")) cfg.n_draws = doc["n_draws"].get<std::uint64_t>();
  if (doc.contains("plots")) cfg.plots = doc["plots"].get<bool>();
  cfg.params = doc["params"];

  if (const char* env = std::getenv("RISKAVG_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') throw ConfigError("RISKAVG_SEED", "must be an integer");
    cfg.seed = v;
  }
  if (const char* env = std::getenv("RISKAVG_OUT")) cfg.out_dir = env;

  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.out_dir) cfg.out_dir = *overrides.out_dir;
  if (overrides.n_draws) cfg.n_draws = *overrides.n_draws;
  if (overrides.plots) cfg.plots = *overrides.plots;
  return cfg;
}

}  // namespace riskavg
