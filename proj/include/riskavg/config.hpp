#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace riskavg {

/// Config or CLI rejection, annotated with the offending location.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

inline const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = {
      "dominance",   "sensitivity",  "hilbert-linear", "hilbert-quadratic",
      "chisq-verify", "radius-sweep", "counterexample"};
  return ids;
}

/// Parsed experiment configuration. Unknown keys are rejected; every numeric
/// parameter is range-checked against the constraint of the module it binds to.
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  std::uint64_t n_draws = 100000;
  bool plots = false;
  nlohmann::json params;  // experiment-specific block, already validated

  /// Echo of the validated document, sufficient to re-run bit-identically.
  nlohmann::ordered_json echo() const;
};

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> n_draws;
  std::optional<bool> plots;
};

/// Parses and validates a config document; expected_experiment guards against
/// pointing a subcommand at the wrong file. Precedence: CLI flag over
/// environment (RISKAVG_SEED, RISKAVG_OUT) over file.
ExperimentConfig load_config(const std::string& path, const std::string& expected_experiment,
                             const CliOverrides& overrides);

/// One diagnostic per parameter: where it lives, which module owns the
/// constraint, and whether it passed.
struct Diagnostic {
  std::string key;
  std::string module;
  std::string status;  // "ok" or the failure reason
};

/// Validation without running; throws ConfigError on parse failure only.
std::vector<Diagnostic> validate_config(const std::string& path);

}  // namespace riskavg
