#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "kernelcut/batching.hpp"
#include "kernelcut/ga.hpp"
#include "kernelcut/metrics.hpp"
#include "kernelcut/objective.hpp"

namespace kernelcut::config {

struct RunConfig {
  BatchingConfig batching;
  double alpha = 1.0;
  // Unset means beta = number of manufacturing batches of the instance.
  std::optional<double> beta;
  ga::GaConfig ga;
  std::size_t pallet_limit = metrics::kDefaultPalletLimit;
  std::size_t oracle_cap = 10;

  ObjectiveWeights weights_for(std::size_t mb_count) const;
  // Throws ConfigError naming the violated constraint.
  void validate() const;
};

// Recognised keys, snake_case. Flags use the kebab-case spelling.
const std::vector<std::string>& config_keys();

struct ConfigSources {
  std::optional<std::string> file_text;  // key=value lines or a JSON object
  std::optional<std::string> env_seed;   // KERNELCUT_SEED
  std::vector<std::pair<std::string, std::string>> flags;
};

// defaults <- env seed <- file <- flags, later layers winning.
RunConfig resolve_config(const ConfigSources& sources);

// Reads the file (when given) and KERNELCUT_SEED from the environment.
RunConfig load_config(const std::optional<std::filesystem::path>& path,
                      const std::vector<std::pair<std::string, std::string>>& flags = {});

// Effective configuration, every key present; beta is null when derived.
nlohmann::json config_echo(const RunConfig& config);
std::string config_digest(const RunConfig& config);
RunConfig config_from_echo(const nlohmann::json& echo);

}  // namespace kernelcut::config
