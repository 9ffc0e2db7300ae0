#include "kernelcut/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "kernelcut/error.hpp"
#include "kernelcut/io.hpp"

namespace kernelcut::config {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::string canonical_key(std::string key) {
  while (!key.empty() && key.front() == '-') key.erase(key.begin());
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    config_error(key + " must be a non-negative integer, got \"" + text + "\"");
  }
  return v;
}

double parse_real(const std::string& key, const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
    config_error(key + " must be a number, got \"" + text + "\"");
  }
  return v;
}

bool is_none(const std::string& text) { return text == "none" || text == "null" || text.empty(); }

void apply(RunConfig& c, const std::string& raw_key, const std::string& raw_value) {
  const auto key = canonical_key(raw_key);
  const auto value = trim(raw_value);
  if (key == "max_fprs") {
    c.batching.max_fprs = parse_unsigned(key, value);
  } else if (key == "size_balance_weight") {
    c.batching.size_balance_weight = parse_real(key, value);
  } else if (key == "alpha") {
    c.alpha = parse_real(key, value);
  } else if (key == "beta") {
    c.beta = is_none(value) ? std::nullopt : std::optional<double>(parse_real(key, value));
  } else if (key == "population_size") {
    c.ga.population_size = parse_unsigned(key, value);
  } else if (key == "elite_fraction") {
    c.ga.elite_fraction = parse_real(key, value);
  } else if (key == "generations") {
    c.ga.generations = parse_unsigned(key, value);
  } else if (key == "neighbour_mutation_rate") {
    c.ga.neighbour_mutation_rate = parse_real(key, value);
  } else if (key == "foreign_mutation_rate") {
    c.ga.foreign_mutation_rate = parse_real(key, value);
  } else if (key == "seed") {
    c.ga.seed = parse_unsigned(key, value);
  } else if (key == "stagnation_patience") {
    if (is_none(value) || value == "0") {
      c.ga.stagnation_patience.reset();
    } else {
      c.ga.stagnation_patience = parse_unsigned(key, value);
    }
  } else if (key == "evaluation_threads") {
    c.ga.evaluation_threads = parse_unsigned(key, value);
  } else if (key == "pallet_limit") {
    c.pallet_limit = parse_unsigned(key, value);
  } else if (key == "oracle_cap") {
    c.oracle_cap = parse_unsigned(key, value);
  } else {
    config_error("unknown key \"" + raw_key + "\"");
  }
}

std::vector<std::pair<std::string, std::string>> parse_file(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> entries;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      config_error(std::string("config file is not valid JSON: ") + e.what());
    }
    for (const auto& [key, value] : doc.items()) {
      if (value.is_string()) {
        entries.emplace_back(key, value.get<std::string>());
      } else if (value.is_null()) {
        entries.emplace_back(key, "none");
      } else if (value.is_number() || value.is_boolean()) {
        entries.emplace_back(key, value.dump());
      } else {
        config_error("config key \"" + key + "\" must hold a scalar");
      }
    }
    return entries;
  }
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      config_error("config line " + std::to_string(line_no) + " is not key=value");
    }
    entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return entries;
}

}  // namespace

ObjectiveWeights RunConfig::weights_for(std::size_t mb_count) const {
  return {alpha, beta.value_or(static_cast<double>(mb_count))};
}

void RunConfig::validate() const {
  if (batching.max_fprs < 1) config_error("max_fprs must be >= 1");
  if (!(batching.size_balance_weight >= 0.0)) config_error("size_balance_weight must be >= 0");
  if (!(alpha >= 0.0)) config_error("alpha must be >= 0");
  if (beta && !(*beta >= 0.0)) config_error("beta must be >= 0");
  // An unset beta resolves to the batch count, which is positive.
  if (beta && !(alpha + *beta > 0.0)) config_error("alpha + beta must be > 0");
  if (pallet_limit < 1) config_error("pallet_limit must be >= 1");
  if (oracle_cap < 1) config_error("oracle_cap must be >= 1");
  ga.validate();
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "max_fprs",       "size_balance_weight",     "alpha",
      "beta",           "population_size",         "elite_fraction",
      "generations",    "neighbour_mutation_rate", "foreign_mutation_rate",
      "seed",           "stagnation_patience",     "evaluation_threads",
      "pallet_limit",   "oracle_cap"};
  return keys;
}

RunConfig resolve_config(const ConfigSources& sources) {
  RunConfig c;
  if (sources.env_seed && !trim(*sources.env_seed).empty()) apply(c, "seed", *sources.env_seed);
  if (sources.file_text) {
    for (const auto& [k, v] : parse_file(*sources.file_text)) apply(c, k, v);
  }
  for (const auto& [k, v] : sources.flags) apply(c, k, v);
  c.validate();
  return c;
}

RunConfig load_config(const std::optional<std::filesystem::path>& path,
                      const std::vector<std::pair<std::string, std::string>>& flags) {
  ConfigSources sources;
  sources.flags = flags;
  if (const char* env = std::getenv("KERNELCUT_SEED")) sources.env_seed = env;
  if (path) {
    std::ifstream in(*path);
    if (!in) config_error("cannot read config file " + path->string());
    sources.file_text = std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  }
  return resolve_config(sources);
}

json config_echo(const RunConfig& c) {
  json j = {{"max_fprs", c.batching.max_fprs},
            {"size_balance_weight", c.batching.size_balance_weight},
            {"alpha", c.alpha},
            {"population_size", c.ga.population_size},
            {"elite_fraction", c.ga.elite_fraction},
            {"generations", c.ga.generations},
            {"neighbour_mutation_rate", c.ga.neighbour_mutation_rate},
            {"foreign_mutation_rate", c.ga.foreign_mutation_rate},
            {"seed", c.ga.seed},
            {"pallet_limit", c.pallet_limit},
            {"oracle_cap", c.oracle_cap}};
  j["beta"] = c.beta ? json(*c.beta) : json(nullptr);
  j["stagnation_patience"] =
      c.ga.stagnation_patience ? json(*c.ga.stagnation_patience) : json(nullptr);
  // evaluation_threads is left out: it cannot change results.
  return j;
}

std::string config_digest(const RunConfig& c) { return io::sha256_hex(config_echo(c).dump()); }

RunConfig config_from_echo(const json& echo) {
  ConfigSources s;
  for (const auto& [key, value] : echo.items()) {
    s.flags.emplace_back(key, value.is_null() ? std::string("none")
                                              : value.is_string() ? value.get<std::string>()
                                                                  : value.dump());
  }
  return resolve_config(s);
}

}  // namespace kernelcut::config
