#pragma once

// Run configuration: a flat JSON object whose keys mirror the fields below.
// Command-line flags are layered over the file, and ANNEAL_NOISE_SEED is
// consulted only when neither supplies a seed.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "anneal_noise/annealing.hpp"
#include "anneal_noise/error.hpp"
#include "anneal_noise/experiments.hpp"

namespace anneal_noise {

inline constexpr const char* kSeedEnvVar = "ANNEAL_NOISE_SEED";

struct RunConfig {
  TargetFunction function = TargetFunction::square();
  double noise_percent = 0.0;
  std::uint32_t seed = 1;
  std::size_t grid_size = kDefaultGridSize;
  AnnealingSchedule schedule = default_schedule(TargetFunction::square());
  bool schedule_overridden = false;
  WeightBounds bounds = default_bounds(TargetFunction::square());
  bool bounds_overridden = false;
  std::filesystem::path out_dir = ".";
  std::vector<std::uint32_t> seeds;        // table only; defaults to {seed}
  std::vector<double> noise_levels = kDefaultNoiseLevels;  // table only

  Scenario scenario() const {
    Scenario s;
    s.function = function;
    s.noise_percent = noise_percent;
    s.seed = seed;
    s.schedule = schedule;
    s.bounds = bounds;
    s.grid_size = grid_size;
    return s;
  }

  /// Table runs cover both targets; an explicit schedule or bounds applies
  /// to both, otherwise each target uses its own preset.
  TableConfig table_config() const {
    TableConfig t;
    t.noise_levels = noise_levels;
    t.seeds = seeds.empty() ? std::vector<std::uint32_t>{seed} : seeds;
    t.grid_size = grid_size;
    if (schedule_overridden) t.schedule = schedule;
    if (bounds_overridden) t.bounds = bounds;
    return t;
  }
};

namespace detail {

inline const std::set<std::string>& config_keys() {
  static const std::set<std::string> keys{
      "function",   "noise_percent", "seed",       "grid_size",  "t_initial",
      "cooling_factor", "steps_per_temperature", "t_final", "move_step", "bounds_min",
      "bounds_max", "out_dir",       "seeds",      "noise_levels"};
  return keys;
}

inline double get_real(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(key, "value must be finite");
  return d;
}

inline std::uint64_t get_unsigned(const nlohmann::json& v, const std::string& key,
                                  std::uint64_t max) {
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u > max) throw ConfigError(key, "value out of range");
    return u;
  }
  if (v.is_number_integer()) {
    const auto i = v.get<std::int64_t>();
    if (i < 0) throw ConfigError(key, "value must be non-negative");
    if (static_cast<std::uint64_t>(i) > max) throw ConfigError(key, "value out of range");
    return static_cast<std::uint64_t>(i);
  }
  throw ConfigError(key, "expected a non-negative integer");
}

inline std::uint32_t get_seed(const nlohmann::json& v, const std::string& key) {
  return static_cast<std::uint32_t>(get_unsigned(v, key, std::numeric_limits<std::uint32_t>::max()));
}

}  // namespace detail

/// Parses a seed as written in the environment variable.
inline std::uint32_t parse_seed_text(const std::string& text, const std::string& key) {
  std::uint32_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(key, "'" + text + "' is not an unsigned 32-bit integer");
  }
  return value;
}

/// Builds a validated RunConfig from a flat JSON object. Unknown keys and
/// every value outside its type's invariants raise ConfigError naming the key.
inline RunConfig config_from_json(const nlohmann::json& doc,
                                  const std::optional<std::string>& env_seed = std::nullopt) {
  if (!doc.is_object()) throw ConfigError("<root>", "configuration must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (!detail::config_keys().contains(key)) throw ConfigError(key, "unknown key");
  }

  RunConfig cfg;
  if (doc.contains("function")) {
    const auto& v = doc.at("function");
    if (!v.is_string()) throw ConfigError("function", "expected \"square\" or \"sqrt\"");
    try {
      cfg.function = TargetFunction::from_name(v.get<std::string>());
    } catch (const InvalidInput& e) {
      throw ConfigError("function", e.what());
    }
  }
  cfg.bounds = default_bounds(cfg.function);
  cfg.schedule = default_schedule(cfg.function);

  if (doc.contains("noise_percent")) {
    cfg.noise_percent = detail::get_real(doc.at("noise_percent"), "noise_percent");
    if (cfg.noise_percent < 0.0) throw ConfigError("noise_percent", "must be >= 0");
  }

  if (doc.contains("seed")) {
    cfg.seed = detail::get_seed(doc.at("seed"), "seed");
  } else if (env_seed) {
    cfg.seed = parse_seed_text(*env_seed, kSeedEnvVar);
  }

  if (doc.contains("grid_size")) {
    const auto n = detail::get_unsigned(doc.at("grid_size"), "grid_size", 1u << 20);
    if (n == 0) throw ConfigError("grid_size", "must be >= 1");
    cfg.grid_size = static_cast<std::size_t>(n);
  }

  auto& sch = cfg.schedule;
  if (doc.contains("t_initial")) {
    sch.t_initial = detail::get_real(doc.at("t_initial"), "t_initial");
    cfg.schedule_overridden = true;
  }
  if (doc.contains("cooling_factor")) {
    sch.cooling_factor = detail::get_real(doc.at("cooling_factor"), "cooling_factor");
    cfg.schedule_overridden = true;
  }
  if (doc.contains("steps_per_temperature")) {
    sch.steps_per_temperature = static_cast<int>(detail::get_unsigned(
        doc.at("steps_per_temperature"), "steps_per_temperature", 100'000'000));
    cfg.schedule_overridden = true;
  }
  if (doc.contains("t_final")) {
    sch.t_final = detail::get_real(doc.at("t_final"), "t_final");
    cfg.schedule_overridden = true;
  }
  if (doc.contains("move_step")) {
    sch.move_step = detail::get_real(doc.at("move_step"), "move_step");
    cfg.schedule_overridden = true;
  }
  if (!(sch.t_initial > 0.0)) throw ConfigError("t_initial", "must be > 0");
  if (!(sch.cooling_factor > 0.0 && sch.cooling_factor < 1.0)) {
    throw ConfigError("cooling_factor", "must lie in (0, 1)");
  }
  if (!(sch.t_final > 0.0)) throw ConfigError("t_final", "must be > 0");
  if (!(sch.t_final < sch.t_initial)) throw ConfigError("t_final", "must be below t_initial");
  if (!(sch.move_step > 0.0 && sch.move_step <= 1.0)) {
    throw ConfigError("move_step", "must lie in (0, 1]");
  }

  if (doc.contains("bounds_min")) {
    cfg.bounds.min = detail::get_real(doc.at("bounds_min"), "bounds_min");
    cfg.bounds_overridden = true;
  }
  if (doc.contains("bounds_max")) {
    cfg.bounds.max = detail::get_real(doc.at("bounds_max"), "bounds_max");
    cfg.bounds_overridden = true;
  }
  if (!(cfg.bounds.min < cfg.bounds.max)) {
    throw ConfigError(doc.contains("bounds_min") ? "bounds_min" : "bounds_max",
                      "bounds require min < max");
  }

  if (doc.contains("out_dir")) {
    const auto& v = doc.at("out_dir");
    if (!v.is_string() || v.get<std::string>().empty()) {
      throw ConfigError("out_dir", "expected a non-empty path string");
    }
    cfg.out_dir = v.get<std::string>();
  }

  if (doc.contains("seeds")) {
    const auto& v = doc.at("seeds");
    if (!v.is_array() || v.empty()) throw ConfigError("seeds", "expected a non-empty array");
    for (const auto& s : v) cfg.seeds.push_back(detail::get_seed(s, "seeds"));
  }
  if (doc.contains("noise_levels")) {
    const auto& v = doc.at("noise_levels");
    if (!v.is_array() || v.empty()) throw ConfigError("noise_levels", "expected a non-empty array");
    cfg.noise_levels.clear();
    for (const auto& n : v) {
      const double level = detail::get_real(n, "noise_levels");
      if (level < 0.0) throw ConfigError("noise_levels", "levels must be >= 0");
      cfg.noise_levels.push_back(level);
    }
  }
  return cfg;
}

inline nlohmann::json read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot read configuration file");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return nlohmann::json::object();
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string(), std::string("malformed JSON: ") + e.what());
  }
}

/// File values, then flag overrides (same keys), then the env seed fallback.
inline RunConfig parse_config(const std::optional<std::filesystem::path>& file,
                              const nlohmann::json& flag_overrides,
                              const std::optional<std::string>& env_seed = std::nullopt) {
  nlohmann::json doc = file ? read_config_file(*file) : nlohmann::json::object();
  if (!doc.is_object()) throw ConfigError("<root>", "configuration must be a JSON object");
  for (const auto& [key, value] : flag_overrides.items()) doc[key] = value;
  return config_from_json(doc, env_seed);
}

}  // namespace anneal_noise
