#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vaufic/sim_runtime.hpp"

namespace vaufic {

/// Bad scenario input. `key()` is the dotted key involved, when there is one.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::string key = {})
      : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct ConfigEntry {
  std::string key;  // dotted, e.g. tanks.force.x0
  std::string value;
  int line = 0;  // 0 for command-line overrides
};

/// Parses `key = value` lines grouped under `[section]` headers. `#` and `;`
/// start comments. Keys are flattened to section.key.
std::vector<ConfigEntry> parse_config(std::string_view text, const std::string& origin);

/// Parses a `key=value` override as given on the command line.
ConfigEntry parse_override(const std::string& text);

/// Builds a scenario. `scenario.base` (reference or flat) picks the starting
/// preset; later entries win over earlier ones.
Scenario scenario_from_entries(const std::vector<ConfigEntry>& entries);

/// Reads the file, appends `overrides` and builds and validates the scenario.
Scenario load_scenario(const std::filesystem::path& path,
                       const std::vector<ConfigEntry>& overrides = {});

/// Every key the scenario format accepts.
std::vector<std::string> scenario_keys();

}  // namespace vaufic
