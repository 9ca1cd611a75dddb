#pragma once

// YAML configuration files.
//
// A config is a mapping of sections (scenario, phy, traffic, optimizer,
// learning, run), each a mapping of scalar keys named like the ScenarioConfig
// fields. Omitted keys keep their defaults; unknown keys are rejected.

#include "slicesim/scenario.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace YAML {
class Node;
}

namespace slicesim {

/// Parses YAML text. Throws ConfigError (with the dotted key path) for unknown
/// keys, malformed values or violated invariants.
ScenarioConfig parse_config(const std::string& yaml_text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Applies `node` (a sections mapping) on top of `base` without validating.
void merge_config(ScenarioConfig& base, const YAML::Node& node);

/// Sets one field from its dotted path ("phy.num_rbs") and text value.
void set_field(ScenarioConfig& cfg, const std::string& dotted_key, const std::string& value);

/// Every dotted key in canonical order.
std::vector<std::string> config_keys();

/// Environment overrides: SLICESIM_<SECTION>_<KEY>, e.g. SLICESIM_PHY_NUM_RBS=25.
/// `lookup` returns the variable's value if set. Returns the keys that were applied.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
std::vector<std::string> apply_env_overrides(ScenarioConfig& cfg, const EnvLookup& lookup);
EnvLookup process_environment();

/// Canonical YAML: every key, fixed order, shortest round-trip numbers.
std::string dump_config(const ScenarioConfig& cfg);

/// FNV-1a 64-bit hash of dump_config, as 16 hex digits.
std::string config_hash(const ScenarioConfig& cfg);

}  // namespace slicesim
