#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wpcn/scenario.hpp"

namespace wpcn::cli
{

/// Flat key=value settings. `#` starts a comment; blank lines are ignored.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(const std::string& text, const std::string& origin);
KeyValues read_config_file(const std::string& path);

/// Applies "key=value" overrides on top of `kv`.
void apply_overrides(KeyValues& kv, const std::vector<std::string>& sets);

struct RunSettings
{
  ScenarioConfig scenario;
  double slot_s = 0.1;
  bool slots_fixed = false;  // num_slots given explicitly
  std::vector<double> sweep_values;
  bool sweep_given = false;
  int outer_max = 50;
  double outer_tol = 1e-4;
  int mc_geometries = 50;
  long mc_samples = 100000;

  /// Scenario for a given D and T; N follows slot_s unless num_slots was set.
  ScenarioConfig scenario_at(double D, double T) const;
};

/// Every documented key with its default, in the units the key names.
const KeyValues& default_key_values();

/// Unknown keys and unparsable values throw ConfigError naming the key.
RunSettings build_settings(const KeyValues& kv);

/// Fully resolved settings (defaults plus overrides) for the manifest.
KeyValues resolved_key_values(const KeyValues& kv);

}  // namespace wpcn::cli
