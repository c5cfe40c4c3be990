#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ecsim/sim.hpp"

namespace ecsim {

// Recognised keys of the flat `key = value` config format, in SimConfig
// field order.
const std::vector<std::string>& config_keys();

// Both throw ConfigError naming the key on unknown keys or bad values.
void set_config_value(SimConfig& config, std::string_view key, std::string_view value);
std::string get_config_value(const SimConfig& config, std::string_view key);

// `#` starts a comment; blank lines are ignored.
void load_config_text(SimConfig& config, std::string_view text);
void load_config_file(SimConfig& config, const std::string& path);

std::string to_config_text(const SimConfig& config);

}  // namespace ecsim
