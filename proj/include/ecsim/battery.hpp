#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ecsim/report.hpp"
#include "ecsim/sim.hpp"

namespace ecsim {

struct BatteryOptions {
  SimConfig base;              // seed is the first seed of the sweep
  std::uint32_t seeds = 30;
  std::uint32_t threads = 0;   // 0: hardware concurrency
};

struct BatteryRun {
  std::string setting;
  SimConfig config;
  SimReport report;
};

struct BatteryResult {
  std::string name;
  std::vector<std::string> settings;
  std::vector<BatteryRun> runs;  // grouped by setting, seeds ascending

  std::vector<const SimReport*> reports(std::string_view setting) const;
};

const std::vector<std::string>& battery_names();

// The (label, config) pairs a battery sweeps; seeds are applied on top.
std::vector<std::pair<std::string, SimConfig>> battery_settings(std::string_view name,
                                                                const SimConfig& base);

BatteryResult run_battery(std::string_view name, const BatteryOptions& options);

// Per-run directories <dir>/<setting>/seed_<seed>/ plus runs.csv,
// aggregate.csv and, for the proactive battery, lifetime_cdf.csv.
void write_battery(const BatteryResult& result, const std::string& dir);

}  // namespace ecsim
