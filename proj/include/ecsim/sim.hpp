#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "ecsim/codec.hpp"
#include "ecsim/placement.hpp"
#include "ecsim/reliability.hpp"

namespace ecsim {

struct SimReport;

struct SimConfig {
  double duration = 120.0;             // minutes of client scheduling
  double schedule_interval = 30.0;     // seconds between client tasks
  std::uint64_t cache_size = 1u << 20; // bytes
  double lease_period = 10.0;          // minutes
  double check_interval = 2.0;         // minutes between availability checks
  WeibullParams weibull;
  StoragePolicy policy = StoragePolicy::erasure(3, 1);
  std::optional<int> localization_pct;        // disabled when empty
  std::optional<double> proactive_threshold;  // disabled when empty
  std::uint32_t vm_count = 4;
  std::uint32_t cacheds_per_vm = 3;
  double remote_unit_transfer_time = 1.0;  // seconds per MiB
  double local_time_ratio = 0.3;
  std::uint64_t seed = 1;

  // Throws ConfigError naming the first offending key.
  void validate() const;
};

struct Endpoint {
  CachedId id = 0;
  std::string_view domain;
};

// Seconds to move `bytes` from src to dst: zero on the same CacheD, scaled by
// local_time_ratio inside one domain, remote_unit_transfer_time per MiB
// otherwise.
double transfer_cost(std::uint64_t bytes, const Endpoint& src, const Endpoint& dst,
                     const SimConfig& config);

// Runs the discrete-event simulation to completion. Output is a pure function
// of the config, seed included.
SimReport run(const SimConfig& config);

}  // namespace ecsim
