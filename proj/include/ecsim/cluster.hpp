#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ecsim/placement.hpp"
#include "ecsim/report.hpp"
#include "ecsim/rng.hpp"
#include "ecsim/sim.hpp"

namespace ecsim {

using CacheId = std::uint64_t;

enum class CachedState { kAlive, kProactive, kDown };

struct CacheD {
  CachedId id = 0;
  std::uint32_t domain = 0;
  double boot_time = 0.0;
  double death_time = 0.0;
  CachedState state = CachedState::kAlive;
  std::set<std::pair<CacheId, std::uint32_t>> stored_units;

  bool up() const { return state != CachedState::kDown; }
};

struct Cache {
  CacheId id = 0;
  double created_at = 0.0;
  double lease_expiry = 0.0;
  CachedId manager = 0;
  // unit index -> holder; empty once the holder is observed dead and no
  // replacement could be placed.
  std::vector<std::optional<CachedId>> placements;
  CacheOutcome status = CacheOutcome::kHealthy;
  double ended_at = 0.0;
  std::uint32_t temporary_failures = 0;
  std::set<CachedId> flagged;

  bool terminal() const {
    return status == CacheOutcome::kLost || status == CacheOutcome::kSucceeded;
  }
};

struct PendingTransfer {
  double issued_at = 0.0;
  TransferRecord record;
};

// Mutable state of the simulated testbed plus the CacheManager/master
// operations that act on it. The event loop in sim.cpp decides when each
// operation runs; tests drive it directly.
class Cluster {
 public:
  explicit Cluster(const SimConfig& config);

  const SimConfig& config() const { return config_; }
  const std::vector<std::string>& domain_names() const { return domains_; }
  const std::vector<CacheD>& cacheds() const { return cacheds_; }
  const std::vector<Cache>& caches() const { return caches_; }
  const Cache& cache(CacheId id) const { return caches_.at(id); }
  const CacheD& cached(CachedId id) const { return cacheds_.at(id); }
  std::uint64_t unit_bytes() const { return unit_bytes_; }

  // New CacheD with a Weibull lifetime drawn from the lifetime stream.
  CachedId spawn(std::uint32_t domain, double now);
  // New CacheD with an explicit death time.
  CachedId add_cached(std::uint32_t domain, double boot_time, double death_time);
  // Marks the CacheD DOWN. Its units are gone but nobody notices until the
  // next availability check.
  void kill(CachedId id);

  // Master picks a manager, the manager encodes and ships n - 1 units.
  // Returns nullopt (and counts a skipped schedule) when the cluster has
  // fewer than n eligible CacheDs.
  std::optional<CacheId> schedule_cache(double now);

  // Heartbeat check for one cache: counts newly observed dead units,
  // recovers them when at least k survive, otherwise marks the cache LOST.
  void availability_check(double now, CacheId id);

  // Relocates units off workers whose MTTDL fell below the threshold.
  // No-op unless proactive relocation is enabled.
  void proactive_scan(double now);

  // SUCCEEDED iff at least k units sit on live CacheDs.
  CacheOutcome lease_expiry(double now, CacheId id);

  void sample_vm_counts(double window_start);

  std::vector<PendingTransfer> take_pending_transfers();
  // Logs a transfer once its TransferComplete event fires.
  void complete_transfer(TransferRecord record);
  std::vector<CacheId> active_caches() const;

  // Finalizes per-cache records into the report and returns it.
  SimReport finish();
  const SimReport& report() const { return report_; }

 private:
  // Live, non-PROACTIVE CacheDs without a unit of `holders_of`. With
  // `avoid_vulnerable` set, CacheDs already past the proactive age are
  // skipped unless nothing else is left.
  std::vector<CachedId> eligible(const Cache* holders_of, bool avoid_vulnerable,
                                 double now) const;
  // PROACTIVE CacheDs that are still up; used only when ALIVE ones run out.
  std::vector<CachedId> retiring(const Cache* holders_of) const;
  // Grouped by domain; members of each bucket are shuffled so that which
  // CacheDs of a domain get picked carries no age bias.
  std::vector<DomainBucket> buckets(const std::vector<CachedId>& ids);
  // youngest_first applies without localization: newest boot wins, ties by id.
  std::vector<CachedId> choose_targets(const Cache& cache, std::uint32_t needed, double now,
                                       bool youngest_first = false);
  void place_unit(Cache& cache, std::uint32_t unit, CachedId holder);
  void drop_unit(Cache& cache, std::uint32_t unit);
  void release(Cache& cache);
  void end_cache(Cache& cache, CacheOutcome outcome, double now);
  void transfer(double now, CachedId src, CachedId dst, TransferCategory category);
  std::uint32_t live_units(const Cache& cache) const;

  SimConfig config_;
  std::vector<std::string> domains_;
  std::uint64_t unit_bytes_;
  std::optional<LocalizationPolicy> localization_;
  ProactivePolicy proactive_;
  double vulnerable_age_;  // age past which a worker counts as PROACTIVE
  Rng lifetime_rng_;
  Rng placement_rng_;
  std::vector<CacheD> cacheds_;
  std::vector<Cache> caches_;
  std::vector<PendingTransfer> pending_;
  SimReport report_;
};

}  // namespace ecsim
