#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ecsim {

using CachedId = std::uint32_t;

// ALIVE CacheDs of one network domain that hold no unit of the cache being
// placed, ordered by id.
struct DomainBucket {
  std::string domain;
  std::vector<CachedId> available;
};

// Groups (id, domain) pairs into buckets sorted by domain name, ids ascending.
std::vector<DomainBucket> make_buckets(
    const std::vector<std::pair<CachedId, std::string>>& cacheds);

// Upper bound on the units of one cache stored within a single domain.
struct LocalizationPolicy {
  int pct = 100;

  // round(pct / 100 * n), clamped to [1, n].
  std::uint32_t cap(std::uint32_t n) const;
  static bool valid_pct(int pct);
};

struct Selection {
  std::vector<CachedId> cacheds;
  // Set when the cap could not be honoured and availability won.
  bool cap_relaxed = false;
};

// Best-fit: the domain with the smallest available count that still covers
// the cap supplies `cap` CacheDs; the remainder comes from the other domains
// in descending available order, at most `cap` from each. Name order breaks
// ties. Throws Error(kInsufficientCluster) when fewer than n are available.
Selection write_path_select(const std::vector<DomainBucket>& buckets,
                            std::uint32_t n, const LocalizationPolicy& loc);

// Domains are ranked by how many surviving units they hold (descending);
// domains without survivors follow in descending available order. Each
// domain takes replacements up to cap - (survivors + already chosen).
// `surviving` maps unit index to the domain holding it.
Selection recovery_path_select(const std::map<std::uint32_t, std::string>& surviving,
                               const std::vector<DomainBucket>& buckets,
                               std::uint32_t needed, std::uint32_t n,
                               const LocalizationPolicy& loc);

struct ProactivePolicy {
  double mttdl_threshold = 60.0;
  bool enabled = false;
};

// One unit held by a CacheWorker, as seen by the CacheManager's age map.
struct WorkerEntry {
  std::uint64_t cache = 0;
  std::uint32_t unit = 0;
  CachedId cached = 0;
  double boot_time = 0.0;
  bool flagged = false;   // already marked PROACTIVE for this cache
};

struct Relocation {
  std::uint64_t cache = 0;
  std::uint32_t unit = 0;
  CachedId from = 0;
};

// Flags every unflagged worker whose MTTDL at its current age falls below
// the threshold. `mttdl_at_age` maps a worker age (minutes) to MTTDL.
std::vector<Relocation> proactive_scan(const std::vector<WorkerEntry>& workers,
                                       double now, const ProactivePolicy& policy,
                                       const std::function<double(double)>& mttdl_at_age);

}  // namespace ecsim
