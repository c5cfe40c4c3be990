#include "ecsim/placement.hpp"

#include <algorithm>
#include <cmath>

#include "ecsim/error.hpp"

namespace ecsim {
namespace {

std::size_t total_available(const std::vector<DomainBucket>& buckets) {
  std::size_t total = 0;
  for (const auto& b : buckets) total += b.available.size();
  return total;
}

// Descending available count, then name.
bool by_availability(const DomainBucket* a, const DomainBucket* b) {
  if (a->available.size() != b->available.size()) {
    return a->available.size() > b->available.size();
  }
  return a->domain < b->domain;
}

}  // namespace

std::vector<DomainBucket> make_buckets(
    const std::vector<std::pair<CachedId, std::string>>& cacheds) {
  std::vector<DomainBucket> buckets;
  for (const auto& [id, domain] : cacheds) {
    auto it = std::find_if(buckets.begin(), buckets.end(),
                           [&](const DomainBucket& b) { return b.domain == domain; });
    if (it == buckets.end()) {
      buckets.push_back({domain, {}});
      it = std::prev(buckets.end());
    }
    it->available.push_back(id);
  }
  std::sort(buckets.begin(), buckets.end(),
            [](const DomainBucket& a, const DomainBucket& b) { return a.domain < b.domain; });
  for (auto& b : buckets) std::sort(b.available.begin(), b.available.end());
  return buckets;
}

bool LocalizationPolicy::valid_pct(int pct) {
  return pct == 25 || pct == 50 || pct == 75 || pct == 100;
}

std::uint32_t LocalizationPolicy::cap(std::uint32_t n) const {
  const double raw = std::round(static_cast<double>(pct) / 100.0 * static_cast<double>(n));
  const auto c = static_cast<std::uint32_t>(std::max(raw, 1.0));
  return std::min(c, std::max<std::uint32_t>(n, 1));
}

Selection write_path_select(const std::vector<DomainBucket>& buckets, std::uint32_t n,
                            const LocalizationPolicy& loc) {
  if (total_available(buckets) < n) {
    throw Error(ErrorCode::kInsufficientCluster,
                "need " + std::to_string(n) + " CacheDs, " +
                    std::to_string(total_available(buckets)) + " available");
  }
  const std::uint32_t cap = loc.cap(n);
  Selection sel;
  std::vector<std::size_t> taken(buckets.size(), 0);

  auto take = [&](std::size_t b, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      sel.cacheds.push_back(buckets[b].available[taken[b] + i]);
    }
    taken[b] += count;
  };

  // Best fit: the tightest domain that can still hold `cap` units.
  std::optional<std::size_t> first;
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    if (buckets[b].available.size() < cap) continue;
    if (!first || buckets[b].available.size() < buckets[*first].available.size() ||
        (buckets[b].available.size() == buckets[*first].available.size() &&
         buckets[b].domain < buckets[*first].domain)) {
      first = b;
    }
  }
  if (first) take(*first, std::min<std::size_t>(cap, n));

  std::vector<const DomainBucket*> rest;
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    if (!first || b != *first) rest.push_back(&buckets[b]);
  }
  std::sort(rest.begin(), rest.end(), by_availability);

  for (const auto* bucket : rest) {
    const std::size_t remaining = n - sel.cacheds.size();
    if (remaining == 0) break;
    const auto b = static_cast<std::size_t>(bucket - buckets.data());
    take(b, std::min<std::size_t>({cap, bucket->available.size(), remaining}));
  }

  if (sel.cacheds.size() < n) {
    // The cap cannot be met with this many domains; fill in best-fit order.
    sel.cap_relaxed = true;
    if (first) rest.insert(rest.begin(), &buckets[*first]);
    for (const auto* bucket : rest) {
      const auto b = static_cast<std::size_t>(bucket - buckets.data());
      const std::size_t remaining = n - sel.cacheds.size();
      take(b, std::min(bucket->available.size() - taken[b], remaining));
    }
  }
  return sel;
}

Selection recovery_path_select(const std::map<std::uint32_t, std::string>& surviving,
                               const std::vector<DomainBucket>& buckets, std::uint32_t needed,
                               std::uint32_t n, const LocalizationPolicy& loc) {
  if (total_available(buckets) < needed) {
    throw Error(ErrorCode::kInsufficientCluster,
                "need " + std::to_string(needed) + " replacement CacheDs, " +
                    std::to_string(total_available(buckets)) + " available");
  }
  const std::uint32_t cap = loc.cap(n);

  std::map<std::string, std::uint32_t> occurrence;
  for (const auto& [unit, domain] : surviving) ++occurrence[domain];

  std::vector<const DomainBucket*> ranked;
  for (const auto& b : buckets) ranked.push_back(&b);
  std::sort(ranked.begin(), ranked.end(), [&](const DomainBucket* a, const DomainBucket* b) {
    const auto oa = occurrence.count(a->domain) ? occurrence.at(a->domain) : 0u;
    const auto ob = occurrence.count(b->domain) ? occurrence.at(b->domain) : 0u;
    if (oa != ob) return oa > ob;
    if (oa == 0) return by_availability(a, b);
    return a->domain < b->domain;
  });

  Selection sel;
  std::map<const DomainBucket*, std::size_t> taken;
  for (const auto* bucket : ranked) {
    const std::uint32_t held =
        occurrence.count(bucket->domain) ? occurrence.at(bucket->domain) : 0u;
    if (held >= cap) continue;
    const std::size_t remaining = needed - sel.cacheds.size();
    if (remaining == 0) break;
    const std::size_t count =
        std::min<std::size_t>({cap - held, bucket->available.size(), remaining});
    for (std::size_t i = 0; i < count; ++i) sel.cacheds.push_back(bucket->available[i]);
    taken[bucket] = count;
  }

  if (sel.cacheds.size() < needed) {
    // Availability beats locality.
    sel.cap_relaxed = true;
    for (const auto* bucket : ranked) {
      const std::size_t start = taken.count(bucket) ? taken.at(bucket) : 0;
      for (std::size_t i = start; i < bucket->available.size(); ++i) {
        if (sel.cacheds.size() == needed) break;
        sel.cacheds.push_back(bucket->available[i]);
      }
    }
  }
  return sel;
}

std::vector<Relocation> proactive_scan(const std::vector<WorkerEntry>& workers, double now,
                                       const ProactivePolicy& policy,
                                       const std::function<double(double)>& mttdl_at_age) {
  std::vector<Relocation> out;
  if (!policy.enabled) return out;
  for (const auto& w : workers) {
    if (w.flagged) continue;
    const double age = std::max(0.0, now - w.boot_time);
    if (mttdl_at_age(age) < policy.mttdl_threshold) out.push_back({w.cache, w.unit, w.cached});
  }
  return out;
}

}  // namespace ecsim
