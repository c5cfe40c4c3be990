#include "ecsim/cluster.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "ecsim/error.hpp"
#include "ecsim/mttdl.hpp"

namespace ecsim {

Cluster::Cluster(const SimConfig& config)
    : config_(config),
      unit_bytes_(unit_size(config.policy, config.cache_size)),
      vulnerable_age_(std::numeric_limits<double>::infinity()),
      lifetime_rng_(config.seed, 1),
      placement_rng_(config.seed, 2) {
  for (std::uint32_t v = 0; v < config.vm_count; ++v) {
    domains_.push_back("vm" + std::to_string(v + 1));
  }
  if (config.localization_pct) localization_ = LocalizationPolicy{*config.localization_pct};
  if (config.proactive_threshold) {
    proactive_.enabled = true;
    proactive_.mttdl_threshold = *config.proactive_threshold;
    vulnerable_age_ = mttdl_crossing_age(config.policy, proactive_.mttdl_threshold,
                                         config.check_interval, config.weibull);
  }
  report_.policy = config.policy.name();
  report_.seed = config.seed;
  report_.domains = domains_;
}

CachedId Cluster::spawn(std::uint32_t domain, double now) {
  const double lifetime = sample_lifetime(config_.weibull, lifetime_rng_);
  // A zero draw would make death coincide with boot.
  return add_cached(domain, now, now + std::max(lifetime, 1e-9));
}

CachedId Cluster::add_cached(std::uint32_t domain, double boot_time, double death_time) {
  if (domain >= domains_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "no domain " + std::to_string(domain));
  }
  CacheD d;
  d.id = static_cast<CachedId>(cacheds_.size());
  d.domain = domain;
  d.boot_time = boot_time;
  d.death_time = death_time;
  cacheds_.push_back(std::move(d));
  return cacheds_.back().id;
}

void Cluster::kill(CachedId id) { cacheds_.at(id).state = CachedState::kDown; }

std::vector<CachedId> Cluster::eligible(const Cache* holders_of, bool avoid_vulnerable,
                                        double now) const {
  std::vector<CachedId> all;
  std::vector<CachedId> safe;
  for (const auto& d : cacheds_) {
    if (d.state != CachedState::kAlive) continue;
    if (holders_of) {
      const bool holds = std::any_of(
          holders_of->placements.begin(), holders_of->placements.end(),
          [&](const std::optional<CachedId>& h) { return h && *h == d.id; });
      if (holds) continue;
    }
    all.push_back(d.id);
    if (now - d.boot_time < vulnerable_age_) safe.push_back(d.id);
  }
  if (avoid_vulnerable && proactive_.enabled && !safe.empty()) return safe;
  return all;
}

std::vector<CachedId> Cluster::retiring(const Cache* holders_of) const {
  std::vector<CachedId> out;
  for (const auto& d : cacheds_) {
    if (d.state != CachedState::kProactive) continue;
    if (holders_of && std::any_of(holders_of->placements.begin(), holders_of->placements.end(),
                                  [&](const std::optional<CachedId>& h) { return h && *h == d.id; })) {
      continue;
    }
    out.push_back(d.id);
  }
  return out;
}

std::vector<DomainBucket> Cluster::buckets(const std::vector<CachedId>& ids) {
  std::vector<std::pair<CachedId, std::string>> tagged;
  tagged.reserve(ids.size());
  for (auto id : ids) tagged.emplace_back(id, domains_[cacheds_[id].domain]);
  auto out = make_buckets(tagged);
  for (auto& b : out) {
    auto& v = b.available;
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[placement_rng_.below(i)]);
  }
  return out;
}

void Cluster::place_unit(Cache& cache, std::uint32_t unit, CachedId holder) {
  cache.placements[unit] = holder;
  cacheds_[holder].stored_units.emplace(cache.id, unit);
}

void Cluster::drop_unit(Cache& cache, std::uint32_t unit) {
  if (auto& h = cache.placements[unit]) {
    cacheds_[*h].stored_units.erase({cache.id, unit});
    h.reset();
  }
}

void Cluster::release(Cache& cache) {
  for (std::uint32_t u = 0; u < cache.placements.size(); ++u) drop_unit(cache, u);
}

void Cluster::end_cache(Cache& cache, CacheOutcome outcome, double now) {
  cache.status = outcome;
  cache.ended_at = now;
  if (outcome == CacheOutcome::kLost) ++report_.data_losses;
  release(cache);
}

std::uint32_t Cluster::live_units(const Cache& cache) const {
  std::uint32_t live = 0;
  for (const auto& h : cache.placements) {
    if (h && cacheds_[*h].up()) ++live;
  }
  return live;
}

void Cluster::transfer(double now, CachedId src, CachedId dst, TransferCategory category) {
  const auto& s = cacheds_[src];
  const auto& d = cacheds_[dst];
  PendingTransfer t;
  t.issued_at = now;
  t.record.time = now;
  t.record.bytes = unit_bytes_;
  t.record.seconds = transfer_cost(unit_bytes_, {src, domains_[s.domain]},
                                   {dst, domains_[d.domain]}, config_);
  t.record.category = category;
  t.record.src_domain = domains_[s.domain];
  t.record.dst_domain = domains_[d.domain];
  pending_.push_back(std::move(t));
}

std::optional<CacheId> Cluster::schedule_cache(double now) {
  const std::uint32_t n = config_.policy.n();
  auto candidates = eligible(nullptr, false, now);
  if (candidates.size() < n) {
    const auto extra = retiring(nullptr);
    candidates.insert(candidates.end(), extra.begin(), extra.end());
  }
  if (candidates.size() < n) {
    ++report_.skipped_schedules;
    return std::nullopt;
  }

  CachedId manager;
  std::vector<CachedId> workers;
  if (localization_) {
    auto sel = write_path_select(buckets(candidates), n, *localization_);
    if (sel.cap_relaxed) ++report_.cap_relaxations;
    const std::size_t pick = placement_rng_.below(sel.cacheds.size());
    manager = sel.cacheds[pick];
    for (std::size_t i = 0; i < sel.cacheds.size(); ++i) {
      if (i != pick) workers.push_back(sel.cacheds[i]);
    }
  } else {
    // Partial Fisher-Yates: slot 0 is the manager, the next n - 1 the workers.
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::size_t j = i + placement_rng_.below(candidates.size() - i);
      std::swap(candidates[i], candidates[j]);
    }
    manager = candidates[0];
    workers.assign(candidates.begin() + 1, candidates.begin() + n);
  }

  Cache cache;
  cache.id = caches_.size();
  cache.created_at = now;
  cache.lease_expiry = now + config_.lease_period;
  cache.manager = manager;
  cache.placements.assign(n, std::nullopt);
  caches_.push_back(std::move(cache));
  Cache& c = caches_.back();

  // The manager keeps unit 0; only the other n - 1 cross the network.
  place_unit(c, 0, manager);
  for (std::uint32_t i = 0; i < workers.size(); ++i) {
    place_unit(c, i + 1, workers[i]);
    transfer(now, manager, workers[i], TransferCategory::kWrite);
  }
  ++report_.caches_created;
  return c.id;
}

std::vector<CachedId> Cluster::choose_targets(const Cache& cache, std::uint32_t needed,
                                              double now, bool youngest_first) {
  auto candidates = eligible(&cache, true, now);
  if (candidates.size() < needed) {
    const auto extra = retiring(&cache);
    candidates.insert(candidates.end(), extra.begin(), extra.end());
  }
  const auto count = static_cast<std::uint32_t>(
      std::min<std::size_t>(needed, candidates.size()));
  if (count == 0) return {};

  if (localization_) {
    std::map<std::uint32_t, std::string> surviving;
    for (std::uint32_t u = 0; u < cache.placements.size(); ++u) {
      if (const auto& h = cache.placements[u]) surviving[u] = domains_[cacheds_[*h].domain];
    }
    auto sel = recovery_path_select(surviving, buckets(candidates), count,
                                    config_.policy.n(), *localization_);
    if (sel.cap_relaxed) ++report_.cap_relaxations;
    return sel.cacheds;
  }

  if (youngest_first) {
    std::stable_sort(candidates.begin(), candidates.end(), [&](CachedId a, CachedId b) {
      if (cacheds_[a].state != cacheds_[b].state) return cacheds_[a].state == CachedState::kAlive;
      return cacheds_[a].boot_time > cacheds_[b].boot_time;
    });
    candidates.resize(count);
    return candidates;
  }

  std::vector<CachedId> out;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::size_t j = i + placement_rng_.below(candidates.size() - i);
    std::swap(candidates[i], candidates[j]);
    out.push_back(candidates[i]);
  }
  return out;
}

void Cluster::availability_check(double now, CacheId id) {
  Cache& c = caches_.at(id);
  if (c.terminal()) return;

  const std::uint32_t k = config_.policy.k;
  if (live_units(c) < k) {
    end_cache(c, CacheOutcome::kLost, now);
    return;
  }

  std::uint32_t observed = 0;
  for (std::uint32_t u = 0; u < c.placements.size(); ++u) {
    const auto& h = c.placements[u];
    if (h && !cacheds_[*h].up()) {
      drop_unit(c, u);
      ++observed;
    }
  }
  c.temporary_failures += observed;
  report_.temporary_failures += observed;

  const bool missing = std::any_of(c.placements.begin(), c.placements.end(),
                                   [](const std::optional<CachedId>& h) { return !h; });
  if (!missing) return;

  if (!cacheds_[c.manager].up()) {
    // Lowest-id surviving holder takes over. It lacks the source data, so it
    // pulls k - 1 other survivors before re-encoding.
    CachedId next = std::numeric_limits<CachedId>::max();
    for (const auto& h : c.placements) {
      if (h) next = std::min(next, *h);
    }
    c.manager = next;
    ++report_.manager_promotions;
    std::vector<CachedId> sources;
    for (const auto& h : c.placements) {
      if (h && *h != next) sources.push_back(*h);
    }
    std::sort(sources.begin(), sources.end());
    sources.resize(std::min<std::size_t>(sources.size(), k - 1));
    for (auto src : sources) transfer(now, src, next, TransferCategory::kRecovery);
  }

  std::vector<std::uint32_t> lost;
  for (std::uint32_t u = 0; u < c.placements.size(); ++u) {
    if (!c.placements[u]) lost.push_back(u);
  }
  const auto targets = choose_targets(c, static_cast<std::uint32_t>(lost.size()), now);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    place_unit(c, lost[i], targets[i]);
    transfer(now, c.manager, targets[i], TransferCategory::kRecovery);
  }
  c.status = targets.size() == lost.size() ? CacheOutcome::kHealthy : CacheOutcome::kDegraded;
}

void Cluster::proactive_scan(double now) {
  if (!proactive_.enabled) return;

  std::vector<WorkerEntry> workers;
  for (const auto& c : caches_) {
    if (c.terminal()) continue;
    for (std::uint32_t u = 0; u < c.placements.size(); ++u) {
      const auto& h = c.placements[u];
      if (!h || !cacheds_[*h].up()) continue;
      workers.push_back({c.id, u, *h, cacheds_[*h].boot_time, c.flagged.count(*h) > 0});
    }
  }

  const auto mttdl = [&](double age) {
    return mttdl_at_age(config_.policy, age, config_.check_interval, config_.weibull).mttdl;
  };
  for (const auto& move : ::ecsim::proactive_scan(workers, now, proactive_, mttdl)) {
    Cache& c = caches_[move.cache];
    c.flagged.insert(move.from);
    cacheds_[move.from].state = CachedState::kProactive;
    ++report_.proactive_flags;

    const auto targets = choose_targets(c, 1, now, true);
    // Moving onto another retiring CacheD buys nothing.
    if (targets.empty() || cacheds_[targets.front()].state == CachedState::kProactive) continue;
    drop_unit(c, move.unit);
    place_unit(c, move.unit, targets.front());
    transfer(now, move.from, targets.front(), TransferCategory::kProactive);
    // An aging manager hands its role over along with its unit.
    if (move.from == c.manager) c.manager = targets.front();
  }
}

CacheOutcome Cluster::lease_expiry(double now, CacheId id) {
  Cache& c = caches_.at(id);
  if (c.terminal()) return c.status;
  const auto outcome =
      live_units(c) >= config_.policy.k ? CacheOutcome::kSucceeded : CacheOutcome::kLost;
  end_cache(c, outcome, now);
  return outcome;
}

void Cluster::sample_vm_counts(double window_start) {
  std::vector<std::uint32_t> counts(domains_.size(), 0);
  for (const auto& d : cacheds_) {
    if (d.up()) counts[d.domain] += static_cast<std::uint32_t>(d.stored_units.size());
  }
  for (std::size_t v = 0; v < domains_.size(); ++v) {
    report_.vm_counts.push_back({window_start, domains_[v], counts[v]});
  }
}

std::vector<PendingTransfer> Cluster::take_pending_transfers() {
  std::vector<PendingTransfer> out;
  out.swap(pending_);
  return out;
}

void Cluster::complete_transfer(TransferRecord record) {
  report_.transfers.push_back(std::move(record));
}

std::vector<CacheId> Cluster::active_caches() const {
  std::vector<CacheId> out;
  for (const auto& c : caches_) {
    if (!c.terminal()) out.push_back(c.id);
  }
  return out;
}

SimReport Cluster::finish() {
  report_.caches.clear();
  for (const auto& c : caches_) {
    CacheRecord rec;
    rec.id = c.id;
    rec.outcome = c.status;
    rec.created = c.created_at;
    rec.ended = c.ended_at;
    rec.units = config_.policy.n();
    rec.stored_bytes = static_cast<std::uint64_t>(config_.policy.n()) * unit_bytes_;
    rec.temporary_failures = c.temporary_failures;
    report_.caches.push_back(rec);
  }
  return report_;
}

}  // namespace ecsim
