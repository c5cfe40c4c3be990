#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "ecsim/cluster.hpp"
#include "ecsim/report.hpp"
#include "ecsim/sim.hpp"
#include "test_helpers.hpp"

using namespace ecsim;

namespace {

constexpr double kNever = std::numeric_limits<double>::infinity();
constexpr double kMiB = 1024.0 * 1024.0;

SimConfig config_for(const StoragePolicy& policy) {
  SimConfig c;
  c.policy = policy;
  return c;
}

// Cluster with `per_domain[d]` immortal CacheDs in domain d.
Cluster cluster_with(const SimConfig& config, const std::vector<int>& per_domain) {
  Cluster cluster(config);
  for (std::uint32_t d = 0; d < per_domain.size(); ++d) {
    for (int i = 0; i < per_domain[d]; ++i) cluster.add_cached(d, 0.0, kNever);
  }
  return cluster;
}

std::vector<TransferRecord> drain(Cluster& cluster) {
  std::vector<TransferRecord> out;
  for (auto& t : cluster.take_pending_transfers()) out.push_back(t.record);
  return out;
}

std::string csv_of(const SimReport& r) {
  std::ostringstream out;
  write_transfers_csv(r, out);
  write_caches_csv(r, out);
  write_vm_counts_csv(r, out);
  write_summary_row(r, out);
  return out.str();
}

std::vector<std::uint32_t> holders(const Cluster& cluster, CacheId id) {
  std::vector<std::uint32_t> out;
  for (const auto& h : cluster.cache(id).placements) out.push_back(h ? *h : 9999);
  return out;
}

}  // namespace

TEST_CASE("transfer cost model") {
  SimConfig c;
  const auto mib = static_cast<std::uint64_t>(kMiB);
  CHECK(transfer_cost(mib, {1, "vm1"}, {1, "vm1"}, c) == 0.0);
  CHECK(transfer_cost(mib, {1, "vm1"}, {2, "vm2"}, c) == doctest::Approx(1.0));
  CHECK(transfer_cost(mib, {1, "vm1"}, {2, "vm1"}, c) == doctest::Approx(0.3));
  CHECK(transfer_cost(mib / 3, {1, "vm1"}, {2, "vm2"}, c) == doctest::Approx(1.0 / 3).epsilon(1e-5));
}

TEST_CASE("scheduling ships n - 1 units") {
  SUBCASE("EC3+2 sends four thirds") {
    auto cluster = cluster_with(config_for(StoragePolicy::erasure(3, 2)), {3, 3, 3, 3});
    const auto id = cluster.schedule_cache(0.0);
    REQUIRE(id);
    const auto transfers = drain(cluster);
    CHECK(transfers.size() == 4);
    for (const auto& t : transfers) {
      CHECK(t.bytes == 349526);
      CHECK(t.category == TransferCategory::kWrite);
    }
    const auto& c = cluster.cache(*id);
    REQUIRE(c.placements[0]);
    CHECK(*c.placements[0] == c.manager);
    std::set<std::uint32_t> distinct;
    for (auto h : holders(cluster, *id)) distinct.insert(h);
    CHECK(distinct.size() == 5);
  }
  SUBCASE("Replica2 sends one full copy") {
    auto cluster = cluster_with(config_for(StoragePolicy::replication(2)), {3, 3, 3, 3});
    REQUIRE(cluster.schedule_cache(0.0));
    const auto transfers = drain(cluster);
    REQUIRE(transfers.size() == 1);
    CHECK(transfers[0].bytes == 1u << 20);
  }
  SUBCASE("Replica1 sends nothing") {
    auto cluster = cluster_with(config_for(StoragePolicy::replication(1)), {1});
    REQUIRE(cluster.schedule_cache(0.0));
    CHECK(drain(cluster).empty());
  }
  SUBCASE("EC3+1 at 100% inside one domain is charged locally") {
    auto config = config_for(StoragePolicy::erasure(3, 1));
    config.localization_pct = 100;
    auto cluster = cluster_with(config, {4, 0, 0, 0});
    REQUIRE(cluster.schedule_cache(0.0));
    const auto transfers = drain(cluster);
    REQUIRE(transfers.size() == 3);
    for (const auto& t : transfers) {
      CHECK(t.src_domain == t.dst_domain);
      CHECK(t.seconds == doctest::Approx(0.3 * 349526 / kMiB));
    }
  }
  SUBCASE("too few CacheDs skips the schedule") {
    auto cluster = cluster_with(config_for(StoragePolicy::erasure(9, 9)), {3, 3, 3, 3});
    CHECK_FALSE(cluster.schedule_cache(0.0));
    CHECK(cluster.report().skipped_schedules == 1);
    CHECK(cluster.report().caches_created == 0);
  }
}

TEST_CASE("availability check recovers a lost worker") {
  auto cluster = cluster_with(config_for(StoragePolicy::erasure(3, 1)), {3, 3, 3, 3});
  const auto id = *cluster.schedule_cache(0.0);
  drain(cluster);
  const auto worker = *cluster.cache(id).placements[2];
  cluster.kill(worker);
  cluster.availability_check(2.0, id);
  CHECK(cluster.cache(id).temporary_failures == 1);
  CHECK(cluster.report().temporary_failures == 1);
  const auto transfers = drain(cluster);
  REQUIRE(transfers.size() == 1);
  CHECK(transfers[0].category == TransferCategory::kRecovery);
  CHECK(transfers[0].bytes == 349526);
  CHECK(cluster.cache(id).status == CacheOutcome::kHealthy);
  const auto replacement = *cluster.cache(id).placements[2];
  CHECK(replacement != worker);
  CHECK(cluster.cached(replacement).up());

  // a second check with nothing new does nothing
  cluster.availability_check(4.0, id);
  CHECK(cluster.cache(id).temporary_failures == 1);
  CHECK(drain(cluster).empty());
}

TEST_CASE("two dead units of EC2+1 lose the cache") {
  auto cluster = cluster_with(config_for(StoragePolicy::erasure(2, 1)), {3, 3, 3, 3});
  const auto id = *cluster.schedule_cache(0.0);
  drain(cluster);
  cluster.kill(*cluster.cache(id).placements[1]);
  cluster.kill(*cluster.cache(id).placements[2]);
  cluster.availability_check(2.0, id);
  CHECK(cluster.cache(id).status == CacheOutcome::kLost);
  CHECK(cluster.report().data_losses == 1);
  CHECK(cluster.report().temporary_failures == 0);
  CHECK(drain(cluster).empty());
}

TEST_CASE("Replica2 with one survivor recovers a full copy") {
  auto cluster = cluster_with(config_for(StoragePolicy::replication(2)), {3, 3, 3, 3});
  const auto id = *cluster.schedule_cache(0.0);
  drain(cluster);
  cluster.kill(*cluster.cache(id).placements[1]);
  cluster.availability_check(2.0, id);
  const auto transfers = drain(cluster);
  REQUIRE(transfers.size() == 1);
  CHECK(transfers[0].bytes == 1u << 20);
  CHECK(transfers[0].category == TransferCategory::kRecovery);
}

TEST_CASE("manager death promotes the lowest surviving holder") {
  auto cluster = cluster_with(config_for(StoragePolicy::erasure(3, 1)), {3, 3, 3, 3});
  const auto id = *cluster.schedule_cache(0.0);
  drain(cluster);
  const auto old_manager = cluster.cache(id).manager;
  auto survivors = holders(cluster, id);
  survivors.erase(survivors.begin());
  const auto lowest = *std::min_element(survivors.begin(), survivors.end());

  cluster.kill(old_manager);
  cluster.availability_check(2.0, id);
  CHECK(cluster.cache(id).manager == lowest);
  CHECK(cluster.report().manager_promotions == 1);
  const auto transfers = drain(cluster);
  // k - 1 fetches to the new manager, then one rebuilt unit out
  REQUIRE(transfers.size() == 3);
  for (const auto& t : transfers) CHECK(t.category == TransferCategory::kRecovery);
  CHECK(cluster.cache(id).status == CacheOutcome::kHealthy);
}

TEST_CASE("lease expiry adjudication") {
  SUBCASE("EC3+2 with exactly k alive succeeds") {
    auto cluster = cluster_with(config_for(StoragePolicy::erasure(3, 2)), {3, 3, 3, 3});
    const auto id = *cluster.schedule_cache(0.0);
    cluster.kill(*cluster.cache(id).placements[3]);
    cluster.kill(*cluster.cache(id).placements[4]);
    CHECK(cluster.lease_expiry(10.0, id) == CacheOutcome::kSucceeded);
    CHECK(cluster.cache(id).terminal());
  }
  SUBCASE("EC3+2 with two alive is lost") {
    auto cluster = cluster_with(config_for(StoragePolicy::erasure(3, 2)), {3, 3, 3, 3});
    const auto id = *cluster.schedule_cache(0.0);
    for (int u : {0, 1, 2}) cluster.kill(*cluster.cache(id).placements[u]);
    CHECK(cluster.lease_expiry(10.0, id) == CacheOutcome::kLost);
  }
  SUBCASE("Replica2 with either copy succeeds") {
    auto cluster = cluster_with(config_for(StoragePolicy::replication(2)), {3, 3, 3, 3});
    const auto id = *cluster.schedule_cache(0.0);
    cluster.kill(*cluster.cache(id).placements[0]);
    CHECK(cluster.lease_expiry(10.0, id) == CacheOutcome::kSucceeded);
  }
  SUBCASE("terminal caches stay put") {
    auto cluster = cluster_with(config_for(StoragePolicy::replication(2)), {3, 3, 3, 3});
    const auto id = *cluster.schedule_cache(0.0);
    CHECK(cluster.lease_expiry(10.0, id) == CacheOutcome::kSucceeded);
    cluster.kill(*cluster.cache(id).placements[0]);
    cluster.availability_check(12.0, id);
    CHECK(cluster.cache(id).status == CacheOutcome::kSucceeded);
  }
}

TEST_CASE("vm counts reflect stored units on live CacheDs") {
  auto cluster = cluster_with(config_for(StoragePolicy::replication(2)), {1, 1, 0, 0});
  const auto id = *cluster.schedule_cache(0.0);
  cluster.sample_vm_counts(0.0);
  cluster.kill(*cluster.cache(id).placements[0]);
  cluster.sample_vm_counts(0.5);
  const auto& s = cluster.report().vm_counts;
  REQUIRE(s.size() == 8);
  CHECK(s[0].units + s[1].units == 2);
  CHECK(s[4].units + s[5].units == 1);
}

TEST_CASE("proactive relocation copies units off aging holders") {
  auto config = config_for(StoragePolicy::erasure(3, 1));
  config.proactive_threshold = 60.0;
  Cluster cluster(config);
  // four old CacheDs, two fresh ones booted later
  for (std::uint32_t d = 0; d < 4; ++d) cluster.add_cached(d, 0.0, kNever);
  const auto id = *cluster.schedule_cache(0.0);
  drain(cluster);
  cluster.add_cached(0, 25.0, kNever);
  cluster.add_cached(1, 25.0, kNever);

  cluster.proactive_scan(10.0);
  CHECK(drain(cluster).empty());

  cluster.proactive_scan(30.0);
  const auto moves = drain(cluster);
  // all four holders, manager included, are past the crossing age but only
  // two fresh targets exist; the rest stay put rather than move onto a
  // retiring CacheD
  CHECK(moves.size() == 2);
  for (const auto& t : moves) CHECK(t.category == TransferCategory::kProactive);
  CHECK(cluster.report().proactive_flags == 4);
  std::size_t fresh = 0;
  for (auto h : holders(cluster, id)) fresh += cluster.cached(h).boot_time == 25.0;
  CHECK(fresh == 2);

  // flagged holders are not rescanned for the same cache
  cluster.proactive_scan(32.0);
  CHECK(cluster.report().proactive_flags == 4);
}

TEST_CASE("an aging manager hands its role to the new holder") {
  auto config = config_for(StoragePolicy::erasure(3, 1));
  config.proactive_threshold = 60.0;
  Cluster cluster(config);
  for (std::uint32_t d = 0; d < 4; ++d) cluster.add_cached(d, 0.0, kNever);
  const auto id = *cluster.schedule_cache(0.0);
  drain(cluster);
  for (std::uint32_t d = 0; d < 4; ++d) cluster.add_cached(d, 25.0, kNever);

  cluster.proactive_scan(30.0);
  CHECK(drain(cluster).size() == 4);
  const auto& c = cluster.cache(id);
  CHECK(cluster.cached(c.manager).boot_time == 25.0);
  CHECK(*c.placements[0] == c.manager);
}

TEST_CASE("run: default scale") {
  const auto r = run(SimConfig{});
  CHECK(r.caches_created == 240);
  CHECK(r.caches.size() == 240);
  CHECK(r.succeeded() + r.data_losses == r.caches_created);
  for (const auto& c : r.caches) {
    CHECK((c.outcome == CacheOutcome::kSucceeded || c.outcome == CacheOutcome::kLost));
    CHECK(c.ended >= c.created);
    CHECK(c.ended <= c.created + 10.0 + 1e-9);
  }
  CHECK(r.bytes(TransferCategory::kWrite) + r.bytes(TransferCategory::kRecovery) +
            r.bytes(TransferCategory::kProactive) ==
        r.total_bytes());
  CHECK(r.bytes(TransferCategory::kProactive) == 0);
  CHECK(r.vm_counts.size() == 240 * 4);
  std::uint64_t temp = 0;
  for (const auto& c : r.caches) temp += c.temporary_failures;
  CHECK(temp == r.temporary_failures);
}

TEST_CASE("run: zero duration is empty") {
  SimConfig c;
  c.duration = 0.0;
  const auto r = run(c);
  CHECK(r.caches_created == 0);
  CHECK(r.caches.empty());
  CHECK(r.transfers.empty());
  CHECK(r.vm_counts.empty());
}

TEST_CASE("run: Replica1 without deaths") {
  SimConfig c;
  c.policy = StoragePolicy::replication(1);
  c.weibull.scale = 1e12;
  const auto r = run(c);
  CHECK(r.temporary_failures == 0);
  CHECK(r.data_losses == 0);
  CHECK(r.bytes(TransferCategory::kRecovery) == 0);
  CHECK(r.succeeded() == 240);
}

TEST_CASE("run: no failures means no recovery traffic for any policy") {
  for (const auto& p : {StoragePolicy::replication(2), StoragePolicy::erasure(3, 2)}) {
    SimConfig c;
    c.policy = p;
    c.weibull.scale = 1e12;
    const auto r = run(c);
    CHECK(recovery_portion(r).value() == 0.0);
    CHECK(r.temporary_failures == 0);
  }
}

TEST_CASE("run: deterministic for a seed, different across seeds") {
  SimConfig c;
  c.policy = StoragePolicy::erasure(3, 2);
  c.seed = 11;
  const auto a = csv_of(run(c));
  CHECK(a == csv_of(run(c)));
  c.seed = 12;
  CHECK(a != csv_of(run(c)));
}

TEST_CASE("run: oversized policy skips every schedule") {
  SimConfig c;
  c.policy = StoragePolicy::erasure(9, 9);
  const auto r = run(c);
  CHECK(r.caches_created == 0);
  CHECK(r.skipped_schedules == 240);
}

TEST_CASE("run: storage cost") {
  SimConfig c;
  c.weibull.scale = 1e12;
  c.duration = 5.0;
  c.policy = StoragePolicy::erasure(3, 1);
  auto cost = storage_cost(run(c));
  CHECK(cost.avg_units == 4.0);
  CHECK(cost.avg_bytes == doctest::Approx(4.0 / 3.0 * (1u << 20)).epsilon(1e-5));
  c.policy = StoragePolicy::replication(2);
  cost = storage_cost(run(c));
  CHECK(cost.avg_units == 2.0);
  CHECK(cost.avg_bytes == 2.0 * (1u << 20));
  c.policy = StoragePolicy::erasure(3, 2);
  cost = storage_cost(run(c));
  CHECK(cost.avg_units == 5.0);
  CHECK(cost.avg_bytes == doctest::Approx(5.0 / 3.0 * (1u << 20)).epsilon(1e-5));
}

TEST_CASE("run: proactive relocation happens only when enabled") {
  SimConfig c;
  c.lease_period = 100.0;
  c.duration = 50.0;
  c.proactive_threshold = 60.0;
  const auto on = run(c);
  CHECK(on.proactive_flags > 0);
  CHECK(on.bytes(TransferCategory::kProactive) > 0);
  c.proactive_threshold = 0.0;
  const auto zero = run(c);
  CHECK(zero.bytes(TransferCategory::kProactive) == 0);
  c.proactive_threshold.reset();
  CHECK(run(c).proactive_flags == 0);
}

TEST_CASE("run: transfers complete after issue and in time order") {
  const auto r = run(SimConfig{});
  for (std::size_t i = 1; i < r.transfers.size(); ++i) {
    CHECK(r.transfers[i].time >= r.transfers[i - 1].time);
  }
}

TEST_CASE("run: temporary failures grow with n (mean over seeds)") {
  std::vector<double> means;
  for (const auto& p : {StoragePolicy::replication(1), StoragePolicy::replication(2),
                        StoragePolicy::erasure(2, 1), StoragePolicy::erasure(3, 1),
                        StoragePolicy::erasure(3, 2)}) {
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      SimConfig c;
      c.policy = p;
      c.seed = seed;
      sum += static_cast<double>(run(c).temporary_failures);
    }
    means.push_back(sum / 30.0);
  }
  CHECK(means[0] == 0.0);
  for (std::size_t i = 1; i < means.size(); ++i) CHECK(means[i] > means[i - 1]);
}

TEST_CASE("invalid config is rejected by run") {
  SimConfig c;
  c.local_time_ratio = 0.0;
  CHECK_ERROR_CODE(run(c), ErrorCode::kInvalidConfig);
}
