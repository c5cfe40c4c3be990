#include "ecsim/sim.hpp"

#include <cmath>
#include <queue>
#include <vector>

#include "ecsim/cluster.hpp"
#include "ecsim/error.hpp"
#include "ecsim/report.hpp"

namespace ecsim {
namespace {

constexpr double kBytesPerMiB = 1024.0 * 1024.0;
constexpr double kSampleWindow = 0.5;  // minutes
constexpr double kEps = 1e-9;

// Declaration order is the tie-break order at equal timestamps.
enum class EventKind {
  kCachedDeath,
  kCachedSpawn,
  kAvailabilityCheck,
  kLeaseExpiry,
  kClientSchedule,
  kTransferComplete,
};

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::kClientSchedule;
  std::uint64_t seq = 0;
  std::uint64_t payload = 0;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.kind != b.kind) return a.kind > b.kind;
    return a.seq > b.seq;
  }
};

class EventLoop {
 public:
  explicit EventLoop(const SimConfig& config) : config_(config), cluster_(config) {}

  SimReport run() {
    const double interval = config_.schedule_interval / 60.0;
    const auto schedules =
        config_.duration > 0.0
            ? static_cast<std::uint64_t>(std::ceil(config_.duration / interval - kEps))
            : 0;
    if (schedules == 0) return cluster_.finish();

    horizon_ = static_cast<double>(schedules - 1) * interval + config_.lease_period;

    for (std::uint32_t v = 0; v < config_.vm_count; ++v) {
      for (std::uint32_t i = 0; i < config_.cacheds_per_vm; ++i) {
        push(0.0, EventKind::kCachedSpawn, v);
      }
    }
    for (std::uint64_t i = 0; i < schedules; ++i) {
      push(static_cast<double>(i) * interval, EventKind::kClientSchedule, i);
    }
    for (std::uint64_t j = 1; static_cast<double>(j) * config_.check_interval <= horizon_ + kEps;
         ++j) {
      push(static_cast<double>(j) * config_.check_interval, EventKind::kAvailabilityCheck, j);
    }

    while (!queue_.empty()) {
      const Event ev = queue_.top();
      queue_.pop();
      sample_until(ev.time);
      dispatch(ev);
      for (auto& t : cluster_.take_pending_transfers()) {
        t.record.time = t.issued_at + t.record.seconds / 60.0;
        transfers_.push_back(std::move(t.record));
        push(transfers_.back().time, EventKind::kTransferComplete, transfers_.size() - 1);
      }
    }
    sample_until(config_.duration);
    return cluster_.finish();
  }

 private:
  void push(double time, EventKind kind, std::uint64_t payload) {
    queue_.push(Event{time, kind, seq_++, payload});
  }

  // Samples windows that start strictly before `time`, i.e. after every
  // event at or before the window start has been applied.
  void sample_until(double time) {
    while (next_window_ < config_.duration - kEps && next_window_ < time) {
      cluster_.sample_vm_counts(next_window_);
      ++windows_;
      next_window_ = static_cast<double>(windows_) * kSampleWindow;
    }
  }

  double next_check_after(double time) const {
    return std::ceil(time / config_.check_interval - kEps) * config_.check_interval;
  }

  void dispatch(const Event& ev) {
    switch (ev.kind) {
      case EventKind::kCachedSpawn: {
        const CachedId id = cluster_.spawn(static_cast<std::uint32_t>(ev.payload), ev.time);
        const double death = cluster_.cached(id).death_time;
        if (death <= horizon_) push(death, EventKind::kCachedDeath, id);
        break;
      }
      case EventKind::kCachedDeath: {
        const auto id = static_cast<CachedId>(ev.payload);
        cluster_.kill(id);
        // Replacement joins the same domain at the next check tick.
        const double respawn = next_check_after(ev.time);
        if (respawn <= horizon_ + kEps) {
          push(respawn, EventKind::kCachedSpawn, cluster_.cached(id).domain);
        }
        break;
      }
      case EventKind::kAvailabilityCheck:
        for (const CacheId id : cluster_.active_caches()) cluster_.availability_check(ev.time, id);
        cluster_.proactive_scan(ev.time);
        break;
      case EventKind::kLeaseExpiry:
        cluster_.lease_expiry(ev.time, ev.payload);
        break;
      case EventKind::kClientSchedule:
        if (const auto id = cluster_.schedule_cache(ev.time)) {
          push(cluster_.cache(*id).lease_expiry, EventKind::kLeaseExpiry, *id);
        }
        break;
      case EventKind::kTransferComplete:
        cluster_.complete_transfer(transfers_[ev.payload]);
        break;
    }
  }

  const SimConfig& config_;
  Cluster cluster_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::vector<TransferRecord> transfers_;
  std::uint64_t seq_ = 0;
  double horizon_ = 0.0;
  double next_window_ = 0.0;
  std::uint64_t windows_ = 0;
};

}  // namespace

double transfer_cost(std::uint64_t bytes, const Endpoint& src, const Endpoint& dst,
                     const SimConfig& config) {
  if (src.id == dst.id) return 0.0;
  const double remote = static_cast<double>(bytes) / kBytesPerMiB * config.remote_unit_transfer_time;
  return src.domain == dst.domain ? remote * config.local_time_ratio : remote;
}

SimReport run(const SimConfig& config) {
  config.validate();
  EventLoop loop(config);
  return loop.run();
}

}  // namespace ecsim
