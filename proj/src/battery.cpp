#include "ecsim/battery.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "ecsim/error.hpp"

namespace ecsim {
namespace {

const std::vector<StoragePolicy>& five_policies() {
  static const std::vector<StoragePolicy> policies = {
      StoragePolicy::replication(1), StoragePolicy::replication(2), StoragePolicy::erasure(2, 1),
      StoragePolicy::erasure(3, 1), StoragePolicy::erasure(3, 2)};
  return policies;
}

std::ofstream open_file(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

}  // namespace

std::vector<const SimReport*> BatteryResult::reports(std::string_view setting) const {
  std::vector<const SimReport*> out;
  for (const auto& run : runs) {
    if (run.setting == setting) out.push_back(&run.report);
  }
  return out;
}

const std::vector<std::string>& battery_names() {
  static const std::vector<std::string> names = {"storage", "availability", "network",
                                                 "proactive", "localization"};
  return names;
}

std::vector<std::pair<std::string, SimConfig>> battery_settings(std::string_view name,
                                                                const SimConfig& base) {
  std::vector<std::pair<std::string, SimConfig>> out;
  if (name == "storage" || name == "availability" || name == "network") {
    for (const auto& policy : five_policies()) {
      if (name == "network" && policy == StoragePolicy::replication(1)) continue;
      SimConfig c = base;
      c.policy = policy;
      if (name == "availability") {
        c.duration = 120.0;
        c.lease_period = 10.0;
      }
      out.emplace_back(policy.name(), c);
    }
  } else if (name == "proactive") {
    SimConfig c = base;
    c.policy = StoragePolicy::erasure(3, 1);
    c.lease_period = 100.0;
    c.duration = 50.0;  // 100 caches at one per 30 s
    c.localization_pct.reset();
    SimConfig proactive = c;
    proactive.proactive_threshold = base.proactive_threshold.value_or(60.0);
    c.proactive_threshold.reset();
    out.emplace_back("proactive", proactive);
    out.emplace_back("baseline", c);
  } else if (name == "localization") {
    for (int pct : {25, 50, 75, 100}) {
      SimConfig c = base;
      c.policy = StoragePolicy::erasure(3, 1);
      c.localization_pct = pct;
      // With three per VM a cap of 4 can never be met and 75/100 coincide.
      c.cacheds_per_vm = std::max<std::uint32_t>(c.cacheds_per_vm, 4);
      out.emplace_back("pct" + std::to_string(pct), c);
    }
  } else {
    throw Error(ErrorCode::kUnknownBattery, "unknown battery '" + std::string(name) + "'");
  }
  return out;
}

BatteryResult run_battery(std::string_view name, const BatteryOptions& options) {
  BatteryResult result;
  result.name = std::string(name);
  const auto settings = battery_settings(name, options.base);
  if (options.seeds == 0) throw Error(ErrorCode::kInvalidArgument, "seed count must be >= 1");

  for (const auto& [label, config] : settings) {
    config.validate();
    result.settings.push_back(label);
    for (std::uint32_t i = 0; i < options.seeds; ++i) {
      BatteryRun run;
      run.setting = label;
      run.config = config;
      run.config.seed = options.base.seed + i;
      result.runs.push_back(std::move(run));
    }
  }

  std::size_t threads = options.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, result.runs.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < result.runs.size(); i = next++) {
      try {
        result.runs[i].report = run(result.runs[i].config);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

void write_battery(const BatteryResult& result, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir + ": " + ec.message());

  for (const auto& run : result.runs) {
    const auto sub = fs::path(dir) / run.setting / ("seed_" + std::to_string(run.config.seed));
    write_report_dir(run.report, sub.string());
  }

  {
    auto out = open_file(fs::path(dir) / "runs.csv");
    std::ostringstream header;
    write_summary_header(header);
    out << "setting," << header.str();
    for (const auto& run : result.runs) {
      out << run.setting << ',';
      write_summary_row(run.report, out);
    }
  }

  {
    auto out = open_file(fs::path(dir) / "aggregate.csv");
    out << "setting,policy,runs,caches,succeeded,lost,loss_fraction,temp_failures,bytes_write,"
           "bytes_recovery,bytes_proactive,bytes_total,transfer_seconds,recovery_portion,"
           "vm_variance,avg_units,avg_bytes\n";
    for (const auto& setting : result.settings) {
      const auto reports = result.reports(setting);
      std::vector<double> caches, succeeded, lost, loss_fraction, temp, bw, br, bp, bt, secs,
          portion, variance, units, bytes;
      for (const auto* r : reports) {
        caches.push_back(static_cast<double>(r->caches_created));
        succeeded.push_back(static_cast<double>(r->succeeded()));
        lost.push_back(static_cast<double>(r->data_losses));
        if (r->caches_created > 0) {
          loss_fraction.push_back(static_cast<double>(r->data_losses) /
                                  static_cast<double>(r->caches_created));
        }
        temp.push_back(static_cast<double>(r->temporary_failures));
        bw.push_back(static_cast<double>(r->bytes(TransferCategory::kWrite)));
        br.push_back(static_cast<double>(r->bytes(TransferCategory::kRecovery)));
        bp.push_back(static_cast<double>(r->bytes(TransferCategory::kProactive)));
        bt.push_back(static_cast<double>(r->total_bytes()));
        secs.push_back(r->total_seconds());
        if (const auto p = recovery_portion(*r)) portion.push_back(*p);
        variance.push_back(vm_variance(*r));
        const auto cost = storage_cost(*r);
        units.push_back(cost.avg_units);
        bytes.push_back(cost.avg_bytes);
      }
      out << setting << ',' << (reports.empty() ? "" : reports.front()->policy) << ','
          << reports.size();
      for (const auto* column : {&caches, &succeeded, &lost, &loss_fraction, &temp, &bw, &br, &bp,
                                 &bt, &secs, &portion, &variance, &units, &bytes}) {
        out << ',' << format_number(mean(*column));
      }
      out << '\n';
    }
  }

  if (result.name == "proactive") {
    auto out = open_file(fs::path(dir) / "lifetime_cdf.csv");
    out << "setting,age_min,fraction_lost\n";
    for (const auto& setting : result.settings) {
      for (const auto& p : lifetime_cdf(result.reports(setting))) {
        out << setting << ',' << format_number(p.age) << ',' << format_number(p.fraction) << '\n';
      }
    }
  }
}

}  // namespace ecsim
