#include "ecsim/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include "ecsim/error.hpp"

namespace ecsim {

const char* to_string(CacheOutcome outcome) {
  switch (outcome) {
    case CacheOutcome::kHealthy: return "HEALTHY";
    case CacheOutcome::kDegraded: return "DEGRADED";
    case CacheOutcome::kLost: return "LOST";
    case CacheOutcome::kSucceeded: return "SUCCEEDED";
  }
  return "UNKNOWN";
}

const char* to_string(TransferCategory category) {
  switch (category) {
    case TransferCategory::kWrite: return "WRITE";
    case TransferCategory::kRecovery: return "RECOVERY";
    case TransferCategory::kProactive: return "PROACTIVE";
  }
  return "UNKNOWN";
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (value == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::uint64_t SimReport::succeeded() const {
  return static_cast<std::uint64_t>(std::count_if(caches.begin(), caches.end(), [](const auto& c) {
    return c.outcome == CacheOutcome::kSucceeded;
  }));
}

std::uint64_t SimReport::bytes(TransferCategory category) const {
  std::uint64_t total = 0;
  for (const auto& t : transfers) {
    if (t.category == category) total += t.bytes;
  }
  return total;
}

std::uint64_t SimReport::total_bytes() const {
  std::uint64_t total = 0;
  for (const auto& t : transfers) total += t.bytes;
  return total;
}

double SimReport::seconds(TransferCategory category) const {
  double total = 0.0;
  for (const auto& t : transfers) {
    if (t.category == category) total += t.seconds;
  }
  return total;
}

double SimReport::total_seconds() const {
  double total = 0.0;
  for (const auto& t : transfers) total += t.seconds;
  return total;
}

std::optional<double> recovery_portion(const SimReport& report) {
  const auto total = report.total_bytes();
  if (total == 0) return std::nullopt;
  return static_cast<double>(report.bytes(TransferCategory::kRecovery)) /
         static_cast<double>(total);
}

double vm_variance(const SimReport& report, double window) {
  // window index -> per-domain counts of the first sample in that window
  std::map<long long, std::vector<double>> windows;
  std::map<long long, double> first_start;
  for (const auto& s : report.vm_counts) {
    const auto w = static_cast<long long>(std::floor(s.window_start / window + 1e-9));
    auto it = first_start.find(w);
    if (it == first_start.end()) it = first_start.emplace(w, s.window_start).first;
    if (s.window_start != it->second) continue;
    windows[w].push_back(s.units);
  }
  if (windows.empty()) return 0.0;

  double sum = 0.0;
  for (const auto& [w, counts] : windows) {
    double mean = 0.0;
    for (double c : counts) mean += c;
    mean /= static_cast<double>(counts.size());
    double var = 0.0;
    for (double c : counts) var += (c - mean) * (c - mean);
    sum += var / static_cast<double>(counts.size());
  }
  return sum / static_cast<double>(windows.size());
}

std::vector<CdfPoint> lifetime_cdf(const std::vector<const SimReport*>& reports, double horizon,
                                   double step) {
  std::vector<double> losses;
  std::size_t total = 0;
  for (const auto* r : reports) {
    total += r->caches.size();
    for (const auto& c : r->caches) {
      if (c.outcome == CacheOutcome::kLost) losses.push_back(c.lifetime());
    }
  }
  std::sort(losses.begin(), losses.end());

  std::vector<CdfPoint> cdf;
  const auto points = static_cast<std::size_t>(std::floor(horizon / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < points; ++i) {
    const double age = static_cast<double>(i) * step;
    const auto lost = static_cast<std::size_t>(
        std::upper_bound(losses.begin(), losses.end(), age + 1e-9) - losses.begin());
    cdf.push_back({age, total == 0 ? 0.0 : static_cast<double>(lost) / static_cast<double>(total)});
  }
  return cdf;
}

StorageCost storage_cost(const SimReport& report) {
  StorageCost cost;
  if (report.caches.empty()) return cost;
  for (const auto& c : report.caches) {
    cost.avg_units += c.units;
    cost.avg_bytes += static_cast<double>(c.stored_bytes);
  }
  cost.avg_units /= static_cast<double>(report.caches.size());
  cost.avg_bytes /= static_cast<double>(report.caches.size());
  return cost;
}

std::string summary_line(const SimReport& report) {
  std::string line = report.policy;
  auto add = [&](const std::string& field) {
    line += ',';
    line += field;
  };
  add(std::to_string(report.caches_created));
  add(std::to_string(report.succeeded()));
  add(std::to_string(report.data_losses));
  add(std::to_string(report.temporary_failures));
  add(std::to_string(report.bytes(TransferCategory::kWrite)));
  add(std::to_string(report.bytes(TransferCategory::kRecovery)));
  add(std::to_string(report.bytes(TransferCategory::kProactive)));
  add(format_number(report.total_seconds()));
  return line;
}

void write_transfers_csv(const SimReport& report, std::ostream& out) {
  out << "time_min,bytes,seconds,category,src_domain,dst_domain\n";
  for (const auto& t : report.transfers) {
    out << format_number(t.time) << ',' << t.bytes << ',' << format_number(t.seconds) << ','
        << to_string(t.category) << ',' << t.src_domain << ',' << t.dst_domain << '\n';
  }
}

void write_caches_csv(const SimReport& report, std::ostream& out) {
  out << "id,policy,outcome,created_min,ended_min\n";
  for (const auto& c : report.caches) {
    out << c.id << ',' << report.policy << ',' << to_string(c.outcome) << ','
        << format_number(c.created) << ',' << format_number(c.ended) << '\n';
  }
}

void write_vm_counts_csv(const SimReport& report, std::ostream& out) {
  out << "window_start_min,domain,unit_count\n";
  for (const auto& s : report.vm_counts) {
    out << format_number(s.window_start) << ',' << s.domain << ',' << s.units << '\n';
  }
}

void write_summary_header(std::ostream& out) {
  out << "policy,seed,caches,succeeded,lost,skipped,temp_failures,bytes_write,bytes_recovery,"
         "bytes_proactive,transfer_seconds,recovery_portion,vm_variance,avg_units,avg_bytes\n";
}

void write_summary_row(const SimReport& report, std::ostream& out) {
  const auto portion = recovery_portion(report);
  const auto cost = storage_cost(report);
  out << report.policy << ',' << report.seed << ',' << report.caches_created << ','
      << report.succeeded() << ',' << report.data_losses << ',' << report.skipped_schedules
      << ',' << report.temporary_failures << ',' << report.bytes(TransferCategory::kWrite) << ','
      << report.bytes(TransferCategory::kRecovery) << ','
      << report.bytes(TransferCategory::kProactive) << ','
      << format_number(report.total_seconds()) << ','
      << (portion ? format_number(*portion) : std::string()) << ','
      << format_number(vm_variance(report)) << ',' << format_number(cost.avg_units) << ','
      << format_number(cost.avg_bytes) << '\n';
}

void write_report_dir(const SimReport& report, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir + ": " + ec.message());

  auto open = [&](const char* name) {
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
    return out;
  };
  {
    auto out = open("transfers.csv");
    write_transfers_csv(report, out);
  }
  {
    auto out = open("caches.csv");
    write_caches_csv(report, out);
  }
  {
    auto out = open("vm_counts.csv");
    write_vm_counts_csv(report, out);
  }
  {
    auto out = open("summary.csv");
    write_summary_header(out);
    write_summary_row(report, out);
  }
}

}  // namespace ecsim
