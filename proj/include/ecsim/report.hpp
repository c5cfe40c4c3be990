#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ecsim {

enum class CacheOutcome { kHealthy, kDegraded, kLost, kSucceeded };
enum class TransferCategory { kWrite, kRecovery, kProactive };

const char* to_string(CacheOutcome outcome);
const char* to_string(TransferCategory category);

struct CacheRecord {
  std::uint64_t id = 0;
  CacheOutcome outcome = CacheOutcome::kHealthy;
  double created = 0.0;
  double ended = 0.0;
  std::uint32_t units = 0;
  std::uint64_t stored_bytes = 0;
  std::uint32_t temporary_failures = 0;

  double lifetime() const { return ended - created; }
};

struct TransferRecord {
  double time = 0.0;       // minutes, completion time
  std::uint64_t bytes = 0;
  double seconds = 0.0;
  TransferCategory category = TransferCategory::kWrite;
  std::string src_domain;
  std::string dst_domain;
};

// Units held by ALIVE CacheDs of one domain at a window start.
struct VmSample {
  double window_start = 0.0;  // minutes
  std::string domain;
  std::uint32_t units = 0;
};

struct SimReport {
  std::string policy;
  std::uint64_t seed = 0;
  std::vector<std::string> domains;

  std::vector<CacheRecord> caches;
  std::vector<TransferRecord> transfers;
  std::vector<VmSample> vm_counts;

  std::uint64_t caches_created = 0;
  std::uint64_t skipped_schedules = 0;
  std::uint64_t temporary_failures = 0;
  std::uint64_t data_losses = 0;
  std::uint64_t manager_promotions = 0;
  std::uint64_t cap_relaxations = 0;
  std::uint64_t proactive_flags = 0;

  std::uint64_t succeeded() const;
  std::uint64_t bytes(TransferCategory category) const;
  std::uint64_t total_bytes() const;
  double seconds(TransferCategory category) const;
  double total_seconds() const;
};

// Recovery bytes over all transferred bytes; empty when nothing moved.
std::optional<double> recovery_portion(const SimReport& report);

// Time average over windows of the population variance of per-domain unit
// counts. `window` is in minutes and must be a multiple of the sampling
// cadence; the first sample of each window is used.
double vm_variance(const SimReport& report, double window = 0.5);

struct CdfPoint {
  double age = 0.0;       // minutes
  double fraction = 0.0;  // caches lost at or before `age`
};

// Fraction of caches (over all reports) lost within each age on a grid
// 0, step, ..., horizon. Caches that did not end in loss are censored.
std::vector<CdfPoint> lifetime_cdf(const std::vector<const SimReport*>& reports,
                                   double horizon = 90.0, double step = 1.0);

struct StorageCost {
  double avg_units = 0.0;
  double avg_bytes = 0.0;
};

StorageCost storage_cost(const SimReport& report);

// policy,caches,succeeded,lost,temp_failures,bytes_write,bytes_recovery,
// bytes_proactive,transfer_seconds
std::string summary_line(const SimReport& report);

void write_transfers_csv(const SimReport& report, std::ostream& out);
void write_caches_csv(const SimReport& report, std::ostream& out);
void write_vm_counts_csv(const SimReport& report, std::ostream& out);
void write_summary_header(std::ostream& out);
void write_summary_row(const SimReport& report, std::ostream& out);

// Writes transfers.csv, caches.csv, vm_counts.csv and summary.csv into `dir`.
void write_report_dir(const SimReport& report, const std::string& dir);

// Shortest round-trip decimal form with '.' as separator.
std::string format_number(double value);

}  // namespace ecsim
