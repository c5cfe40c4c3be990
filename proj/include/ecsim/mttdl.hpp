#pragma once

#include <cstdint>
#include <vector>

#include "ecsim/codec.hpp"
#include "ecsim/reliability.hpp"

namespace ecsim {

// Birth-death chain over the number of lost units. Rates are per repair
// interval; with mu = 1 one repair interval is one availability check.
struct MarkovParams {
  std::uint32_t n = 0;   // total redundancy units
  std::uint32_t r = 0;   // maximum tolerable concurrent failures
  double lambda = 0.0;   // per-unit failure rate
  double mu = 1.0;       // repair rate

  void validate() const;
};

struct MttdlResult {
  double mttdl = 0.0;             // in repair intervals
  std::vector<double> terms;      // t_0 .. t_r
  double data_loss_rate = 0.0;    // 1 / mttdl
};

MttdlResult mttdl_raid5(std::uint32_t n, double lambda, double mu);
MttdlResult mttdl_raid6(std::uint32_t n, double lambda, double mu);

// t_i = sum_{j=0..i} N_j / D_j with
//   D_j = prod_{m=0..j} (n - (r - i + m)) * lambda
//   N_j = prod_{m=1..j} (r - i + m) * mu   (N_0 = 1)
MttdlResult mttdl_general(const MarkovParams& params);

// Per-interval failure probability of a unit whose host is `age` minutes old.
double failure_rate_at_age(double age, double check_interval,
                           const WeibullParams& weibull);

MttdlResult mttdl_at_age(const StoragePolicy& policy, double age,
                         double check_interval, const WeibullParams& weibull);

// Smallest age (minutes) at which mttdl_at_age drops below `threshold`.
// MTTDL decreases with age for shape > 1, so the answer is found by
// bisection. Returns +inf when the curve never drops below the threshold
// within `max_age`.
double mttdl_crossing_age(const StoragePolicy& policy, double threshold,
                          double check_interval, const WeibullParams& weibull,
                          double max_age = 1e4);

}  // namespace ecsim
