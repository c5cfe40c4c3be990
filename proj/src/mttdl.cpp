#include "ecsim/mttdl.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ecsim/error.hpp"

namespace ecsim {
namespace {

MttdlResult finish(std::vector<double> terms) {
  MttdlResult result;
  result.mttdl = std::accumulate(terms.begin(), terms.end(), 0.0);
  result.terms = std::move(terms);
  result.data_loss_rate = 1.0 / result.mttdl;
  return result;
}

void check_rates(double lambda, double mu) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kInvalidParams, "lambda must be positive");
  }
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw Error(ErrorCode::kInvalidParams, "mu must be non-negative");
  }
}

}  // namespace

void MarkovParams::validate() const {
  if (n == 0 || r >= n) {
    throw Error(ErrorCode::kInvalidParams, "need 0 <= r < n, got n = " + std::to_string(n) +
                                               ", r = " + std::to_string(r));
  }
  check_rates(lambda, mu);
}

MttdlResult mttdl_raid5(std::uint32_t n, double lambda, double mu) {
  if (n < 2) throw Error(ErrorCode::kInvalidParams, "RAID5 model needs n >= 2");
  check_rates(lambda, mu);
  const double dn = n;
  const double t0 = 1.0 / ((dn - 1.0) * lambda);
  const double t1 = 1.0 / (dn * lambda) + mu / (dn * (dn - 1.0) * lambda * lambda);
  return finish({t0, t1});
}

MttdlResult mttdl_raid6(std::uint32_t n, double lambda, double mu) {
  if (n < 3) throw Error(ErrorCode::kInvalidParams, "RAID6 model needs n >= 3");
  check_rates(lambda, mu);
  const double dn = n;
  const double l2 = lambda * lambda;
  const double t0 = 1.0 / ((dn - 2.0) * lambda);
  const double t1 = 1.0 / ((dn - 1.0) * lambda) + 2.0 * mu / ((dn - 1.0) * (dn - 2.0) * l2);
  const double t2 = 1.0 / (dn * lambda) + mu / (dn * (dn - 1.0) * l2) +
                    2.0 * mu * mu / (dn * (dn - 1.0) * (dn - 2.0) * l2 * lambda);
  return finish({t0, t1, t2});
}

MttdlResult mttdl_general(const MarkovParams& params) {
  params.validate();
  const double n = params.n;
  const double r = params.r;
  std::vector<double> terms;
  terms.reserve(params.r + 1);
  for (std::uint32_t i = 0; i <= params.r; ++i) {
    const double shift = r - i;  // r - i
    double t = 0.0;
    double numerator = 1.0;
    double denominator = 1.0;
    for (std::uint32_t j = 0; j <= i; ++j) {
      // The products grow by one factor per j, so they are carried forward.
      denominator *= (n - (shift + j)) * params.lambda;
      if (j > 0) numerator *= (shift + j) * params.mu;
      t += numerator / denominator;
    }
    terms.push_back(t);
  }
  return finish(std::move(terms));
}

double failure_rate_at_age(double age, double check_interval, const WeibullParams& weibull) {
  return conditional_failure_rate({age, check_interval}, weibull);
}

MttdlResult mttdl_at_age(const StoragePolicy& policy, double age, double check_interval,
                         const WeibullParams& weibull) {
  if (age < 0.0) throw Error(ErrorCode::kInvalidArgument, "age must be non-negative");
  if (!(check_interval > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "check interval must be positive");
  }
  policy.validate();
  weibull.validate();
  MarkovParams params;
  params.n = policy.n();
  params.r = policy.r;
  params.lambda = failure_rate_at_age(age, check_interval, weibull);
  params.mu = 1.0;
  return mttdl_general(params);
}

double mttdl_crossing_age(const StoragePolicy& policy, double threshold, double check_interval,
                          const WeibullParams& weibull, double max_age) {
  auto below = [&](double age) {
    return mttdl_at_age(policy, age, check_interval, weibull).mttdl < threshold;
  };
  if (below(0.0)) return 0.0;
  if (!below(max_age)) return std::numeric_limits<double>::infinity();
  double lo = 0.0;
  double hi = max_age;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (below(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace ecsim
