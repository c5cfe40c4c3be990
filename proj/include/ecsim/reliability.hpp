#pragma once

namespace ecsim {

class Rng;

// Weibull lifetime model; times are in minutes.
struct WeibullParams {
  double shape = 2.0;
  double scale = 50.0;

  void validate() const;
};

struct FailureRateQuery {
  double age = 0.0;           // machine age at query time
  double window = 0.0;        // look-ahead window
};

double weibull_pdf(double t, const WeibullParams& params);
double weibull_cdf(double t, const WeibullParams& params);
double weibull_mean(const WeibullParams& params);

// Inverse CDF: scale * (-ln(1 - u))^(1 / shape) for u in [0, 1).
double weibull_quantile(double u, const WeibullParams& params);
double sample_lifetime(const WeibullParams& params, Rng& rng);

// Probability that a machine alive at `age` fails within the next `window`
// minutes: 1 - exp((age/b)^a - ((age + window)/b)^a).
double conditional_failure_rate(const FailureRateQuery& query,
                                const WeibullParams& params);

}  // namespace ecsim
