#include "ecsim/reliability.hpp"

#include <cmath>

#include "ecsim/error.hpp"
#include "ecsim/rng.hpp"

namespace ecsim {

void WeibullParams::validate() const {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw Error(ErrorCode::kInvalidParams, "Weibull shape must be positive");
  }
  if (!(scale > 0.0)) throw Error(ErrorCode::kInvalidParams, "Weibull scale must be positive");
}

double weibull_pdf(double t, const WeibullParams& params) {
  if (t < 0.0) throw Error(ErrorCode::kInvalidArgument, "Weibull pdf undefined for t < 0");
  const double x = t / params.scale;
  if (x == 0.0) {
    if (params.shape < 1.0) return INFINITY;
    return params.shape == 1.0 ? 1.0 / params.scale : 0.0;
  }
  return params.shape / params.scale * std::pow(x, params.shape - 1.0) *
         std::exp(-std::pow(x, params.shape));
}

double weibull_cdf(double t, const WeibullParams& params) {
  if (t <= 0.0) return 0.0;
  return -std::expm1(-std::pow(t / params.scale, params.shape));
}

double weibull_mean(const WeibullParams& params) {
  return params.scale * std::tgamma(1.0 + 1.0 / params.shape);
}

double weibull_quantile(double u, const WeibullParams& params) {
  return params.scale * std::pow(-std::log1p(-u), 1.0 / params.shape);
}

double sample_lifetime(const WeibullParams& params, Rng& rng) {
  return weibull_quantile(rng.uniform(), params);
}

double conditional_failure_rate(const FailureRateQuery& query, const WeibullParams& params) {
  if (query.age < 0.0 || query.window < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "age and window must be non-negative");
  }
  const double start = std::pow(query.age / params.scale, params.shape);
  const double end = std::pow((query.age + query.window) / params.scale, params.shape);
  return -std::expm1(start - end);
}

}  // namespace ecsim
