#include "ecsim/ecsim.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "ecsim/battery.hpp"
#include "ecsim/codec.hpp"
#include "ecsim/config.hpp"
#include "ecsim/error.hpp"
#include "ecsim/mttdl.hpp"
#include "ecsim/reliability.hpp"
#include "ecsim/report.hpp"
#include "ecsim/sim.hpp"

struct ecsim_stripe {
  std::vector<ecsim::StripeUnit> units;
};

struct ecsim_config {
  ecsim::SimConfig config;
};

struct ecsim_report {
  ecsim::SimReport report;
};

namespace {

thread_local std::string last_error;

ecsim_status map(ecsim::ErrorCode code) {
  using ecsim::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return ECSIM_ERR_INVALID_ARGUMENT;
    case ErrorCode::kInvalidPolicy: return ECSIM_ERR_INVALID_POLICY;
    case ErrorCode::kInvalidInput: return ECSIM_ERR_INVALID_INPUT;
    case ErrorCode::kInsufficientUnits: return ECSIM_ERR_INSUFFICIENT_UNITS;
    case ErrorCode::kCorruptStripe: return ECSIM_ERR_CORRUPT_STRIPE;
    case ErrorCode::kInvalidParams: return ECSIM_ERR_INVALID_PARAMS;
    case ErrorCode::kInvalidConfig: return ECSIM_ERR_INVALID_CONFIG;
    case ErrorCode::kInsufficientCluster: return ECSIM_ERR_INVALID_ARGUMENT;
    case ErrorCode::kUnknownBattery: return ECSIM_ERR_UNKNOWN_BATTERY;
    case ErrorCode::kIo: return ECSIM_ERR_IO;
  }
  return ECSIM_ERR_INTERNAL;
}

ecsim_status fail(ecsim_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <typename F>
ecsim_status guard(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const ecsim::Error& e) {
    return fail(map(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ECSIM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ECSIM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(ECSIM_ERR_INTERNAL, "unknown error");
  }
}

ecsim::StoragePolicy to_policy(const ecsim_policy* p) {
  if (p == nullptr) throw ecsim::Error(ecsim::ErrorCode::kInvalidArgument, "policy is null");
  ecsim::StoragePolicy policy;
  if (p->kind == ECSIM_POLICY_REPLICATION) {
    policy = ecsim::StoragePolicy::replication(p->k + p->r);
    if (p->k != 1) {
      throw ecsim::Error(ecsim::ErrorCode::kInvalidPolicy, "replication needs k = 1");
    }
  } else if (p->kind == ECSIM_POLICY_ERASURE_CODE) {
    policy = ecsim::StoragePolicy::erasure(p->k, p->r);
  } else {
    throw ecsim::Error(ecsim::ErrorCode::kInvalidPolicy, "unknown policy kind");
  }
  policy.validate();
  return policy;
}

ecsim_policy from_policy(const ecsim::StoragePolicy& policy) {
  ecsim_policy out;
  out.kind = policy.is_replication() ? ECSIM_POLICY_REPLICATION : ECSIM_POLICY_ERASURE_CODE;
  out.k = policy.k;
  out.r = policy.r;
  return out;
}

ecsim_status copy_string(const std::string& s, char* buf, size_t cap, size_t* len) {
  if (len != nullptr) *len = s.size();
  if (buf == nullptr && cap == 0) return ECSIM_OK;
  if (buf == nullptr || cap < s.size() + 1) {
    return fail(ECSIM_ERR_BUFFER_TOO_SMALL,
                "buffer needs " + std::to_string(s.size() + 1) + " bytes");
  }
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return ECSIM_OK;
}

void require(bool ok, const char* what) {
  if (!ok) throw ecsim::Error(ecsim::ErrorCode::kInvalidArgument, what);
}

}  // namespace

extern "C" {

const char* ecsim_last_error(void) { return last_error.c_str(); }

const char* ecsim_status_name(ecsim_status status) {
  switch (status) {
    case ECSIM_OK: return "ok";
    case ECSIM_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case ECSIM_ERR_INVALID_POLICY: return "invalid-policy";
    case ECSIM_ERR_INVALID_INPUT: return "invalid-input";
    case ECSIM_ERR_INSUFFICIENT_UNITS: return "insufficient-units";
    case ECSIM_ERR_CORRUPT_STRIPE: return "corrupt-stripe";
    case ECSIM_ERR_INVALID_PARAMS: return "invalid-params";
    case ECSIM_ERR_INVALID_CONFIG: return "invalid-config";
    case ECSIM_ERR_UNKNOWN_BATTERY: return "unknown-battery";
    case ECSIM_ERR_IO: return "io";
    case ECSIM_ERR_BUFFER_TOO_SMALL: return "buffer-too-small";
    case ECSIM_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* ecsim_version(void) { return "0.1.0"; }

ecsim_status ecsim_policy_parse(const char* text, ecsim_policy* out) {
  return guard([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = from_policy(ecsim::StoragePolicy::parse(text));
    return ECSIM_OK;
  });
}

ecsim_status ecsim_policy_name(const ecsim_policy* policy, char* buf, size_t cap, size_t* len) {
  return guard([&] { return copy_string(to_policy(policy).name(), buf, cap, len); });
}

ecsim_status ecsim_redundancy(const ecsim_policy* policy, double* out) {
  return guard([&] {
    require(out != nullptr, "null argument");
    *out = ecsim::redundancy(to_policy(policy));
    return ECSIM_OK;
  });
}

ecsim_status ecsim_encode(const ecsim_policy* policy, const uint8_t* data, size_t size,
                          ecsim_stripe** out) {
  return guard([&] {
    require(out != nullptr, "null output");
    require(data != nullptr || size == 0, "null data");
    const auto p = to_policy(policy);
    auto stripe = std::make_unique<ecsim_stripe>();
    stripe->units = ecsim::encode(std::span<const std::uint8_t>(data, size), p);
    *out = stripe.release();
    return ECSIM_OK;
  });
}

void ecsim_stripe_free(ecsim_stripe* stripe) { delete stripe; }

size_t ecsim_stripe_unit_count(const ecsim_stripe* stripe) {
  return stripe == nullptr ? 0 : stripe->units.size();
}

size_t ecsim_stripe_unit_size(const ecsim_stripe* stripe) {
  return stripe == nullptr || stripe->units.empty() ? 0 : stripe->units.front().payload.size();
}

const uint8_t* ecsim_stripe_unit_data(const ecsim_stripe* stripe, size_t index) {
  if (stripe == nullptr || index >= stripe->units.size()) return nullptr;
  return stripe->units[index].payload.data();
}

ecsim_status ecsim_decode(const ecsim_policy* policy, size_t original_size, size_t unit_count,
                          const uint32_t* indices, const uint8_t* const* units, size_t unit_size,
                          uint8_t* out, size_t out_cap) {
  return guard([&] {
    require(unit_count == 0 || (indices != nullptr && units != nullptr), "null unit arrays");
    const auto p = to_policy(policy);
    std::vector<ecsim::StripeUnit> stripe(unit_count);
    for (size_t i = 0; i < unit_count; ++i) {
      require(units[i] != nullptr || unit_size == 0, "null unit");
      stripe[i].index = indices[i];
      stripe[i].payload.assign(units[i], units[i] + unit_size);
      stripe[i].original_size = original_size;
      stripe[i].policy = p;
    }
    const auto data = ecsim::decode(stripe, p, original_size);
    if (out_cap < data.size()) {
      return fail(ECSIM_ERR_BUFFER_TOO_SMALL,
                  "output needs " + std::to_string(data.size()) + " bytes");
    }
    require(out != nullptr || data.empty(), "null output");
    if (!data.empty()) std::memcpy(out, data.data(), data.size());
    return ECSIM_OK;
  });
}

ecsim_status ecsim_conditional_failure_rate(double age_min, double window_min, double shape,
                                            double scale_min, double* out) {
  return guard([&] {
    require(out != nullptr, "null output");
    *out = ecsim::conditional_failure_rate({age_min, window_min}, {shape, scale_min});
    return ECSIM_OK;
  });
}

ecsim_status ecsim_mttdl_general(uint32_t n, uint32_t r, double lambda, double mu,
                                 double* mttdl) {
  return guard([&] {
    require(mttdl != nullptr, "null output");
    *mttdl = ecsim::mttdl_general({n, r, lambda, mu}).mttdl;
    return ECSIM_OK;
  });
}

ecsim_status ecsim_mttdl_at_age(const ecsim_policy* policy, double age_min,
                                double check_interval_min, double shape, double scale_min,
                                double* lambda_out, double* mttdl_out) {
  return guard([&] {
    const auto p = to_policy(policy);
    const ecsim::WeibullParams w{shape, scale_min};
    const auto result = ecsim::mttdl_at_age(p, age_min, check_interval_min, w);
    if (lambda_out != nullptr) {
      *lambda_out = ecsim::failure_rate_at_age(age_min, check_interval_min, w);
    }
    if (mttdl_out != nullptr) *mttdl_out = result.mttdl;
    return ECSIM_OK;
  });
}

ecsim_status ecsim_config_create(ecsim_config** out) {
  return guard([&] {
    require(out != nullptr, "null output");
    *out = new ecsim_config();
    return ECSIM_OK;
  });
}

void ecsim_config_free(ecsim_config* config) { delete config; }

ecsim_status ecsim_config_set(ecsim_config* config, const char* key, const char* value) {
  return guard([&] {
    require(config != nullptr && key != nullptr && value != nullptr, "null argument");
    ecsim::set_config_value(config->config, key, value);
    return ECSIM_OK;
  });
}

ecsim_status ecsim_config_get(const ecsim_config* config, const char* key, char* buf, size_t cap,
                              size_t* len) {
  return guard([&] {
    require(config != nullptr && key != nullptr, "null argument");
    return copy_string(ecsim::get_config_value(config->config, key), buf, cap, len);
  });
}

ecsim_status ecsim_config_load_file(ecsim_config* config, const char* path) {
  return guard([&] {
    require(config != nullptr && path != nullptr, "null argument");
    ecsim::load_config_file(config->config, path);
    return ECSIM_OK;
  });
}

ecsim_status ecsim_config_validate(const ecsim_config* config) {
  return guard([&] {
    require(config != nullptr, "null config");
    config->config.validate();
    return ECSIM_OK;
  });
}

ecsim_status ecsim_simulate(const ecsim_config* config, ecsim_report** out) {
  return guard([&] {
    require(config != nullptr && out != nullptr, "null argument");
    auto report = std::make_unique<ecsim_report>();
    report->report = ecsim::run(config->config);
    *out = report.release();
    return ECSIM_OK;
  });
}

void ecsim_report_free(ecsim_report* report) { delete report; }

ecsim_status ecsim_report_summary(const ecsim_report* report, ecsim_summary* out) {
  return guard([&] {
    require(report != nullptr && out != nullptr, "null argument");
    using ecsim::TransferCategory;
    const auto& r = report->report;
    const auto portion = ecsim::recovery_portion(r);
    const auto cost = ecsim::storage_cost(r);
    out->caches = r.caches_created;
    out->succeeded = r.succeeded();
    out->lost = r.data_losses;
    out->skipped = r.skipped_schedules;
    out->temporary_failures = r.temporary_failures;
    out->bytes_write = r.bytes(TransferCategory::kWrite);
    out->bytes_recovery = r.bytes(TransferCategory::kRecovery);
    out->bytes_proactive = r.bytes(TransferCategory::kProactive);
    out->transfer_seconds = r.total_seconds();
    out->recovery_portion = portion ? *portion : std::numeric_limits<double>::quiet_NaN();
    out->vm_variance = ecsim::vm_variance(r);
    out->avg_units = cost.avg_units;
    out->avg_bytes = cost.avg_bytes;
    return ECSIM_OK;
  });
}

ecsim_status ecsim_report_summary_line(const ecsim_report* report, char* buf, size_t cap,
                                       size_t* len) {
  return guard([&] {
    require(report != nullptr, "null report");
    return copy_string(ecsim::summary_line(report->report), buf, cap, len);
  });
}

ecsim_status ecsim_report_write_dir(const ecsim_report* report, const char* dir) {
  return guard([&] {
    require(report != nullptr && dir != nullptr, "null argument");
    ecsim::write_report_dir(report->report, dir);
    return ECSIM_OK;
  });
}

size_t ecsim_battery_count(void) { return ecsim::battery_names().size(); }

const char* ecsim_battery_name(size_t index) {
  const auto& names = ecsim::battery_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

ecsim_status ecsim_battery_run(const char* name, const ecsim_config* base, uint32_t seed_count,
                               uint32_t threads, const char* out_dir) {
  return guard([&] {
    require(name != nullptr && out_dir != nullptr, "null argument");
    ecsim::BatteryOptions options;
    if (base != nullptr) options.base = base->config;
    options.seeds = seed_count;
    options.threads = threads;
    const auto result = ecsim::run_battery(name, options);
    ecsim::write_battery(result, out_dir);
    return ECSIM_OK;
  });
}

}  // extern "C"
