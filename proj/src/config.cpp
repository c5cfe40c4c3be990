#include "ecsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ecsim/error.hpp"
#include "ecsim/report.hpp"

namespace ecsim {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view why) {
  throw ConfigError(std::string(key),
                    std::string(key) + ": " + std::string(why) + " (got '" + std::string(value) + "')");
}

double parse_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) bad(key, value, "expected a number");
  return out;
}

std::uint64_t parse_u64(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) bad(key, value, "expected a non-negative integer");
  return out;
}

std::uint32_t parse_u32(std::string_view key, std::string_view value) {
  const auto v = parse_u64(key, value);
  if (v > 0xffffffffull) bad(key, value, "out of range");
  return static_cast<std::uint32_t>(v);
}

bool is_disabled(std::string_view value) {
  const auto v = lower(value);
  return v == "disabled" || v == "off" || v == "none";
}

[[noreturn]] void invalid(const char* key, const std::string& why) {
  throw ConfigError(key, std::string(key) + ": " + why);
}

}  // namespace

void SimConfig::validate() const {
  if (!(duration >= 0.0) || !std::isfinite(duration)) invalid("duration", "must be >= 0");
  if (!(schedule_interval > 0.0)) invalid("schedule_interval", "must be > 0");
  if (cache_size == 0) invalid("cache_size", "must be > 0");
  if (!(lease_period > 0.0)) invalid("lease_period", "must be > 0");
  if (!(check_interval > 0.0)) invalid("check_interval", "must be > 0");
  if (!(weibull.shape > 0.0) || !std::isfinite(weibull.shape)) invalid("weibull_a", "must be > 0");
  if (!(weibull.scale > 0.0) || !std::isfinite(weibull.scale)) invalid("weibull_b", "must be > 0");
  try {
    policy.validate();
  } catch (const Error& e) {
    invalid("policy", e.what());
  }
  if (localization_pct && !LocalizationPolicy::valid_pct(*localization_pct)) {
    invalid("localization_pct", "must be 25, 50, 75, 100 or disabled");
  }
  if (proactive_threshold && !(*proactive_threshold >= 0.0)) {
    invalid("proactive_threshold", "must be >= 0 or disabled");
  }
  if (vm_count == 0) invalid("vm_count", "must be >= 1");
  if (cacheds_per_vm == 0) invalid("cacheds_per_vm", "must be >= 1");
  if (!(remote_unit_transfer_time >= 0.0)) invalid("remote_unit_transfer_time", "must be >= 0");
  if (!(local_time_ratio > 0.0 && local_time_ratio <= 1.0)) {
    invalid("local_time_ratio", "must be in (0, 1]");
  }
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "duration",        "schedule_interval", "cache_size",
      "lease_period",    "check_interval",    "weibull_a",
      "weibull_b",       "policy",            "localization_pct",
      "proactive_threshold", "vm_count",      "cacheds_per_vm",
      "remote_unit_transfer_time", "local_time_ratio", "seed"};
  return keys;
}

void set_config_value(SimConfig& c, std::string_view key, std::string_view raw) {
  const auto value = trim(raw);
  if (key == "duration") {
    c.duration = parse_double(key, value);
  } else if (key == "schedule_interval") {
    c.schedule_interval = parse_double(key, value);
  } else if (key == "cache_size") {
    c.cache_size = parse_u64(key, value);
  } else if (key == "lease_period") {
    c.lease_period = parse_double(key, value);
  } else if (key == "check_interval") {
    c.check_interval = parse_double(key, value);
  } else if (key == "weibull_a") {
    c.weibull.shape = parse_double(key, value);
  } else if (key == "weibull_b") {
    c.weibull.scale = parse_double(key, value);
  } else if (key == "policy") {
    try {
      c.policy = StoragePolicy::parse(value);
    } catch (const Error& e) {
      bad(key, value, e.what());
    }
  } else if (key == "localization_pct") {
    if (is_disabled(value)) {
      c.localization_pct.reset();
    } else {
      const auto pct = parse_u32(key, value);
      if (!LocalizationPolicy::valid_pct(static_cast<int>(pct))) {
        bad(key, value, "must be 25, 50, 75, 100 or disabled");
      }
      c.localization_pct = static_cast<int>(pct);
    }
  } else if (key == "proactive_threshold") {
    if (is_disabled(value)) {
      c.proactive_threshold.reset();
    } else {
      c.proactive_threshold = parse_double(key, value);
    }
  } else if (key == "vm_count") {
    c.vm_count = parse_u32(key, value);
  } else if (key == "cacheds_per_vm") {
    c.cacheds_per_vm = parse_u32(key, value);
  } else if (key == "remote_unit_transfer_time") {
    c.remote_unit_transfer_time = parse_double(key, value);
  } else if (key == "local_time_ratio") {
    c.local_time_ratio = parse_double(key, value);
  } else if (key == "seed") {
    c.seed = parse_u64(key, value);
  } else {
    throw ConfigError(std::string(key), "unknown config key '" + std::string(key) + "'");
  }
}

std::string get_config_value(const SimConfig& c, std::string_view key) {
  if (key == "duration") return format_number(c.duration);
  if (key == "schedule_interval") return format_number(c.schedule_interval);
  if (key == "cache_size") return std::to_string(c.cache_size);
  if (key == "lease_period") return format_number(c.lease_period);
  if (key == "check_interval") return format_number(c.check_interval);
  if (key == "weibull_a") return format_number(c.weibull.shape);
  if (key == "weibull_b") return format_number(c.weibull.scale);
  if (key == "policy") return c.policy.name();
  if (key == "localization_pct") {
    return c.localization_pct ? std::to_string(*c.localization_pct) : "disabled";
  }
  if (key == "proactive_threshold") {
    return c.proactive_threshold ? format_number(*c.proactive_threshold) : "disabled";
  }
  if (key == "vm_count") return std::to_string(c.vm_count);
  if (key == "cacheds_per_vm") return std::to_string(c.cacheds_per_vm);
  if (key == "remote_unit_transfer_time") return format_number(c.remote_unit_transfer_time);
  if (key == "local_time_ratio") return format_number(c.local_time_ratio);
  if (key == "seed") return std::to_string(c.seed);
  throw ConfigError(std::string(key), "unknown config key '" + std::string(key) + "'");
}

void load_config_text(SimConfig& config, std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    set_config_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void load_config_file(SimConfig& config, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  load_config_text(config, buf.str());
}

std::string to_config_text(const SimConfig& config) {
  std::string out;
  for (const auto& key : config_keys()) {
    out += key + " = " + get_config_value(config, key) + "\n";
  }
  return out;
}

}  // namespace ecsim
