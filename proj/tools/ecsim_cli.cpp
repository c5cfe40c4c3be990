// ecsim command-line front end. Talks to the library only through ecsim.h.

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ecsim/ecsim.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct CliError {
  int code;
  std::string message;
};

void check(ecsim_status status, int exit_code = kExitFailure) {
  if (status == ECSIM_OK) return;
  const int code = status == ECSIM_ERR_INVALID_CONFIG || status == ECSIM_ERR_INVALID_POLICY ||
                           status == ECSIM_ERR_UNKNOWN_BATTERY
                       ? kExitUsage
                       : exit_code;
  throw CliError{code, std::string(ecsim_status_name(status)) + ": " + ecsim_last_error()};
}

struct ConfigHandle {
  ecsim_config* ptr = nullptr;
  ConfigHandle() { check(ecsim_config_create(&ptr)); }
  ~ConfigHandle() { ecsim_config_free(ptr); }
  ConfigHandle(const ConfigHandle&) = delete;
  ConfigHandle& operator=(const ConfigHandle&) = delete;
};

struct ReportHandle {
  ecsim_report* ptr = nullptr;
  ~ReportHandle() { ecsim_report_free(ptr); }
};

struct StripeHandle {
  ecsim_stripe* ptr = nullptr;
  ~StripeHandle() { ecsim_stripe_free(ptr); }
};

// Options shared by `simulate` and `battery`: a config file, one flag per
// key, and generic --set key=value overrides.
struct ConfigOptions {
  std::string file;
  std::map<std::string, std::string> flags;  // config key -> value
  std::vector<std::string> sets;

  void add_to(CLI::App* app) {
    app->add_option("-c,--config", file, "key = value config file");
    flag(app, "--duration-min", "duration", "minutes of client scheduling");
    flag(app, "--schedule-interval-s", "schedule_interval", "seconds between client tasks");
    flag(app, "--cache-size", "cache_size", "bytes per cache");
    flag(app, "--lease-min", "lease_period", "lease period in minutes");
    flag(app, "--check-interval-min", "check_interval", "minutes between availability checks");
    flag(app, "--weibull-a", "weibull_a", "Weibull shape");
    flag(app, "--weibull-b", "weibull_b", "Weibull scale in minutes");
    flag(app, "--policy", "policy", "replica<N> or ec<K>+<R>");
    flag(app, "--localization-pct", "localization_pct", "25, 50, 75, 100 or disabled");
    flag(app, "--proactive-threshold", "proactive_threshold", "MTTDL threshold or disabled");
    flag(app, "--vm-count", "vm_count", "number of VMs (network domains)");
    flag(app, "--cacheds-per-vm", "cacheds_per_vm", "CacheDs per VM");
    flag(app, "--remote-unit-transfer-time", "remote_unit_transfer_time", "seconds per MiB");
    flag(app, "--local-time-ratio", "local_time_ratio", "same-domain cost factor");
    flag(app, "--seed", "seed", "64-bit seed");
    app->add_option("--set", sets, "generic key=value override")->take_all();
  }

  void flag(CLI::App* app, const std::string& name, const std::string& key,
            const std::string& help) {
    app->add_option_function<std::string>(
        name, [this, key](const std::string& v) { flags[key] = v; }, help);
  }

  // defaults < ECSIM_SEED < file < flags
  void apply(ecsim_config* config) const {
    if (const char* env = std::getenv("ECSIM_SEED"); env != nullptr && *env != '\0') {
      check(ecsim_config_set(config, "seed", env));
    }
    if (!file.empty()) check(ecsim_config_load_file(config, file.c_str()));
    for (const auto& [key, value] : flags) check(ecsim_config_set(config, key.c_str(), value.c_str()));
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw CliError{kExitUsage, "--set expects key=value, got '" + kv + "'"};
      }
      check(ecsim_config_set(config, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
    }
    check(ecsim_config_validate(config));
  }
};

int cmd_simulate(const ConfigOptions& opts, const std::string& out_dir) {
  ConfigHandle config;
  opts.apply(config.ptr);
  ReportHandle report;
  check(ecsim_simulate(config.ptr, &report.ptr));
  check(ecsim_report_write_dir(report.ptr, out_dir.c_str()));
  size_t len = 0;
  check(ecsim_report_summary_line(report.ptr, nullptr, 0, &len));
  std::string line(len + 1, '\0');
  check(ecsim_report_summary_line(report.ptr, line.data(), line.size(), &len));
  line.resize(len);
  std::cout << line << '\n';
  return 0;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct CurveOptions {
  std::string policies = "replica1,replica2,ec2+1,ec3+1,ec3+2";
  double age_min = 0.0;
  double age_max = 150.0;
  double age_step = 1.0;
  double weibull_a = 2.0;
  double weibull_b = 50.0;
  double check_interval = 2.0;
  std::vector<double> lambdas;
  bool with_minutes = false;
};

int cmd_mttdl_curve(const CurveOptions& o) {
  std::vector<std::pair<std::string, ecsim_policy>> policies;
  for (const auto& text : split(o.policies, ',')) {
    ecsim_policy p;
    check(ecsim_policy_parse(text.c_str(), &p), kExitUsage);
    char name[64];
    check(ecsim_policy_name(&p, name, sizeof name, nullptr));
    policies.emplace_back(name, p);
  }
  if (policies.empty()) throw CliError{kExitUsage, "no policies given"};
  if (!(o.age_step > 0.0) || o.age_max < o.age_min) {
    throw CliError{kExitUsage, "need age-step > 0 and age-max >= age-min"};
  }

  std::cout << "age_min,policy,lambda,mttdl,data_loss_rate" << (o.with_minutes ? ",mttdl_min" : "")
            << '\n';
  auto row = [&](const std::string& age, const std::string& name, double lambda, double mttdl) {
    std::cout << age << ',' << name << ',' << num(lambda) << ',' << num(mttdl) << ','
              << num(1.0 / mttdl);
    if (o.with_minutes) std::cout << ',' << num(mttdl * o.check_interval);
    std::cout << '\n';
  };

  if (!o.lambdas.empty()) {
    // Fixed failure rate: one row per (lambda, policy); age is not used.
    for (double lambda : o.lambdas) {
      for (const auto& [name, p] : policies) {
        double mttdl = 0.0;
        check(ecsim_mttdl_general(p.k + p.r, p.r, lambda, 1.0, &mttdl), kExitUsage);
        row("", name, lambda, mttdl);
      }
    }
    return 0;
  }

  const auto steps = static_cast<long>(std::floor((o.age_max - o.age_min) / o.age_step + 1e-9));
  for (const auto& [name, p] : policies) {
    for (long i = 0; i <= steps; ++i) {
      const double age = o.age_min + static_cast<double>(i) * o.age_step;
      double lambda = 0.0;
      double mttdl = 0.0;
      check(ecsim_mttdl_at_age(&p, age, o.check_interval, o.weibull_a, o.weibull_b, &lambda,
                               &mttdl),
            kExitUsage);
      row(num(age), name, lambda, mttdl);
    }
  }
  return 0;
}

int cmd_battery(const std::string& name, const ConfigOptions& opts, std::uint32_t seeds,
                std::uint32_t threads, std::string out_dir) {
  bool known = false;
  for (size_t i = 0; i < ecsim_battery_count(); ++i) known |= name == ecsim_battery_name(i);
  if (!known) throw CliError{kExitUsage, "unknown battery '" + name + "'"};
  ConfigHandle config;
  opts.apply(config.ptr);
  if (out_dir.empty()) out_dir = "battery_" + name;
  check(ecsim_battery_run(name.c_str(), config.ptr, seeds, threads, out_dir.c_str()));
  std::cout << "wrote " << out_dir << '\n';
  return 0;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kExitFailure, "cannot read " + path};
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::uint8_t* data, size_t size) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError{kExitFailure, "cannot write " + path};
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(size));
}

int cmd_encode(const std::string& policy_text, const std::string& in, const std::string& base) {
  ecsim_policy p;
  check(ecsim_policy_parse(policy_text.c_str(), &p), kExitUsage);
  const auto data = read_file(in);
  StripeHandle stripe;
  check(ecsim_encode(&p, data.data(), data.size(), &stripe.ptr));
  const size_t count = ecsim_stripe_unit_count(stripe.ptr);
  const size_t unit = ecsim_stripe_unit_size(stripe.ptr);
  const auto parent = std::filesystem::path(base).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  for (size_t i = 0; i < count; ++i) {
    write_file(base + ".unit" + std::to_string(i), ecsim_stripe_unit_data(stripe.ptr, i), unit);
  }
  char name[64];
  check(ecsim_policy_name(&p, name, sizeof name, nullptr));
  std::ofstream meta(base + ".meta");
  meta << "policy=" << name << "\nk=" << p.k << "\nr=" << p.r << "\nsize=" << data.size()
       << "\nunit_size=" << unit << '\n';
  if (!meta) throw CliError{kExitFailure, "cannot write " + base + ".meta"};
  std::cout << name << ": " << count << " units of " << unit << " bytes\n";
  return 0;
}

int cmd_decode(const std::string& base, const std::string& out) {
  std::map<std::string, std::string> meta;
  {
    std::ifstream in(base + ".meta");
    if (!in) throw CliError{kExitFailure, "cannot read " + base + ".meta"};
    std::string line;
    while (std::getline(in, line)) {
      const auto eq = line.find('=');
      if (eq != std::string::npos) meta[line.substr(0, eq)] = line.substr(eq + 1);
    }
  }
  if (!meta.count("size") || (!meta.count("policy") && !(meta.count("k") && meta.count("r")))) {
    throw CliError{kExitFailure, base + ".meta lacks size or k/r"};
  }
  // k=1 means replication when only k and r are recorded
  if (!meta.count("policy")) {
    meta["policy"] = meta["k"] == "1" ? "replica" + std::to_string(std::stoul(meta["r"]) + 1)
                                      : "ec" + meta["k"] + "+" + meta["r"];
  }
  ecsim_policy p;
  check(ecsim_policy_parse(meta["policy"].c_str(), &p), kExitUsage);
  const size_t size = std::stoull(meta["size"]);

  std::vector<std::uint32_t> indices;
  std::vector<std::vector<std::uint8_t>> units;
  for (std::uint32_t i = 0; i < p.k + p.r; ++i) {
    const auto path = base + ".unit" + std::to_string(i);
    if (!std::filesystem::exists(path)) continue;
    indices.push_back(i);
    units.push_back(read_file(path));
  }
  const size_t unit_size = units.empty() ? 0 : units.front().size();
  std::vector<const std::uint8_t*> ptrs;
  for (const auto& u : units) {
    if (u.size() != unit_size) throw CliError{kExitFailure, "unit files differ in size"};
    ptrs.push_back(u.data());
  }
  std::vector<std::uint8_t> data(size);
  check(ecsim_decode(&p, size, units.size(), indices.data(), ptrs.data(), unit_size, data.data(),
                     data.size()));
  write_file(out, data.data(), data.size());
  std::cout << "decoded " << size << " bytes from " << units.size() << " units\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Erasure-coded cache cluster simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ecsim_version());

  auto* sim = app.add_subcommand("simulate", "run one simulation");
  ConfigOptions sim_opts;
  sim_opts.add_to(sim);
  std::string sim_out = "ecsim_out";
  sim->add_option("-o,--out", sim_out, "report directory");

  auto* curve = app.add_subcommand("mttdl-curve", "MTTDL vs host age (CSV on stdout)");
  CurveOptions curve_opts;
  curve->add_option("--policies", curve_opts.policies, "comma-separated policies");
  curve->add_option("--age-min", curve_opts.age_min);
  curve->add_option("--age-max", curve_opts.age_max);
  curve->add_option("--age-step", curve_opts.age_step);
  curve->add_option("--weibull-a", curve_opts.weibull_a);
  curve->add_option("--weibull-b", curve_opts.weibull_b);
  curve->add_option("--check-interval", curve_opts.check_interval, "minutes");
  curve->add_option("--lambda", curve_opts.lambdas, "fixed failure rate(s), comma-separated")
      ->delimiter(',');
  curve->add_flag("--with-minutes", curve_opts.with_minutes, "add MTTDL in minutes");

  auto* battery = app.add_subcommand("battery", "run an experiment battery");
  std::string battery_name;
  std::uint32_t seeds = 30;
  std::uint32_t threads = 0;
  std::string battery_out;
  ConfigOptions battery_opts;
  battery->add_option("name", battery_name, "storage|availability|network|proactive|localization")
      ->required();
  battery->add_option("--seeds", seeds, "seed count");
  battery->add_option("--threads", threads, "worker threads, 0 = all cores");
  battery->add_option("-o,--out", battery_out, "output directory");
  battery_opts.add_to(battery);

  auto* codec = app.add_subcommand("codec", "encode or decode files");
  codec->require_subcommand(1);
  auto* enc = codec->add_subcommand("encode", "split a file into <base>.unit<i> and <base>.meta");
  std::string enc_policy = "ec3+1";
  std::string enc_in;
  std::string enc_base;
  enc->add_option("--policy", enc_policy);
  enc->add_option("-i,--in", enc_in)->required();
  enc->add_option("-o,--out", enc_base, "output base path")->required();
  auto* dec = codec->add_subcommand("decode", "rebuild a file from whichever units exist");
  std::string dec_base;
  std::string dec_out;
  dec->add_option("-i,--in", dec_base, "base path used at encode time")->required();
  dec->add_option("-o,--out", dec_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*sim) return cmd_simulate(sim_opts, sim_out);
    if (*curve) return cmd_mttdl_curve(curve_opts);
    if (*battery) return cmd_battery(battery_name, battery_opts, seeds, threads, battery_out);
    if (*enc) return cmd_encode(enc_policy, enc_in, enc_base);
    if (*dec) return cmd_decode(dec_base, dec_out);
  } catch (const CliError& e) {
    std::cerr << "ecsim: " << e.message << '\n';
    return e.code;
  }
  return kExitFailure;
}
