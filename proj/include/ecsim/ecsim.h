#ifndef ECSIM_ECSIM_H
#define ECSIM_ECSIM_H

/*
 * C interface to the ecsim library: Reed-Solomon/replication codec, Weibull
 * failure-rate and MTTDL calculators, and the discrete-event cluster
 * simulator with its experiment batteries.
 *
 * Every fallible call returns an ecsim_status. On failure a description is
 * available from ecsim_last_error() until the next call on the same thread.
 * Objects are opaque handles released with the matching *_free function.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(ECSIM_BUILDING_LIBRARY)
#define ECSIM_API __attribute__((visibility("default")))
#else
#define ECSIM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ecsim_status {
  ECSIM_OK = 0,
  ECSIM_ERR_INVALID_ARGUMENT = 1,
  ECSIM_ERR_INVALID_POLICY = 2,
  ECSIM_ERR_INVALID_INPUT = 3,
  ECSIM_ERR_INSUFFICIENT_UNITS = 4,
  ECSIM_ERR_CORRUPT_STRIPE = 5,
  ECSIM_ERR_INVALID_PARAMS = 6,
  ECSIM_ERR_INVALID_CONFIG = 7,
  ECSIM_ERR_UNKNOWN_BATTERY = 8,
  ECSIM_ERR_IO = 9,
  ECSIM_ERR_BUFFER_TOO_SMALL = 10,
  ECSIM_ERR_INTERNAL = 11
} ecsim_status;

ECSIM_API const char* ecsim_last_error(void);
ECSIM_API const char* ecsim_status_name(ecsim_status status);
ECSIM_API const char* ecsim_version(void);

/* ---- storage policies ------------------------------------------------ */

typedef enum ecsim_policy_kind {
  ECSIM_POLICY_REPLICATION = 0,
  ECSIM_POLICY_ERASURE_CODE = 1
} ecsim_policy_kind;

typedef struct ecsim_policy {
  ecsim_policy_kind kind;
  uint32_t k;
  uint32_t r;
} ecsim_policy;

/* Accepts "replica<N>" and "ec<K>+<R>", case-insensitive. */
ECSIM_API ecsim_status ecsim_policy_parse(const char* text, ecsim_policy* out);
/* Writes "Replica2" / "EC3+2". `len` (optional) receives the length. */
ECSIM_API ecsim_status ecsim_policy_name(const ecsim_policy* policy, char* buf,
                                         size_t cap, size_t* len);
ECSIM_API ecsim_status ecsim_redundancy(const ecsim_policy* policy, double* out);

/* ---- codec -------------------------------------------------------------- */

typedef struct ecsim_stripe ecsim_stripe;

ECSIM_API ecsim_status ecsim_encode(const ecsim_policy* policy, const uint8_t* data,
                                    size_t size, ecsim_stripe** out);
ECSIM_API void ecsim_stripe_free(ecsim_stripe* stripe);
ECSIM_API size_t ecsim_stripe_unit_count(const ecsim_stripe* stripe);
ECSIM_API size_t ecsim_stripe_unit_size(const ecsim_stripe* stripe);
ECSIM_API const uint8_t* ecsim_stripe_unit_data(const ecsim_stripe* stripe, size_t index);

/*
 * Reconstructs `original_size` bytes into `out` from `unit_count` units.
 * units[i] points at `unit_size` bytes of the unit with index indices[i].
 */
ECSIM_API ecsim_status ecsim_decode(const ecsim_policy* policy, size_t original_size,
                                    size_t unit_count, const uint32_t* indices,
                                    const uint8_t* const* units, size_t unit_size,
                                    uint8_t* out, size_t out_cap);

/* ---- reliability and MTTDL ------------------------------------------- */

ECSIM_API ecsim_status ecsim_conditional_failure_rate(double age_min, double window_min,
                                                      double shape, double scale_min,
                                                      double* out);
ECSIM_API ecsim_status ecsim_mttdl_general(uint32_t n, uint32_t r, double lambda,
                                           double mu, double* mttdl);
/* MTTDL in check intervals for a host of the given age; mu = 1. */
ECSIM_API ecsim_status ecsim_mttdl_at_age(const ecsim_policy* policy, double age_min,
                                          double check_interval_min, double shape,
                                          double scale_min, double* lambda_out,
                                          double* mttdl_out);

/* ---- simulation ------------------------------------------------------- */

typedef struct ecsim_config ecsim_config;
typedef struct ecsim_report ecsim_report;

ECSIM_API ecsim_status ecsim_config_create(ecsim_config** out);
ECSIM_API void ecsim_config_free(ecsim_config* config);
ECSIM_API ecsim_status ecsim_config_set(ecsim_config* config, const char* key,
                                        const char* value);
ECSIM_API ecsim_status ecsim_config_get(const ecsim_config* config, const char* key,
                                        char* buf, size_t cap, size_t* len);
ECSIM_API ecsim_status ecsim_config_load_file(ecsim_config* config, const char* path);
/* Checks cross-field invariants; the message names the offending key. */
ECSIM_API ecsim_status ecsim_config_validate(const ecsim_config* config);

ECSIM_API ecsim_status ecsim_simulate(const ecsim_config* config, ecsim_report** out);
ECSIM_API void ecsim_report_free(ecsim_report* report);

typedef struct ecsim_summary {
  uint64_t caches;
  uint64_t succeeded;
  uint64_t lost;
  uint64_t skipped;
  uint64_t temporary_failures;
  uint64_t bytes_write;
  uint64_t bytes_recovery;
  uint64_t bytes_proactive;
  double transfer_seconds;
  double recovery_portion; /* NaN when no bytes moved */
  double vm_variance;
  double avg_units;
  double avg_bytes;
} ecsim_summary;

ECSIM_API ecsim_status ecsim_report_summary(const ecsim_report* report, ecsim_summary* out);
/* The stdout summary line, without trailing newline. */
ECSIM_API ecsim_status ecsim_report_summary_line(const ecsim_report* report, char* buf,
                                                 size_t cap, size_t* len);
/* transfers.csv, caches.csv, vm_counts.csv and summary.csv into `dir`. */
ECSIM_API ecsim_status ecsim_report_write_dir(const ecsim_report* report, const char* dir);

/* ---- batteries -------------------------------------------------------- */

/* Number of known batteries and their names. */
ECSIM_API size_t ecsim_battery_count(void);
ECSIM_API const char* ecsim_battery_name(size_t index);

/*
 * Runs `name` over seeds base.seed .. base.seed + seed_count - 1 and writes
 * the report tree to `out_dir`. threads = 0 uses hardware concurrency.
 */
ECSIM_API ecsim_status ecsim_battery_run(const char* name, const ecsim_config* base,
                                         uint32_t seed_count, uint32_t threads,
                                         const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* ECSIM_ECSIM_H */
