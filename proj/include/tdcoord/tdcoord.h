/* SPDX-License-Identifier: Apache-2.0 */
#ifndef TDCOORD_H
#define TDCOORD_H

/*
 * C interface to the transmission-distribution coordination library.
 *
 * All functions returning tdc_status leave a human-readable message for the
 * calling thread in tdc_last_error() on failure. Objects returned through
 * out-parameters are owned by the caller and released with the matching
 * _free function. Handles are opaque.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TDC_API __declspec(dllexport)
#else
#define TDC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tdc_status {
  TDC_OK = 0,
  TDC_ERR_VALIDATION = 1, /* malformed input data or arguments */
  TDC_ERR_IO = 2,         /* filesystem problems */
  TDC_ERR_SOLVER = 3,     /* an optimization did not reach optimality */
  TDC_ERR_INTERNAL = 4,
} tdc_status;

/* Message for the most recent failing call on this thread. Never NULL. */
TDC_API const char* tdc_last_error(void);

typedef struct tdc_system tdc_system;   /* a power system with time series */
typedef struct tdc_history tdc_history; /* operating-history records */

/* Reads a system directory (config.txt plus the CSV tables). */
TDC_API tdc_status tdc_system_load(const char* dir, tdc_system** out);

/* Synthesizes the seeded study system. config_path may be NULL for the
 * built-in defaults (420 hours, 3 feeders); otherwise it names a key=value
 * file understood by the generator. */
TDC_API tdc_status tdc_system_generate(const char* config_path, uint64_t seed,
                                       tdc_system** out);

TDC_API tdc_status tdc_system_write(const tdc_system* sys, const char* dir);

/* Copy with every distribution line's r and x multiplied by eta. */
TDC_API tdc_status tdc_system_scale(const tdc_system* sys, double eta,
                                    tdc_system** out);

TDC_API int tdc_system_horizon(const tdc_system* sys);
TDC_API int tdc_system_dn_count(const tdc_system* sys);
TDC_API void tdc_system_free(tdc_system* sys);

/* Benchmark clearings over hours [0, hours); failed hours are skipped. */
TDC_API tdc_status tdc_history_build(const tdc_system* sys, int hours,
                                     int threads, tdc_history** out);
TDC_API tdc_status tdc_history_load(const char* path, tdc_history** out);
TDC_API tdc_status tdc_history_save(const tdc_history* history, const char* path);
TDC_API size_t tdc_history_size(const tdc_history* history);
TDC_API void tdc_history_free(tdc_history* history);

typedef struct tdc_hour_metrics {
  int hour;
  double forecast_mw;  /* aggregate intake assumed at clearing */
  double actual_mw;    /* aggregate realized intake */
  int delta_defined;   /* 0 when the imbalance is undefined (actual == 0) */
  double delta_pct;
  double sw_d;
  double sw_t;       /* free-adaptation transmission welfare */
  double sw_total;   /* sw_d + sw_t */
  double sw_t_penalized;
  double sw_total_penalized;
  double slack_mw;
  double flex_forecast_pct;
  double flex_observed_pct;
  double clearing_welfare;
  double clear_seconds;
} tdc_hour_metrics;

/* Runs the five-step evaluation of one strategy ("BN", "SB", "PAG" or
 * "PAW") for one hour. history may be NULL for BN and SB. neighbors and
 * max_blocks configure the learned strategies. */
TDC_API tdc_status tdc_evaluate_hour(const tdc_system* sys,
                                     const tdc_history* history,
                                     const char* strategy, int hour,
                                     int neighbors, int max_blocks,
                                     tdc_hour_metrics* out);

/* Full experiment per the key=value config file: eta sweep, history
 * building, strategy evaluation, artifact emission into out_dir
 * (reports.csv, summary.csv, figure and history files). Progress lines go
 * to stderr when verbose is nonzero. */
TDC_API tdc_status tdc_run_experiment(const char* config_path,
                                      const char* out_dir, int verbose);

/* Recomputes the per-figure plot files from an existing reports.csv. */
TDC_API tdc_status tdc_report(const char* reports_csv, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* TDCOORD_H */
