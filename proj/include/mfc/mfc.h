/*
 * C interface to the model-free control simulator.
 *
 * Handles are opaque and owned by the caller; release them with the matching
 * *_free function. Every call that can fail returns an mfc_status; the text of
 * the most recent failure on the calling thread is available from
 * mfc_last_error().
 */
#ifndef MFC_MFC_H
#define MFC_MFC_H

#include <stddef.h>
#include <stdint.h>

#if defined(MFC_BUILDING_LIBRARY)
#define MFC_API __attribute__((visibility("default")))
#else
#define MFC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mfc_status {
  MFC_OK = 0,
  MFC_ERR_INVALID_ARGUMENT = 1, /* null handle, bad index, undersized buffer */
  MFC_ERR_PARSE = 2,            /* malformed config text or unknown key */
  MFC_ERR_VALIDATION = 3,       /* config violates an invariant */
  MFC_ERR_DIVERGENCE = 4,       /* plant blew up; the result holds a partial trace */
  MFC_ERR_IO = 5,
  MFC_ERR_NOT_FOUND = 6, /* unknown scenario id */
  MFC_ERR_INTERNAL = 7
} mfc_status;

typedef struct mfc_config mfc_config;
typedef struct mfc_result mfc_result;

/* Mirrors one trace.csv row. */
typedef struct mfc_trace_row {
  double t;
  double y_ref;
  double y_true;
  double y_meas;
  double e;
  double f_est;
  double u;
  double v;
  double pi;
} mfc_trace_row;

typedef struct mfc_metrics {
  double rms_error;
  double iae;
  double max_abs_error;
  double saturation_fraction;
  double final_error;
  double f_error_rms;
  size_t fault_events;
} mfc_metrics;

typedef struct mfc_op_counts {
  uint64_t add_sub;
  uint64_t mul_div;
  uint64_t conditionals;
  uint64_t assignments;
} mfc_op_counts;

typedef struct mfc_op_report {
  mfc_op_counts max;
  mfc_op_counts last;
  double mean_add_sub;
  double mean_mul_div;
  double mean_conditionals;
  double mean_assignments;
  int64_t steps;
} mfc_op_report;

MFC_API const char* mfc_version(void);
MFC_API const char* mfc_status_string(mfc_status s);
/* Message of the last failed call on this thread; empty string if none. */
MFC_API const char* mfc_last_error(void);

/* ---- registries (stable sorted order) ---- */
MFC_API size_t mfc_scenario_count(void);
MFC_API const char* mfc_scenario_id(size_t index); /* NULL when out of range */
MFC_API size_t mfc_plant_count(void);
MFC_API const char* mfc_plant_id(size_t index);
MFC_API const char* mfc_plant_description(size_t index);

/* ---- configuration ---- */
MFC_API mfc_status mfc_config_new(mfc_config** out);
MFC_API mfc_status mfc_config_from_scenario(const char* id, mfc_config** out);
MFC_API mfc_status mfc_config_from_string(const char* text, mfc_config** out);
MFC_API mfc_status mfc_config_from_file(const char* path, mfc_config** out);
MFC_API mfc_status mfc_config_clone(const mfc_config* cfg, mfc_config** out);
MFC_API void mfc_config_free(mfc_config* cfg);

/* Dotted key, same text form as the config file. */
MFC_API mfc_status mfc_config_set(mfc_config* cfg, const char* key, const char* value);
/* Copies the value into buf (NUL-terminated). *needed receives the full
 * length including the terminator; MFC_ERR_INVALID_ARGUMENT if it does not fit.
 * buf = NULL with cap = 0 only queries the size. */
MFC_API mfc_status mfc_config_get(const mfc_config* cfg, const char* key, char* buf, size_t cap,
                                  size_t* needed);
MFC_API int mfc_config_key_is_numeric(const char* key);
/* Whole config in file syntax; same buffer protocol as mfc_config_get. */
MFC_API mfc_status mfc_config_serialize(const mfc_config* cfg, char* buf, size_t cap,
                                        size_t* needed);

/* Returns MFC_OK or MFC_ERR_VALIDATION; the violations stay queryable on the
 * config handle until the next call. */
MFC_API mfc_status mfc_config_validate(mfc_config* cfg, size_t* violation_count);
MFC_API const char* mfc_config_violation(const mfc_config* cfg, size_t index);

/* ---- runs ---- */
/* On MFC_OK or MFC_ERR_DIVERGENCE *out receives a result handle. */
MFC_API mfc_status mfc_run(const mfc_config* cfg, int instrument_ops, mfc_result** out);
MFC_API void mfc_result_free(mfc_result* res);

MFC_API size_t mfc_result_trace_length(const mfc_result* res);
MFC_API mfc_status mfc_result_trace_row(const mfc_result* res, size_t index, mfc_trace_row* row);
MFC_API mfc_status mfc_result_metrics(const mfc_result* res, mfc_metrics* out);
/* Recovery time of fault event `index`; *recovered is 0 when the error never
 * settled back into the band. */
MFC_API mfc_status mfc_result_recovery(const mfc_result* res, size_t index, double* fault_time,
                                       int* recovered, double* recovery_time);
MFC_API int mfc_result_diverged(const mfc_result* res);
/* MFC_ERR_INVALID_ARGUMENT when the run was not instrumented. */
MFC_API mfc_status mfc_result_ops(const mfc_result* res, mfc_op_report* out);
/* trace.csv, metrics.txt, config.echo, plot.gp */
MFC_API mfc_status mfc_result_write_bundle(const mfc_result* res, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* MFC_MFC_H */
