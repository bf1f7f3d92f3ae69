/*
 * airq — short-term air-quality forecasting engine.
 *
 * C API over the C++ core: opaque handles, status-code returns, and a
 * thread-local error message. All functions returning airq_status yield
 * AIRQ_OK on success; on failure the out-parameters are untouched and
 * airq_last_error() describes what went wrong.
 */
#ifndef AIRQ_H
#define AIRQ_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define AIRQ_API __declspec(dllexport)
#else
#define AIRQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum airq_status {
    AIRQ_OK = 0,
    AIRQ_ERR_PARSE = 1,
    AIRQ_ERR_EMPTY_INPUT = 2,
    AIRQ_ERR_INSUFFICIENT_DATA = 3,
    AIRQ_ERR_WINDOW_RANGE = 4,
    AIRQ_ERR_SHAPE = 5,
    AIRQ_ERR_INVALID_HORIZON = 6,
    AIRQ_ERR_STATIONARITY = 7,
    AIRQ_ERR_NO_MODEL = 8,
    AIRQ_ERR_DIVERGENCE = 9,
    AIRQ_ERR_DEGENERATE_SCALE = 10,
    AIRQ_ERR_STATE = 11,
    AIRQ_ERR_IO = 12,
    AIRQ_ERR_INVALID_ARGUMENT = 13,
    AIRQ_ERR_INTERNAL = 14
} airq_status;

AIRQ_API const char* airq_version(void);
AIRQ_API const char* airq_status_name(airq_status status);
/* Message for the most recent failure on this thread; never NULL. */
AIRQ_API const char* airq_last_error(void);

/* ------------------------------------------------------------------ series */

typedef struct airq_series airq_series;

typedef struct airq_synth_spec {
    long hours;
    double base;
    double diurnal_amp;
    double weekly_amp;
    double ar_coeff;
    double noise_sd;
    double missing_rate;
    uint64_t seed;
    int64_t start_hour;
} airq_synth_spec;

AIRQ_API void airq_synth_spec_init(airq_synth_spec* spec);
AIRQ_API airq_status airq_series_generate(const airq_synth_spec* spec, airq_series** out);

/* ts_col / val_col may be NULL for the defaults "timestamp" / "value". */
AIRQ_API airq_status airq_series_from_csv(const char* path, const char* ts_col,
                                          const char* val_col, airq_series** out);
AIRQ_API airq_status airq_series_from_csv_text(const char* text, size_t len, const char* ts_col,
                                               const char* val_col, airq_series** out);
AIRQ_API airq_status airq_series_write_csv(const airq_series* s, const char* path);

AIRQ_API airq_status airq_series_interpolate(const airq_series* s, airq_series** out);
AIRQ_API size_t airq_series_length(const airq_series* s);
AIRQ_API int64_t airq_series_start_hour(const airq_series* s);
AIRQ_API size_t airq_series_missing(const airq_series* s);
/* present receives 1 when the hour has a value, 0 for a gap. */
AIRQ_API airq_status airq_series_point(const airq_series* s, size_t index, int64_t* hour,
                                       double* value, int* present);
AIRQ_API void airq_series_free(airq_series* s);

/* ----------------------------------------------------------------- methods */

typedef struct airq_method airq_method;

typedef enum airq_es_variant {
    AIRQ_ES_SIMPLE = 0,
    AIRQ_ES_HOLT = 1,
    AIRQ_ES_HOLT_WINTERS = 2
} airq_es_variant;

typedef struct airq_es_config {
    airq_es_variant variant;
    /* smoothing weights; negative = optimize */
    double alpha;
    double beta;
    double gamma;
} airq_es_config;

typedef struct airq_sarima_bounds {
    int p_min, p_max;
    int d_min, d_max;
    int q_min, q_max;
    int P_min, P_max;
    int D_min, D_max;
    int Q_min, Q_max;
} airq_sarima_bounds;

typedef enum airq_lstm_kind {
    AIRQ_LSTM_SIMPLE = 0,
    AIRQ_LSTM_STACKED = 1,
    AIRQ_LSTM_BIDIRECTIONAL = 2,
    AIRQ_LSTM_ENCODER_DECODER = 3
} airq_lstm_kind;

typedef struct airq_lstm_config {
    airq_lstm_kind kind;
    int epochs_max;
    double patience_fraction;
    int validation_hours;
    double dropout;
    double recurrent_dropout;
    int batch_size;
    int stateful;
    int units_coefficient;
    long train_size;
    int window_len;
    double learning_rate;
    uint64_t seed;
    /* 0 = train once per evaluation and slide inputs; 1 = refit per window */
    int retrain_per_window;
} airq_lstm_config;

AIRQ_API void airq_es_config_init(airq_es_config* config);
AIRQ_API void airq_sarima_bounds_init(airq_sarima_bounds* bounds);
AIRQ_API void airq_lstm_config_init(airq_lstm_config* config);

/* config/bounds may be NULL for the defaults. */
AIRQ_API airq_status airq_method_es(const airq_es_config* config, airq_method** out);
AIRQ_API airq_status airq_method_sarima(const airq_sarima_bounds* bounds, airq_method** out);
AIRQ_API airq_status airq_method_lstm(const airq_lstm_config* config, airq_method** out);
AIRQ_API const char* airq_method_name(const airq_method* method);
AIRQ_API void airq_method_free(airq_method* method);

/* Fit on `train`, forecast `horizon` steps into out_values (horizon doubles).
 * build_seconds / predict_seconds may be NULL. */
AIRQ_API airq_status airq_fit_forecast(airq_method* method, const airq_series* train,
                                       int horizon, uint64_t seed, double* out_values,
                                       double* build_seconds, double* predict_seconds);

/* ----------------------------------------------------------------- harness */

typedef struct airq_rolling_spec {
    int train_len;
    int horizon; /* 1..24 */
    int stride;
    int window_count;
    uint64_t seed;
    int jobs;
} airq_rolling_spec;

typedef struct airq_report airq_report;
typedef struct airq_sweep_report airq_sweep_report;
typedef struct airq_compare_result airq_compare_result;

AIRQ_API void airq_rolling_spec_init(airq_rolling_spec* spec);

AIRQ_API airq_status airq_rolling_evaluate(const airq_series* series, airq_method* method,
                                           const airq_rolling_spec* spec, airq_report** out);
AIRQ_API airq_status airq_sweep_run(const airq_series* series, airq_method* method,
                                    const int* candidates, size_t n_candidates,
                                    const airq_rolling_spec* spec, airq_sweep_report** out);
AIRQ_API airq_status airq_compare_run(const airq_series* series, airq_method* const* methods,
                                      size_t n_methods, const airq_rolling_spec* spec,
                                      airq_compare_result** out);

AIRQ_API const char* airq_report_method(const airq_report* report);
AIRQ_API int airq_report_horizon(const airq_report* report);
AIRQ_API double airq_report_rmse(const airq_report* report, int horizon);
AIRQ_API double airq_report_mean_build_seconds(const airq_report* report);
AIRQ_API double airq_report_mean_predict_seconds(const airq_report* report);
AIRQ_API int airq_report_window_count(const airq_report* report);
AIRQ_API void airq_report_free(airq_report* report);

AIRQ_API size_t airq_sweep_rows(const airq_sweep_report* report);
AIRQ_API airq_status airq_sweep_row(const airq_sweep_report* report, size_t index,
                                    int* train_len, double* rmse);
AIRQ_API int airq_sweep_best_train_len(const airq_sweep_report* report);
AIRQ_API airq_status airq_sweep_write_csv(const airq_sweep_report* report, const char* path);
AIRQ_API void airq_sweep_free(airq_sweep_report* report);

AIRQ_API size_t airq_compare_count(const airq_compare_result* result);
/* Borrowed pointer, valid while the compare result lives. */
AIRQ_API const airq_report* airq_compare_report(const airq_compare_result* result,
                                                size_t index);
/* deterministic_timing != 0 writes 0.000 timing columns so repeated runs are
 * byte-identical; measured wall clock otherwise. */
AIRQ_API airq_status airq_compare_write_report_csv(const airq_compare_result* result,
                                                   const char* path, int deterministic_timing);
AIRQ_API airq_status airq_compare_write_plot_csv(const airq_compare_result* result,
                                                 const char* path);
AIRQ_API void airq_compare_free(airq_compare_result* result);

/* ---------------------------------------------------------- LSTM checkpoints */

typedef struct airq_lstm_model airq_lstm_model;

AIRQ_API airq_status airq_lstm_train(const airq_series* series, const airq_lstm_config* config,
                                     airq_lstm_model** out);
AIRQ_API airq_status airq_lstm_save(const airq_lstm_model* model, const char* path);
AIRQ_API airq_status airq_lstm_load(const char* path, airq_lstm_model** out);
AIRQ_API airq_status airq_lstm_predict(const airq_lstm_model* model, const airq_series* recent,
                                       int horizon, double* out_values);
AIRQ_API void airq_lstm_model_free(airq_lstm_model* model);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* AIRQ_H */
