#include "airq/airq.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "core/csv.hpp"
#include "core/errors.hpp"
#include "core/harness.hpp"
#include "core/lstm.hpp"
#include "core/methods.hpp"
#include "core/synth.hpp"

struct airq_series {
    airq::TimeSeries ts;
};

struct airq_method {
    std::unique_ptr<airq::Forecaster> impl;
};

struct airq_report {
    airq::RollingReport report;
};

struct airq_sweep_report {
    airq::SweepReport report;
};

struct airq_compare_result {
    std::vector<airq_report> reports;
};

struct airq_lstm_model {
    airq::LstmModel model;
};

namespace {

thread_local std::string g_last_error;

airq_status kind_to_status(airq::ErrorKind kind) {
    using airq::ErrorKind;
    switch (kind) {
        case ErrorKind::Parse: return AIRQ_ERR_PARSE;
        case ErrorKind::EmptyInput: return AIRQ_ERR_EMPTY_INPUT;
        case ErrorKind::InsufficientData: return AIRQ_ERR_INSUFFICIENT_DATA;
        case ErrorKind::WindowOutOfRange: return AIRQ_ERR_WINDOW_RANGE;
        case ErrorKind::Shape: return AIRQ_ERR_SHAPE;
        case ErrorKind::InvalidHorizon: return AIRQ_ERR_INVALID_HORIZON;
        case ErrorKind::Stationarity: return AIRQ_ERR_STATIONARITY;
        case ErrorKind::NoModel: return AIRQ_ERR_NO_MODEL;
        case ErrorKind::Divergence: return AIRQ_ERR_DIVERGENCE;
        case ErrorKind::DegenerateScale: return AIRQ_ERR_DEGENERATE_SCALE;
        case ErrorKind::State: return AIRQ_ERR_STATE;
        case ErrorKind::Io: return AIRQ_ERR_IO;
        case ErrorKind::InvalidArgument: return AIRQ_ERR_INVALID_ARGUMENT;
    }
    return AIRQ_ERR_INTERNAL;
}

template <typename Fn>
airq_status guarded(Fn&& fn) {
    try {
        fn();
        return AIRQ_OK;
    } catch (const airq::Error& e) {
        g_last_error = e.what();
        return kind_to_status(e.kind());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return AIRQ_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return AIRQ_ERR_INTERNAL;
    }
}

airq_status invalid_arg(const char* msg) {
    g_last_error = msg;
    return AIRQ_ERR_INVALID_ARGUMENT;
}

airq::SynthSpec to_core(const airq_synth_spec& c) {
    airq::SynthSpec s;
    s.hours = c.hours;
    s.base = c.base;
    s.diurnal_amp = c.diurnal_amp;
    s.weekly_amp = c.weekly_amp;
    s.ar_coeff = c.ar_coeff;
    s.noise_sd = c.noise_sd;
    s.missing_rate = c.missing_rate;
    s.seed = c.seed;
    s.start_hour = c.start_hour;
    return s;
}

airq::LstmHyperParams to_core_hyper(const airq_lstm_config& c) {
    airq::LstmHyperParams h;
    h.epochs_max = c.epochs_max;
    h.patience_fraction = c.patience_fraction;
    h.validation_hours = c.validation_hours;
    h.dropout = c.dropout;
    h.recurrent_dropout = c.recurrent_dropout;
    h.batch_size = c.batch_size;
    h.stateful = c.stateful != 0;
    h.units_coefficient = c.units_coefficient;
    h.train_size = c.train_size;
    h.window_len = c.window_len;
    h.learning_rate = c.learning_rate;
    h.seed = c.seed;
    return h;
}

airq::NetworkConfig to_core_network(const airq_lstm_config& c) {
    airq::NetworkConfig n;
    switch (c.kind) {
        case AIRQ_LSTM_SIMPLE: n.kind = airq::LstmKind::Simple; break;
        case AIRQ_LSTM_STACKED: n.kind = airq::LstmKind::Stacked; break;
        case AIRQ_LSTM_BIDIRECTIONAL: n.kind = airq::LstmKind::Bidirectional; break;
        case AIRQ_LSTM_ENCODER_DECODER: n.kind = airq::LstmKind::EncoderDecoder; break;
        default: airq::fail(airq::ErrorKind::InvalidArgument, "unknown LSTM kind");
    }
    return n;
}

airq::RollingSpec to_core(const airq_rolling_spec& c) {
    airq::RollingSpec s;
    s.train_len = c.train_len;
    s.horizon = c.horizon;
    s.stride = c.stride;
    s.window_count = c.window_count;
    s.seed = c.seed;
    s.jobs = c.jobs;
    return s;
}

}  // namespace

const char* airq_version(void) { return "1.0.0"; }

const char* airq_status_name(airq_status status) {
    switch (status) {
        case AIRQ_OK: return "ok";
        case AIRQ_ERR_PARSE: return "parse-error";
        case AIRQ_ERR_EMPTY_INPUT: return "empty-input";
        case AIRQ_ERR_INSUFFICIENT_DATA: return "insufficient-data";
        case AIRQ_ERR_WINDOW_RANGE: return "window-out-of-range";
        case AIRQ_ERR_SHAPE: return "shape-error";
        case AIRQ_ERR_INVALID_HORIZON: return "invalid-horizon";
        case AIRQ_ERR_STATIONARITY: return "stationarity-error";
        case AIRQ_ERR_NO_MODEL: return "no-model";
        case AIRQ_ERR_DIVERGENCE: return "divergence";
        case AIRQ_ERR_DEGENERATE_SCALE: return "degenerate-scale";
        case AIRQ_ERR_STATE: return "state-error";
        case AIRQ_ERR_IO: return "io-error";
        case AIRQ_ERR_INVALID_ARGUMENT: return "invalid-argument";
        case AIRQ_ERR_INTERNAL: return "internal-error";
    }
    return "unknown";
}

const char* airq_last_error(void) { return g_last_error.c_str(); }

/* ---------------------------------------------------------------- series */

void airq_synth_spec_init(airq_synth_spec* spec) {
    if (!spec) return;
    const airq::SynthSpec d;
    spec->hours = d.hours;
    spec->base = d.base;
    spec->diurnal_amp = d.diurnal_amp;
    spec->weekly_amp = d.weekly_amp;
    spec->ar_coeff = d.ar_coeff;
    spec->noise_sd = d.noise_sd;
    spec->missing_rate = d.missing_rate;
    spec->seed = d.seed;
    spec->start_hour = d.start_hour;
}

airq_status airq_series_generate(const airq_synth_spec* spec, airq_series** out) {
    if (!spec || !out) return invalid_arg("airq_series_generate: NULL argument");
    return guarded([&] { *out = new airq_series{airq::generate(to_core(*spec))}; });
}

airq_status airq_series_from_csv(const char* path, const char* ts_col, const char* val_col,
                                 airq_series** out) {
    if (!path || !out) return invalid_arg("airq_series_from_csv: NULL argument");
    return guarded([&] {
        *out = new airq_series{airq::ingest_csv_file(path, ts_col ? ts_col : "timestamp",
                                                     val_col ? val_col : "value")};
    });
}

airq_status airq_series_from_csv_text(const char* text, size_t len, const char* ts_col,
                                      const char* val_col, airq_series** out) {
    if (!text || !out) return invalid_arg("airq_series_from_csv_text: NULL argument");
    return guarded([&] {
        std::istringstream in(std::string(text, len));
        *out = new airq_series{airq::ingest_csv(in, ts_col ? ts_col : "timestamp",
                                                val_col ? val_col : "value")};
    });
}

airq_status airq_series_write_csv(const airq_series* s, const char* path) {
    if (!s || !path) return invalid_arg("airq_series_write_csv: NULL argument");
    return guarded([&] { airq::write_csv_file(s->ts, path); });
}

airq_status airq_series_interpolate(const airq_series* s, airq_series** out) {
    if (!s || !out) return invalid_arg("airq_series_interpolate: NULL argument");
    return guarded([&] { *out = new airq_series{airq::interpolate_missing(s->ts)}; });
}

size_t airq_series_length(const airq_series* s) { return s ? s->ts.size() : 0; }

int64_t airq_series_start_hour(const airq_series* s) { return s ? s->ts.start_hour() : 0; }

size_t airq_series_missing(const airq_series* s) { return s ? s->ts.missing_count() : 0; }

airq_status airq_series_point(const airq_series* s, size_t index, int64_t* hour, double* value,
                              int* present) {
    if (!s) return invalid_arg("airq_series_point: NULL series");
    if (index >= s->ts.size()) return invalid_arg("airq_series_point: index out of range");
    if (hour) *hour = s->ts.hour_at(index);
    const auto& v = s->ts.at(index);
    if (present) *present = v.has_value() ? 1 : 0;
    if (value) *value = v.value_or(0.0);
    return AIRQ_OK;
}

void airq_series_free(airq_series* s) { delete s; }

/* --------------------------------------------------------------- methods */

void airq_es_config_init(airq_es_config* config) {
    if (!config) return;
    config->variant = AIRQ_ES_HOLT_WINTERS;
    config->alpha = -1.0;
    config->beta = -1.0;
    config->gamma = -1.0;
}

void airq_sarima_bounds_init(airq_sarima_bounds* bounds) {
    if (!bounds) return;
    const airq::SarimaBounds d;
    bounds->p_min = d.p_min;
    bounds->p_max = d.p_max;
    bounds->d_min = d.d_min;
    bounds->d_max = d.d_max;
    bounds->q_min = d.q_min;
    bounds->q_max = d.q_max;
    bounds->P_min = d.P_min;
    bounds->P_max = d.P_max;
    bounds->D_min = d.D_min;
    bounds->D_max = d.D_max;
    bounds->Q_min = d.Q_min;
    bounds->Q_max = d.Q_max;
}

void airq_lstm_config_init(airq_lstm_config* config) {
    if (!config) return;
    const airq::LstmHyperParams d;
    config->kind = AIRQ_LSTM_SIMPLE;
    config->epochs_max = d.epochs_max;
    config->patience_fraction = d.patience_fraction;
    config->validation_hours = d.validation_hours;
    config->dropout = d.dropout;
    config->recurrent_dropout = d.recurrent_dropout;
    config->batch_size = d.batch_size;
    config->stateful = d.stateful ? 1 : 0;
    config->units_coefficient = d.units_coefficient;
    config->train_size = d.train_size;
    config->window_len = d.window_len;
    config->learning_rate = d.learning_rate;
    config->seed = d.seed;
    config->retrain_per_window = 0;
}

airq_status airq_method_es(const airq_es_config* config, airq_method** out) {
    if (!out) return invalid_arg("airq_method_es: NULL out");
    airq_es_config def;
    airq_es_config_init(&def);
    const airq_es_config& c = config ? *config : def;
    return guarded([&] {
        airq::EsVariant variant;
        switch (c.variant) {
            case AIRQ_ES_SIMPLE: variant.kind = airq::EsKind::Simple; break;
            case AIRQ_ES_HOLT: variant.kind = airq::EsKind::Holt; break;
            case AIRQ_ES_HOLT_WINTERS: variant.kind = airq::EsKind::HoltWintersAdditive; break;
            default: airq::fail(airq::ErrorKind::InvalidArgument, "unknown ES variant");
        }
        airq::EsFitOptions options;
        if (c.alpha >= 0.0) options.alpha = c.alpha;
        if (c.beta >= 0.0) options.beta = c.beta;
        if (c.gamma >= 0.0) options.gamma = c.gamma;
        *out = new airq_method{std::make_unique<airq::EsMethod>(variant, options)};
    });
}

airq_status airq_method_sarima(const airq_sarima_bounds* bounds, airq_method** out) {
    if (!out) return invalid_arg("airq_method_sarima: NULL out");
    return guarded([&] {
        airq::SarimaBounds b;
        if (bounds) {
            b.p_min = bounds->p_min;
            b.p_max = bounds->p_max;
            b.d_min = bounds->d_min;
            b.d_max = bounds->d_max;
            b.q_min = bounds->q_min;
            b.q_max = bounds->q_max;
            b.P_min = bounds->P_min;
            b.P_max = bounds->P_max;
            b.D_min = bounds->D_min;
            b.D_max = bounds->D_max;
            b.Q_min = bounds->Q_min;
            b.Q_max = bounds->Q_max;
        }
        b.validate();
        *out = new airq_method{std::make_unique<airq::SarimaMethod>(b)};
    });
}

airq_status airq_method_lstm(const airq_lstm_config* config, airq_method** out) {
    if (!out) return invalid_arg("airq_method_lstm: NULL out");
    airq_lstm_config def;
    airq_lstm_config_init(&def);
    const airq_lstm_config& c = config ? *config : def;
    return guarded([&] {
        auto hyper = to_core_hyper(c);
        hyper.validate();
        *out = new airq_method{std::make_unique<airq::LstmMethod>(
            to_core_network(c), hyper, c.retrain_per_window != 0)};
    });
}

const char* airq_method_name(const airq_method* method) {
    return method ? method->impl->name().c_str() : "";
}

void airq_method_free(airq_method* method) { delete method; }

airq_status airq_fit_forecast(airq_method* method, const airq_series* train, int horizon,
                              uint64_t seed, double* out_values, double* build_seconds,
                              double* predict_seconds) {
    if (!method || !train || !out_values)
        return invalid_arg("airq_fit_forecast: NULL argument");
    return guarded([&] {
        airq::TimingRecord timing;
        const auto values = method->impl->fit_forecast(train->ts, horizon, seed, timing);
        std::memcpy(out_values, values.data(), values.size() * sizeof(double));
        if (build_seconds) *build_seconds = timing.build_seconds;
        if (predict_seconds) *predict_seconds = timing.predict_seconds;
    });
}

/* --------------------------------------------------------------- harness */

void airq_rolling_spec_init(airq_rolling_spec* spec) {
    if (!spec) return;
    const airq::RollingSpec d;
    spec->train_len = d.train_len;
    spec->horizon = d.horizon;
    spec->stride = d.stride;
    spec->window_count = d.window_count;
    spec->seed = d.seed;
    spec->jobs = d.jobs;
}

airq_status airq_rolling_evaluate(const airq_series* series, airq_method* method,
                                  const airq_rolling_spec* spec, airq_report** out) {
    if (!series || !method || !spec || !out)
        return invalid_arg("airq_rolling_evaluate: NULL argument");
    return guarded([&] {
        *out = new airq_report{
            airq::rolling_evaluate(series->ts, *method->impl, to_core(*spec))};
    });
}

airq_status airq_sweep_run(const airq_series* series, airq_method* method,
                           const int* candidates, size_t n_candidates,
                           const airq_rolling_spec* spec, airq_sweep_report** out) {
    if (!series || !method || !spec || !out || (!candidates && n_candidates > 0))
        return invalid_arg("airq_sweep_run: NULL argument");
    return guarded([&] {
        *out = new airq_sweep_report{airq::sweep_training_interval(
            series->ts, *method->impl, std::span(candidates, n_candidates), to_core(*spec))};
    });
}

airq_status airq_compare_run(const airq_series* series, airq_method* const* methods,
                             size_t n_methods, const airq_rolling_spec* spec,
                             airq_compare_result** out) {
    if (!series || !methods || n_methods == 0 || !spec || !out)
        return invalid_arg("airq_compare_run: NULL argument");
    return guarded([&] {
        std::vector<airq::Forecaster*> impls;
        impls.reserve(n_methods);
        for (size_t i = 0; i < n_methods; ++i) {
            if (!methods[i])
                airq::fail(airq::ErrorKind::InvalidArgument, "airq_compare_run: NULL method");
            impls.push_back(methods[i]->impl.get());
        }
        auto result = airq::compare_methods(series->ts, impls, to_core(*spec));
        auto* cr = new airq_compare_result;
        cr->reports.reserve(result.reports.size());
        for (auto& r : result.reports) cr->reports.push_back(airq_report{std::move(r)});
        *out = cr;
    });
}

const char* airq_report_method(const airq_report* report) {
    return report ? report->report.method.c_str() : "";
}

int airq_report_horizon(const airq_report* report) {
    return report ? static_cast<int>(report->report.per_horizon_rmse.size()) : 0;
}

double airq_report_rmse(const airq_report* report, int horizon) {
    if (!report || horizon < 1 ||
        static_cast<size_t>(horizon) > report->report.per_horizon_rmse.size())
        return -1.0;
    return report->report.per_horizon_rmse[static_cast<size_t>(horizon - 1)];
}

double airq_report_mean_build_seconds(const airq_report* report) {
    return report ? report->report.mean_build_seconds : 0.0;
}

double airq_report_mean_predict_seconds(const airq_report* report) {
    return report ? report->report.mean_predict_seconds : 0.0;
}

int airq_report_window_count(const airq_report* report) {
    return report ? report->report.window_count : 0;
}

void airq_report_free(airq_report* report) { delete report; }

size_t airq_sweep_rows(const airq_sweep_report* report) {
    return report ? report->report.rows.size() : 0;
}

airq_status airq_sweep_row(const airq_sweep_report* report, size_t index, int* train_len,
                           double* rmse) {
    if (!report) return invalid_arg("airq_sweep_row: NULL report");
    if (index >= report->report.rows.size())
        return invalid_arg("airq_sweep_row: index out of range");
    if (train_len) *train_len = report->report.rows[index].train_len;
    if (rmse) *rmse = report->report.rows[index].rmse;
    return AIRQ_OK;
}

int airq_sweep_best_train_len(const airq_sweep_report* report) {
    return report ? report->report.best_train_len : 0;
}

airq_status airq_sweep_write_csv(const airq_sweep_report* report, const char* path) {
    if (!report || !path) return invalid_arg("airq_sweep_write_csv: NULL argument");
    return guarded([&] {
        std::ofstream out(path);
        if (!out) airq::fail(airq::ErrorKind::Io, std::string("cannot write ") + path);
        airq::write_sweep_csv(report->report, out);
        out.flush();
        if (!out) airq::fail(airq::ErrorKind::Io, std::string("write failed for ") + path);
    });
}

void airq_sweep_free(airq_sweep_report* report) { delete report; }

size_t airq_compare_count(const airq_compare_result* result) {
    return result ? result->reports.size() : 0;
}

const airq_report* airq_compare_report(const airq_compare_result* result, size_t index) {
    if (!result || index >= result->reports.size()) return nullptr;
    return &result->reports[index];
}

namespace {

airq_status write_compare_csv(const airq_compare_result* result, const char* path,
                              bool plot, bool deterministic_timing) {
    if (!result || !path) return invalid_arg("compare CSV: NULL argument");
    return guarded([&] {
        std::vector<airq::RollingReport> reports;
        reports.reserve(result->reports.size());
        for (const auto& r : result->reports) reports.push_back(r.report);
        std::ofstream out(path);
        if (!out) airq::fail(airq::ErrorKind::Io, std::string("cannot write ") + path);
        if (plot)
            airq::write_plot_csv(reports, out);
        else
            airq::write_report_csv(reports, out, deterministic_timing);
        out.flush();
        if (!out) airq::fail(airq::ErrorKind::Io, std::string("write failed for ") + path);
    });
}

}  // namespace

airq_status airq_compare_write_report_csv(const airq_compare_result* result, const char* path,
                                          int deterministic_timing) {
    return write_compare_csv(result, path, false, deterministic_timing != 0);
}

airq_status airq_compare_write_plot_csv(const airq_compare_result* result, const char* path) {
    return write_compare_csv(result, path, true, false);
}

void airq_compare_free(airq_compare_result* result) { delete result; }

/* ------------------------------------------------------- LSTM checkpoints */

airq_status airq_lstm_train(const airq_series* series, const airq_lstm_config* config,
                            airq_lstm_model** out) {
    if (!series || !out) return invalid_arg("airq_lstm_train: NULL argument");
    airq_lstm_config def;
    airq_lstm_config_init(&def);
    const airq_lstm_config& c = config ? *config : def;
    return guarded([&] {
        *out = new airq_lstm_model{
            airq::train_lstm(series->ts, to_core_network(c), to_core_hyper(c))};
    });
}

airq_status airq_lstm_save(const airq_lstm_model* model, const char* path) {
    if (!model || !path) return invalid_arg("airq_lstm_save: NULL argument");
    return guarded([&] { airq::save_lstm(model->model, path); });
}

airq_status airq_lstm_load(const char* path, airq_lstm_model** out) {
    if (!path || !out) return invalid_arg("airq_lstm_load: NULL argument");
    return guarded([&] { *out = new airq_lstm_model{airq::load_lstm(path)}; });
}

airq_status airq_lstm_predict(const airq_lstm_model* model, const airq_series* recent,
                              int horizon, double* out_values) {
    if (!model || !recent || !out_values) return invalid_arg("airq_lstm_predict: NULL argument");
    return guarded([&] {
        const auto values = airq::forecast_lstm(model->model, recent->ts, horizon);
        std::memcpy(out_values, values.data(), values.size() * sizeof(double));
    });
}

void airq_lstm_model_free(airq_lstm_model* model) { delete model; }
