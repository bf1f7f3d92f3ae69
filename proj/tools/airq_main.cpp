// airq — forecasting CLI over the shared-library C API.
//
// Subcommands: synth, ingest, sweep, compare. Exit codes: 0 success,
// 2 usage/input error, 3 I/O error, 4 numerical failure.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "airq/airq.h"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

int exit_code_for(airq_status status) {
    switch (status) {
        case AIRQ_OK:
            return kExitOk;
        case AIRQ_ERR_PARSE:
        case AIRQ_ERR_EMPTY_INPUT:
        case AIRQ_ERR_INSUFFICIENT_DATA:
        case AIRQ_ERR_WINDOW_RANGE:
        case AIRQ_ERR_SHAPE:
        case AIRQ_ERR_INVALID_HORIZON:
        case AIRQ_ERR_INVALID_ARGUMENT:
            return kExitUsage;
        case AIRQ_ERR_IO:
            return kExitIo;
        default:
            return kExitNumerical;
    }
}

[[nodiscard]] int report_failure(const char* what, airq_status status) {
    std::fprintf(stderr, "airq: %s: %s (%s)\n", what, airq_last_error(),
                 airq_status_name(status));
    return exit_code_for(status);
}

struct SeriesPtr {
    airq_series* ptr = nullptr;
    ~SeriesPtr() { airq_series_free(ptr); }
};

struct MethodPtr {
    airq_method* ptr = nullptr;
    ~MethodPtr() { airq_method_free(ptr); }
};

struct DataOptions {
    std::string input_path;
    long synth_hours = 0;
    std::string ts_col = "timestamp";
    std::string val_col = "value";
};

struct MethodOptions {
    std::string es_variant = "hw";
    double es_alpha = -1.0, es_beta = -1.0, es_gamma = -1.0;
    airq_sarima_bounds bounds{};
    airq_lstm_config lstm{};
    std::string lstm_kind = "simple";
};

void add_data_flags(CLI::App* cmd, DataOptions& data) {
    auto* input = cmd->add_option("--input", data.input_path, "Input series CSV");
    auto* synth = cmd->add_option("--synth-hours", data.synth_hours,
                                  "Generate a synthetic series of this many hours instead");
    input->excludes(synth);
    synth->excludes(input);
    cmd->add_option("--ts-col", data.ts_col, "Timestamp column name")->capture_default_str();
    cmd->add_option("--val-col", data.val_col, "Value column name")->capture_default_str();
}

void add_method_flags(CLI::App* cmd, MethodOptions& opts) {
    cmd->add_option("--es-variant", opts.es_variant,
                    "ES variant: simple, holt, hw (additive Holt-Winters)")
        ->check(CLI::IsMember({"simple", "holt", "hw"}))
        ->capture_default_str();
    cmd->add_option("--es-alpha", opts.es_alpha, "Pin the ES level weight (default: optimize)");
    cmd->add_option("--es-beta", opts.es_beta, "Pin the ES trend weight");
    cmd->add_option("--es-gamma", opts.es_gamma, "Pin the ES season weight");

    cmd->add_option("--sarima-max-p", opts.bounds.p_max, "Max non-seasonal AR order (<= 6)");
    cmd->add_option("--sarima-max-d", opts.bounds.d_max, "Max differencing order (<= 2)");
    cmd->add_option("--sarima-max-q", opts.bounds.q_max, "Max non-seasonal MA order (<= 5)");
    cmd->add_option("--sarima-max-P", opts.bounds.P_max, "Max seasonal AR order (<= 3)");
    cmd->add_option("--sarima-max-D", opts.bounds.D_max, "Max seasonal differencing (<= 1)");
    cmd->add_option("--sarima-max-Q", opts.bounds.Q_max, "Max seasonal MA order (<= 2)");

    cmd->add_option("--lstm-kind", opts.lstm_kind,
                    "LSTM topology: simple, stacked, bidirectional, encdec")
        ->check(CLI::IsMember({"simple", "stacked", "bidirectional", "encdec"}))
        ->capture_default_str();
    cmd->add_option("--lstm-epochs", opts.lstm.epochs_max, "Max training epochs");
    cmd->add_option("--lstm-patience-fraction", opts.lstm.patience_fraction,
                    "Early-stop patience as a fraction of max epochs");
    cmd->add_option("--lstm-validation-hours", opts.lstm.validation_hours,
                    "Held-out validation hours");
    cmd->add_option("--lstm-dropout", opts.lstm.dropout, "Input dropout rate");
    cmd->add_option("--lstm-recurrent-dropout", opts.lstm.recurrent_dropout,
                    "Recurrent dropout rate");
    cmd->add_option("--lstm-batch", opts.lstm.batch_size, "Batch size");
    cmd->add_option("--lstm-stateful", opts.lstm.stateful, "Carry state across batches (0/1)");
    cmd->add_option("--lstm-units-coeff", opts.lstm.units_coefficient,
                    "Hidden units = coefficient x window length");
    cmd->add_option("--lstm-train-size", opts.lstm.train_size, "Training history in hours");
    cmd->add_option("--lstm-window", opts.lstm.window_len, "Input window length in hours");
    cmd->add_option("--lstm-lr", opts.lstm.learning_rate, "Adam learning rate");
    cmd->add_option("--lstm-retrain", opts.lstm.retrain_per_window,
                    "Refit the LSTM inside every rolling window (0/1)");
}

int load_series(const DataOptions& data, uint64_t seed, double missing_rate, SeriesPtr& out) {
    if (!data.input_path.empty()) {
        airq_series* raw = nullptr;
        const airq_status st = airq_series_from_csv(data.input_path.c_str(),
                                                    data.ts_col.c_str(), data.val_col.c_str(),
                                                    &raw);
        if (st != AIRQ_OK) return report_failure("reading input", st);
        out.ptr = raw;
    } else if (data.synth_hours > 0) {
        airq_synth_spec spec;
        airq_synth_spec_init(&spec);
        spec.hours = data.synth_hours;
        spec.seed = seed;
        spec.missing_rate = missing_rate;
        const airq_status st = airq_series_generate(&spec, &out.ptr);
        if (st != AIRQ_OK) return report_failure("generating series", st);
    } else {
        std::fprintf(stderr, "airq: exactly one data source required "
                             "(--input or --synth-hours)\n");
        return kExitUsage;
    }
    if (airq_series_missing(out.ptr) > 0) {
        airq_series* filled = nullptr;
        const airq_status st = airq_series_interpolate(out.ptr, &filled);
        if (st != AIRQ_OK) return report_failure("repairing gaps", st);
        airq_series_free(out.ptr);
        out.ptr = filled;
    }
    return kExitOk;
}

int ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        std::fprintf(stderr, "airq: cannot create output directory %s: %s\n", dir.c_str(),
                     ec.message().c_str());
        return kExitIo;
    }
    return kExitOk;
}

int make_method(const std::string& token, const MethodOptions& opts, uint64_t seed,
                MethodPtr& out) {
    airq_status st = AIRQ_OK;
    if (token == "es") {
        airq_es_config config;
        airq_es_config_init(&config);
        config.variant = opts.es_variant == "simple" ? AIRQ_ES_SIMPLE
                         : opts.es_variant == "holt" ? AIRQ_ES_HOLT
                                                     : AIRQ_ES_HOLT_WINTERS;
        config.alpha = opts.es_alpha;
        config.beta = opts.es_beta;
        config.gamma = opts.es_gamma;
        st = airq_method_es(&config, &out.ptr);
    } else if (token == "arima" || token == "sarima") {
        st = airq_method_sarima(&opts.bounds, &out.ptr);
    } else if (token == "lstm") {
        airq_lstm_config config = opts.lstm;
        config.kind = opts.lstm_kind == "stacked"         ? AIRQ_LSTM_STACKED
                      : opts.lstm_kind == "bidirectional" ? AIRQ_LSTM_BIDIRECTIONAL
                      : opts.lstm_kind == "encdec"        ? AIRQ_LSTM_ENCODER_DECODER
                                                          : AIRQ_LSTM_SIMPLE;
        config.seed = seed;
        st = airq_method_lstm(&config, &out.ptr);
    } else {
        std::fprintf(stderr, "airq: unknown method '%s' (expected es, arima, lstm)\n",
                     token.c_str());
        return kExitUsage;
    }
    if (st != AIRQ_OK) return report_failure("configuring method", st);
    return kExitOk;
}

std::vector<int> default_candidates(const std::string& token) {
    if (token == "arima" || token == "sarima") return {72, 96, 120, 144, 168, 196, 220};
    return {48, 72, 96, 120, 144, 168, 196};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"airq — short-term air-quality forecasting (ES / SARIMA / LSTM)"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Config file mirroring the flags; flags take precedence");

    std::string out_dir = ".";
    uint64_t seed = 0;
    int jobs = 1;
    app.add_option("--out-dir", out_dir, "Output directory")
        ->capture_default_str()
        ->configurable();
    app.add_option("--seed", seed, "Master seed; all randomness derives from it")
        ->capture_default_str()
        ->configurable();
    app.add_option("--jobs", jobs, "Worker threads for rolling windows")
        ->capture_default_str()
        ->configurable();

    // ---- synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic PM2.5-like series");
    airq_synth_spec synth_spec;
    airq_synth_spec_init(&synth_spec);
    long synth_hours = 720;
    double synth_missing = 0.0;
    synth_cmd->add_option("--hours", synth_hours, "Series length in hours")
        ->capture_default_str();
    synth_cmd->add_option("--base", synth_spec.base, "Mean level")->capture_default_str();
    synth_cmd->add_option("--diurnal-amp", synth_spec.diurnal_amp, "24 h cycle amplitude")
        ->capture_default_str();
    synth_cmd->add_option("--weekly-amp", synth_spec.weekly_amp, "168 h cycle amplitude")
        ->capture_default_str();
    synth_cmd->add_option("--ar", synth_spec.ar_coeff, "AR(1) noise coefficient")
        ->capture_default_str();
    synth_cmd->add_option("--noise-sd", synth_spec.noise_sd, "Innovation std deviation")
        ->capture_default_str();
    synth_cmd->add_option("--missing-rate", synth_missing, "Missing-value probability")
        ->capture_default_str();

    // ---- ingest
    auto* ingest_cmd =
        app.add_subcommand("ingest", "Normalize a CSV onto the hourly grid and fill gaps");
    DataOptions ingest_data;
    ingest_cmd->add_option("--input", ingest_data.input_path, "Input series CSV")->required();
    ingest_cmd->add_option("--ts-col", ingest_data.ts_col, "Timestamp column name")
        ->capture_default_str();
    ingest_cmd->add_option("--val-col", ingest_data.val_col, "Value column name")
        ->capture_default_str();

    // ---- sweep
    auto* sweep_cmd =
        app.add_subcommand("sweep", "RMSE across training-interval lengths (horizon 24)");
    DataOptions sweep_data;
    MethodOptions sweep_method_opts;
    airq_sarima_bounds_init(&sweep_method_opts.bounds);
    airq_lstm_config_init(&sweep_method_opts.lstm);
    std::string sweep_method = "es";
    std::vector<int> sweep_candidates;
    int sweep_windows = 48, sweep_stride = 1;
    add_data_flags(sweep_cmd, sweep_data);
    sweep_cmd->add_option("--method", sweep_method, "Method to sweep: es, arima, lstm")
        ->capture_default_str();
    sweep_cmd->add_option("--candidates", sweep_candidates,
                          "Training-interval candidates in hours (comma separated)")
        ->delimiter(',');
    sweep_cmd->add_option("--windows", sweep_windows, "Rolling windows per candidate")
        ->capture_default_str();
    sweep_cmd->add_option("--stride", sweep_stride, "Origin stride in hours")
        ->capture_default_str();
    add_method_flags(sweep_cmd, sweep_method_opts);

    // ---- compare
    auto* compare_cmd =
        app.add_subcommand("compare", "Per-horizon RMSE and timing for several methods");
    DataOptions compare_data;
    MethodOptions compare_method_opts;
    airq_sarima_bounds_init(&compare_method_opts.bounds);
    airq_lstm_config_init(&compare_method_opts.lstm);
    std::vector<std::string> compare_methods{"es", "arima", "lstm"};
    int cmp_train_len = 120, cmp_horizon = 24, cmp_windows = 48, cmp_stride = 1;
    bool cmp_det_timing = false;
    add_data_flags(compare_cmd, compare_data);
    compare_cmd->add_option("--methods", compare_methods, "Methods to compare")
        ->delimiter(',')
        ->capture_default_str();
    compare_cmd->add_option("--train-len", cmp_train_len, "Training interval in hours")
        ->capture_default_str();
    compare_cmd->add_option("--horizon", cmp_horizon, "Forecast horizon in hours (1..24)")
        ->capture_default_str();
    compare_cmd->add_option("--windows", cmp_windows, "Rolling window count")
        ->capture_default_str();
    compare_cmd->add_option("--stride", cmp_stride, "Origin stride in hours")
        ->capture_default_str();
    compare_cmd->add_flag("--deterministic-timing", cmp_det_timing,
                          "Write 0.000 timing columns so outputs are byte-reproducible");
    add_method_flags(compare_cmd, compare_method_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (app.got_subcommand(synth_cmd)) {
        airq_synth_spec spec = synth_spec;
        spec.hours = synth_hours;
        spec.missing_rate = synth_missing;
        spec.seed = seed;
        SeriesPtr series;
        const airq_status st = airq_series_generate(&spec, &series.ptr);
        if (st != AIRQ_OK) return report_failure("generating series", st);
        if (const int rc = ensure_out_dir(out_dir); rc != kExitOk) return rc;
        const std::string path = (fs::path(out_dir) / "synth.csv").string();
        const airq_status wst = airq_series_write_csv(series.ptr, path.c_str());
        if (wst != AIRQ_OK) return report_failure("writing series", wst);
        std::printf("wrote %zu hours to %s\n", airq_series_length(series.ptr), path.c_str());
        return kExitOk;
    }

    if (app.got_subcommand(ingest_cmd)) {
        SeriesPtr raw;
        const airq_status st =
            airq_series_from_csv(ingest_data.input_path.c_str(), ingest_data.ts_col.c_str(),
                                 ingest_data.val_col.c_str(), &raw.ptr);
        if (st != AIRQ_OK) return report_failure("reading input", st);
        const size_t gaps = airq_series_missing(raw.ptr);
        SeriesPtr filled;
        const airq_status ist = airq_series_interpolate(raw.ptr, &filled.ptr);
        if (ist != AIRQ_OK) return report_failure("filling gaps", ist);
        if (const int rc = ensure_out_dir(out_dir); rc != kExitOk) return rc;
        const std::string path = (fs::path(out_dir) / "normalized.csv").string();
        const airq_status wst = airq_series_write_csv(filled.ptr, path.c_str());
        if (wst != AIRQ_OK) return report_failure("writing series", wst);
        std::printf("filled %zu missing of %zu hours; wrote %s\n", gaps,
                    airq_series_length(filled.ptr), path.c_str());
        return kExitOk;
    }

    if (app.got_subcommand(sweep_cmd)) {
        SeriesPtr series;
        if (const int rc = load_series(sweep_data, seed, 0.0, series); rc != kExitOk) return rc;
        MethodPtr method;
        if (const int rc = make_method(sweep_method, sweep_method_opts, seed, method);
            rc != kExitOk)
            return rc;
        const std::vector<int> candidates =
            sweep_candidates.empty() ? default_candidates(sweep_method) : sweep_candidates;
        airq_rolling_spec spec;
        airq_rolling_spec_init(&spec);
        spec.window_count = sweep_windows;
        spec.stride = sweep_stride;
        spec.seed = seed;
        spec.jobs = jobs;
        airq_sweep_report* sweep = nullptr;
        const airq_status st = airq_sweep_run(series.ptr, method.ptr, candidates.data(),
                                              candidates.size(), &spec, &sweep);
        if (st != AIRQ_OK) return report_failure("running sweep", st);
        if (const int rc = ensure_out_dir(out_dir); rc != kExitOk) {
            airq_sweep_free(sweep);
            return rc;
        }
        const std::string path =
            (fs::path(out_dir) / ("sweep_" + sweep_method + ".csv")).string();
        const airq_status wst = airq_sweep_write_csv(sweep, path.c_str());
        if (wst != AIRQ_OK) {
            airq_sweep_free(sweep);
            return report_failure("writing sweep CSV", wst);
        }
        for (size_t i = 0; i < airq_sweep_rows(sweep); ++i) {
            int train_len = 0;
            double rmse = 0.0;
            airq_sweep_row(sweep, i, &train_len, &rmse);
            std::printf("train_len %4d h  rmse %.4f\n", train_len, rmse);
        }
        std::printf("best training interval: %d h\nwrote %s\n",
                    airq_sweep_best_train_len(sweep), path.c_str());
        airq_sweep_free(sweep);
        return kExitOk;
    }

    if (app.got_subcommand(compare_cmd)) {
        SeriesPtr series;
        if (const int rc = load_series(compare_data, seed, 0.0, series); rc != kExitOk)
            return rc;
        std::vector<MethodPtr> holders(compare_methods.size());
        std::vector<airq_method*> methods;
        for (size_t i = 0; i < compare_methods.size(); ++i) {
            if (const int rc =
                    make_method(compare_methods[i], compare_method_opts, seed, holders[i]);
                rc != kExitOk)
                return rc;
            methods.push_back(holders[i].ptr);
        }
        airq_rolling_spec spec;
        airq_rolling_spec_init(&spec);
        spec.train_len = cmp_train_len;
        spec.horizon = cmp_horizon;
        spec.window_count = cmp_windows;
        spec.stride = cmp_stride;
        spec.seed = seed;
        spec.jobs = jobs;
        airq_compare_result* result = nullptr;
        const airq_status st =
            airq_compare_run(series.ptr, methods.data(), methods.size(), &spec, &result);
        if (st != AIRQ_OK) return report_failure("running comparison", st);
        if (const int rc = ensure_out_dir(out_dir); rc != kExitOk) {
            airq_compare_free(result);
            return rc;
        }
        const std::string report_path = (fs::path(out_dir) / "report.csv").string();
        const std::string plot_path = (fs::path(out_dir) / "plot.csv").string();
        airq_status wst = airq_compare_write_report_csv(result, report_path.c_str(),
                                                        cmp_det_timing ? 1 : 0);
        if (wst == AIRQ_OK) wst = airq_compare_write_plot_csv(result, plot_path.c_str());
        if (wst != AIRQ_OK) {
            airq_compare_free(result);
            return report_failure("writing reports", wst);
        }
        for (size_t i = 0; i < airq_compare_count(result); ++i) {
            const airq_report* r = airq_compare_report(result, i);
            const int horizon = airq_report_horizon(r);
            std::printf("%-7s rmse@1 %.4f  rmse@%d %.4f  build %.3fs  predict %.3fs\n",
                        airq_report_method(r), airq_report_rmse(r, 1), horizon,
                        airq_report_rmse(r, horizon), airq_report_mean_build_seconds(r),
                        airq_report_mean_predict_seconds(r));
        }
        std::printf("wrote %s and %s\n", report_path.c_str(), plot_path.c_str());
        airq_compare_free(result);
        return kExitOk;
    }

    return kExitUsage;
}
