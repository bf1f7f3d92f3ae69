#pragma once

#include <memory>
#include <optional>

#include "core/es.hpp"
#include "core/harness.hpp"
#include "core/lstm.hpp"
#include "core/sarima.hpp"

namespace airq {

class EsMethod : public Forecaster {
public:
    explicit EsMethod(EsVariant variant = {}, EsFitOptions options = {})
        : variant_(variant), options_(options) {}

    std::string name() const override { return "ES"; }

    std::vector<double> fit_forecast(const TimeSeries& train, int horizon, std::uint64_t seed,
                                     TimingRecord& timing) override;

private:
    EsVariant variant_;
    EsFitOptions options_;
};

class SarimaMethod : public Forecaster {
public:
    explicit SarimaMethod(SarimaBounds bounds = {}) : bounds_(bounds) {}

    std::string name() const override { return "SARIMA"; }

    std::vector<double> fit_forecast(const TimeSeries& train, int horizon, std::uint64_t seed,
                                     TimingRecord& timing) override;

private:
    SarimaBounds bounds_;
};

/// Default mode trains once on the history before the first rolling origin
/// and slides the input window; retrain_per_window refits inside every
/// window instead.
class LstmMethod : public Forecaster {
public:
    LstmMethod(NetworkConfig config, LstmHyperParams hyper, bool retrain_per_window = false)
        : config_(config), hyper_(hyper), retrain_per_window_(retrain_per_window) {}

    std::string name() const override { return "LSTM"; }

    bool shared_model() const override { return !retrain_per_window_; }
    std::optional<long> shared_history_hours() const override { return hyper_.train_size; }
    void on_training_interval(int hours) override { hyper_.train_size = hours; }

    void build(const TimeSeries& history, std::uint64_t seed, TimingRecord& timing) override;
    std::vector<double> forecast(const TimeSeries& recent, int horizon,
                                 TimingRecord& timing) override;
    std::vector<double> fit_forecast(const TimeSeries& train, int horizon, std::uint64_t seed,
                                     TimingRecord& timing) override;

    const LstmModel* model() const { return model_ ? model_.get() : nullptr; }

private:
    NetworkConfig config_;
    LstmHyperParams hyper_;
    bool retrain_per_window_;
    std::shared_ptr<LstmModel> model_;
};

}  // namespace airq
