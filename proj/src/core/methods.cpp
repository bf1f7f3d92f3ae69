#include "core/methods.hpp"

#include "core/errors.hpp"

namespace airq {

std::vector<double> EsMethod::fit_forecast(const TimeSeries& train, int horizon,
                                           std::uint64_t /*seed*/, TimingRecord& timing) {
    Stopwatch watch;
    const EsModel model = fit_es(train, variant_, options_);
    timing.build_seconds = watch.seconds();
    watch.reset();
    auto out = forecast_es(model, horizon);
    timing.predict_seconds = watch.seconds();
    return out;
}

std::vector<double> SarimaMethod::fit_forecast(const TimeSeries& train, int horizon,
                                               std::uint64_t /*seed*/, TimingRecord& timing) {
    Stopwatch watch;
    const GridSearchResult search = grid_search(train, bounds_);
    timing.build_seconds = watch.seconds();
    watch.reset();
    auto out = forecast_sarima(search.best, horizon);
    timing.predict_seconds = watch.seconds();
    return out;
}

void LstmMethod::build(const TimeSeries& history, std::uint64_t seed, TimingRecord& timing) {
    LstmHyperParams hyper = hyper_;
    hyper.seed = seed;
    Stopwatch watch;
    model_ = std::make_shared<LstmModel>(train_lstm(history, config_, hyper));
    timing.build_seconds = watch.seconds();
}

std::vector<double> LstmMethod::forecast(const TimeSeries& recent, int horizon,
                                         TimingRecord& timing) {
    if (!model_) fail(ErrorKind::State, "LstmMethod: forecast before build");
    Stopwatch watch;
    auto out = forecast_lstm(*model_, recent, horizon);
    timing.predict_seconds = watch.seconds();
    return out;
}

std::vector<double> LstmMethod::fit_forecast(const TimeSeries& train, int horizon,
                                             std::uint64_t seed, TimingRecord& timing) {
    LstmHyperParams hyper = hyper_;
    hyper.seed = seed;
    Stopwatch watch;
    const LstmModel model = train_lstm(train, config_, hyper);
    timing.build_seconds = watch.seconds();
    watch.reset();
    auto out = forecast_lstm(model, train, horizon);
    timing.predict_seconds = watch.seconds();
    return out;
}

}  // namespace airq
