#include "core/synth.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace airq {

void SynthSpec::validate() const {
    if (hours < 1) fail(ErrorKind::InvalidArgument, "synth: hours must be >= 1");
    if (!(missing_rate >= 0.0 && missing_rate < 1.0))
        fail(ErrorKind::InvalidArgument, "synth: missing_rate must be in [0, 1)");
    if (!(ar_coeff > -1.0 && ar_coeff < 1.0))
        fail(ErrorKind::InvalidArgument, "synth: ar_coeff must be in (-1, 1)");
    if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd))
        fail(ErrorKind::InvalidArgument, "synth: noise_sd must be finite and >= 0");
    if (!std::isfinite(base) || !std::isfinite(diurnal_amp) || !std::isfinite(weekly_amp))
        fail(ErrorKind::InvalidArgument, "synth: non-finite level or amplitude");
}

TimeSeries generate(const SynthSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    std::vector<std::optional<double>> values;
    values.reserve(static_cast<std::size_t>(spec.hours));

    double e = 0.0;
    for (long t = 0; t < spec.hours; ++t) {
        if (spec.noise_sd > 0.0)
            e = spec.ar_coeff * e + rng.normal(0.0, spec.noise_sd);
        // reduce the phase before sin() so periodicity is exact
        const double diurnal =
            spec.diurnal_amp * std::sin(2.0 * M_PI * static_cast<double>(t % 24) / 24.0);
        const double weekly =
            spec.weekly_amp * std::sin(2.0 * M_PI * static_cast<double>(t % 168) / 168.0);
        const double v = std::max(0.0, spec.base + diurnal + weekly + e);

        if (spec.missing_rate > 0.0 && rng.bernoulli(spec.missing_rate))
            values.emplace_back(std::nullopt);
        else
            values.emplace_back(v);
    }
    return TimeSeries(spec.start_hour, std::move(values), spec.name);
}

}  // namespace airq
