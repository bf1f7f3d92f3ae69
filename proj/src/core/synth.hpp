#pragma once

#include <cstdint>
#include <string>

#include "core/series.hpp"

namespace airq {

/// Synthetic PM2.5-like generator: diurnal + weekly sinusoids over a base
/// level, AR(1) noise, optional missingness. Deterministic per seed.
struct SynthSpec {
    long hours = 24 * 30;
    double base = 30.0;
    double diurnal_amp = 12.0;  // period 24 h
    double weekly_amp = 6.0;    // period 168 h
    double ar_coeff = 0.8;
    double noise_sd = 4.0;
    double missing_rate = 0.0;
    std::uint64_t seed = 0;
    std::int64_t start_hour = 0;
    std::string name = "PM2.5";

    void validate() const;
};

TimeSeries generate(const SynthSpec& spec);

}  // namespace airq
