#pragma once

#include <cstddef>

#include "softppg/series.hpp"

namespace softppg {

// pNN50 denominator. The literal reading divides by the number of RR
// intervals; the common clinical convention divides by the number of
// successive pairs (N - 1).
enum class Pnn50Denominator { total_intervals, successive_pairs };

struct HrvOptions {
    Pnn50Denominator pnn50_denominator = Pnn50Denominator::total_intervals;
    double pnn_threshold_ms = 50.0;  // strict: |diff| > threshold
};

struct HrvReport {
    double mean_pulse_bpm = 0.0;  // 60000 / mean_rr
    double mean_rr_ms = 0.0;
    double sdrr_ms = 0.0;         // population standard deviation
    double pnn50 = 0.0;
    double rmssd_ms = 0.0;
    std::size_t n_intervals = 0;
};

// Throws ErrorKind::insufficient_data for fewer than two intervals.
HrvReport hrv_report(const RrSeries& rr, const HrvOptions& options = {});

}  // namespace softppg
