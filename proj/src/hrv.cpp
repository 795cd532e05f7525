#include "softppg/hrv.hpp"

#include <cmath>
#include <string>

#include "softppg/error.hpp"

namespace softppg {

HrvReport hrv_report(const RrSeries& rr, const HrvOptions& options) {
    const auto& v = rr.intervals_ms;
    require(v.size() >= 2, ErrorKind::insufficient_data,
            "insufficient data: HRV needs at least 2 RR intervals, got " + std::to_string(v.size()));

    const auto n = static_cast<double>(v.size());
    double sum = 0.0;
    for (double r : v) {
        require(std::isfinite(r) && r > 0.0, ErrorKind::invalid_argument,
                "RR intervals must be positive and finite");
        sum += r;
    }
    const double mean = sum / n;

    double ss = 0.0;
    for (double r : v) ss += (r - mean) * (r - mean);

    double diff_ss = 0.0;
    std::size_t over = 0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double diff = v[i + 1] - v[i];
        diff_ss += diff * diff;
        if (std::abs(diff) > options.pnn_threshold_ms) ++over;
    }
    const auto pairs = static_cast<double>(v.size() - 1);
    const double denom = options.pnn50_denominator == Pnn50Denominator::total_intervals ? n : pairs;

    HrvReport report;
    report.mean_rr_ms = mean;
    report.mean_pulse_bpm = 60000.0 / mean;
    report.sdrr_ms = std::sqrt(ss / n);
    report.pnn50 = static_cast<double>(over) / denom;
    report.rmssd_ms = std::sqrt(diff_ss / pairs);
    report.n_intervals = v.size();
    return report;
}

}  // namespace softppg
