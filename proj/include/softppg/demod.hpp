#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "softppg/signal.hpp"

namespace softppg {

enum class DemodKind { am_envelope, fm_frequency, fm_amplitude };

enum class DemodStatus {
    ok,
    window_exceeds_signal,  // no complete window; values is empty
};

// Low-rate track produced by a demodulator, one value per window.
// Value j describes window j and is stamped at the window centre.
struct DemodulatedSignal {
    std::vector<double> values;
    double dt_s = 0.0;
    double t0_s = 0.0;
    DemodKind kind = DemodKind::am_envelope;
    std::vector<bool> gaps;  // true where no estimate existed and one was carried over
    DemodStatus status = DemodStatus::ok;

    std::size_t size() const noexcept { return values.size(); }
    bool empty() const noexcept { return values.empty(); }
    double time_at(std::size_t j) const noexcept {
        return t0_s + static_cast<double>(j) * dt_s;
    }
};

enum class AmDemodMode {
    exact_phase,      // reference at the true carrier frequency, global sample index
    paper_integer_N,  // reference period rounded to N = round(fs/f) samples
};

struct AmDemodConfig {
    double carrier_freq = 1000.0;
    std::size_t window_len = 441;
    AmDemodMode mode = AmDemodMode::exact_phase;

    void validate(double sample_rate) const;
};

// Samples per reference period in paper_integer_N mode.
std::size_t integer_period_samples(double carrier_freq, double sample_rate);

// Fourier amplitude per non-overlapping window:
//   a_j = sqrt(C^2 + S^2),  C = (1/W) sum x_i cos(theta_i),  S = (1/W) sum x_i sin(theta_i)
// For x_i = A cos(theta_i) over whole periods, a_j = A/2.
DemodulatedSignal am_demodulate(const SampledSignal& signal, const AmDemodConfig& cfg);

struct FmDemodConfig {
    std::size_t window_len = 441;
    double threshold = 0.0;             // level relative to the window mean when remove_dc
    bool remove_dc = true;
    std::optional<double> hysteresis;   // unset: 2% of the window peak-to-peak
    bool interpolate = true;

    void validate() const;
};

inline constexpr double default_hysteresis_fraction = 0.02;

// Upward level-crossing positions (fractional sample index, window-local)
// found in one window. Exposed for tests and diagnostics.
std::vector<double> upward_crossings(std::span<const double> window, const FmDemodConfig& cfg);

// Per window: u upward crossings, t from first to last, f = (u - 1) / t.
// Windows with u <= 1 carry the previous estimate forward and are flagged.
DemodulatedSignal fm_demodulate(const SampledSignal& signal, const FmDemodConfig& cfg);

// Inverts the VCO law: x = (f - center) / gain.
DemodulatedSignal fm_to_amplitude(const DemodulatedSignal& freq_track, const VcoConfig& cfg);

}  // namespace softppg
