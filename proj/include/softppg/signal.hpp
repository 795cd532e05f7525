#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "softppg/series.hpp"

namespace softppg {

// Uniformly sampled real waveform. Construction validates the rate and
// rejects non-finite samples, so every instance is well formed.
class SampledSignal {
public:
    SampledSignal(std::vector<double> samples, double sample_rate);

    std::span<const double> samples() const noexcept { return samples_; }
    double sample_rate() const noexcept { return sample_rate_; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }
    double duration_s() const noexcept {
        return static_cast<double>(samples_.size()) / sample_rate_;
    }
    double operator[](std::size_t i) const { return samples_[i]; }

    bool operator==(const SampledSignal&) const = default;

private:
    std::vector<double> samples_;
    double sample_rate_;
};

// Synthetic pulse train. Each pulse is a bi-exponential
//   p(t) = exp(-t/decay) - exp(-t/rise),  t >= 0
// normalised to unit peak and placed so its maximum falls on the beat instant.
// The steepest slope sits at pulse onset, which is what the derivative
// detector keys on.
struct PpgSynthConfig {
    double mean_rr_ms = 800.0;
    double rr_sd_ms = 0.0;
    int n_beats = 60;
    double pulse_rise_ms = 40.0;    // rise time constant
    double pulse_decay_ms = 250.0;  // decay time constant, must exceed rise
    double amplitude = 1.0;
    double sample_rate = 44100.0;
    std::uint64_t rng_seed = 1;
    double lead_in_ms = 1000.0;  // silence before the first beat instant
    double tail_ms = -1.0;       // after the last beat; negative means mean_rr

    void validate() const;
};

struct SynthResult {
    SampledSignal signal;
    BeatSeries beats;                // ground-truth peak instants
    std::vector<double> drawn_rr_ms; // the n_beats - 1 intervals that were drawn
};

SynthResult synth_ppg(const PpgSynthConfig& config);

// Ideal multiplier: y[i] = (dc + depth * x[i]) * cos(2 pi f i / fs).
struct AmCarrierConfig {
    double carrier_freq = 1000.0;
    double modulation_depth = 0.4;
    double dc_offset = 0.5;

    void validate(double sample_rate) const;
};

SampledSignal am_modulate(const SampledSignal& baseband, const AmCarrierConfig& cfg);

enum class VcoWaveform { square, sine };

// Linear voltage-to-frequency law f = center + gain * x.
struct VcoConfig {
    double center_freq = 5000.0;
    double gain = 2000.0;  // hertz per unit input
    VcoWaveform waveform = VcoWaveform::square;

    void validate(double sample_rate) const;
};

// Phase-continuous VCO. The square wave has one-sample linear edges
// (a two-sample box-filtered ideal square), so the edge instant is encoded
// in the sample values and linear interpolation recovers it exactly.
SampledSignal fm_modulate(const SampledSignal& baseband, const VcoConfig& cfg);

inline constexpr double no_noise = std::numeric_limits<double>::infinity();

// White Gaussian noise rescaled so the realised SNR equals snr_db.
SampledSignal add_noise(const SampledSignal& signal, double snr_db, std::uint64_t rng_seed);

double mean_power(std::span<const double> x);

}  // namespace softppg
