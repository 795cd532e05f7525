#include "softppg/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "softppg/error.hpp"

namespace softppg {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::string num(double v) { return std::to_string(v); }

}  // namespace

SampledSignal::SampledSignal(std::vector<double> samples, double sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
    require(std::isfinite(sample_rate_) && sample_rate_ > 0.0, ErrorKind::invalid_argument,
            "sample_rate must be positive and finite");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!std::isfinite(samples_[i]))
            fail(ErrorKind::invalid_argument, "non-finite sample at index " + std::to_string(i));
    }
}

double mean_power(std::span<const double> x) {
    if (x.empty()) return 0.0;
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return acc / static_cast<double>(x.size());
}

// ---------------------------------------------------------------------------
// synth_ppg

void PpgSynthConfig::validate() const {
    auto check = [](bool ok, const std::string& msg) { require(ok, ErrorKind::invalid_config, msg); };
    check(mean_rr_ms > 0.0, "mean_rr must be > 0");
    check(rr_sd_ms >= 0.0, "rr_sd must be >= 0");
    check(n_beats >= 1, "n_beats must be >= 1");
    check(pulse_rise_ms > 0.0, "pulse_rise_time must be > 0");
    check(pulse_decay_ms > pulse_rise_ms, "pulse_decay_time must exceed pulse_rise_time");
    check(amplitude > 0.0, "amplitude must be > 0");
    check(sample_rate > 0.0, "sample_rate must be > 0");
    check(lead_in_ms >= 0.0, "lead_in must be >= 0");
    check(pulse_rise_ms < mean_rr_ms, "pulse_rise_time must be < mean_rr");
    check(mean_rr_ms - 5.0 * rr_sd_ms > pulse_rise_ms,
          "pulse does not fit: mean_rr - 5*rr_sd (" + num(mean_rr_ms - 5.0 * rr_sd_ms) +
              " ms) <= pulse_rise_time (" + num(pulse_rise_ms) + " ms)");
}

SynthResult synth_ppg(const PpgSynthConfig& config) {
    config.validate();

    std::mt19937_64 rng(config.rng_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<double> rr;
    rr.reserve(static_cast<std::size_t>(config.n_beats - 1));
    for (int k = 1; k < config.n_beats; ++k) {
        const double z = std::clamp(gauss(rng), -5.0, 5.0);
        rr.push_back(config.mean_rr_ms + config.rr_sd_ms * z);
    }

    std::vector<double> beat_ms;
    beat_ms.reserve(static_cast<std::size_t>(config.n_beats));
    beat_ms.push_back(config.lead_in_ms);
    for (double r : rr) beat_ms.push_back(beat_ms.back() + r);

    const double tail = config.tail_ms < 0.0 ? config.mean_rr_ms : config.tail_ms;
    const double total_s = (beat_ms.back() + tail) / 1000.0;
    const double fs = config.sample_rate;
    const auto n = static_cast<std::size_t>(std::floor(total_s * fs)) + 1;

    const double rise = config.pulse_rise_ms / 1000.0;
    const double decay = config.pulse_decay_ms / 1000.0;
    const double t_peak = rise * decay * std::log(decay / rise) / (decay - rise);
    const double p_peak = std::exp(-t_peak / decay) - std::exp(-t_peak / rise);
    const double support = 12.0 * decay;

    std::vector<double> x(n, 0.0);
    for (double b_ms : beat_ms) {
        const double onset = b_ms / 1000.0 - t_peak;
        const auto first = static_cast<std::size_t>(std::max(0.0, std::ceil(onset * fs)));
        const auto last = std::min(n, static_cast<std::size_t>(std::ceil((onset + support) * fs)));
        for (std::size_t i = first; i < last; ++i) {
            const double t = static_cast<double>(i) / fs - onset;
            if (t < 0.0) continue;
            x[i] += config.amplitude * (std::exp(-t / decay) - std::exp(-t / rise)) / p_peak;
        }
    }

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    for (double& v : x) v -= mean;

    BeatSeries beats;
    beats.times_s.reserve(beat_ms.size());
    for (double b : beat_ms) beats.times_s.push_back(b / 1000.0);

    return SynthResult{SampledSignal(std::move(x), fs), std::move(beats), std::move(rr)};
}

// ---------------------------------------------------------------------------
// AM

void AmCarrierConfig::validate(double sample_rate) const {
    require(carrier_freq > 0.0 && carrier_freq < sample_rate / 2.0, ErrorKind::invalid_config,
            "carrier_freq must lie in (0, sample_rate/2): got " + num(carrier_freq) + " Hz at " +
                num(sample_rate) + " Hz");
    require(modulation_depth > 0.0 && modulation_depth <= 1.0, ErrorKind::invalid_config,
            "modulation_depth must lie in (0, 1]");
}

SampledSignal am_modulate(const SampledSignal& baseband, const AmCarrierConfig& cfg) {
    const double fs = baseband.sample_rate();
    cfg.validate(fs);

    double peak = 0.0;
    for (double v : baseband.samples()) peak = std::max(peak, std::abs(v));
    require(peak <= 1.0, ErrorKind::invalid_argument, "baseband exceeds [-1, 1]");
    require(cfg.dc_offset >= cfg.modulation_depth * peak, ErrorKind::invalid_config,
            "overmodulation: dc_offset " + num(cfg.dc_offset) + " < depth * max|baseband| " +
                num(cfg.modulation_depth * peak));

    std::vector<double> y(baseband.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double envelope = cfg.dc_offset + cfg.modulation_depth * baseband[i];
        const double cycles = std::fmod(cfg.carrier_freq * static_cast<double>(i), fs) / fs;
        y[i] = envelope * std::cos(two_pi * cycles);
    }
    return SampledSignal(std::move(y), fs);
}

// ---------------------------------------------------------------------------
// FM

void VcoConfig::validate(double sample_rate) const {
    require(center_freq > 0.0, ErrorKind::invalid_config, "center_freq must be > 0");
    require(gain >= 0.0, ErrorKind::invalid_config, "gain must be >= 0");
    require(center_freq < sample_rate / 2.0, ErrorKind::invalid_config,
            "center_freq must be below sample_rate/2");
}

namespace {

// Square wave with linear edges one phase step wide on either side of the
// ideal transition (rising at 0, falling at pi).
double trapezoid(double phase, double step) {
    double v;
    if (phase < 0.5 * std::numbers::pi)
        v = phase / step;
    else if (phase < 1.5 * std::numbers::pi)
        v = (std::numbers::pi - phase) / step;
    else
        v = (phase - two_pi) / step;
    return std::clamp(v, -1.0, 1.0);
}

}  // namespace

SampledSignal fm_modulate(const SampledSignal& baseband, const VcoConfig& cfg) {
    const double fs = baseband.sample_rate();
    cfg.validate(fs);
    if (baseband.empty()) return SampledSignal({}, fs);

    const auto [lo, hi] = std::minmax_element(baseband.samples().begin(), baseband.samples().end());
    const double f_max = cfg.center_freq + cfg.gain * *hi;
    const double f_min = cfg.center_freq + cfg.gain * *lo;
    require(f_max < fs / 2.0, ErrorKind::invalid_config,
            "Nyquist violation: peak instantaneous frequency " + num(f_max) + " Hz >= " +
                num(fs / 2.0) + " Hz");
    require(f_min > 0.0, ErrorKind::invalid_config,
            "instantaneous frequency must stay positive: minimum is " + num(f_min) + " Hz");

    std::vector<double> y(baseband.size());
    double phase = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double step = two_pi * (cfg.center_freq + cfg.gain * baseband[i]) / fs;
        y[i] = cfg.waveform == VcoWaveform::sine ? std::sin(phase) : trapezoid(phase, step);
        phase = std::fmod(phase + step, two_pi);
    }
    return SampledSignal(std::move(y), fs);
}

// ---------------------------------------------------------------------------
// noise

SampledSignal add_noise(const SampledSignal& signal, double snr_db, std::uint64_t rng_seed) {
    if (std::isinf(snr_db) && snr_db > 0.0) return signal;
    require(std::isfinite(snr_db), ErrorKind::invalid_argument, "snr_db must be finite or +inf");
    require(!signal.empty(), ErrorKind::invalid_argument, "cannot add noise to an empty signal");
    const double p_signal = mean_power(signal.samples());
    require(p_signal > 0.0, ErrorKind::invalid_argument, "zero-power signal: SNR is undefined");

    std::mt19937_64 rng(rng_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> noise(signal.size());
    for (double& v : noise) v = gauss(rng);

    const double p_target = p_signal / std::pow(10.0, snr_db / 10.0);
    const double p_drawn = mean_power(noise);
    const double scale = p_drawn > 0.0 ? std::sqrt(p_target / p_drawn) : 0.0;

    std::vector<double> y(signal.samples().begin(), signal.samples().end());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += scale * noise[i];
    return SampledSignal(std::move(y), signal.sample_rate());
}

}  // namespace softppg
