#include "softppg/demod.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "softppg/error.hpp"

namespace softppg {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

DemodulatedSignal empty_track(double dt, double t0, DemodKind kind) {
    DemodulatedSignal out;
    out.dt_s = dt;
    out.t0_s = t0;
    out.kind = kind;
    out.status = DemodStatus::window_exceeds_signal;
    return out;
}

}  // namespace

std::size_t integer_period_samples(double carrier_freq, double sample_rate) {
    return static_cast<std::size_t>(std::llround(sample_rate / carrier_freq));
}

void AmDemodConfig::validate(double sample_rate) const {
    require(carrier_freq > 0.0 && carrier_freq < sample_rate / 2.0, ErrorKind::invalid_config,
            "carrier_freq must lie in (0, sample_rate/2)");
    const double period = sample_rate / carrier_freq;
    require(static_cast<double>(window_len) >= std::floor(period), ErrorKind::invalid_config,
            "window_len " + std::to_string(window_len) + " is shorter than one carrier period");
    if (mode == AmDemodMode::paper_integer_N) {
        const auto n = integer_period_samples(carrier_freq, sample_rate);
        require(window_len % n == 0, ErrorKind::invalid_config,
                "paper_integer_N mode needs window_len to be a multiple of N = " +
                    std::to_string(n));
    }
}

DemodulatedSignal am_demodulate(const SampledSignal& signal, const AmDemodConfig& cfg) {
    const double fs = signal.sample_rate();
    cfg.validate(fs);

    const std::size_t w = cfg.window_len;
    const double dt = static_cast<double>(w) / fs;
    const double t0 = 0.5 * dt;
    if (w > signal.size()) return empty_track(dt, t0, DemodKind::am_envelope);

    const std::size_t n_windows = signal.size() / w;
    const auto n_ref = static_cast<double>(integer_period_samples(cfg.carrier_freq, fs));
    const auto x = signal.samples();

    DemodulatedSignal out;
    out.dt_s = dt;
    out.t0_s = t0;
    out.kind = DemodKind::am_envelope;
    out.values.reserve(n_windows);
    out.gaps.assign(n_windows, false);

    for (std::size_t j = 0; j < n_windows; ++j) {
        double c = 0.0;
        double s = 0.0;
        for (std::size_t k = 0; k < w; ++k) {
            const std::size_t i = j * w + k;
            double theta;
            if (cfg.mode == AmDemodMode::exact_phase) {
                // fmod keeps the argument exact for integral f and fs.
                theta = two_pi * std::fmod(cfg.carrier_freq * static_cast<double>(i), fs) / fs;
            } else {
                theta = two_pi * static_cast<double>(k) / n_ref;
            }
            c += x[i] * std::cos(theta);
            s += x[i] * std::sin(theta);
        }
        c /= static_cast<double>(w);
        s /= static_cast<double>(w);
        out.values.push_back(std::sqrt(c * c + s * s));
    }
    return out;
}

void FmDemodConfig::validate() const {
    require(window_len > 0, ErrorKind::invalid_config, "window_len must be > 0");
    require(std::isfinite(threshold), ErrorKind::invalid_config, "threshold must be finite");
    require(!hysteresis || *hysteresis >= 0.0, ErrorKind::invalid_config,
            "hysteresis must be >= 0");
}

std::vector<double> upward_crossings(std::span<const double> window, const FmDemodConfig& cfg) {
    std::vector<double> crossings;
    if (window.empty()) return crossings;

    double level = cfg.threshold;
    if (cfg.remove_dc) {
        double mean = 0.0;
        for (double v : window) mean += v;
        level += mean / static_cast<double>(window.size());
    }
    double hyst = 0.0;
    if (cfg.hysteresis) {
        hyst = *cfg.hysteresis;
    } else {
        const auto [lo, hi] = std::minmax_element(window.begin(), window.end());
        hyst = default_hysteresis_fraction * (*hi - *lo);
    }

    bool armed = false;
    for (std::size_t i = 0; i < window.size(); ++i) {
        if (i > 0 && armed && window[i - 1] < level && window[i] >= level) {
            double pos = static_cast<double>(i);
            if (cfg.interpolate) {
                pos = static_cast<double>(i - 1) +
                      (level - window[i - 1]) / (window[i] - window[i - 1]);
            }
            crossings.push_back(pos);
            armed = false;
        }
        if (hyst > 0.0 ? window[i] < level - hyst : window[i] < level) armed = true;
    }
    return crossings;
}

DemodulatedSignal fm_demodulate(const SampledSignal& signal, const FmDemodConfig& cfg) {
    cfg.validate();
    const double fs = signal.sample_rate();
    const std::size_t w = cfg.window_len;
    const double dt = static_cast<double>(w) / fs;
    const double t0 = 0.5 * dt;
    if (w > signal.size()) return empty_track(dt, t0, DemodKind::fm_frequency);

    const std::size_t n_windows = signal.size() / w;
    DemodulatedSignal out;
    out.dt_s = dt;
    out.t0_s = t0;
    out.kind = DemodKind::fm_frequency;
    out.values.assign(n_windows, 0.0);
    out.gaps.assign(n_windows, false);

    std::optional<double> last;
    std::optional<std::size_t> first_valid;
    for (std::size_t j = 0; j < n_windows; ++j) {
        const auto crossings = upward_crossings(signal.samples().subspan(j * w, w), cfg);
        if (crossings.size() >= 2) {
            const double span = crossings.back() - crossings.front();
            last = static_cast<double>(crossings.size() - 1) * fs / span;
            out.values[j] = *last;
            if (!first_valid) first_valid = j;
        } else {
            out.gaps[j] = true;
            out.values[j] = last.value_or(0.0);
        }
    }
    // Leading gaps take the first real estimate.
    if (first_valid) {
        for (std::size_t j = 0; j < *first_valid; ++j) out.values[j] = out.values[*first_valid];
    }
    return out;
}

DemodulatedSignal fm_to_amplitude(const DemodulatedSignal& freq_track, const VcoConfig& cfg) {
    require(freq_track.kind == DemodKind::fm_frequency, ErrorKind::invalid_argument,
            "fm_to_amplitude expects an fm_frequency track");
    require(cfg.gain > 0.0, ErrorKind::invalid_config,
            "VCO gain must be > 0 to invert the frequency law");
    DemodulatedSignal out = freq_track;
    out.kind = DemodKind::fm_amplitude;
    for (double& v : out.values) v = (v - cfg.center_freq) / cfg.gain;
    return out;
}

}  // namespace softppg
