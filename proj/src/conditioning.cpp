#include "softppg/conditioning.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "softppg/error.hpp"

namespace softppg {

void MovingAverageConfig::validate() const {
    require(window >= 1 && window % 2 == 1, ErrorKind::invalid_config,
            "moving average window must be odd and >= 1, got " + std::to_string(window));
}

namespace {

// Mirror an out-of-range index back into [0, n) without repeating the end sample.
std::size_t reflect_index(std::ptrdiff_t i, std::ptrdiff_t n) {
    if (n == 1) return 0;
    const std::ptrdiff_t period = 2 * (n - 1);
    std::ptrdiff_t k = i % period;
    if (k < 0) k += period;
    return static_cast<std::size_t>(k < n ? k : period - k);
}

}  // namespace

std::vector<double> moving_average(std::span<const double> x, const MovingAverageConfig& cfg) {
    cfg.validate();
    require(!x.empty(), ErrorKind::invalid_argument, "moving average of an empty signal");
    if (cfg.window == 1) return {x.begin(), x.end()};

    const auto n = static_cast<std::ptrdiff_t>(x.size());
    const auto half = static_cast<std::ptrdiff_t>(cfg.window / 2);
    std::vector<double> out(x.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double acc = 0.0;
        if (cfg.edge_policy == EdgePolicy::shrink) {
            const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - half);
            const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i + half);
            for (std::ptrdiff_t k = lo; k <= hi; ++k) acc += x[static_cast<std::size_t>(k)];
            out[static_cast<std::size_t>(i)] = acc / static_cast<double>(hi - lo + 1);
        } else {
            for (std::ptrdiff_t k = i - half; k <= i + half; ++k) acc += x[reflect_index(k, n)];
            out[static_cast<std::size_t>(i)] = acc / static_cast<double>(cfg.window);
        }
    }
    return out;
}

DemodulatedSignal moving_average(const DemodulatedSignal& x, const MovingAverageConfig& cfg) {
    DemodulatedSignal out = x;
    out.values = moving_average(std::span<const double>(x.values), cfg);
    return out;
}

SampledSignal moving_average(const SampledSignal& x, const MovingAverageConfig& cfg) {
    return SampledSignal(moving_average(x.samples(), cfg), x.sample_rate());
}

std::vector<double> derivative(std::span<const double> x, double dt) {
    require(x.size() >= 3, ErrorKind::invalid_argument,
            "derivative needs at least 3 values, got " + std::to_string(x.size()));
    require(dt > 0.0, ErrorKind::invalid_argument, "derivative needs dt > 0");
    const std::size_t n = x.size();
    std::vector<double> d(n);
    d[0] = (x[1] - x[0]) / dt;
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (x[i + 1] - x[i - 1]) / (2.0 * dt);
    d[n - 1] = (x[n - 1] - x[n - 2]) / dt;
    return d;
}

DemodulatedSignal derivative(const DemodulatedSignal& x) {
    DemodulatedSignal out = x;
    out.values = derivative(std::span<const double>(x.values), x.dt_s);
    return out;
}

void BandpassConfig::validate(double sample_rate) const {
    require(low_cut > 0.0 && low_cut < high_cut && high_cut < sample_rate / 2.0,
            ErrorKind::invalid_config,
            "bandpass needs 0 < low_cut < high_cut < sample_rate/2");
    require(order >= 1 && order <= 16, ErrorKind::invalid_config,
            "bandpass order must lie in [1, 16]");
}

namespace {

struct FirstOrder {
    double b0, b1, a1;
    double x1 = 0.0, y1 = 0.0;

    double step(double x) {
        const double y = b0 * x + b1 * x1 - a1 * y1;
        x1 = x;
        y1 = y;
        return y;
    }
};

FirstOrder highpass(double fc, double fs) {
    const double k = std::tan(std::numbers::pi * fc / fs);
    const double norm = 1.0 / (1.0 + k);
    return {norm, -norm, (k - 1.0) * norm};
}

FirstOrder lowpass(double fc, double fs) {
    const double k = std::tan(std::numbers::pi * fc / fs);
    const double norm = 1.0 / (1.0 + k);
    return {k * norm, k * norm, (k - 1.0) * norm};
}

}  // namespace

SampledSignal bandpass(const SampledSignal& x, const BandpassConfig& cfg) {
    const double fs = x.sample_rate();
    cfg.validate(fs);

    std::vector<FirstOrder> chain;
    for (int s = 0; s < cfg.order; ++s) {
        chain.push_back(highpass(cfg.low_cut, fs));
        chain.push_back(lowpass(cfg.high_cut, fs));
    }
    std::vector<double> y(x.samples().begin(), x.samples().end());
    for (double& v : y) {
        for (auto& section : chain) v = section.step(v);
    }
    return SampledSignal(std::move(y), fs);
}

}  // namespace softppg
