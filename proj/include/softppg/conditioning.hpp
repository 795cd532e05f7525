#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "softppg/demod.hpp"
#include "softppg/signal.hpp"

namespace softppg {

enum class EdgePolicy {
    shrink,   // average over the values that exist
    reflect,  // mirror padding about the end samples
};

struct MovingAverageConfig {
    std::size_t window = 5;  // odd
    EdgePolicy edge_policy = EdgePolicy::shrink;

    void validate() const;
};

std::vector<double> moving_average(std::span<const double> x, const MovingAverageConfig& cfg);
DemodulatedSignal moving_average(const DemodulatedSignal& x, const MovingAverageConfig& cfg);
SampledSignal moving_average(const SampledSignal& x, const MovingAverageConfig& cfg);

// Central difference, one-sided at both ends. Needs at least three values.
std::vector<double> derivative(std::span<const double> x, double dt);
DemodulatedSignal derivative(const DemodulatedSignal& x);

// `order` cascaded sections, each a first-order high-pass at low_cut followed
// by a first-order low-pass at high_cut, discretised with the bilinear
// transform (cutoffs pre-warped). The high-pass has an exact zero at DC.
//
// With the defaults (1-30 Hz, order 2) at 44.1 kHz the measured response is
// about -0.58 dB at 5 Hz and -48 dB at 500 Hz.
struct BandpassConfig {
    double low_cut = 1.0;
    double high_cut = 30.0;
    int order = 2;

    void validate(double sample_rate) const;
};

SampledSignal bandpass(const SampledSignal& x, const BandpassConfig& cfg);

}  // namespace softppg
