#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "softppg/demod.hpp"
#include "softppg/series.hpp"

namespace softppg {

struct BeatDetectorConfig {
    double threshold_ratio = 0.5;
    double adapt_window_s = 2.0;
    double search_interval_s = 0.3;
    double refractory_s = 0.25;

    void validate() const;
};

// Detector parameters converted to sample counts for a given dt.
struct DetectorWindows {
    std::size_t adapt;       // running-max length, >= 1
    std::size_t search;      // samples examined after a crossing
    std::size_t refractory;  // minimum crossing-to-previous-beat distance

    DetectorWindows(const BeatDetectorConfig& cfg, double dt);
};

// Beat detection over a complete track:
//  1. d = central-difference derivative of x
//  2. threshold[i] = ratio * max(d) over the trailing adapt window; until the
//     window has filled once, the max over the first window is used
//  3. an upward crossing of d through a positive threshold is a rise candidate
//  4. the beat is the earliest argmax of x in [crossing, crossing + search]
//  5. candidates closer than refractory to the previous beat are dropped
// Returns indices into x. Fewer than three values yield no beats.
std::vector<std::size_t> detect_beat_indices(std::span<const double> x, double dt,
                                             const BeatDetectorConfig& cfg);

BeatSeries detect_beats(const DemodulatedSignal& x, const BeatDetectorConfig& cfg);

// Incremental form of detect_beat_indices. Feeding a track sample by sample
// and calling finish() yields exactly the batch result. Beats are released
// once the search interval after their crossing has been seen, and nothing is
// released until the first adapt window has filled.
class StreamingBeatDetector {
public:
    StreamingBeatDetector(double dt, const BeatDetectorConfig& cfg);

    std::vector<std::size_t> push(double x);
    std::vector<std::size_t> finish();

private:
    void advance(bool final, std::vector<std::size_t>& out);
    double x_at(std::size_t i) const { return xs_[i - x_base_]; }
    double d_at(std::size_t i) const { return ds_[i - d_base_]; }
    void push_max(std::size_t i, double v);

    double dt_;
    BeatDetectorConfig cfg_;
    DetectorWindows win_;

    std::deque<double> xs_;
    std::size_t x_base_ = 0;
    std::size_t n_seen_ = 0;

    std::deque<double> ds_;
    std::size_t d_base_ = 0;
    std::size_t n_d_ = 0;

    std::deque<std::pair<std::size_t, double>> maxq_;
    std::optional<double> startup_max_;
    std::size_t cursor_ = 0;
    double prev_d_ = 0.0;
    double prev_thr_ = 0.0;
    std::optional<std::size_t> last_beat_;
    bool finished_ = false;
};

// intervals[i] = (t[i+1] - t[i]) in milliseconds. Needs at least two beats.
RrSeries rr_intervals(const BeatSeries& beats);

}  // namespace softppg
