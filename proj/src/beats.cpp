#include "softppg/beats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "softppg/conditioning.hpp"
#include "softppg/error.hpp"

namespace softppg {

void BeatDetectorConfig::validate() const {
    require(threshold_ratio > 0.0 && threshold_ratio < 1.0, ErrorKind::invalid_config,
            "threshold_ratio must lie in (0, 1)");
    require(adapt_window_s > 0.0, ErrorKind::invalid_config, "adapt_window must be > 0");
    require(search_interval_s > 0.0, ErrorKind::invalid_config, "search_interval must be > 0");
    require(refractory_s > 0.0, ErrorKind::invalid_config, "refractory must be > 0");
}

DetectorWindows::DetectorWindows(const BeatDetectorConfig& cfg, double dt) {
    cfg.validate();
    require(dt > 0.0, ErrorKind::invalid_argument, "beat detection needs dt > 0");
    adapt = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.adapt_window_s / dt)));
    search = static_cast<std::size_t>(std::llround(cfg.search_interval_s / dt));
    refractory = static_cast<std::size_t>(std::ceil(cfg.refractory_s / dt - 1e-9));
}

namespace {

std::size_t earliest_argmax(std::span<const double> x, std::size_t from, std::size_t to) {
    std::size_t best = from;
    for (std::size_t j = from + 1; j <= to; ++j) {
        if (x[j] > x[best]) best = j;
    }
    return best;
}

// True when a crossing at i falls inside the refractory span of the last beat.
// The crossing may precede that beat (it is on the same upstroke).
bool in_refractory(std::size_t i, const std::optional<std::size_t>& last, std::size_t refractory) {
    return last && (i < *last || i - *last < refractory);
}

}  // namespace

std::vector<std::size_t> detect_beat_indices(std::span<const double> x, double dt,
                                             const BeatDetectorConfig& cfg) {
    const DetectorWindows win(cfg, dt);
    std::vector<std::size_t> beats;
    const std::size_t n = x.size();
    if (n < 3) return beats;

    const auto d = derivative(x, dt);

    // Running max of d: the startup block uses the first full window, later
    // samples a trailing window through a monotonic queue.
    std::vector<double> running_max(n);
    const std::size_t startup = std::min(win.adapt, n);
    const double startup_max = *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(startup));
    std::deque<std::size_t> q;
    for (std::size_t i = 0; i < n; ++i) {
        while (!q.empty() && d[q.back()] <= d[i]) q.pop_back();
        q.push_back(i);
        if (i < win.adapt) {
            running_max[i] = startup_max;
            continue;
        }
        while (q.front() + win.adapt <= i) q.pop_front();
        running_max[i] = d[q.front()];
    }

    std::optional<std::size_t> last;
    for (std::size_t i = 1; i < n; ++i) {
        const double thr_prev = cfg.threshold_ratio * running_max[i - 1];
        const double thr = cfg.threshold_ratio * running_max[i];
        if (!(thr > 0.0 && d[i - 1] < thr_prev && d[i] >= thr)) continue;
        if (in_refractory(i, last, win.refractory)) continue;
        const std::size_t j = earliest_argmax(x, i, std::min(n - 1, i + win.search));
        beats.push_back(j);
        last = j;
    }
    return beats;
}

BeatSeries detect_beats(const DemodulatedSignal& x, const BeatDetectorConfig& cfg) {
    BeatSeries out;
    for (std::size_t j : detect_beat_indices(x.values, x.dt_s, cfg)) out.times_s.push_back(x.time_at(j));
    return out;
}

// ---------------------------------------------------------------------------

StreamingBeatDetector::StreamingBeatDetector(double dt, const BeatDetectorConfig& cfg)
    : dt_(dt), cfg_(cfg), win_(cfg, dt) {}

void StreamingBeatDetector::push_max(std::size_t i, double v) {
    while (!maxq_.empty() && maxq_.back().second <= v) maxq_.pop_back();
    maxq_.emplace_back(i, v);
}

std::vector<std::size_t> StreamingBeatDetector::push(double x) {
    require(!finished_, ErrorKind::invalid_argument, "push after finish");
    xs_.push_back(x);
    ++n_seen_;
    const std::size_t k = n_seen_ - 1;
    if (k == 1) {
        ds_.push_back((x_at(1) - x_at(0)) / dt_);
        ++n_d_;
    } else if (k >= 2) {
        ds_.push_back((x_at(k) - x_at(k - 2)) / (2.0 * dt_));
        ++n_d_;
    }
    std::vector<std::size_t> out;
    advance(false, out);
    return out;
}

std::vector<std::size_t> StreamingBeatDetector::finish() {
    std::vector<std::size_t> out;
    if (finished_) return out;
    finished_ = true;
    if (n_seen_ < 3) return out;
    ds_.push_back((x_at(n_seen_ - 1) - x_at(n_seen_ - 2)) / dt_);
    ++n_d_;
    advance(true, out);
    return out;
}

void StreamingBeatDetector::advance(bool final, std::vector<std::size_t>& out) {
    while (cursor_ < n_d_) {
        const std::size_t i = cursor_;
        if (!startup_max_) {
            if (n_d_ < win_.adapt && !final) return;
            const std::size_t startup = std::min(win_.adapt, n_d_);
            double m = d_at(0);
            for (std::size_t k = 0; k < startup; ++k) {
                m = std::max(m, d_at(k));
                push_max(k, d_at(k));
            }
            startup_max_ = m;
        }
        if (!final && n_seen_ <= i + std::max<std::size_t>(win_.search, 1)) return;

        double running_max = *startup_max_;
        if (i >= win_.adapt) {
            push_max(i, d_at(i));
            while (maxq_.front().first + win_.adapt <= i) maxq_.pop_front();
            running_max = maxq_.front().second;
        }
        const double thr = cfg_.threshold_ratio * running_max;
        const double d = d_at(i);
        if (i >= 1 && thr > 0.0 && prev_d_ < prev_thr_ && d >= thr &&
            !in_refractory(i, last_beat_, win_.refractory)) {
            const std::size_t to = std::min(n_seen_ - 1, i + win_.search);
            std::size_t best = i;
            for (std::size_t j = i + 1; j <= to; ++j) {
                if (x_at(j) > x_at(best)) best = j;
            }
            out.push_back(best);
            last_beat_ = best;
        }
        prev_d_ = d;
        prev_thr_ = thr;
        ++cursor_;

        // Samples before the cursor are never read again, except the startup
        // block which is still needed until the running max has been seeded.
        while (x_base_ + 1 < cursor_ && xs_.size() > 2) {
            xs_.pop_front();
            ++x_base_;
        }
        while (startup_max_ && d_base_ < cursor_ && !ds_.empty()) {
            ds_.pop_front();
            ++d_base_;
        }
    }
}

RrSeries rr_intervals(const BeatSeries& beats) {
    require(beats.size() >= 2, ErrorKind::insufficient_data,
            "insufficient beats: need at least 2, got " + std::to_string(beats.size()));
    RrSeries rr;
    rr.intervals_ms.reserve(beats.size() - 1);
    for (std::size_t i = 0; i + 1 < beats.size(); ++i) {
        const double gap = (beats.times_s[i + 1] - beats.times_s[i]) * 1000.0;
        require(gap > 0.0, ErrorKind::invalid_argument, "beat times must be strictly increasing");
        rr.intervals_ms.push_back(gap);
    }
    return rr;
}

}  // namespace softppg
