#pragma once

#include <cstddef>
#include <vector>

namespace softppg {

// Beat instants in seconds, strictly increasing.
struct BeatSeries {
    std::vector<double> times_s;

    std::size_t size() const noexcept { return times_s.size(); }
    bool empty() const noexcept { return times_s.empty(); }
};

// Inter-beat (RR) intervals in milliseconds, all positive.
struct RrSeries {
    std::vector<double> intervals_ms;

    std::size_t size() const noexcept { return intervals_ms.size(); }
    bool empty() const noexcept { return intervals_ms.empty(); }
};

}  // namespace softppg
