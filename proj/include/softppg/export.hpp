#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "softppg/demod.hpp"
#include "softppg/errormodel.hpp"
#include "softppg/hrv.hpp"
#include "softppg/series.hpp"

namespace softppg {

// Shortest decimal form that round-trips to the same double, '.' separator.
std::string format_number(double v);

// window_index,time_s,value
void write_demod_csv(std::ostream& out, const DemodulatedSignal& track);
// beat_index,time_s
void write_beats_csv(std::ostream& out, const BeatSeries& beats);

// dt is recovered from the time column as (t_last - t_first) / (n - 1);
// at least two rows are needed.
DemodulatedSignal read_demod_csv(std::istream& in);
BeatSeries read_beats_csv(std::istream& in);

struct ErrorTableRow {
    double sigma_rr_ms;
    double dt_ms;
    std::size_t n;
    double measured_ms;
    double predicted_ms;
    double first_order_error;
};

// sigma_rr,dt,n,measured,predicted,first_order_error
void write_error_table_csv(std::ostream& out, const std::vector<ErrorTableRow>& rows);

std::string hrv_report_json(const HrvReport& report, const HrvOptions& options);

// Static plot of a track with beat markers drawn as red triangles.
void write_svg_plot(std::ostream& out, const DemodulatedSignal& track, const BeatSeries& beats,
                    const std::string& title);

}  // namespace softppg
