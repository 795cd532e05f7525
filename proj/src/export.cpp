#include "softppg/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string_view>

#include <json.hpp>

#include "softppg/error.hpp"

namespace softppg {

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::string fixed2(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
    return std::string(buf, res.ptr);
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

double parse_double(std::string_view s, std::size_t line_no) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        fail(ErrorKind::invalid_format, "csv line " + std::to_string(line_no) + ": bad number '" +
                                            std::string(s) + "'");
    return v;
}

// Reads a CSV with the given header and returns the numeric rows.
std::vector<std::vector<double>> read_table(std::istream& in, std::string_view header,
                                            std::size_t columns) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::vector<double>> rows;
    bool seen_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!seen_header) {
            if (line != header)
                fail(ErrorKind::invalid_format,
                     "csv header: expected '" + std::string(header) + "', got '" + line + "'");
            seen_header = true;
            continue;
        }
        const auto fields = split(line);
        if (fields.size() != columns)
            fail(ErrorKind::invalid_format, "csv line " + std::to_string(line_no) + ": expected " +
                                                std::to_string(columns) + " columns");
        std::vector<double> row;
        for (auto f : fields) row.push_back(parse_double(f, line_no));
        rows.push_back(std::move(row));
    }
    require(seen_header, ErrorKind::invalid_format, "csv: missing header row");
    return rows;
}

}  // namespace

void write_demod_csv(std::ostream& out, const DemodulatedSignal& track) {
    out << "window_index,time_s,value\n";
    for (std::size_t j = 0; j < track.size(); ++j) {
        out << j << ',' << format_number(track.time_at(j)) << ',' << format_number(track.values[j])
            << '\n';
    }
}

void write_beats_csv(std::ostream& out, const BeatSeries& beats) {
    out << "beat_index,time_s\n";
    for (std::size_t k = 0; k < beats.size(); ++k)
        out << k << ',' << format_number(beats.times_s[k]) << '\n';
}

DemodulatedSignal read_demod_csv(std::istream& in) {
    const auto rows = read_table(in, "window_index,time_s,value", 3);
    require(rows.size() >= 2, ErrorKind::invalid_format,
            "demodulated csv needs at least 2 rows to recover dt");
    DemodulatedSignal track;
    track.t0_s = rows.front()[1];
    track.dt_s = (rows.back()[1] - rows.front()[1]) / static_cast<double>(rows.size() - 1);
    require(track.dt_s > 0.0, ErrorKind::invalid_format, "demodulated csv: time_s must increase");
    for (const auto& r : rows) track.values.push_back(r[2]);
    track.gaps.assign(track.values.size(), false);
    return track;
}

BeatSeries read_beats_csv(std::istream& in) {
    BeatSeries beats;
    for (const auto& r : read_table(in, "beat_index,time_s", 2)) beats.times_s.push_back(r[1]);
    return beats;
}

void write_error_table_csv(std::ostream& out, const std::vector<ErrorTableRow>& rows) {
    out << "sigma_rr,dt,n,measured,predicted,first_order_error\n";
    for (const auto& r : rows) {
        out << format_number(r.sigma_rr_ms) << ',' << format_number(r.dt_ms) << ',' << r.n << ','
            << format_number(r.measured_ms) << ',' << format_number(r.predicted_ms) << ','
            << format_number(r.first_order_error) << '\n';
    }
}

std::string hrv_report_json(const HrvReport& report, const HrvOptions& options) {
    nlohmann::ordered_json j;
    j["mean_pulse_bpm"] = report.mean_pulse_bpm;
    j["mean_rr_ms"] = report.mean_rr_ms;
    j["sdrr_ms"] = report.sdrr_ms;
    j["pnn50"] = report.pnn50;
    j["rmssd_ms"] = report.rmssd_ms;
    j["n_intervals"] = report.n_intervals;
    j["pnn50_denominator"] = options.pnn50_denominator == Pnn50Denominator::total_intervals
                                 ? "total_intervals"
                                 : "successive_pairs";
    return j.dump(2) + "\n";
}

void write_svg_plot(std::ostream& out, const DemodulatedSignal& track, const BeatSeries& beats,
                    const std::string& title) {
    constexpr double width = 1200.0;
    constexpr double height = 320.0;
    constexpr double margin = 30.0;

    double lo = 0.0;
    double hi = 1.0;
    if (!track.empty()) {
        const auto [mn, mx] = std::minmax_element(track.values.begin(), track.values.end());
        lo = *mn;
        hi = *mx > *mn ? *mx : *mn + 1.0;
    }
    const double t_end = track.empty() ? 1.0 : std::max(track.time_at(track.size() - 1), track.t0_s + track.dt_s);
    auto px = [&](double t) { return margin + (width - 2 * margin) * (t - track.t0_s) / (t_end - track.t0_s); };
    auto py = [&](double v) { return height - margin - (height - 2 * margin) * (v - lo) / (hi - lo); };

    std::string escaped;
    for (char c : title) {
        if (c == '<') escaped += "&lt;";
        else if (c == '>') escaped += "&gt;";
        else if (c == '&') escaped += "&amp;";
        else escaped += c;
    }

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed2(width) << "\" height=\""
        << fixed2(height) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << fixed2(margin) << "\" y=\"20.00\" font-family=\"sans-serif\" font-size=\"14\">"
        << escaped << "</text>\n";
    out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
    for (std::size_t j = 0; j < track.size(); ++j) {
        if (j) out << ' ';
        out << fixed2(px(track.time_at(j))) << ',' << fixed2(py(track.values[j]));
    }
    out << "\"/>\n";
    for (double t : beats.times_s) {
        if (track.empty()) break;
        const double pos = std::round((t - track.t0_s) / track.dt_s);
        const auto j = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(track.size() - 1)));
        const double x = px(t);
        const double y = py(track.values[j]) - 4.0;
        out << "<polygon fill=\"red\" points=\"" << fixed2(x) << ',' << fixed2(y) << ' '
            << fixed2(x - 5.0) << ',' << fixed2(y - 9.0) << ' ' << fixed2(x + 5.0) << ','
            << fixed2(y - 9.0) << "\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace softppg
