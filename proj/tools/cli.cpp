#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "softppg/beats.hpp"
#include "softppg/error.hpp"
#include "softppg/errormodel.hpp"
#include "softppg/export.hpp"
#include "softppg/hrv.hpp"
#include "softppg/pipeline.hpp"
#include "softppg/wav.hpp"

namespace softppg::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* stdio_path = "-";

std::uint64_t default_seed() {
    if (const char* env = std::getenv("SOFTPPG_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            fail(ErrorKind::invalid_config, std::string("SOFTPPG_SEED is not an integer: ") + env);
        }
    }
    return 1;
}

struct Streams {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
};

SampledSignal load_wav(const std::string& path, Streams& io) {
    return path == stdio_path ? read_wav(io.in) : read_wav(fs::path(path));
}

void save_wav(const SampledSignal& signal, const std::string& path, Streams& io) {
    const std::size_t clamped = path == stdio_path ? write_wav(signal, io.out) : write_wav(signal, fs::path(path));
    if (clamped > 0) io.err << "warning: " << clamped << " samples outside [-1, 1] were clamped\n";
}

// Runs `write` against the named file, or the output stream for "-".
void emit(const std::string& path, Streams& io, const std::function<void(std::ostream&)>& write) {
    if (path == stdio_path) {
        write(io.out);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    require(f.good(), ErrorKind::io, "cannot open " + path + " for writing");
    write(f);
    require(f.good(), ErrorKind::io, "write failed: " + path);
}

template <typename F>
auto with_input(const std::string& path, Streams& io, F&& read) {
    if (path == stdio_path) return read(io.in);
    std::ifstream f(path, std::ios::binary);
    require(f.good(), ErrorKind::io, "cannot open " + path);
    try {
        return read(f);
    } catch (const Error& e) {
        fail(e.kind(), path + ": " + e.what());
    }
}

enum class SynthOutput { baseband, am, fm };

const std::map<std::string, Method> method_names{{"am", Method::am}, {"fm", Method::fm}};
const std::map<std::string, SynthOutput> synth_output_names{
    {"none", SynthOutput::baseband}, {"am", SynthOutput::am}, {"fm", SynthOutput::fm}};
const std::map<std::string, AmDemodMode> am_mode_names{{"exact", AmDemodMode::exact_phase},
                                                       {"paper", AmDemodMode::paper_integer_N}};
const std::map<std::string, VcoWaveform> waveform_names{{"square", VcoWaveform::square},
                                                        {"sine", VcoWaveform::sine}};
const std::map<std::string, Pnn50Denominator> pnn_names{
    {"total", Pnn50Denominator::total_intervals}, {"pairs", Pnn50Denominator::successive_pairs}};
const std::map<std::string, EdgePolicy> edge_names{{"shrink", EdgePolicy::shrink},
                                                   {"reflect", EdgePolicy::reflect}};

struct Options {
    PipelineConfig pipeline;
    SynthScenario scenario;
    SynthOutput synth_output = SynthOutput::baseband;
    BandpassConfig bandpass;
    bool use_bandpass = false;
    std::optional<double> hysteresis;
    bool no_interpolate = false;
    bool no_dc_removal = false;
    bool raw_frequency = false;
    bool plot = false;
    std::string in = stdio_path;
    std::string out = stdio_path;
    std::string out_dir = ".";
    std::string beats_out;
    std::string format = "json";
    std::vector<double> sigma_rr{30.0};
    std::vector<double> dt{10.0};
    double mc_mean_rr = 800.0;
    std::size_t mc_n = 10000;
    std::uint64_t seed = 1;
};

template <typename E>
CLI::Option* add_enum(CLI::App& app, const std::string& name, E& value,
                      const std::map<std::string, E>& names, const std::string& desc) {
    std::string current;
    for (const auto& [k, v] : names) {
        if (v == value) current = k;
    }
    return app.add_option(name, value, desc)
        ->transform(CLI::CheckedTransformer(names, CLI::ignore_case).description(""))
        ->default_str(current);
}

void add_synth_flags(CLI::App& app, Options& o) {
    auto& s = o.scenario.synth;
    app.add_option("--mean-rr", s.mean_rr_ms, "Mean RR interval (ms)");
    app.add_option("--rr-sd", s.rr_sd_ms, "RR jitter standard deviation (ms)");
    app.add_option("--n-beats", s.n_beats, "Number of beats");
    app.add_option("--rise", s.pulse_rise_ms, "Pulse rise time constant (ms)");
    app.add_option("--decay", s.pulse_decay_ms, "Pulse decay time constant (ms)");
    app.add_option("--amplitude", s.amplitude, "Pulse peak amplitude");
    app.add_option("--sample-rate", s.sample_rate, "Output sample rate (Hz)");
    app.add_option("--lead-in", s.lead_in_ms, "Time before the first beat (ms)");
    app.add_option("--seed", o.seed, "RNG seed (default from SOFTPPG_SEED, else 1)");
}

void add_am_flags(CLI::App& app, Options& o) {
    auto& am = o.pipeline.am;
    app.add_option("--carrier", am.carrier_freq, "AM carrier frequency (Hz)");
    app.add_option("--depth", am.modulation_depth, "AM modulation depth");
    app.add_option("--dc", am.dc_offset, "AM envelope DC offset");
}

void add_vco_flags(CLI::App& app, Options& o) {
    auto& vco = o.pipeline.vco;
    app.add_option("--f0", vco.center_freq, "VCO centre frequency (Hz)");
    app.add_option("--gain", vco.gain, "VCO gain (Hz per unit input)");
    add_enum(app, "--waveform", vco.waveform, waveform_names, "VCO waveform: square|sine");
}

void add_demod_flags(CLI::App& app, Options& o) {
    app.add_option("--window", o.pipeline.demod_window, "Demodulation window (samples)");
    add_enum(app, "--am-mode", o.pipeline.am_mode, am_mode_names, "AM reference phase: exact|paper");
    app.add_option("--level", o.pipeline.fm.threshold, "FM crossing level relative to the window mean");
    app.add_option("--hysteresis", o.hysteresis, "FM hysteresis (default: 2% of window peak-to-peak)");
    app.add_flag("--no-interpolate", o.no_interpolate, "FM: count whole-sample crossings");
    app.add_flag("--no-dc-removal", o.no_dc_removal, "FM: do not subtract the window mean");
}

void add_detect_flags(CLI::App& app, Options& o) {
    auto& d = o.pipeline.detector;
    app.add_option("--smooth", o.pipeline.smoothing.window, "Moving average window (odd, samples)");
    add_enum(app, "--edge", o.pipeline.smoothing.edge_policy, edge_names, "Moving average edges: shrink|reflect");
    app.add_option("--threshold-ratio", d.threshold_ratio, "Derivative threshold ratio");
    app.add_option("--adapt-window", d.adapt_window_s, "Running-max window (s)");
    app.add_option("--search-interval", d.search_interval_s, "Peak search interval (s)");
    app.add_option("--refractory", d.refractory_s, "Refractory period (s)");
}

void add_hrv_flags(CLI::App& app, Options& o) {
    add_enum(app, "--pnn50-denominator", o.pipeline.hrv.pnn50_denominator, pnn_names, "pNN50 denominator: total (all intervals) | pairs (N-1)");
}

void finalize(Options& o) {
    auto& fm = o.pipeline.fm;
    fm.hysteresis = o.hysteresis;
    fm.interpolate = !o.no_interpolate;
    fm.remove_dc = !o.no_dc_removal;
    o.scenario.synth.rng_seed = o.seed;
    o.scenario.noise_seed = o.seed + 1;
    if (o.use_bandpass) o.scenario.bandpass = o.bandpass;
}

// ---------------------------------------------------------------------------

int cmd_synth(Options& o, Streams& io) {
    SampledSignal signal({}, 1.0);
    SynthResult truth{SampledSignal({}, 1.0), {}, {}};
    if (o.synth_output == SynthOutput::baseband) {
        const SynthScenario& sc = o.scenario;
        truth = synth_ppg(sc.synth);
        signal = truth.signal;
        if (sc.sensor_dc != 0.0 || sc.bandpass) {
            std::vector<double> v(signal.samples().begin(), signal.samples().end());
            for (double& x : v) x += sc.sensor_dc;
            signal = SampledSignal(std::move(v), signal.sample_rate());
            if (sc.bandpass) signal = bandpass(signal, *sc.bandpass);
        }
        signal = add_noise(signal, sc.snr_db, sc.noise_seed);
    } else {
        auto cfg = o.pipeline;
        cfg.method = o.synth_output == SynthOutput::am ? Method::am : Method::fm;
        auto sim = simulate_recording(o.scenario, cfg);
        truth = std::move(sim.truth);
        signal = std::move(sim.recording);
    }
    save_wav(signal, o.out, io);
    if (!o.beats_out.empty())
        emit(o.beats_out, io, [&](std::ostream& s) { write_beats_csv(s, truth.beats); });
    return 0;
}

int cmd_modulate(Options& o, Streams& io) {
    const auto baseband = load_wav(o.in, io);
    const auto y = o.pipeline.method == Method::am ? am_modulate(baseband, o.pipeline.am)
                                                   : fm_modulate(baseband, o.pipeline.vco);
    save_wav(y, o.out, io);
    return 0;
}

int cmd_demodulate(Options& o, Streams& io) {
    const auto signal = load_wav(o.in, io);
    const auto& cfg = o.pipeline;
    DemodulatedSignal track;
    if (cfg.method == Method::am) {
        track = am_demodulate(signal, cfg.am_demod());
    } else {
        track = fm_demodulate(signal, cfg.fm_demod());
        if (!o.raw_frequency) track = fm_to_amplitude(track, cfg.vco);
    }
    if (track.status == DemodStatus::window_exceeds_signal)
        io.err << "warning: demodulation window exceeds the signal length; no output rows\n";
    emit(o.out, io, [&](std::ostream& s) { write_demod_csv(s, track); });
    return 0;
}

int cmd_detect(Options& o, Streams& io) {
    auto track = with_input(o.in, io, [](std::istream& s) { return read_demod_csv(s); });
    track = moving_average(track, o.pipeline.smoothing);
    const auto beats = detect_beats(track, o.pipeline.detector);
    emit(o.out, io, [&](std::ostream& s) { write_beats_csv(s, beats); });
    return 0;
}

void print_report(std::ostream& s, const HrvReport& r, const std::string& format, const HrvOptions& opt) {
    if (format == "json") {
        s << hrv_report_json(r, opt);
        return;
    }
    s << "mean_pulse_bpm " << format_number(r.mean_pulse_bpm) << '\n'
      << "mean_rr_ms " << format_number(r.mean_rr_ms) << '\n'
      << "sdrr_ms " << format_number(r.sdrr_ms) << '\n'
      << "pnn50 " << format_number(r.pnn50) << '\n'
      << "rmssd_ms " << format_number(r.rmssd_ms) << '\n'
      << "n_intervals " << r.n_intervals << '\n';
}

int cmd_hrv(Options& o, Streams& io) {
    const auto beats = with_input(o.in, io, [](std::istream& s) { return read_beats_csv(s); });
    const auto report = hrv_report(rr_intervals(beats), o.pipeline.hrv);
    emit(o.out, io, [&](std::ostream& s) { print_report(s, report, o.format, o.pipeline.hrv); });
    return 0;
}

int cmd_pipeline(Options& o, Streams& io) {
    const auto signal = load_wav(o.in, io);
    const auto result = run_pipeline(signal, o.pipeline);

    const fs::path dir(o.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    require(!ec, ErrorKind::io, "cannot create " + dir.string() + ": " + ec.message());

    emit((dir / "demodulated.csv").string(), io, [&](std::ostream& s) { write_demod_csv(s, result.demodulated); });
    emit((dir / "smoothed.csv").string(), io, [&](std::ostream& s) { write_demod_csv(s, result.smoothed); });
    emit((dir / "beats.csv").string(), io, [&](std::ostream& s) { write_beats_csv(s, result.beats); });
    if (o.plot) {
        emit((dir / "plot.svg").string(), io, [&](std::ostream& s) {
            write_svg_plot(s, result.smoothed, result.beats,
                           std::string(o.pipeline.method == Method::am ? "AM" : "FM") + " demodulated, " +
                               std::to_string(result.beats.size()) + " beats");
        });
    }

    io.out << "beats " << result.beats.size() << '\n';
    if (!result.hrv) {
        io.err << "hrv: " << result.hrv_status << '\n';
        return exit_code(ErrorKind::insufficient_data);
    }
    emit((dir / "hrv.json").string(), io,
         [&](std::ostream& s) { s << hrv_report_json(*result.hrv, o.pipeline.hrv); });
    print_report(io.out, *result.hrv, "text", o.pipeline.hrv);
    return 0;
}

int cmd_error_model(Options& o, Streams& io) {
    std::vector<ErrorTableRow> rows;
    for (double s : o.sigma_rr) {
        for (double dt : o.dt) {
            const auto mc = monte_carlo_sdrr(s, o.mc_mean_rr, dt, o.mc_n, o.seed);
            const double first_order = s > 0.0 ? relative_sdrr_error(s, dt).first_order : 0.0;
            rows.push_back({s, dt, o.mc_n, mc.measured_ms, mc.predicted_ms, first_order});
        }
    }
    emit(o.out, io, [&](std::ostream& s) { write_error_table_csv(s, rows); });
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    Streams io{in, out, err};
    auto opts = std::make_unique<Options>();
    Options& o = *opts;

    try {
        o.seed = default_seed();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    }

    CLI::App app{"softppg: sound-card photoplethysmograph signal chain"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    std::function<int()> action;

    auto* synth = app.add_subcommand("synth", "Generate a synthetic PPG (baseband or modulated) as WAV");
    add_synth_flags(*synth, o);
    add_enum(*synth, "--method", o.synth_output, synth_output_names, "Modulation applied: none|am|fm");
    add_am_flags(*synth, o);
    add_vco_flags(*synth, o);
    synth->add_option("--snr-db", o.scenario.snr_db, "Add white noise at this SNR (dB)");
    synth->add_option("--sensor-dc", o.scenario.sensor_dc, "DC offset added before the band-pass");
    synth->add_flag("--bandpass", o.use_bandpass, "Apply the analog-equivalent band-pass to the baseband");
    synth->add_option("--low-cut", o.bandpass.low_cut, "Band-pass low cutoff (Hz)");
    synth->add_option("--high-cut", o.bandpass.high_cut, "Band-pass high cutoff (Hz)");
    synth->add_option("--order", o.bandpass.order, "Band-pass sections");
    synth->add_option("--out,-o", o.out, "Output WAV ('-' for stdout)");
    synth->add_option("--beats-out", o.beats_out, "Write ground-truth beats CSV here");
    synth->callback([&] { action = [&] { return cmd_synth(o, io); }; });

    auto* modulate = app.add_subcommand("modulate", "AM or FM modulate a baseband WAV");
    add_enum(*modulate, "--method", o.pipeline.method, method_names, "am|fm")->required();
    add_am_flags(*modulate, o);
    add_vco_flags(*modulate, o);
    modulate->add_option("--in,-i", o.in, "Input WAV ('-' for stdin)");
    modulate->add_option("--out,-o", o.out, "Output WAV ('-' for stdout)");
    modulate->callback([&] { action = [&] { return cmd_modulate(o, io); }; });

    auto* demod = app.add_subcommand("demodulate", "Demodulate a recording to a CSV track");
    add_enum(*demod, "--method", o.pipeline.method, method_names, "am|fm")->required();
    add_demod_flags(*demod, o);
    add_am_flags(*demod, o);
    add_vco_flags(*demod, o);
    demod->add_flag("--raw-frequency", o.raw_frequency, "FM: emit hertz instead of inverting the VCO law");
    demod->add_option("--in,-i", o.in, "Input WAV ('-' for stdin)");
    demod->add_option("--out,-o", o.out, "Output CSV ('-' for stdout)");
    demod->callback([&] { action = [&] { return cmd_demodulate(o, io); }; });

    auto* detect = app.add_subcommand("detect", "Detect beats in a demodulated CSV track");
    add_detect_flags(*detect, o);
    detect->add_option("--in,-i", o.in, "Demodulated CSV ('-' for stdin)");
    detect->add_option("--out,-o", o.out, "Beats CSV ('-' for stdout)");
    detect->callback([&] { action = [&] { return cmd_detect(o, io); }; });

    auto* hrv = app.add_subcommand("hrv", "Compute HRV indicators from a beats CSV");
    add_hrv_flags(*hrv, o);
    hrv->add_option("--format", o.format, "json|text")->check(CLI::IsMember({"json", "text"}));
    hrv->add_option("--in,-i", o.in, "Beats CSV ('-' for stdin)");
    hrv->add_option("--out,-o", o.out, "Report destination ('-' for stdout)");
    hrv->callback([&] { action = [&] { return cmd_hrv(o, io); }; });

    auto* pipeline = app.add_subcommand("pipeline", "Demodulate, detect beats and compute HRV");
    add_enum(*pipeline, "--method", o.pipeline.method, method_names, "am|fm")->required();
    add_demod_flags(*pipeline, o);
    add_am_flags(*pipeline, o);
    add_vco_flags(*pipeline, o);
    add_detect_flags(*pipeline, o);
    add_hrv_flags(*pipeline, o);
    pipeline->add_option("--in,-i", o.in, "Input WAV ('-' for stdin)");
    pipeline->add_option("--out-dir", o.out_dir, "Directory for CSV/JSON/SVG outputs");
    pipeline->add_flag("--plot", o.plot, "Also write plot.svg");
    pipeline->callback([&] { action = [&] { return cmd_pipeline(o, io); }; });

    auto* errmodel = app.add_subcommand("error-model", "Monte Carlo table of sdRR quantisation error");
    errmodel->add_option("--sigma-rr", o.sigma_rr, "True sdRR values (ms)");
    errmodel->add_option("--dt", o.dt, "Grid steps (ms)");
    errmodel->add_option("--mean-rr", o.mc_mean_rr, "Mean RR (ms)");
    errmodel->add_option("--n", o.mc_n, "Intervals per run");
    errmodel->add_option("--seed", o.seed, "RNG seed (default from SOFTPPG_SEED, else 1)");
    errmodel->add_option("--out,-o", o.out, "Output CSV ('-' for stdout)");
    errmodel->callback([&] { action = [&] { return cmd_error_model(o, io); }; });

    auto* listen = app.add_subcommand("listen", "Reserved: live sound-card capture (not supported)");
    listen->callback([&] {
        action = [&] {
            io.err << "error: live capture is not supported; record a WAV file and use 'pipeline'\n";
            return 1;
        };
    });

    auto* version = app.add_subcommand("version", "Print the version");
    version->callback([&] {
        action = [&] {
            io.out << "softppg " << SOFTPPG_VERSION << '\n';
            return 0;
        };
    });

    std::vector<const char*> argv{"softppg"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_code(ErrorKind::invalid_config);
    }

    try {
        finalize(o);
        return action ? action() : 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace softppg::cli
