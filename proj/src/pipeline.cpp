#include "softppg/pipeline.hpp"

#include <utility>

#include "softppg/error.hpp"

namespace softppg {

void PipelineConfig::validate(double sample_rate) const {
    require(demod_window > 0, ErrorKind::invalid_config, "demod window must be > 0");
    if (method == Method::am) {
        am_demod().validate(sample_rate);
    } else {
        vco.validate(sample_rate);
        require(vco.gain > 0.0, ErrorKind::invalid_config, "VCO gain must be > 0 for fm");
        fm_demod().validate();
    }
    smoothing.validate();
    detector.validate();
}

namespace {

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        fail(e.kind(), std::string("stage '") + name + "': " + e.what());
    }
}

}  // namespace

PipelineResult run_pipeline(const SampledSignal& input, const PipelineConfig& cfg) {
    stage("config", [&] {
        cfg.validate(input.sample_rate());
        return 0;
    });

    PipelineResult r;
    r.demodulated = stage("demodulate", [&] {
        if (cfg.method == Method::am) return am_demodulate(input, cfg.am_demod());
        return fm_to_amplitude(fm_demodulate(input, cfg.fm_demod()), cfg.vco);
    });

    if (r.demodulated.empty()) {
        r.smoothed = r.demodulated;
    } else {
        r.smoothed = stage("moving_average", [&] { return moving_average(r.demodulated, cfg.smoothing); });
        r.beats = stage("detect_beats", [&] { return detect_beats(r.smoothed, cfg.detector); });
    }

    if (r.beats.size() < 3) {
        r.hrv_status = "insufficient data: " + std::to_string(r.beats.size()) +
                       " beats detected, HRV needs at least 3";
        if (r.beats.size() == 2) r.rr = rr_intervals(r.beats);
        return r;
    }
    r.rr = stage("rr_intervals", [&] { return rr_intervals(r.beats); });
    r.hrv = stage("hrv_report", [&] { return hrv_report(*r.rr, cfg.hrv); });
    r.hrv_status = "ok";
    return r;
}

SimulatedRecording simulate_recording(const SynthScenario& scenario, const PipelineConfig& cfg) {
    auto truth = synth_ppg(scenario.synth);
    SampledSignal baseband = truth.signal;
    if (scenario.sensor_dc != 0.0) {
        std::vector<double> shifted(baseband.samples().begin(), baseband.samples().end());
        for (double& v : shifted) v += scenario.sensor_dc;
        baseband = SampledSignal(std::move(shifted), baseband.sample_rate());
    }
    if (scenario.bandpass) baseband = bandpass(baseband, *scenario.bandpass);

    SampledSignal recording = cfg.method == Method::am ? am_modulate(baseband, cfg.am)
                                                       : fm_modulate(baseband, cfg.vco);
    recording = add_noise(recording, scenario.snr_db, scenario.noise_seed);
    return {std::move(truth), std::move(baseband), std::move(recording)};
}

}  // namespace softppg
