#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "softppg/beats.hpp"
#include "softppg/conditioning.hpp"
#include "softppg/demod.hpp"
#include "softppg/hrv.hpp"
#include "softppg/signal.hpp"

namespace softppg {

enum class Method { am, fm };

struct PipelineConfig {
    Method method = Method::am;
    std::size_t demod_window = 441;

    AmCarrierConfig am;  // carrier_freq drives demodulation; depth/dc only modulation
    AmDemodMode am_mode = AmDemodMode::exact_phase;

    VcoConfig vco;
    FmDemodConfig fm;    // window_len is taken from demod_window

    MovingAverageConfig smoothing{5, EdgePolicy::shrink};
    BeatDetectorConfig detector;
    HrvOptions hrv;

    // Cross-field checks (Nyquist, window sizes) for a given input rate.
    void validate(double sample_rate) const;

    AmDemodConfig am_demod() const { return {am.carrier_freq, demod_window, am_mode}; }
    FmDemodConfig fm_demod() const {
        FmDemodConfig c = fm;
        c.window_len = demod_window;
        return c;
    }
};

struct PipelineResult {
    DemodulatedSignal demodulated;  // amplitude units (fm is already inverted)
    DemodulatedSignal smoothed;
    BeatSeries beats;
    std::optional<RrSeries> rr;
    std::optional<HrvReport> hrv;
    std::string hrv_status;  // "ok" or the reason HRV was not computed

    bool has_hrv() const noexcept { return hrv.has_value(); }
};

// demodulate -> (fm_to_amplitude) -> moving_average -> detect_beats ->
// rr_intervals -> hrv_report. A failing stage throws an Error whose message
// starts with the stage name. Too few beats for HRV is not an error: the
// result carries no report and hrv_status says why.
PipelineResult run_pipeline(const SampledSignal& input, const PipelineConfig& cfg);

// Synthetic recording: generator output, optionally offset and band-passed as
// the analog front end would, modulated per cfg.method, optionally noisy.
struct SynthScenario {
    PpgSynthConfig synth;
    double sensor_dc = 0.0;  // added before the band-pass
    std::optional<BandpassConfig> bandpass;
    double snr_db = no_noise;
    std::uint64_t noise_seed = 2;
};

struct SimulatedRecording {
    SynthResult truth;
    SampledSignal baseband;  // what entered the modulator
    SampledSignal recording;
};

SimulatedRecording simulate_recording(const SynthScenario& scenario, const PipelineConfig& cfg);

}  // namespace softppg
