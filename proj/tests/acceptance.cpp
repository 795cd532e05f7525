// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "oracles.hpp"
#include "softppg/beats.hpp"
#include "softppg/conditioning.hpp"
#include "softppg/demod.hpp"
#include "softppg/errormodel.hpp"
#include "softppg/export.hpp"
#include "softppg/hrv.hpp"
#include "softppg/pipeline.hpp"
#include "softppg/signal.hpp"
#include "softppg/wav.hpp"

using namespace softppg;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double time_limit_s, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = o.pass;
    std::string detail = o.detail;
    if (time_limit_s > 0.0 && elapsed >= time_limit_s) {
        pass = false;
        detail += "; over time limit";
    }
    char timing[64];
    if (time_limit_s > 0.0)
        std::snprintf(timing, sizeof timing, "%.2f s, limit %.0f s", elapsed, time_limit_s);
    else
        std::snprintf(timing, sizeof timing, "%.2f s", elapsed);
    std::cout << (pass ? "PASS" : "FAIL") << "  " << id << ". " << name << ": " << detail << " (" << timing
              << ")" << std::endl;
    if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// 60 s baseband shared by the round-trip criteria.
SynthResult round_trip_baseband() {
    PpgSynthConfig cfg;
    cfg.mean_rr_ms = 800.0;
    cfg.rr_sd_ms = 30.0;
    cfg.n_beats = 74;  // lead-in 1 s + 73 intervals + tail: just over 60 s
    cfg.rng_seed = 1;
    return synth_ppg(cfg);
}

struct Agreement {
    double r;
    double rms_rel;
};

Agreement compare(const std::vector<double>& got, const std::vector<double>& want) {
    const auto [lo, hi] = std::minmax_element(want.begin(), want.end());
    return {oracle::pearson(got, want), oracle::rms_diff(got, want) / (*hi - *lo)};
}

Outcome agreement_outcome(const Agreement& a, double seconds) {
    return {a.r >= 0.99 && a.rms_rel <= 0.02,
            fmt("%.1f s of signal", seconds) + fmt(", r = %.5f", a.r) + fmt(", rms/swing = %.4f", a.rms_rel)};
}

struct Matching {
    std::size_t matched = 0;
    std::size_t insertions = 0;
    double worst_ms = 0.0;
};

// Greedy one-to-one matching of detections to ground truth within tol.
Matching match_beats(const std::vector<double>& truth, const std::vector<double>& found, double tol) {
    Matching m;
    std::vector<bool> used(truth.size(), false);
    for (double t : found) {
        std::size_t best = truth.size();
        double best_d = tol;
        for (std::size_t k = 0; k < truth.size(); ++k) {
            const double d = std::abs(truth[k] - t);
            if (!used[k] && d <= best_d) {
                best = k;
                best_d = d;
            }
        }
        if (best == truth.size()) {
            ++m.insertions;
        } else {
            used[best] = true;
            ++m.matched;
            m.worst_ms = std::max(m.worst_ms, best_d * 1000.0);
        }
    }
    return m;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

int main() {
    criterion(1, "carrier identity", 1.0, [] {
        const std::size_t n_per = integer_period_samples(1000.0, 44100.0);
        std::vector<double> x(n_per * 100);
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = std::cos(2.0 * pi * static_cast<double>(i % n_per) / static_cast<double>(n_per));
        const auto a = am_demodulate(SampledSignal(x, 44100.0), {1000.0, n_per, AmDemodMode::paper_integer_N});
        double worst = 0.0;
        for (double v : a.values) worst = std::max(worst, std::abs(v - 0.5));
        return Outcome{a.size() == 100 && worst < 1e-9,
                       std::to_string(a.size()) + " windows, max |a_j - 0.5| = " + fmt("%.3g", worst)};
    });

    criterion(2, "carrier and window constants", 0.0, [] {
        const std::size_t n = integer_period_samples(1000.0, 44100.0);
        const SampledSignal s(std::vector<double>(4410, 0.0), 44100.0);
        const double am_dt = am_demodulate(s, {1000.0, 441, AmDemodMode::exact_phase}).dt_s;
        FmDemodConfig fm;
        fm.window_len = 441;
        const double fm_dt = fm_demodulate(s, fm).dt_s;
        PipelineConfig p;
        const bool ok = n == 44 && std::abs(am_dt - 0.010) < 1e-15 && std::abs(fm_dt - 0.010) < 1e-15 &&
                        p.am_demod().window_len == 441 && p.fm_demod().window_len == 441;
        return Outcome{ok, "N = " + std::to_string(n) + fmt(", am dt = %.6g s", am_dt) + fmt(", fm dt = %.6g s", fm_dt)};
    });

    criterion(3, "FM counting identity", 0.0, [] {
        // sawtooth at 100 kHz: upward zero crossings at 0.495, 1.495, ..., 9.495 ms
        std::vector<double> x(1000);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i % 100) - 49.5;
        FmDemodConfig cfg;
        cfg.window_len = 1000;
        const double f_exact = fm_demodulate(SampledSignal(x, 100000.0), cfg).values.at(0);

        const SampledSignal zero(std::vector<double>(44100, 0.0), 44100.0);
        const auto tone = fm_modulate(zero, {5000.0, 2000.0, VcoWaveform::sine});
        double worst = 0.0;
        for (double v : fm_demodulate(tone, {}).values) worst = std::max(worst, std::abs(v - 5000.0));
        return Outcome{f_exact == 1000.0 && worst < 1.0,
                       fmt("constructed window = %.17g Hz", f_exact) + fmt(", 5 kHz sine max error = %.3g Hz", worst)};
    });

    const auto base = round_trip_baseband();
    const double seconds = static_cast<double>(base.signal.size()) / base.signal.sample_rate();

    criterion(4, "AM round trip", 5.0, [&] {
        const AmCarrierConfig carrier;
        const auto rec = am_modulate(base.signal, carrier);
        const auto a = am_demodulate(rec, {carrier.carrier_freq, 441});
        std::vector<double> got, want;
        for (std::size_t j = 0; j < a.size(); ++j) {
            got.push_back(2.0 * a.values[j]);
            want.push_back(carrier.dc_offset + carrier.modulation_depth * base.signal[j * 441 + 220]);
        }
        return agreement_outcome(compare(got, want), seconds);
    });

    criterion(5, "FM round trip", 5.0, [&] {
        const VcoConfig vco;
        const auto x = fm_to_amplitude(fm_demodulate(fm_modulate(base.signal, vco), {}), vco);
        std::vector<double> got, want;
        for (std::size_t j = 0; j < x.size(); ++j) {
            got.push_back(x.values[j]);
            want.push_back(base.signal[j * 441 + 220]);
        }
        return agreement_outcome(compare(got, want), seconds);
    });

    criterion(6, "beat recovery", 0.0, [&] {
        std::string detail;
        bool ok = true;
        const auto& truth = base.beats.times_s;
        for (Method m : {Method::am, Method::fm}) {
            PipelineConfig cfg;
            cfg.method = m;
            const char* name = m == Method::am ? "am" : "fm";

            SynthScenario clean;
            clean.synth.mean_rr_ms = 800.0;
            clean.synth.rr_sd_ms = 30.0;
            clean.synth.n_beats = 74;
            clean.synth.rng_seed = 1;
            const auto r0 = run_pipeline(simulate_recording(clean, cfg).recording, cfg);
            const auto m0 = match_beats(truth, r0.beats.times_s, 0.010);
            const bool clean_ok = r0.beats.size() == truth.size() && m0.matched == truth.size();
            detail += std::string(name) + " clean " + std::to_string(r0.beats.size()) + "/" +
                      std::to_string(truth.size()) + fmt(" worst %.1f ms", m0.worst_ms);

            SynthScenario noisy = clean;
            noisy.snr_db = 20.0;
            const auto r1 = run_pipeline(simulate_recording(noisy, cfg).recording, cfg);
            const auto m1 = match_beats(truth, r1.beats.times_s, 0.020);
            const double recall = static_cast<double>(m1.matched) / static_cast<double>(truth.size());
            const bool noisy_ok = recall >= 0.95 && m1.insertions == 0;
            detail += fmt(", 20 dB recall %.3f", recall) + " insertions " + std::to_string(m1.insertions) +
                      fmt(" worst %.1f ms", m1.worst_ms) + "; ";
            ok = ok && clean_ok && noisy_ok;
        }
        detail.resize(detail.size() - 2);
        return Outcome{ok, detail};
    });

    criterion(7, "sdRR error model", 10.0, [] {
        const auto e = relative_sdrr_error(30.0, 10.0);
        const auto mc = monte_carlo_sdrr(30.0, 800.0, 10.0, 10000, 1);
        const double z = (mc.measured_ms - mc.predicted_ms) / mc.standard_error_ms;
        const bool ok = std::abs(e.first_order - 0.00463) < 5e-6 && e.first_order < 0.01 &&
                        std::abs(mc.predicted_ms - 30.1386) < 5e-5 && std::abs(z) <= 3.0;
        return Outcome{ok, fmt("first order %.6f", e.first_order) + fmt(", measured %.4f ms", mc.measured_ms) +
                               fmt(" vs predicted %.4f ms", mc.predicted_ms) + fmt(", %.2f SE", z)};
    });

    criterion(8, "HRV oracle equivalence", 0.0, [] {
        std::mt19937 rng(8);
        std::uniform_int_distribution<std::size_t> len(2, 500);
        std::uniform_real_distribution<double> mean(400.0, 1400.0);
        std::uniform_real_distribution<double> spread(0.0, 150.0);
        double worst = 0.0;
        bool pnn_ok = true;
        for (int s = 0; s < 100; ++s) {
            std::normal_distribution<double> g(mean(rng), spread(rng));
            std::vector<double> rr(len(rng));
            for (double& v : rr) v = std::max(200.0, g(rng));
            const auto r = hrv_report(RrSeries{rr});
            const auto o = oracle::hrv(rr);
            auto rel = [](double a, double b) { return a == b ? 0.0 : std::abs(a - b) / std::max(std::abs(a), std::abs(b)); };
            worst = std::max({worst, rel(r.mean_pulse_bpm, o.mean_pulse), rel(r.mean_rr_ms, o.mean_rr),
                              rel(r.sdrr_ms, o.sdrr), rel(r.pnn50, o.pnn50), rel(r.rmssd_ms, o.rmssd)});
            pnn_ok = pnn_ok && r.pnn50 == o.pnn50;
        }
        const auto hand = hrv_report(RrSeries{{800, 860, 800}});
        const bool hand_ok = hand.pnn50 == 2.0 / 3.0 && hand.rmssd_ms == 60.0;
        return Outcome{worst <= 1e-12 && pnn_ok && hand_ok,
                       fmt("100 series, worst relative difference %.3g", worst) +
                           (hand_ok ? ", hand cases exact" : ", hand cases differ")};
    });

    criterion(9, "scale and shift invariance", 0.0, [] {
        std::mt19937 rng(9);
        std::uniform_real_distribution<double> mean_rr(500.0, 1200.0);
        std::size_t changed = 0;
        std::size_t total_beats = 0;
        for (std::uint64_t s = 0; s < 20; ++s) {
            PpgSynthConfig cfg;
            cfg.mean_rr_ms = mean_rr(rng);
            cfg.rr_sd_ms = 0.05 * cfg.mean_rr_ms;
            cfg.n_beats = 20;
            cfg.sample_rate = 100.0;
            cfg.rng_seed = s;
            const auto clean = synth_ppg(cfg).signal;
            const auto noisy = moving_average(add_noise(clean, 15.0, s + 50), {5});
            const std::vector<double> x(noisy.samples().begin(), noisy.samples().end());
            const auto ref = detect_beat_indices(x, 0.01, {});
            total_beats += ref.size();
            for (double a : {0.1, 1.0, 10.0}) {
                for (double b : {-1.0, 0.0, 1.0}) {
                    std::vector<double> y = x;
                    for (double& v : y) v = a * v + b;
                    if (detect_beat_indices(y, 0.01, {}) != ref) ++changed;
                }
            }
        }

        PpgSynthConfig cfg;
        cfg.n_beats = 10;
        const auto rec = fm_modulate(synth_ppg(cfg).signal, {});
        const auto ref = fm_demodulate(rec, {});
        double worst = 0.0;
        bool gaps_same = true;
        for (double a : {0.1, 10.0, 1234.5}) {
            std::vector<double> z(rec.samples().begin(), rec.samples().end());
            for (double& v : z) v *= a;
            const auto got = fm_demodulate(SampledSignal(z, rec.sample_rate()), {});
            gaps_same = gaps_same && got.gaps == ref.gaps;
            for (std::size_t j = 0; j < ref.size(); ++j)
                worst = std::max(worst, std::abs(got.values[j] - ref.values[j]) / ref.values[j]);
        }
        return Outcome{changed == 0 && worst <= 1e-12 && gaps_same,
                       std::to_string(total_beats) + " beats over 20 signals x 9 maps, " + std::to_string(changed) +
                           " changed; fm scaling worst relative change " + fmt("%.3g", worst)};
    });

    criterion(10, "determinism", 0.0, [] {
        std::size_t mismatches = 0;
        std::size_t checks = 0;
        auto same = [&](const std::string& a, const std::string& b) {
            ++checks;
            if (a != b) ++mismatches;
        };
        auto wav_bytes = [](const SampledSignal& s) {
            const auto e = encode_wav(s);
            return std::string(e.bytes.begin(), e.bytes.end());
        };

        PpgSynthConfig cfg;
        cfg.rr_sd_ms = 30.0;
        cfg.n_beats = 15;
        same(wav_bytes(synth_ppg(cfg).signal), wav_bytes(synth_ppg(cfg).signal));
        const auto base = synth_ppg(cfg).signal;
        same(wav_bytes(add_noise(base, 20.0, 3)), wav_bytes(add_noise(base, 20.0, 3)));
        auto mc = [] {
            const auto r = monte_carlo_sdrr(30.0, 800.0, 10.0, 5000, 11);
            return format_number(r.measured_ms) + format_number(r.unquantized_ms);
        };
        same(mc(), mc());

        namespace fs = std::filesystem;
        const fs::path dir = fs::temp_directory_path() / "softppg_acceptance_det";
        fs::remove_all(dir);
        for (const char* method : {"am", "fm"}) {
            for (const char* run : {"a", "b"}) {
                std::istringstream in;
                std::ostringstream wav, sink;
                softppg::cli::run({"synth", "--method", method, "--n-beats", "20", "--rr-sd", "30", "--snr-db", "20",
                                   "--seed", "7", "--out", "-"},
                                  in, wav, sink);
                std::istringstream wav_in(wav.str());
                softppg::cli::run({"pipeline", "--method", method, "--in", "-", "--out-dir",
                                   (dir / method / run).string()},
                                  wav_in, sink, sink);
            }
            for (const char* f : {"demodulated.csv", "smoothed.csv", "beats.csv", "hrv.json"}) {
                const auto a = slurp(dir / method / "a" / f);
                same(a, slurp(dir / method / "b" / f));
                if (a.empty()) ++mismatches;
            }
        }
        fs::remove_all(dir);
        return Outcome{mismatches == 0, std::to_string(checks) + " comparisons, " + std::to_string(mismatches) +
                                            " mismatches"};
    });

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures;
}
