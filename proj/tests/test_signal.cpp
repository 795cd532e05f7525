#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "softppg/error.hpp"
#include "softppg/signal.hpp"

using namespace softppg;

namespace {

SampledSignal constant(double v, std::size_t n, double fs = 44100.0) {
    return SampledSignal(std::vector<double>(n, v), fs);
}

// Rising edges (negative -> non-negative) of a waveform, counted by brute force.
std::size_t rising_edges(const SampledSignal& s) {
    std::size_t n = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i - 1] < 0.0 && s[i] >= 0.0) ++n;
    }
    return n;
}

}  // namespace

TEST_SUITE("signal") {

TEST_CASE("SampledSignal rejects bad rate and non-finite samples") {
    CHECK_THROWS_AS(SampledSignal({1.0}, 0.0), Error);
    CHECK_THROWS_AS(SampledSignal({1.0}, -5.0), Error);
    CHECK_THROWS_AS(SampledSignal({0.0, std::nan("")}, 100.0), Error);
    CHECK_THROWS_AS(SampledSignal({INFINITY}, 100.0), Error);
    CHECK_NOTHROW(SampledSignal({}, 100.0));
}

TEST_CASE("synth_ppg with zero jitter spaces beats exactly") {
    PpgSynthConfig cfg;
    cfg.mean_rr_ms = 1000.0;
    cfg.rr_sd_ms = 0.0;
    cfg.n_beats = 5;
    cfg.sample_rate = 1000.0;
    const auto r = synth_ppg(cfg);
    REQUIRE(r.beats.size() == 5);
    for (std::size_t k = 1; k < r.beats.size(); ++k)
        CHECK(r.beats.times_s[k] - r.beats.times_s[k - 1] == doctest::Approx(1.0).epsilon(1e-15));
    for (double rr : r.drawn_rr_ms) CHECK(rr == 1000.0);
}

TEST_CASE("synth_ppg jitter has the configured spread") {
    PpgSynthConfig cfg;
    cfg.mean_rr_ms = 1000.0;
    cfg.rr_sd_ms = 30.0;
    cfg.n_beats = 2001;
    cfg.sample_rate = 200.0;
    cfg.rng_seed = 1;
    const auto r = synth_ppg(cfg);

    // Recompute from the emitted beat instants, not the drawn list.
    std::vector<double> rr;
    for (std::size_t k = 1; k < r.beats.size(); ++k)
        rr.push_back((r.beats.times_s[k] - r.beats.times_s[k - 1]) * 1000.0);
    const double sd = oracle::sample_sd(rr);
    const double se = 30.0 / std::sqrt(2.0 * static_cast<double>(rr.size() - 1));
    CHECK(std::abs(sd - 30.0) < 3.0 * se);
    CHECK(std::abs(oracle::mean(rr) - 1000.0) < 3.0 * 30.0 / std::sqrt(2000.0));
}

TEST_CASE("synth_ppg is deterministic per seed and DC free") {
    PpgSynthConfig cfg;
    cfg.rr_sd_ms = 40.0;
    cfg.n_beats = 20;
    cfg.rng_seed = 99;
    const auto a = synth_ppg(cfg);
    const auto b = synth_ppg(cfg);
    CHECK(a.signal == b.signal);
    CHECK(a.beats.times_s == b.beats.times_s);

    cfg.rng_seed = 100;
    CHECK(synth_ppg(cfg).beats.times_s != a.beats.times_s);

    double sum = 0.0;
    for (double v : a.signal.samples()) sum += v;
    CHECK(std::abs(sum / static_cast<double>(a.signal.size())) < 1e-12);
}

TEST_CASE("synth_ppg peaks sit at the beat instants") {
    PpgSynthConfig cfg;
    cfg.mean_rr_ms = 900.0;
    cfg.n_beats = 4;
    cfg.sample_rate = 10000.0;
    const auto r = synth_ppg(cfg);
    const double fs = cfg.sample_rate;
    for (double t : r.beats.times_s) {
        const auto c = static_cast<std::size_t>(std::llround(t * fs));
        std::size_t best = c - 500;
        for (std::size_t i = c - 500; i <= c + 500; ++i) {
            if (r.signal[i] > r.signal[best]) best = i;
        }
        // tail of the previous pulse pulls the composite peak a few ms early
        CHECK(std::abs(static_cast<double>(best) / fs - t) < 0.004);
    }
}

TEST_CASE("synth_ppg beat series is strictly increasing for random configs") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> mean_rr(400.0, 1500.0);
    std::uniform_real_distribution<double> frac(0.0, 0.1);
    for (int trial = 0; trial < 25; ++trial) {
        PpgSynthConfig cfg;
        cfg.mean_rr_ms = mean_rr(rng);
        cfg.rr_sd_ms = frac(rng) * cfg.mean_rr_ms;
        cfg.n_beats = 30;
        cfg.sample_rate = 250.0;
        cfg.rng_seed = static_cast<std::uint64_t>(trial);
        const auto r = synth_ppg(cfg);
        for (std::size_t k = 1; k < r.beats.size(); ++k) CHECK(r.beats.times_s[k] > r.beats.times_s[k - 1]);
    }
}

TEST_CASE("synth_ppg rejects pulses that cannot fit") {
    PpgSynthConfig cfg;
    cfg.mean_rr_ms = 300.0;
    cfg.rr_sd_ms = 52.0;  // 300 - 5*52 = 40 <= rise 40
    CHECK_THROWS_AS(synth_ppg(cfg), Error);
    cfg.rr_sd_ms = 0.0;
    cfg.pulse_decay_ms = 30.0;  // decay shorter than rise
    CHECK_THROWS_AS(synth_ppg(cfg), Error);
    cfg = {};
    cfg.n_beats = 0;
    CHECK_THROWS_AS(synth_ppg(cfg), Error);
}

TEST_CASE("am_modulate on constant basebands gives a pure carrier") {
    const double fs = 44100.0;
    AmCarrierConfig cfg{1000.0, 0.25, 0.5};
    const auto zero = am_modulate(constant(0.0, 441), cfg);
    const auto one = am_modulate(constant(1.0, 441), cfg);
    for (std::size_t i = 0; i < 441; ++i) {
        const double c = std::cos(2.0 * std::numbers::pi * 1000.0 * static_cast<double>(i) / fs);
        CHECK(zero[i] == doctest::Approx(0.5 * c).epsilon(1e-12).scale(1.0));
        CHECK(one[i] == doctest::Approx(0.75 * c).epsilon(1e-12).scale(1.0));
    }
    CHECK(zero.sample_rate() == fs);
    CHECK(zero.size() == 441);
}

TEST_CASE("am_modulate envelope follows a ramp sample by sample") {
    const double fs = 8000.0;
    std::vector<double> ramp(800);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = -1.0 + 2.0 * static_cast<double>(i) / 799.0;
    AmCarrierConfig cfg{500.0, 0.3, 0.4};
    const auto y = am_modulate(SampledSignal(ramp, fs), cfg);
    for (std::size_t i = 0; i < ramp.size(); ++i) {
        const double c = std::cos(2.0 * std::numbers::pi * 500.0 * static_cast<double>(i) / fs);
        CHECK(y[i] == doctest::Approx((0.4 + 0.3 * ramp[i]) * c).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("am_modulate rejects overmodulation and bad carriers") {
    CHECK_THROWS_AS(am_modulate(constant(1.0, 10), {1000.0, 0.8, 0.5}), Error);
    CHECK_THROWS_AS(am_modulate(constant(0.5, 10), {22050.0, 0.2, 0.5}), Error);
    CHECK_THROWS_AS(am_modulate(constant(0.5, 10), {1000.0, 0.0, 0.5}), Error);
    CHECK_THROWS_AS(am_modulate(constant(1.5, 10), {1000.0, 0.2, 0.5}), Error);
}

TEST_CASE("fm_modulate frequency follows the VCO law") {
    const double fs = 44100.0;
    const std::size_t one_second = 44100;
    VcoConfig cfg;  // 5 kHz + 2 kHz/unit, square

    SUBCASE("zero input runs at f0") {
        const auto y = fm_modulate(constant(0.0, one_second, fs), cfg);
        CHECK(std::abs(static_cast<double>(rising_edges(y)) - 5000.0) <= 1.0);
    }
    SUBCASE("constant input shifts by k*c") {
        for (double c : {-0.5, 0.25, 1.0}) {
            const auto y = fm_modulate(constant(c, one_second, fs), cfg);
            CHECK(std::abs(static_cast<double>(rising_edges(y)) - (5000.0 + 2000.0 * c)) <= 1.0);
        }
    }
    SUBCASE("sine waveform too") {
        cfg.waveform = VcoWaveform::sine;
        const auto y = fm_modulate(constant(0.5, one_second, fs), cfg);
        CHECK(std::abs(static_cast<double>(rising_edges(y)) - 6000.0) <= 1.0);
    }
    SUBCASE("unit amplitude") {
        const auto y = fm_modulate(constant(0.3, 4410, fs), cfg);
        double peak = 0.0;
        for (double v : y.samples()) peak = std::max(peak, std::abs(v));
        CHECK(peak == 1.0);
    }
}

TEST_CASE("fm_modulate with zero gain ignores the input") {
    VcoConfig cfg;
    cfg.gain = 0.0;
    std::vector<double> a(2000), b(2000);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = u(rng);
        b[i] = u(rng);
    }
    CHECK(fm_modulate(SampledSignal(a, 44100.0), cfg) == fm_modulate(SampledSignal(b, 44100.0), cfg));
}

TEST_CASE("fm_modulate guards Nyquist and positive frequency") {
    VcoConfig cfg{20000.0, 2000.0, VcoWaveform::sine};
    CHECK_NOTHROW(fm_modulate(constant(1.0, 100), cfg));   // 22000 < 22050
    CHECK_THROWS_AS(fm_modulate(constant(1.1, 100), cfg), Error);
    cfg = {1000.0, 2000.0, VcoWaveform::square};
    CHECK_THROWS_AS(fm_modulate(constant(-0.5, 100), cfg), Error);  // 0 Hz
}

TEST_CASE("add_noise") {
    std::vector<double> x(20000);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(0.01 * static_cast<double>(i));
    const SampledSignal s(x, 1000.0);

    SUBCASE("infinite SNR is the identity") { CHECK(add_noise(s, no_noise, 5) == s); }
    SUBCASE("0 dB means equal powers") {
        const auto y = add_noise(s, 0.0, 5);
        std::vector<double> diff(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) diff[i] = y[i] - x[i];
        const double snr = 10.0 * std::log10(mean_power(x) / mean_power(diff));
        CHECK(std::abs(snr) < 0.1);
    }
    SUBCASE("20 dB") {
        const auto y = add_noise(s, 20.0, 11);
        std::vector<double> diff(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) diff[i] = y[i] - x[i];
        CHECK(std::abs(10.0 * std::log10(mean_power(x) / mean_power(diff)) - 20.0) < 0.1);
    }
    SUBCASE("deterministic per seed") {
        CHECK(add_noise(s, 10.0, 42) == add_noise(s, 10.0, 42));
        CHECK(!(add_noise(s, 10.0, 42) == add_noise(s, 10.0, 43)));
    }
    SUBCASE("zero power rejected") { CHECK_THROWS_AS(add_noise(constant(0.0, 10), 10.0, 1), Error); }
}

}  // TEST_SUITE
