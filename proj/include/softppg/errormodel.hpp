#pragma once

#include <cstddef>
#include <cstdint>

namespace softppg {

// Timing quantisation of peaks located on a dt grid. All quantities in ms.
struct QuantizationModel {
    double dt_ms;
    double sigma_q_ms;  // dt / sqrt(12)

    static QuantizationModel for_grid(double dt_ms);
};

// Standard deviation of a uniform rounding error on a grid of step dt.
double sigma_q(double dt_ms);

// sqrt(sigma_rr^2 + sigma_q^2): the sdRR a sampled measurement reports.
double predicted_measured_sdrr(double sigma_rr_ms, double dt_ms);

struct RelativeSdrrError {
    double exact;        // sqrt(1 + sigma_q^2 / sigma_rr^2) - 1
    double first_order;  // sigma_q^2 / (2 sigma_rr^2)
};

RelativeSdrrError relative_sdrr_error(double sigma_rr_ms, double dt_ms);

struct MonteCarloSdrr {
    double measured_ms;        // population sd of the quantised intervals
    double predicted_ms;       // predicted_measured_sdrr(sigma_rr, dt)
    double unquantized_ms;     // sd of the same intervals before rounding
    double standard_error_ms;  // measured / sqrt(2 (n - 1)), normal approximation
    std::size_t n_intervals;
};

// Draws n_intervals + 1 beat instants with i.i.d. Gaussian RR jitter (clamped
// at +-5 sigma) and a uniform random grid phase, rounds every beat instant to
// the nearest dt grid point (ties to even) and measures the sdRR of the
// resulting intervals. Deterministic per seed.
MonteCarloSdrr monte_carlo_sdrr(double sigma_rr_ms, double mean_rr_ms, double dt_ms,
                                std::size_t n_intervals, std::uint64_t rng_seed);

}  // namespace softppg
