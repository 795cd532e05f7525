#include "softppg/errormodel.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <random>
#include <vector>

#include "softppg/error.hpp"

namespace softppg {

QuantizationModel QuantizationModel::for_grid(double dt_ms) { return {dt_ms, sigma_q(dt_ms)}; }

double sigma_q(double dt_ms) {
    require(dt_ms >= 0.0, ErrorKind::invalid_argument, "dt must be >= 0");
    return dt_ms / std::sqrt(12.0);
}

double predicted_measured_sdrr(double sigma_rr_ms, double dt_ms) {
    require(sigma_rr_ms >= 0.0, ErrorKind::invalid_argument, "sigma_rr must be >= 0");
    const double q = sigma_q(dt_ms);
    return std::sqrt(sigma_rr_ms * sigma_rr_ms + q * q);
}

RelativeSdrrError relative_sdrr_error(double sigma_rr_ms, double dt_ms) {
    require(sigma_rr_ms > 0.0, ErrorKind::invalid_argument,
            "sigma_rr must be > 0 for a relative error");
    const double q = sigma_q(dt_ms);
    const double ratio = (q * q) / (sigma_rr_ms * sigma_rr_ms);
    return {std::sqrt(1.0 + ratio) - 1.0, 0.5 * ratio};
}

namespace {

double population_sd(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size()));
}

}  // namespace

MonteCarloSdrr monte_carlo_sdrr(double sigma_rr_ms, double mean_rr_ms, double dt_ms,
                                std::size_t n_intervals, std::uint64_t rng_seed) {
    require(sigma_rr_ms >= 0.0, ErrorKind::invalid_argument, "sigma_rr must be >= 0");
    require(mean_rr_ms > 0.0, ErrorKind::invalid_argument, "mean_rr must be > 0");
    require(dt_ms >= 0.0, ErrorKind::invalid_argument, "dt must be >= 0");
    require(n_intervals >= 100, ErrorKind::invalid_argument, "monte carlo needs n_intervals >= 100");
    require(dt_ms < mean_rr_ms, ErrorKind::invalid_argument,
            "dt must be smaller than mean_rr (grid coarser than the intervals)");

    std::mt19937_64 rng(rng_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 1.0);

    std::vector<double> beats;
    beats.reserve(n_intervals + 1);
    beats.push_back(dt_ms * phase(rng));
    for (std::size_t k = 0; k < n_intervals; ++k) {
        const double z = std::clamp(gauss(rng), -5.0, 5.0);
        beats.push_back(beats.back() + mean_rr_ms + sigma_rr_ms * z);
    }

    std::vector<double> raw(n_intervals);
    std::vector<double> quantized(n_intervals);
    const int saved = std::fegetround();
    std::fesetround(FE_TONEAREST);
    for (std::size_t k = 0; k < n_intervals; ++k) {
        raw[k] = beats[k + 1] - beats[k];
        if (dt_ms > 0.0) {
            // Difference of grid indices keeps the quantised interval an exact multiple of dt.
            const double a = std::nearbyint(beats[k] / dt_ms);
            const double b = std::nearbyint(beats[k + 1] / dt_ms);
            quantized[k] = (b - a) * dt_ms;
        } else {
            quantized[k] = raw[k];
        }
    }
    std::fesetround(saved);

    MonteCarloSdrr out;
    out.measured_ms = population_sd(quantized);
    out.predicted_ms = predicted_measured_sdrr(sigma_rr_ms, dt_ms);
    out.unquantized_ms = population_sd(raw);
    out.n_intervals = n_intervals;
    out.standard_error_ms = out.measured_ms / std::sqrt(2.0 * static_cast<double>(n_intervals - 1));
    return out;
}

}  // namespace softppg
