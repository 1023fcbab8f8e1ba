#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>

namespace lfq {

inline constexpr const char* kVersion = "1.0.0";

/// Fitted O-constants and acceptance thresholds. Every value here is frozen;
/// recalibration means bumping `version`.
struct CalibratedConstants {
    std::string version = "cal-2026.10-1";

    // Fitted constants for O-terms.
    double orthogonality = 10;      // sum over H_n of chi_D(f) vs main term, in units of sqrt|H_n|
    double truncation = 0.5;        // |ln L(1) - truncated sum| <= C q^(-M/2) deg D / M
    double mertens = 0.1;           // M^2 |sum - ln M - gamma - 1/(2M)|
    double census_window = 1.0;     // | |S| - q^N/(2^Pi N) | <= C q^(N/2 + n)
    double average_window = 1.0;    // |mean - prediction| <= C N^2 q^(N/2 + 2n) / |S|
    double asymptotic_window = 2.0;  // |ln phi_saddle / ln phi_asymptotic - 1| <= C ln tau / tau, tau in [3, 6]
    double continuity_window = 4.0;  // |Phi(e^-lambda tau) / Phi(tau) - 1| <= C lambda e^tau

    // Acceptance thresholds.
    double first_moment_tol = 0.02;
    double complex_moment_tol = 0.05;
    double route_tol = 1e-10;
    double mc_sigmas = 3;
    double tail_match_tol = 0.10;
    double kappa_tol = 1e-10;
    double finite_difference_tol = 1e-6;
    double curvature_lo = 0.1, curvature_hi = 10;
    double saddle_ratio_lo = 0.5, saddle_ratio_hi = 2;
    double saddle_min_hits = 1000;
    double omega_size_tol = 0.20;
    double omega_average_tol = 0.05;
    double integrality_tol = 1e-6;
    double root_tol = 1e-6;

    nlohmann::json to_json() const;
    /// Starts from the defaults and overrides any key present in j. Unknown keys are errors.
    static CalibratedConstants from_json(const nlohmann::json& j);
};

struct RunConfig {
    std::uint32_t p = 5, e = 1;
    int M_model = 12;
    int M_sample = 12;
    int M_L = 20;       // minimum degree cutoff for curly L
    int bilateral = 60;  // l range for G_1, G_2
    std::uint64_t seed = 20240611;
    std::uint64_t samples = 100000;
    unsigned threads = 0;
    std::string cache_dir;
    std::string format = "csv";
    CalibratedConstants cal;

    std::uint32_t q() const;
    nlohmann::json to_json() const;
};

}  // namespace lfq
