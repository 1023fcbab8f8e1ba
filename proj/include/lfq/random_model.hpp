#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "lfq/poly.hpp"

namespace lfq {

using cld = std::complex<long double>;

struct ModelParams {
    int M_model = 12;
    int M_sample = 12;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 20240611;
    long double z_cap = 8;  // divisor route only
};

/// d_z(P^a) = z (z + 1) ... (z + a - 1) / a!.
cld d_z_prime_power(cld z, int a);
/// Multiplicative extension over a factorization.
cld d_z(cld z, const Factorization& f);

/// E_P(z) for |P| = x.
cld ep_factor(long double x, cld z);
/// E_P(z) - 1 without cancellation.
cld ep_factor_minus_one(long double x, cld z);

struct ModelExpectation {
    cld value;
    int M = 0;
    long double tail_bound = 0;  // scale |z|(|z|+1) sum_{d > M} pi_q(d) q^-2d
};

/// prod_{d <= M} E_{q^d}(z)^{pi_q(d)}, accumulated in log space.
ModelExpectation expectation_euler(std::uint32_t q, cld z, int M);
/// The same product from the local series 1 + (1 + 1/x)^-1 sum_a d_z(P^2a) x^-2a.
/// Throws InputError when |z| exceeds z_cap.
ModelExpectation expectation_divisor(std::uint32_t q, cld z, int M, long double z_cap = 8);

/// prod_{d <= M} [(1 - x^-2)^-1 (1 - 1/((x + 1) x^2))]^{pi_q(d)}, x = q^d.
long double first_moment_constant(std::uint32_t q, int M);

/// Exact moments of X(P) for |P| = x from the three-point law.
struct LocalMoments {
    long double mean = 0;
    long double second = 0;
};
LocalMoments x_moments(long double x);

struct SampleBatch {
    std::uint32_t q = 0;
    std::uint64_t seed = 0;
    int M = 0;
    std::vector<long double> lnL;
    /// draws[i * M + (d - 1)] = (n_plus, n_minus, n_zero) for sample i, degree d.
    std::vector<std::array<std::int64_t, 3>> draws;

    std::uint64_t count() const { return lnL.size(); }
};

/// Per-degree multinomial draws, one substream per (seed, sample, degree).
SampleBatch sample_batch(std::uint32_t q, const ModelParams& params, bool keep_draws = true);

struct MeanEstimate {
    long double mean = 0;
    long double std_error = 0;
};
/// Sample mean of L^z (real z) with its standard error.
MeanEstimate sample_moment(const SampleBatch& b, long double z);

struct TailEstimate {
    long double phi = 0, phi_se = 0;
    long double psi = 0, psi_se = 0;
    std::uint64_t phi_hits = 0, psi_hits = 0;
};
/// P(L > e^gamma tau) and P(L < zeta_A(2) / (e^gamma tau)).
TailEstimate phi_psi_empirical(const SampleBatch& b, long double tau);

}  // namespace lfq
