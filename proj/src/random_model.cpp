#include "lfq/random_model.hpp"

#include <cmath>
#include <fmt/format.h>
#include <random>

#include "lfq/constants.hpp"
#include "lfq/parallel.hpp"
#include "lfq/primes.hpp"
#include "lfq/rng.hpp"

namespace lfq {

namespace {

cld cexpm1(cld w) {
    const long double a = w.real(), b = w.imag();
    const long double s = std::sin(b / 2);
    return {std::expm1(a) * std::cos(b) - 2 * s * s, std::exp(a) * std::sin(b)};
}

cld clog1p(cld w) {
    const long double a = w.real(), b = w.imag();
    return {0.5L * std::log1p(2 * a + a * a + b * b), std::atan2(b, 1 + a)};
}

long double tail_scale(std::uint32_t q, int M) {
    return std::pow(static_cast<long double>(q), -M) / ((M + 1) * (1 - 1.0L / q));
}

}  // namespace

cld d_z_prime_power(cld z, int a) {
    if (a < 0) throw InputError("negative prime power exponent");
    cld r = 1;
    for (int k = 1; k <= a; ++k) r *= (z + static_cast<long double>(k - 1)) / static_cast<long double>(k);
    return r;
}

cld d_z(cld z, const Factorization& f) {
    cld r = 1;
    for (const auto& part : f) r *= d_z_prime_power(z, part.exponent);
    return r;
}

cld ep_factor_minus_one(long double x, cld z) {
    if (!(x >= 2)) throw InputError("ep_factor needs x >= 2");
    const long double w = x / (x + 1);
    // e^a + e^b - 2 = 2 (expm1(m) cosh h + 2 sinh^2(h/2)), m = (a+b)/2, h = (a-b)/2
    const cld m = -z * std::log1p(-1 / (x * x)) / 2.0L;
    const cld h = -z * (std::log1p(-1 / x) - std::log1p(1 / x)) / 2.0L;
    const cld sh = std::sinh(h / 2.0L);
    return w * (cexpm1(m) * std::cosh(h) + 2.0L * sh * sh);
}

cld ep_factor(long double x, cld z) { return 1.0L + ep_factor_minus_one(x, z); }

ModelExpectation expectation_euler(std::uint32_t q, cld z, int M) {
    if (M < 1) throw InputError("truncation degree must be >= 1");
    cld acc = 0;
    for (int d = 1; d <= M; ++d) {
        const long double x = std::pow(static_cast<long double>(q), d);
        acc += to_ld(pi_q(q, d)) * clog1p(ep_factor_minus_one(x, z));
    }
    const long double az = std::abs(z);
    return {std::exp(acc), M, az * (az + 1) * tail_scale(q, M)};
}

ModelExpectation expectation_divisor(std::uint32_t q, cld z, int M, long double z_cap) {
    if (M < 1) throw InputError("truncation degree must be >= 1");
    const long double az = std::abs(z);
    if (az > z_cap)
        throw InputError(fmt::format("|z| = {} exceeds the divisor-route cap {}", static_cast<double>(az),
                                     static_cast<double>(z_cap)));
    cld acc = 0;
    for (int d = 1; d <= M; ++d) {
        const long double x = std::pow(static_cast<long double>(q), d);
        const long double x2 = 1 / (x * x);
        cld dz = 1, series = 0;
        long double xp = 1;
        bool done = false;
        for (int a = 1; a <= 10000; ++a) {
            dz *= (z + static_cast<long double>(2 * a - 2)) / static_cast<long double>(2 * a - 1);
            dz *= (z + static_cast<long double>(2 * a - 1)) / static_cast<long double>(2 * a);
            xp *= x2;
            const cld term = dz * xp;
            series += term;
            if (2 * a > az + 1 && std::abs(term) <= 1e-18L * std::abs(series)) {
                done = true;
                break;
            }
        }
        if (!done) throw ConvergenceError("divisor series did not converge");
        acc += to_ld(pi_q(q, d)) * clog1p(series * (x / (x + 1)));
    }
    return {std::exp(acc), M, az * (az + 1) * tail_scale(q, M)};
}

long double first_moment_constant(std::uint32_t q, int M) {
    long double acc = 0;
    for (int d = 1; d <= M; ++d) {
        const long double x = std::pow(static_cast<long double>(q), d);
        acc += to_ld(pi_q(q, d)) * (-std::log1p(-1 / (x * x)) + std::log1p(-1 / ((x + 1) * x * x)));
    }
    return std::exp(acc);
}

LocalMoments x_moments(long double x) {
    const long double pz = 1 / (x + 1), ps = x / (2 * (x + 1));
    return {ps * 1 + ps * -1 + pz * 0, ps + ps};
}

SampleBatch sample_batch(std::uint32_t q, const ModelParams& params, bool keep_draws) {
    if (params.M_sample < 1) throw InputError("M_sample must be >= 1");
    const int M = params.M_sample;
    SampleBatch b;
    b.q = q;
    b.seed = params.seed;
    b.M = M;
    b.lnL.assign(params.samples, 0);
    if (keep_draws) b.draws.assign(params.samples * M, {0, 0, 0});
    std::vector<long long> pis(M + 1);
    std::vector<long double> lminus(M + 1), lplus(M + 1), pzero(M + 1);
    for (int d = 1; d <= M; ++d) {
        const BigInt p = pi_q(q, d);
        if (p > BigInt(std::numeric_limits<long long>::max())) throw InputError("pi_q(d) too large to sample");
        pis[d] = p.convert_to<long long>();
        const long double x = std::pow(static_cast<long double>(q), d);
        lminus[d] = std::log1p(-1 / x);
        lplus[d] = std::log1p(1 / x);
        pzero[d] = 1 / (x + 1);
    }
    map_blocks<int>(params.samples, kReduceBlock, [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            long double s = 0;
            for (int d = 1; d <= M; ++d) {
                SplitMix64 g(stream_key(params.seed, i, static_cast<std::uint64_t>(d)));
                std::binomial_distribution<long long> zero(pis[d], static_cast<double>(pzero[d]));
                const long long n0 = zero(g);
                std::binomial_distribution<long long> half(pis[d] - n0, 0.5);
                const long long np = half(g);
                const long long nm = pis[d] - n0 - np;
                s -= np * lminus[d] + nm * lplus[d];
                if (keep_draws) b.draws[i * M + (d - 1)] = {np, nm, n0};
            }
            b.lnL[i] = s;
        }
        return 0;
    });
    return b;
}

MeanEstimate sample_moment(const SampleBatch& b, long double z) {
    const std::uint64_t n = b.count();
    if (n < 2) throw InputError("need at least two samples");
    const long double mean =
        deterministic_sum<long double>(n, [&](std::uint64_t i) { return std::exp(z * b.lnL[i]); }) / n;
    const long double ss = deterministic_sum<long double>(n, [&](std::uint64_t i) {
        const long double d = std::exp(z * b.lnL[i]) - mean;
        return d * d;
    });
    return {mean, std::sqrt(ss / (n - 1) / n)};
}

TailEstimate phi_psi_empirical(const SampleBatch& b, long double tau) {
    const std::uint64_t n = b.count();
    if (n == 0) throw InputError("empty batch");
    const long double eg = std::exp(kEulerGamma);
    const long double hi = std::log(eg * tau);
    const long double lo = std::log(zeta_A2(b.q) / (eg * tau));
    TailEstimate t;
    for (long double v : b.lnL) {
        if (v > hi) ++t.phi_hits;
        if (v < lo) ++t.psi_hits;
    }
    t.phi = static_cast<long double>(t.phi_hits) / n;
    t.psi = static_cast<long double>(t.psi_hits) / n;
    t.phi_se = std::sqrt(t.phi * (1 - t.phi) / n);
    t.psi_se = std::sqrt(t.psi * (1 - t.psi) / n);
    return t;
}

}  // namespace lfq
