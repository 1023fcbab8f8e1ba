#include <doctest.h>

#include <cmath>

#include "lfq/config.hpp"
#include "lfq/constants.hpp"
#include "lfq/parallel.hpp"
#include "lfq/primes.hpp"
#include "lfq/random_model.hpp"
#include "support.hpp"

using namespace lfq;
using namespace lfq::test;

namespace {

bool close(cld a, cld b, long double rel) { return std::abs(a - b) <= rel * std::max(1.0L, std::abs(b)); }

// x/(x+1) weight on (1 - 1/x)^-z + (1 + 1/x)^-z, halved, plus 1/(x+1): written out directly
cld ep_direct(long double x, cld z) {
    return 1 / (x + 1) + x / (2 * (x + 1)) * (std::pow(cld(1 - 1 / x), -z) + std::pow(cld(1 + 1 / x), -z));
}

}  // namespace

TEST_CASE("d_z on prime powers and multiplicativity") {
    const cld z{0.7L, -1.3L};
    CHECK(d_z_prime_power(z, 0) == cld{1, 0});
    CHECK(close(d_z_prime_power(z, 1), z, 1e-18L));
    CHECK(close(d_z_prime_power(z, 2), z * (z + 1.0L) / 2.0L, 1e-18L));
    CHECK(d_z_prime_power(2, 3) == cld{4, 0});  // d_2(P^3) = 4 divisors
    CHECK_THROWS_AS(d_z_prime_power(z, -1), InputError);

    const PolyRing R(Field::make(5, 1));
    Gen g(17);
    int tried = 0;
    while (tried < 500) {
        const auto a = g.monic_up_to(R, 1, 4), b = g.monic_up_to(R, 1, 4);
        if (R.gcd(a.coeffs(), b.coeffs()).size() != 1) continue;
        ++tried;
        const MonicPoly ab(R.mul(a.coeffs(), b.coeffs()));
        const cld w{g.between(-3, 3) * 0.5L, g.between(-3, 3) * 0.25L};
        REQUIRE(close(d_z(w, R.factor(ab)), d_z(w, R.factor(a)) * d_z(w, R.factor(b)), 1e-15L));
    }
    // d_1 = 1 and d_2 counts monic divisors
    const MonicPoly f = M(R, {0, 0, 1, 1});  // T^2 (T + 1)
    CHECK(d_z(1, R.factor(f)) == cld{1, 0});
    CHECK(d_z(2, R.factor(f)) == cld{6, 0});
}

TEST_CASE("local factor E_P") {
    CHECK(ep_factor(5, 0) == cld{1, 0});
    CHECK(static_cast<double>(ep_factor(5, 1).real()) == doctest::Approx(149.0 / 144).epsilon(1e-15));
    const long double two = 1.0L / 6 + 5.0L / 12 * (25.0L / 16 + 25.0L / 36);
    CHECK(std::fabs(ep_factor(5, 2).real() - two) < 1e-17L);
    CHECK(std::fabs(ep_factor(5, 2).imag()) < 1e-18L);
    CHECK_THROWS_AS(ep_factor(1, 1), InputError);

    Gen g(5150);
    for (int i = 0; i < 300; ++i) {
        const long double x = std::pow(5.0L, g.between(1, 20));
        const cld z{g.between(-400, 400) / 100.0L, g.between(-400, 400) / 100.0L};
        REQUIRE(close(ep_factor(x, z), ep_direct(x, z), 1e-15L));
        REQUIRE(close(ep_factor(x, z), 1.0L + ep_factor_minus_one(x, z), 1e-18L));
        // second order in 1/x: E - 1 = z(z+1)/(2x^2) + O(x^-4)
        if (x > 1e6L) REQUIRE(close(ep_factor_minus_one(x, z) * x * x, z * (z + 1.0L) / 2.0L, 1e-5L));
    }
}

TEST_CASE("model expectations") {
    CHECK(close(expectation_euler(5, 0, 12).value, 1, 1e-18L));
    const auto one = expectation_euler(5, 1, 12);
    CHECK(static_cast<double>(one.value.real()) == doctest::Approx(1.208).epsilon(1e-3));
    CHECK(one.tail_bound > 0);
    CHECK(expectation_euler(5, 1, 6).tail_bound > one.tail_bound);
    for (cld z : {cld{1, 1}, cld{-0.5L, 2}, cld{3, -0.25L}}) {
        const auto a = expectation_euler(5, z, 12).value, b = expectation_euler(5, std::conj(z), 12).value;
        REQUIRE(close(b, std::conj(a), 1e-16L));
    }
    CHECK_THROWS_AS(expectation_euler(5, 1, 0), InputError);

    // product over degrees equals the product over primes of ep_factor
    cld prod = 1;
    for (int d = 1; d <= 4; ++d) prod *= std::pow(ep_factor(std::pow(5.0L, d), {0.5L, 1}), to_ld(pi_q(5, d)));
    CHECK(close(expectation_euler(5, {0.5L, 1}, 4).value, prod, 1e-14L));
}

TEST_CASE("Euler and divisor routes agree") {
    const CalibratedConstants cal;
    for (std::uint32_t q : {5u, 9u})
        for (cld z : {cld{0, 0}, cld{1, 0}, cld{-1, 0}, cld{2, 0}, cld{0.5L, 1}, cld{-0.5L, -0.5L}, cld{0, 3}, cld{4, 2}}) {
            const auto e = expectation_euler(q, z, 12), d = expectation_divisor(q, z, 12);
            REQUIRE(std::abs(e.value - d.value) <= cal.route_tol * std::abs(e.value));
        }
    CHECK_THROWS_AS(expectation_divisor(5, 9, 12), InputError);
    CHECK_THROWS_AS(expectation_divisor(5, {6, 6}, 12), InputError);
    CHECK_NOTHROW(expectation_divisor(5, {6, 6}, 12, 10));
}

TEST_CASE("first moment constant matches the z = 1 product") {
    for (std::uint32_t q : {5u, 9u, 13u})
        for (int M : {1, 5, 12}) {
            const long double a = first_moment_constant(q, M), b = expectation_euler(q, 1, M).value.real();
            REQUIRE(std::fabs(a - b) <= 1e-15L * b);
        }
}

TEST_CASE("local moments of X(P)") {
    for (long double x : {5.0L, 25.0L, 9.0L, 1e6L}) {
        const auto m = x_moments(x);
        CHECK(m.mean == 0);
        CHECK(std::fabs(m.second - x / (x + 1)) < 1e-18L);
    }

    ModelParams mp;
    mp.samples = 20000;
    mp.M_sample = 3;
    const auto b = sample_batch(5, mp);
    const long double pi1 = 5, x = 5;
    long double sx = 0, s0 = 0;
    for (std::uint64_t i = 0; i < b.count(); ++i) {
        const auto& d = b.draws[i * 3];
        sx += d[0] - d[1];
        s0 += d[2];
    }
    const long double n = b.count();
    // sum over the 5 linear primes of X(P): mean 0, variance 5 x/(x+1)
    CHECK(std::fabs(sx / n) <= 3 * std::sqrt(pi1 * x / (x + 1) / n));
    const long double p0 = 1 / (x + 1);
    CHECK(std::fabs(s0 / n - pi1 * p0) <= 3 * std::sqrt(pi1 * p0 * (1 - p0) / n));
}

TEST_CASE("sample batches") {
    ModelParams mp;
    mp.samples = 5000;
    mp.M_sample = 8;
    const auto a = sample_batch(5, mp);
    const auto b = sample_batch(5, mp);
    CHECK(a.lnL == b.lnL);
    CHECK(a.draws == b.draws);

    set_thread_count(1);
    const auto c = sample_batch(5, mp);
    set_thread_count(3);
    const auto d = sample_batch(5, mp, false);
    set_thread_count(0);
    CHECK(c.lnL == a.lnL);
    CHECK(d.lnL == a.lnL);
    CHECK(d.draws.empty());

    for (std::uint64_t i = 0; i < a.count(); ++i) {
        long double s = 0;
        for (int deg = 1; deg <= 8; ++deg) {
            const auto& t = a.draws[i * 8 + (deg - 1)];
            REQUIRE(t[0] >= 0);
            REQUIRE(t[1] >= 0);
            REQUIRE(t[2] >= 0);
            REQUIRE(BigInt(t[0] + t[1] + t[2]) == pi_q(5, deg));
            const long double xd = std::pow(5.0L, deg);
            s += t[0] * -std::log1p(-1 / xd) + t[1] * -std::log1p(1 / xd);
        }
        REQUIRE(std::isfinite(a.lnL[i]));
        REQUIRE(std::fabs(s - a.lnL[i]) < 1e-12L);
    }

    ModelParams other = mp;
    other.seed = mp.seed + 1;
    CHECK(sample_batch(5, other, false).lnL != a.lnL);
    // prefix samples do not depend on the batch size
    ModelParams small = mp;
    small.samples = 100;
    const auto e = sample_batch(5, small, false);
    CHECK(std::equal(e.lnL.begin(), e.lnL.end(), a.lnL.begin()));

    ModelParams bad = mp;
    bad.M_sample = 0;
    CHECK_THROWS_AS(sample_batch(5, bad), InputError);
}

TEST_CASE("Monte Carlo moments are within 3 standard errors") {
    const CalibratedConstants cal;
    ModelParams mp;
    mp.samples = 40000;
    const auto b = sample_batch(5, mp, false);
    for (long double z : {-1.0L, 0.5L, 1.0L, 2.0L}) {
        const auto est = sample_moment(b, z);
        const long double exact = expectation_euler(5, z, mp.M_sample).value.real();
        REQUIRE(std::fabs(est.mean - exact) <= cal.mc_sigmas * est.std_error);
    }
    CHECK(sample_moment(b, 0).mean == 1);

    // extra degrees barely move the batch
    ModelParams lo = mp, hi = mp;
    lo.M_sample = 10;
    hi.M_sample = 14;
    lo.samples = hi.samples = 5000;
    const auto m10 = sample_moment(sample_batch(5, lo, false), 1), m14 = sample_moment(sample_batch(5, hi, false), 1);
    CHECK(std::fabs(m10.mean - m14.mean) < 1e-4L);
}

TEST_CASE("empirical tails") {
    const CalibratedConstants cal;
    ModelParams mp;
    mp.samples = 100000;
    const auto b = sample_batch(5, mp, false);
    const auto tiny = phi_psi_empirical(b, 1e-6L), huge = phi_psi_empirical(b, 1e6L);
    CHECK(tiny.phi == 1);
    CHECK(tiny.psi == 1);
    CHECK(huge.phi == 0);
    CHECK(huge.psi == 0);
    CHECK(huge.phi_se == 0);

    long double prev_phi = 2, prev_psi = 2;
    for (int i = 1; i <= 30; ++i) {
        const auto t = phi_psi_empirical(b, 0.1L * i);
        REQUIRE(t.phi <= prev_phi);
        REQUIRE(t.psi <= prev_psi);
        prev_phi = t.phi;
        prev_psi = t.psi;
    }

    const long double eg = std::exp(kEulerGamma);
    const auto t1 = phi_psi_empirical(b, 1);
    std::uint64_t hits = 0;
    for (auto v : b.lnL)
        if (std::exp(v) > eg) ++hits;
    CHECK(t1.phi_hits == hits);

    // Phi(e^-lambda tau) / Phi(tau) - 1 is of order lambda e^tau
    for (long double tau : {1.0L, 1.5L, 2.0L}) {
        const long double base = phi_psi_empirical(b, tau).phi;
        REQUIRE(base > 0);
        auto gap = [&](long double lambda) { return phi_psi_empirical(b, std::exp(-lambda) * tau).phi / base - 1; };
        const long double lambda = 0.5L * std::exp(-tau);
        const long double g1 = gap(lambda), g4 = gap(lambda / 4);
        MESSAGE("tau " << static_cast<double>(tau) << " gap/(lambda e^tau) "
                       << static_cast<double>(g1 / (lambda * std::exp(tau))));
        CHECK(g1 >= 0);
        CHECK(g1 <= cal.continuity_window * lambda * std::exp(tau));
        CHECK(g4 <= g1 / 2);
    }
    CHECK_THROWS_AS(phi_psi_empirical(SampleBatch{}, 1), InputError);
}
