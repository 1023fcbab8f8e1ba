#include <doctest.h>

#include <cmath>

#include "lfq/config.hpp"
#include "lfq/constants.hpp"
#include "lfq/ensemble.hpp"
#include "lfq/lfunction.hpp"
#include "support.hpp"

using namespace lfq;
using namespace lfq::test;

namespace {

// 1 + #{(x, y) : y^2 = D(x)} by squaring every y.
std::uint64_t brute_points(const PolyRing& R, const MonicPoly& D) {
    const Field& F = R.field();
    std::uint64_t n = 1;
    for (std::uint32_t x = 0; x < F.q(); ++x) {
        const Fq v = R.eval(D.coeffs(), F.element(x));
        for (std::uint32_t y = 0; y < F.q(); ++y)
            if (F.mul(F.element(y), F.element(y)) == v) ++n;
    }
    return n;
}

// c_k summed over monic f of degree k with the factor route.
std::int64_t brute_coeff(const PolyRing& R, const MonicPoly& D, int k) {
    std::int64_t s = 0;
    for (const auto& f : all_monic(R, k)) s += chi(R, D, f);
    return s;
}

}  // namespace

TEST_CASE("character sums: examples and vanishing") {
    const PolyRing R(Field::make(5, 1));
    const MonicPoly D = M(R, {1, 1, 0, 1});
    CHECK(char_sum(R, D, 1) == 3);
    CHECK(char_sum(R, D, 0) == 1);
    CHECK(char_sum(R, D, 2) == 5);
    CHECK(char_sum(R, D, 3) == 0);
    CHECK(char_sum(R, D, 4) == 0);
    CHECK(brute_coeff(R, D, 2) == 5);

    for (std::uint32_t q : {5u, 9u}) {
        const PolyRing S(Field::from_order(q));
        Gen g(61 + q);
        for (int i = 0; i < 60; ++i) {
            const auto E = g.squarefree(S, g.between(1, q == 5 ? 5 : 3));
            for (int k = 0; k <= E.degree() + 1; ++k) {
                const auto fast = char_sum(S, E, k);
                REQUIRE(fast == char_sum_safe(S, E, k));
                if (k >= E.degree()) REQUIRE(fast == 0);
            }
        }
    }
}

TEST_CASE("L-polynomial examples") {
    const PolyRing R(Field::make(5, 1));
    const auto L = l_polynomial(R, M(R, {1, 1, 0, 1}));
    CHECK(L.coeffs == std::vector<std::int64_t>{1, 3, 5});
    CHECK(L.primitive);
    CHECK(l_value_at_1(L) == doctest::Approx(1.8).epsilon(1e-15));

    const auto L1 = l_polynomial(R, M(R, {0, 1}));
    CHECK(L1.coeffs == std::vector<std::int64_t>{1});
    CHECK(l_value_at_1(L1) == 1.0L);
    CHECK(inverse_roots(L1).empty());

    const auto roots = inverse_roots(L);
    REQUIRE(roots.size() == 2);
    for (const auto& a : roots) CHECK(std::fabs(std::norm(a) - 5) < 1e-9);

    const auto bad = l_polynomial(R, MonicPoly(R.mul(R.T(), R.T())));
    CHECK_FALSE(bad.primitive);
}

TEST_CASE("L-polynomial: direct route matches brute force on H_3") {
    const PolyRing R(Field::make(5, 1));
    iter_H_n(EnsembleSpec(R.field(), 3), [&](std::uint64_t, const Poly& D) {
        const MonicPoly Dm(D);
        const auto L = l_polynomial(R, Dm);
        for (int k = 0; k < 3; ++k) REQUIRE(L.coeffs[static_cast<std::size_t>(k)] == brute_coeff(R, Dm, k));
    });
}

TEST_CASE("Euler kernel agrees with the direct route") {
    const PolyRing R(Field::make(5, 1));
    for (int n = 1; n <= 5; ++n) {
        const EulerKernel K(R, n);
        iter_H_n(EnsembleSpec(R.field(), n), [&](std::uint64_t, const Poly& D) {
            REQUIRE(K.l_polynomial(MonicPoly(D)).coeffs == l_polynomial(R, MonicPoly(D)).coeffs);
        });
    }
    Gen g(8080);
    for (int n = 6; n <= 7; ++n) {
        const EulerKernel K(R, n);
        for (int i = 0; i < 60; ++i) {
            const auto D = g.squarefree(R, n);
            REQUIRE(K.l_polynomial(D).coeffs == l_polynomial(R, D).coeffs);
        }
    }
    const PolyRing S(Field::make(3, 2));
    for (int n = 2; n <= 4; ++n) {
        const EulerKernel K(S, n);
        for (int i = 0; i < 100; ++i) {
            const auto D = g.squarefree(S, n);
            REQUIRE(K.l_polynomial(D).coeffs == l_polynomial(S, D).coeffs);
        }
    }
}

TEST_CASE("functional equation on odd degree") {
    const PolyRing R(Field::make(5, 1));
    iter_H_n(EnsembleSpec(R.field(), 5), [&](std::uint64_t, const Poly& D) {
        const auto L = l_polynomial(R, MonicPoly(D));
        REQUIRE(L.coeffs.size() == 5);
        const int g = 2;
        std::int64_t qp = 1;
        for (int k = g; k >= 0; --k) {
            REQUIRE(L.coeffs[static_cast<std::size_t>(2 * g - k)] == qp * L.coeffs[static_cast<std::size_t>(k)]);
            qp *= 5;
        }
    });
}

TEST_CASE("Weil bound and integrality over H_3 and H_5") {
    const PolyRing R(Field::make(5, 1));
    const CalibratedConstants cal;
    for (int n : {3, 5}) {
        iter_H_n(EnsembleSpec(R.field(), n), [&](std::uint64_t, const Poly& D) {
            const auto L = l_polynomial(R, MonicPoly(D));
            const auto mags = classify_roots(inverse_roots(L), 5, cal.root_tol);
            REQUIRE(mags.sqrt_q == n - 1);
            REQUIRE(mags.unit == 0);
            const auto h = class_number(L, cal.integrality_tol);
            REQUIRE(h.h >= 1);
            REQUIRE(h.residual < cal.integrality_tol);
        });
    }
}

TEST_CASE("even degree roots have unit and sqrt q magnitudes") {
    const PolyRing R(Field::make(5, 1));
    iter_H_n(EnsembleSpec(R.field(), 4), [&](std::uint64_t, const Poly& D) {
        const auto roots = inverse_roots(l_polynomial(R, MonicPoly(D)));
        REQUIRE(roots.size() == 3);
        const auto mags = classify_roots(roots, 5);
        REQUIRE(mags.unit + mags.sqrt_q == 3);
        REQUIRE(mags.unit >= 1);
    });
    CHECK_THROWS_AS(classify_roots({{1.5L, 0}}, 5), ArithmeticError);
}

TEST_CASE("class numbers") {
    const PolyRing R(Field::make(5, 1));
    const auto h = class_number(R, M(R, {1, 1, 0, 1}));
    CHECK(h.h == 9);
    CHECK(h.genus == 1);
    CHECK(brute_points(R, M(R, {1, 1, 0, 1})) == 9);
    CHECK(class_number(R, M(R, {0, 1})).h == 1);
    CHECK_THROWS_AS(class_number(R, M(R, {2, 0, 1})), InputError);

    Gen g(2024);
    const EnsembleSpec H3(R.field(), 3);
    for (int i = 0; i < 20; ++i) {
        const auto D = g.squarefree(R, 3);
        REQUIRE(class_number(R, D).h == BigInt(brute_points(R, D)));
        REQUIRE(affine_point_count_plus_one(R, D) == brute_points(R, D));
    }
}

TEST_CASE("h R products for even degree") {
    const PolyRing R(Field::make(5, 1));
    // T(T+1)(T+2)(T+3): g = 1, sqrt|D| = 25
    Poly D = R.constant(R.field().one());
    for (std::uint32_t a = 0; a < 4; ++a) D = R.mul(D, P(R, {a, 1}));
    const auto L = l_polynomial(R, MonicPoly(D));
    CHECK(hr_product(L) == doctest::Approx(25 * static_cast<double>(l_value_at_1(L)) / 4));

    // T^2 + 2: D(a) = 2, 3, 1, 1, 3 so c_1 = -1 and L(1) = 4/5
    const auto L2 = l_polynomial(R, M(R, {2, 0, 1}));
    CHECK(L2.coeffs == std::vector<std::int64_t>{1, -1});
    CHECK(hr_product(L2) == doctest::Approx(5 * 0.8 / 4));
    CHECK_THROWS_AS(hr_product(l_polynomial(R, M(R, {1, 1, 0, 1}))), InputError);

    iter_H_n(EnsembleSpec(R.field(), 4), [&](std::uint64_t, const Poly& E) {
        REQUIRE(hr_product(l_polynomial(R, MonicPoly(E))) > 0);
    });
}

TEST_CASE("truncated log L") {
    const PolyRing R(Field::make(5, 1));
    const MonicPoly D = M(R, {1, 1, 0, 1});
    const long double exact = std::log(1.8L);
    long double prev = 1;
    for (int M : {2, 4, 6, 8}) {
        const long double err = std::fabs(truncated_log_l(R, D, M) - exact);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev < 1e-3);
    CHECK(truncated_log_l(R, D, 0) == 0);

    // frozen envelope over all of H_5
    const CalibratedConstants cal;
    const EnsembleSpec spec(R.field(), 5);
    const auto t = sweep_lvalues(spec);
    for (int M : {2, 3, 4}) {
        std::size_t k = 0;
        const long double bound = cal.truncation * std::pow(5.0L, -M / 2.0L) * 5 / M;
        iter_H_n(spec, [&](std::uint64_t, const Poly& E) {
            REQUIRE(std::fabs(std::log(t.L1[k++]) - truncated_log_l(R, MonicPoly(E), M)) <= bound);
        });
    }
}

TEST_CASE("edge envelope") {
    const long double eg = std::exp(kEulerGamma);
    auto [lo5, up5] = edge_envelope(5, 5);
    CHECK(up5 == doctest::Approx(static_cast<double>(2 * eg)));
    CHECK(static_cast<double>(up5) == doctest::Approx(3.562).epsilon(1e-3));
    CHECK(lo5 == doctest::Approx(static_cast<double>(zeta_A2(5) / (2 * eg))));
    auto [lo25, up25] = edge_envelope(5, 25);
    CHECK(up25 == doctest::Approx(static_cast<double>(4 * eg)));
    for (int d = 2; d <= 40; ++d) {
        auto [lo, up] = edge_envelope(5, d);
        CHECK(lo < up);
    }
}

TEST_CASE("L(1) is positive and nonpositive values raise") {
    LPolynomial L;
    L.q = 5;
    L.coeffs = {1, -10};
    CHECK_THROWS_AS(l_value_at_1(L), ArithmeticError);
}
