#include <doctest.h>

#include <cmath>
#include <set>

#include "lfq/config.hpp"
#include "lfq/constants.hpp"
#include "lfq/ensemble.hpp"
#include "lfq/parallel.hpp"
#include "lfq/random_model.hpp"
#include "support.hpp"

using namespace lfq;
using namespace lfq::test;

TEST_CASE("H_n counts") {
    const Field F5 = Field::make(5, 1);
    CHECK(count_H_n(EnsembleSpec(F5, 1)) == 5);
    CHECK(count_H_n(EnsembleSpec(F5, 2)) == 20);
    CHECK(count_H_n(EnsembleSpec(F5, 3)) == 100);
    for (int n = 2; n <= 6; ++n) {
        const EnsembleSpec s(F5, n);
        REQUIRE(count_H_n(s) == s.size());
        REQUIRE(s.size() == static_cast<std::uint64_t>(std::pow(5, n - 1)) * 4);
    }
    const Field F9 = Field::make(3, 2);
    for (int n = 2; n <= 4; ++n) {
        const EnsembleSpec s(F9, n);
        REQUIRE(count_H_n(s) == static_cast<std::uint64_t>(std::pow(9, n - 1)) * 8);
    }
    CHECK_THROWS_AS(EnsembleSpec(Field::make(3, 1), 3), InputError);
    CHECK_THROWS_AS(EnsembleSpec(F5, 0), InputError);
}

TEST_CASE("iter_H_n yields exactly the square-free monics") {
    const PolyRing R(Field::make(5, 1));
    for (int n = 1; n <= 5; ++n) {
        std::vector<std::uint64_t> expect;
        for (const auto& f : all_monic(R, n))
            if (R.is_squarefree(f)) expect.push_back(R.monic_index(f));
        std::vector<std::uint64_t> got;
        iter_H_n(EnsembleSpec(R.field(), n), [&](std::uint64_t idx, const Poly& D) {
            REQUIRE(R.monic_index(MonicPoly(D)) == idx);
            got.push_back(idx);
        });
        REQUIRE(got == expect);
    }
}

TEST_CASE("orthogonality sums") {
    const PolyRing R(Field::make(5, 1));
    const EnsembleSpec s4(R.field(), 4);
    const CalibratedConstants cal;

    const auto one = orthogonality_sum(s4, MonicPoly());
    CHECK(one.sum == 500);
    CHECK(one.square);

    const auto sq = orthogonality_sum(s4, M(R, {0, 0, 1}));
    CHECK(sq.square);
    CHECK(sq.main_term == doctest::Approx(500.0 * 5 / 6));
    CHECK(sq.deviation <= cal.orthogonality * std::sqrt(500.0));

    const auto lin = orthogonality_sum(s4, M(R, {0, 1}));
    CHECK_FALSE(lin.square);
    CHECK(std::fabs(static_cast<double>(lin.sum)) <= cal.orthogonality * std::sqrt(500.0) * 2);

    // exact sums against the factor route
    Gen g(5);
    const EnsembleSpec s3(R.field(), 3);
    for (int i = 0; i < 10; ++i) {
        const auto f = g.monic_up_to(R, 1, 4);
        std::int64_t brute = 0;
        iter_H_n(s3, [&](std::uint64_t, const Poly& D) { brute += chi(R, MonicPoly(D), f); });
        REQUIRE(orthogonality_sum(s3, f).sum == brute);
    }
}

TEST_CASE("moment reports") {
    const Field F = Field::make(5, 1);
    const auto t = sweep_lvalues(EnsembleSpec(F, 5));
    const auto z0 = empirical_moment(t, {0, 0}, {1, 0});
    CHECK(z0.empirical == cld{1, 0});

    for (cld z : {cld{1, 1}, cld{0.5L, -2}, cld{-1, 0.25L}}) {
        const auto a = empirical_moment(t, z, expectation_euler(5, z, 12).value);
        const auto b = empirical_moment(t, std::conj(z), expectation_euler(5, std::conj(z), 12).value);
        REQUIRE(b.empirical == std::conj(a.empirical));
        REQUIRE(a.deviation == b.deviation);
    }
    long double mean = 0;
    for (auto v : t.L1) mean += v;
    mean /= t.size();
    CHECK(std::fabs(empirical_moment(t, {1, 0}, {1, 0}).empirical.real() - mean) < 1e-15L);
}

TEST_CASE("first moment trend over n = 5, 6, 7") {
    const Field F = Field::make(5, 1);
    const cld model = expectation_euler(5, {1, 0}, 12).value;
    std::vector<long double> dev;
    for (int n = 5; n <= 7; ++n) dev.push_back(empirical_moment(sweep_lvalues(EnsembleSpec(F, n)), {1, 0}, model).deviation);
    MESSAGE("deviations n=5,6,7: " << static_cast<double>(dev[0]) << " " << static_cast<double>(dev[1]) << " "
                                   << static_cast<double>(dev[2]));
    CHECK(dev[1] < dev[0]);
    CHECK(dev[2] < dev[1]);
}

TEST_CASE("first-moment anchor between model routes") {
    for (int M : {4, 8, 12}) {
        const long double a = expectation_euler(5, {1, 0}, M).value.real();
        CHECK(std::fabs(a - first_moment_constant(5, M)) <= 1e-10L * a);
    }
}

TEST_CASE("tail counts") {
    const Field F = Field::make(5, 1);
    const auto t = sweep_lvalues(EnsembleSpec(F, 6));
    const auto tiny = tail_counts(t, 1e-9L);
    CHECK(tiny.count_high == t.size());
    CHECK(tiny.total == t.size());
    const auto huge = tail_counts(t, 1e9L);
    CHECK(huge.count_high == 0);
    CHECK(huge.count_low == 0);
    std::uint64_t hi = UINT64_MAX, lo = UINT64_MAX;
    for (int i = 1; i <= 60; ++i) {
        const auto r = tail_counts(t, 0.05L * i);
        REQUIRE(r.count_high <= hi);
        REQUIRE(r.count_low <= lo);
        REQUIRE(r.count_high <= r.total);
        hi = r.count_high;
        lo = r.count_low;
    }
    // log n - 2 log log n - log log log n, taken literally; at n = 8 the triple log is negative
    const long double l1 = std::log(8.0L) / std::log(5.0L), l2 = std::log(l1) / std::log(5.0L);
    const long double top = l1 - 2 * l2 - std::log(l2) / std::log(5.0L);
    CHECK(in_theorem_tau_range(5, 8, 1));
    CHECK(in_theorem_tau_range(5, 8, top - 1e-9L));
    CHECK_FALSE(in_theorem_tau_range(5, 8, top + 1e-9L));
    CHECK_FALSE(in_theorem_tau_range(5, 8, 0.99L));
    CHECK_FALSE(in_theorem_tau_range(5, 3, 1));
}

TEST_CASE("extreme scan") {
    const Field F = Field::make(5, 1);
    const auto t = sweep_lvalues(EnsembleSpec(F, 3));
    REQUIRE(t.size() == 100);
    const auto e = extreme_scan(t);
    for (auto v : t.L1) {
        REQUIRE(v <= e.max_L);
        REQUIRE(v >= e.min_L);
    }
    CHECK(e.min_L > 0);
    const long double l1 = std::log(3.0L) / std::log(5.0L);
    CHECK(e.conj_upper == doctest::Approx(static_cast<double>(std::exp(kEulerGamma) * (l1 + std::log(l1) / std::log(5.0L)))));
}

TEST_CASE("sweeps are independent of thread count and the cache") {
    const Field F = Field::make(5, 1);
    const EnsembleSpec s(F, 6);
    set_thread_count(1);
    const auto a = sweep_lvalues(s);
    set_thread_count(4);
    const auto b = sweep_lvalues(s);
    set_thread_count(0);
    CHECK(a.L1 == b.L1);
    CHECK(a.index == b.index);

    TempDir dir("sweep");
    Store store(dir.path());
    const auto c = sweep_lvalues(s, &store);
    CHECK_FALSE(c.from_cache);
    const auto d = sweep_lvalues(s, &store);
    CHECK(d.from_cache);
    CHECK(c.L1 == a.L1);
    CHECK(d.L1 == a.L1);
}
