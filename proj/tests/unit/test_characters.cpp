#include <doctest.h>

#include <map>
#include <set>

#include "lfq/characters.hpp"
#include "lfq/primes.hpp"
#include "support.hpp"

using namespace lfq;
using namespace lfq::test;

TEST_CASE("residue symbol examples") {
    const PolyRing R(Field::make(5, 1));
    // D(-1) = 4 = 2^2
    CHECK(residue_symbol(R, P(R, {0, 1}), M(R, {1, 1})) == 1);
    CHECK(residue_symbol(R, P(R, {0, 1}), M(R, {0, 1})) == 0);
    // 3 is not a square mod 5
    CHECK(residue_symbol(R, P(R, {3}), M(R, {0, 1})) == -1);
    CHECK_THROWS_AS(residue_symbol(R, P(R, {0, 1}), M(R, {4, 0, 1})), InputError);
    const PolyRing R2(Field::make(2, 1));
    CHECK_THROWS(residue_symbol(R2, P(R2, {0, 1}), M(R2, {1, 1})));
}

TEST_CASE("chi examples") {
    const PolyRing R(Field::make(5, 1));
    Gen g(3);
    for (int i = 0; i < 20; ++i) CHECK(chi(R, g.monic_up_to(R, 1, 5), MonicPoly()) == 1);
    CHECK(chi(R, M(R, {0, 1}), M(R, {1, 1})) == 1);
    CHECK(chi(R, M(R, {1, 1}), M(R, {0, 1})) == 1);

    // D(a) = 1, 3, 1, 1, 4 for a = 0..4
    const MonicPoly D = M(R, {1, 1, 0, 1});
    int sum = 0;
    for (std::uint32_t a = 0; a < 5; ++a) {
        const Poly lin{R.field().neg(R.field().element(a)), R.field().one()};
        sum += chi(R, D, MonicPoly(lin));
    }
    CHECK(sum == 3);
}

TEST_CASE("fields without reciprocity are refused") {
    for (std::uint32_t q : {3u, 7u, 27u, 2u}) {
        const PolyRing R(Field::from_order(q));
        CHECK_THROWS_AS(require_reciprocity_field(R.field()), InputError);
        CHECK_THROWS_AS(QuadChar(R, MonicPoly(R.T())), InputError);
        CHECK_THROWS_AS(chi(R, MonicPoly(R.T()), MonicPoly(R.T())), InputError);
    }
    try {
        require_reciprocity_field(Field::make(3, 1));
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("reciprocity") != std::string::npos);
    }
    CHECK_NOTHROW(require_reciprocity_field(Field::make(5, 1)));
    CHECK_NOTHROW(require_reciprocity_field(Field::make(3, 2)));
}

TEST_CASE("reciprocity is exhaustive for degree <= 3") {
    for (std::uint32_t q : {5u, 9u}) {
        const PolyRing R(Field::from_order(q));
        std::vector<MonicPoly> all;
        for (int d = 0; d <= 3; ++d)
            for (auto& f : all_monic(R, d)) all.push_back(f);
        std::vector<MonicPoly> primes;
        for (int d = 1; d <= 3; ++d)
            for (auto& p : irreducibles(R, d)) primes.push_back(p);
        std::map<std::vector<std::uint32_t>, std::size_t> prime_pos;
        for (std::size_t i = 0; i < primes.size(); ++i) prime_pos[R.to_indices(primes[i].coeffs())] = i;

        // sym[f][p] = (f / P) by Euler's criterion
        std::vector<std::vector<std::int8_t>> sym(all.size(), std::vector<std::int8_t>(primes.size()));
        for (std::size_t i = 0; i < all.size(); ++i)
            for (std::size_t j = 0; j < primes.size(); ++j)
                sym[i][j] = static_cast<std::int8_t>(residue_symbol_unchecked(R, all[i].coeffs(), primes[j]));
        std::vector<Factorization> fac(all.size());
        for (std::size_t i = 0; i < all.size(); ++i)
            if (all[i].degree() > 0) fac[i] = R.factor(all[i]);

        auto kron = [&](std::size_t a, std::size_t b) {
            int s = 1;
            for (const auto& part : fac[b]) {
                const int v = sym[a][prime_pos.at(R.to_indices(part.prime.coeffs()))];
                for (int e = 0; e < part.exponent; ++e) s *= v;
            }
            return s;
        };
        std::uint64_t pairs = 0;
        for (std::size_t a = 0; a < all.size(); ++a)
            for (std::size_t b = 0; b < all.size(); ++b) {
                if (R.gcd(all[a].coeffs(), all[b].coeffs()).size() != 1) continue;
                ++pairs;
                const int ab = kron(a, b);
                REQUIRE(ab == kron(b, a));
                REQUIRE(jacobi(R.field(), all[a].coeffs(), all[b].coeffs()) == ab);
            }
        CHECK(pairs > 0);
        MESSAGE("q=" << q << " coprime pairs checked: " << pairs);
    }
}

TEST_CASE("multiplicativity and periodicity") {
    for (std::uint32_t q : {5u, 9u}) {
        const PolyRing R(Field::from_order(q));
        Gen g(404 + q);
        for (int i = 0; i < 1000; ++i) {
            const auto D = g.squarefree(R, g.between(1, 6));
            const auto f = g.monic_up_to(R, 0, 5), h = g.monic_up_to(R, 0, 5);
            const QuadChar X(R, D);
            const MonicPoly fh(R.mul(f.coeffs(), h.coeffs()));
            REQUIRE(X.chi(fh) == X.chi(f) * X.chi(h));
            REQUIRE(X.chi_fast(fh) == X.chi(fh));
        }
        for (int i = 0; i < 500; ++i) {
            const auto D = g.squarefree(R, g.between(1, 5));
            const auto f = g.monic_up_to(R, 0, 4);
            // f + gD stays monic when g is monic of any degree >= 0 and deg(gD) > deg f
            const auto h = g.monic_up_to(R, std::max(0, f.degree() - D.degree() + 1), 4);
            const MonicPoly shifted(R.add(f.coeffs(), R.mul(h.coeffs(), D.coeffs())));
            const QuadChar X(R, D);
            REQUIRE(X.chi(shifted) == X.chi(f));
            // chi vanishes exactly on non-coprime arguments
            REQUIRE((X.chi(f) == 0) == (R.gcd(f.coeffs(), D.coeffs()).size() != 1));
        }
    }
}

TEST_CASE("Euler criterion matches brute-force squares") {
    const PolyRing R(Field::make(5, 1));
    for (int d = 1; d <= 2; ++d)
        for (const auto& Pp : irreducibles(R, d)) {
            std::set<std::vector<std::uint32_t>> squares;
            for (std::uint64_t i = 0; i < R.monic_count(d); ++i) {
                // every residue class mod P is a polynomial of degree < d: enumerate them
                Poly r(static_cast<std::size_t>(d));
                std::uint64_t rest = i;
                for (auto& c : r) {
                    c = Fq{static_cast<std::uint16_t>(rest % 5)};
                    rest /= 5;
                }
                normalize(r);
                if (r.empty()) continue;
                squares.insert(R.to_indices(R.rem(R.mul(r, r), Pp.coeffs())));
            }
            for (int k = 0; k <= 3; ++k)
                for (const auto& Dp : all_monic(R, k)) {
                    for (std::uint32_t c = 1; c < 5; ++c) {
                        const Poly Dc = R.scale(Dp.coeffs(), Fq{static_cast<std::uint16_t>(c)});
                        const Poly red = R.rem(Dc, Pp.coeffs());
                        const int expect = red.empty() ? 0 : (squares.count(R.to_indices(red)) ? 1 : -1);
                        REQUIRE(residue_symbol(R, Dc, Pp) == expect);
                    }
                }
        }
}

TEST_CASE("constant argument convention") {
    for (std::uint32_t q : {5u, 9u}) {
        const PolyRing R(Field::from_order(q));
        Gen g(90 + q);
        for (int i = 0; i < 200; ++i) {
            const auto D = g.squarefree(R, g.between(1, 5));
            const QuadChar X(R, D);
            const Fq c = g.nonzero(R.field());
            int expect = 1;
            for (const auto& part : R.factor(D)) expect *= residue_symbol(R, R.constant(c), part.prime);
            REQUIRE(X.constant(c) == expect);
            int power = 1;
            for (int k = 0; k < D.degree(); ++k) power *= R.field().quadratic_character(c);
            REQUIRE(X.constant(c) == power);
        }
    }
}
