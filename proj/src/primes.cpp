#include "lfq/primes.hpp"

#include <cmath>
#include <fmt/format.h>

#include "lfq/store.hpp"

namespace lfq {

int mobius(int n) {
    if (n < 1) throw InputError("mobius needs n >= 1");
    int r = 1;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        r = -r;
    }
    if (n > 1) r = -r;
    return r;
}

BigInt pi_q(std::uint32_t q, int d) {
    if (d < 1) throw InputError("pi_q needs degree >= 1");
    BigInt s = 0;
    for (int e = 1; e <= d; ++e) {
        if (d % e) continue;
        const int mu = mobius(e);
        if (mu == 0) continue;
        BigInt t = boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(d / e));
        s += mu > 0 ? t : BigInt(-t);
    }
    return s / d;
}

BigInt Pi_q(std::uint32_t q, int M) {
    if (M < 1) throw InputError("Pi_q needs M >= 1");
    BigInt s = 0;
    for (int d = 1; d <= M; ++d) s += pi_q(q, d);
    return s;
}

BigInt divisor_weighted_count(std::uint32_t q, int m) {
    BigInt s = 0;
    for (int k = 1; k <= m; ++k)
        if (m % k == 0) s += k * pi_q(q, k);
    return s;
}

long double to_ld(const BigInt& x) { return x.convert_to<long double>(); }

namespace {

constexpr std::uint64_t kSieveLimit = std::uint64_t{1} << 24;

// Marks every product P * g with deg P = k <= d/2 and g monic of degree d - k.
std::vector<MonicPoly> sieve_irreducibles(const PolyRing& R, int d) {
    const std::uint64_t total = R.monic_count(d);
    std::vector<bool> composite(total, false);
    const std::uint32_t q = R.q();
    const Field& F = R.field();
    Poly g, prod(static_cast<std::size_t>(d) + 1);
    for (int k = 1; 2 * k <= d; ++k) {
        const auto small = compute_irreducibles(R, k);
        const std::uint64_t cofactors = R.monic_count(d - k);
        for (const auto& P : small) {
            const Poly& pc = P.coeffs();
            for (std::uint64_t j = 0; j < cofactors; ++j) {
                R.monic_from_index(d - k, j, g);
                std::fill(prod.begin(), prod.end(), Fq{0});
                for (int a = 0; a <= k; ++a)
                    for (int b = 0; b <= d - k; ++b) prod[a + b] = F.add(prod[a + b], F.mul(pc[a], g[b]));
                std::uint64_t idx = 0;
                for (int i = d; i-- > 0;) idx = idx * q + prod[i].v;
                composite[idx] = true;
            }
        }
    }
    std::vector<MonicPoly> out;
    for (std::uint64_t i = 0; i < total; ++i)
        if (!composite[i]) out.push_back(R.monic_from_index(d, i));
    return out;
}

std::vector<MonicPoly> rabin_irreducibles(const PolyRing& R, int d) {
    const std::uint64_t total = R.monic_count(d);
    const Field& F = R.field();
    std::vector<MonicPoly> out;
    Poly c;
    for (std::uint64_t i = 0; i < total; ++i) {
        R.monic_from_index(d, i, c);
        bool has_root = false;
        for (std::uint32_t a = 0; a < R.q() && !has_root; ++a) has_root = R.eval(c, F.element(a)).is_zero();
        if (has_root) continue;
        MonicPoly f(c);
        if (R.is_irreducible(f)) out.push_back(std::move(f));
    }
    return out;
}

}  // namespace

std::vector<MonicPoly> compute_irreducibles(const PolyRing& R, int d) {
    if (d < 1) throw InputError("irreducibles need degree >= 1");
    std::vector<MonicPoly> out;
    if (d == 1) {
        for (std::uint32_t a = 0; a < R.q(); ++a) out.push_back(R.monic_from_index(1, a));
    } else if (static_cast<long double>(std::pow(static_cast<long double>(R.q()), d)) <= kSieveLimit) {
        out = sieve_irreducibles(R, d);
    } else {
        out = rabin_irreducibles(R, d);
    }
    if (BigInt(out.size()) != pi_q(R.q(), d))
        throw ArithmeticError(fmt::format("irreducible count mismatch at degree {}", d));
    return out;
}

std::vector<MonicPoly> irreducibles(const PolyRing& R, int d, Store* store) {
    if (!store) return compute_irreducibles(R, d);
    if (auto cached = store->load_irreducibles(R, d)) return std::move(*cached);
    auto table = compute_irreducibles(R, d);
    store->save_irreducibles(R, d, table);
    return table;
}

}  // namespace lfq
