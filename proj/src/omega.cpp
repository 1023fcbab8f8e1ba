#include "lfq/omega.hpp"

#include <cmath>
#include <fmt/format.h>

#include "lfq/constants.hpp"
#include "lfq/parallel.hpp"

namespace lfq {

SymbolPrescription SymbolPrescription::uniform(const PolyRing& R, int n, int sign, Store* store) {
    if (sign != 1 && sign != -1) throw InputError("prescribed sign must be +1 or -1");
    if (n < 1) throw InputError("prescription degree must be >= 1");
    SymbolPrescription s;
    s.n = n;
    for (int d = 1; d <= n; ++d)
        for (auto& P : irreducibles(R, d, store)) s.primes.push_back(P);
    s.delta.assign(s.primes.size(), sign);
    return s;
}

void SymbolPrescription::validate(const PolyRing& R, Store* store) const {
    const auto full = uniform(R, n, 1, store);
    if (primes.size() != full.primes.size() || delta.size() != primes.size())
        throw InputError(fmt::format("prescription must list all {} primes of degree <= {}", full.primes.size(), n));
    auto sorted = primes;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != full.primes) throw InputError("prescription does not cover each prime of degree <= n exactly once");
    for (int d : delta)
        if (d != 1 && d != -1) throw InputError("prescribed signs must be +1 or -1");
}

MonicPoly script_P(const PolyRing& R, int n, int cap, Store* store) {
    BigInt deg = 0;
    for (int j = 1; j <= n; ++j) deg += j * pi_q(R.q(), j);
    if (deg > cap) throw InputError(fmt::format("deg P(n) = {} exceeds the cap {}", deg.str(), cap));
    Poly acc{Fq{1}};
    for (int d = 1; d <= n; ++d)
        for (const auto& P : irreducibles(R, d, store)) acc = R.mul(acc, P.coeffs());
    return MonicPoly(acc);
}

std::vector<int> symbol_vector(const PolyRing& R, const MonicPoly& Q, const std::vector<MonicPoly>& primes) {
    std::vector<int> v;
    v.reserve(primes.size());
    for (const auto& P : primes) v.push_back(residue_symbol_unchecked(R, P.coeffs(), Q));
    return v;
}

BigInt indicator_product(const PolyRing& R, const MonicPoly& Q, const SymbolPrescription& s) {
    require_reciprocity_field(R.field());
    BigInt r = 1;
    for (std::size_t i = 0; i < s.primes.size(); ++i) {
        // (P/Q) = (Q/P) for monic P, Q when q = 1 mod 4.
        const int sym = jacobi(R.field(), Q.coeffs(), s.primes[i].coeffs());
        r *= 1 + s.delta[i] * sym;
        if (r == 0) return 0;
    }
    return r;
}

std::vector<MonicPoly> find_S(const PolyRing& R, int N, const SymbolPrescription& s, Store* store) {
    require_reciprocity_field(R.field());
    if (N <= s.n) throw InputError("find_S needs N > n");
    const auto Qs = irreducibles(R, N, store);
    auto blocks = map_blocks<std::vector<MonicPoly>>(Qs.size(), 256, [&](std::uint64_t lo, std::uint64_t hi) {
        std::vector<MonicPoly> out;
        for (std::uint64_t i = lo; i < hi; ++i) {
            bool ok = true;
            for (std::size_t j = 0; j < s.primes.size() && ok; ++j)
                ok = residue_symbol_unchecked(R, s.primes[j].coeffs(), Qs[i]) == s.delta[j];
            if (ok) out.push_back(Qs[i]);
        }
        return out;
    });
    std::vector<MonicPoly> S;
    for (auto& b : blocks)
        for (auto& Q : b) S.push_back(std::move(Q));
    return S;
}

std::map<std::uint64_t, std::uint64_t> census(const PolyRing& R, int N, int n, Store* store) {
    require_reciprocity_field(R.field());
    const auto pres = SymbolPrescription::uniform(R, n, 1, store);
    if (pres.primes.size() > 63) throw InputError("census supports at most 63 small primes");
    const auto Qs = irreducibles(R, N, store);
    auto masks = map_blocks<std::vector<std::uint64_t>>(Qs.size(), 256, [&](std::uint64_t lo, std::uint64_t hi) {
        std::vector<std::uint64_t> out;
        for (std::uint64_t i = lo; i < hi; ++i) {
            const auto v = symbol_vector(R, Qs[i], pres.primes);
            std::uint64_t m = 0;
            for (std::size_t j = 0; j < v.size(); ++j) {
                if (v[j] == 0) throw ArithmeticError("small prime divides a degree-N prime");
                if (v[j] < 0) m |= std::uint64_t{1} << j;
            }
            out.push_back(m);
        }
        return out;
    });
    std::map<std::uint64_t, std::uint64_t> c;
    for (const auto& b : masks)
        for (auto m : b) ++c[m];
    return c;
}

OmegaReport average_L_over_S(const PolyRing& R, const std::vector<MonicPoly>& S, int N, const SymbolPrescription& s,
                             Store* store) {
    if (S.empty()) throw InputError("S is empty");
    const std::uint32_t q = R.q();
    OmegaReport rep;
    rep.N = N;
    rep.n = s.n;
    rep.size = S.size();
    const long double Pi = static_cast<long double>(s.primes.size());
    rep.main_term = std::pow(static_cast<long double>(q), N) / (std::pow(2.0L, Pi) * N);
    long double pred = zeta_A2(q);
    for (std::size_t i = 0; i < s.primes.size(); ++i)
        pred *= 1 + s.delta[i] * std::pow(static_cast<long double>(q), -s.primes[i].degree());
    rep.predicted = pred;
    rep.lemma_window_scale = std::pow(static_cast<long double>(q), N / 2.0L + s.n);
    rep.prop_window_scale = static_cast<long double>(N) * N * std::pow(static_cast<long double>(q), N / 2.0L + 2 * s.n) / S.size();

    const EulerKernel K(R, N, store);
    std::vector<long double> L(S.size());
    for (std::size_t i = 0; i < S.size(); ++i) L[i] = l_value_at_1(K.l_polynomial(S[i]));
    rep.mean_L = deterministic_sum<long double>(L.size(), [&](std::uint64_t i) { return L[i]; }) / L.size();
    std::size_t imax = 0, imin = 0;
    for (std::size_t i = 1; i < L.size(); ++i) {
        if (L[i] > L[imax]) imax = i;
        if (L[i] < L[imin]) imin = i;
    }
    rep.max_L = L[imax];
    rep.min_L = L[imin];
    rep.argmax = S[imax];
    rep.argmin = S[imin];
    return rep;
}

int hunt_degree(std::uint32_t q, int N) {
    const long double lq = std::log(static_cast<long double>(q));
    const long double bound = N * (std::log(static_cast<long double>(N)) / lq) / (10 * zeta_A2(q));
    int n = 0;
    while (std::pow(static_cast<long double>(q), n + 1) < bound) ++n;
    return std::max(n, 1);
}

HuntResult omega_hunt(const PolyRing& R, int N, int sign, std::optional<int> n_override, Store* store) {
    HuntResult h;
    h.n = n_override.value_or(hunt_degree(R.q(), N));
    h.sign = sign;
    const auto pres = SymbolPrescription::uniform(R, h.n, sign, store);
    const auto S = find_S(R, N, pres, store);
    if (S.empty()) throw ConvergenceError(fmt::format("S_{} is empty for n = {}; enlarge N", N, h.n));
    h.report = average_L_over_S(R, S, N, pres, store);
    h.Q = sign > 0 ? h.report.argmax : h.report.argmin;
    h.L = sign > 0 ? h.report.max_L : h.report.min_L;
    const long double lq = std::log(static_cast<long double>(R.q()));
    const long double l2 = std::log(static_cast<long double>(N)) / lq;  // log log |Q|
    const long double l3 = l2 > 0 ? std::log(l2) / lq : 0;
    h.benchmark = std::exp(kEulerGamma) * (l2 + l3);
    return h;
}

}  // namespace lfq
