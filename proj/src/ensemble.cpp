#include "lfq/ensemble.hpp"

#include <cmath>
#include <fmt/format.h>

#include "lfq/constants.hpp"
#include "lfq/parallel.hpp"

namespace lfq {

EnsembleSpec::EnsembleSpec(Field f, int n_) : field(std::move(f)), n(n_) {
    require_reciprocity_field(field);
    if (n < 1) throw InputError("ensemble degree must be >= 1");
}

std::uint64_t EnsembleSpec::size() const {
    const PolyRing R(field);
    if (n == 1) return field.q();
    return R.monic_count(n - 1) * (field.q() - 1);
}

namespace {

bool squarefree_poly(const PolyRing& R, const Poly& D) {
    const Poly d = R.derivative(D);
    if (d.empty()) return false;
    return R.gcd(D, d).size() == 1;
}

}  // namespace

void iter_H_n(const EnsembleSpec& spec, const std::function<void(std::uint64_t, const Poly&)>& fn) {
    const PolyRing R(spec.field);
    const std::uint64_t total = R.monic_count(spec.n);
    Poly D;
    for (std::uint64_t i = 0; i < total; ++i) {
        R.monic_from_index(spec.n, i, D);
        if (spec.n == 1 || squarefree_poly(R, D)) fn(i, D);
    }
}

std::uint64_t count_H_n(const EnsembleSpec& spec) {
    const PolyRing R(spec.field);
    const std::uint64_t total = R.monic_count(spec.n);
    return deterministic_sum<std::uint64_t>(total, [&](std::uint64_t i) -> std::uint64_t {
        thread_local Poly D;
        R.monic_from_index(spec.n, i, D);
        return spec.n == 1 || squarefree_poly(R, D) ? 1 : 0;
    });
}

std::vector<LCoeffRecord> sweep_coefficients(const EnsembleSpec& spec, Store* store) {
    if (store) {
        if (auto cached = store->load_lvalues(spec.field, spec.n)) {
            if (cached->size() == spec.size()) return std::move(*cached);
        }
    }
    const PolyRing R(spec.field);
    const EulerKernel K(R, spec.n, store);
    const std::uint64_t total = R.monic_count(spec.n);
    auto blocks = map_blocks<std::vector<LCoeffRecord>>(total, kReduceBlock, [&](std::uint64_t lo, std::uint64_t hi) {
        std::vector<LCoeffRecord> out;
        Poly D;
        std::vector<std::int64_t> c;
        for (std::uint64_t i = lo; i < hi; ++i) {
            R.monic_from_index(spec.n, i, D);
            if (spec.n > 1 && !squarefree_poly(R, D)) continue;
            K.coefficients(D, c);
            LCoeffRecord rec{i, {}};
            for (std::size_t k = 1; k < c.size(); ++k) {
                if (c[k] > INT32_MAX || c[k] < INT32_MIN) throw ArithmeticError("L coefficient exceeds 32 bits");
                rec.coeffs.push_back(static_cast<std::int32_t>(c[k]));
            }
            out.push_back(std::move(rec));
        }
        return out;
    });
    std::vector<LCoeffRecord> all;
    all.reserve(spec.size());
    for (auto& b : blocks)
        for (auto& r : b) all.push_back(std::move(r));
    if (all.size() != spec.size()) throw ArithmeticError("H_n sweep count differs from q^(n-1)(q-1)");
    if (store) store->save_lvalues(spec.field, spec.n, all);
    return all;
}

LValueTable sweep_lvalues(const EnsembleSpec& spec, Store* store) {
    bool cached = false;
    if (store) cached = static_cast<bool>(store->load_lvalues(spec.field, spec.n));
    const auto recs = sweep_coefficients(spec, store);
    LValueTable t;
    t.q = spec.field.q();
    t.n = spec.n;
    t.from_cache = cached;
    t.index.reserve(recs.size());
    t.L1.reserve(recs.size());
    const PolyRing R(spec.field);
    LPolynomial L{MonicPoly(), t.q, {}, true};
    for (const auto& r : recs) {
        L.coeffs.assign(1, 1);
        for (auto c : r.coeffs) L.coeffs.push_back(c);
        t.index.push_back(r.index);
        t.L1.push_back(l_value_at_1(L));
    }
    return t;
}

MomentReport empirical_moment(const LValueTable& t, std::complex<long double> z,
                              std::complex<long double> model_value) {
    using cd = std::complex<long double>;
    MomentReport m;
    m.z = z;
    m.n = t.n;
    if (t.size() == 0) throw InputError("empty L-value table");
    if (z == cd(0)) {
        m.empirical = 1;
    } else {
        const cd s = deterministic_sum<cd>(t.size(), [&](std::uint64_t i) { return std::exp(z * std::log(t.L1[i])); });
        m.empirical = s / static_cast<long double>(t.size());
    }
    m.model = model_value;
    m.deviation = std::abs(m.empirical / m.model - 1.0L);
    return m;
}

bool in_theorem_tau_range(std::uint32_t q, int n, long double tau) {
    const long double lq = std::log(static_cast<long double>(q));
    const long double l1 = std::log(static_cast<long double>(n)) / lq;
    if (l1 <= 0) return false;
    const long double l2 = std::log(l1) / lq;
    if (l2 <= 0) return false;
    const long double l3 = std::log(l2) / lq;
    return tau >= 1 && tau <= l1 - 2 * l2 - l3;
}

TailReport tail_counts(const LValueTable& t, long double tau) {
    TailReport r;
    r.tau = tau;
    r.total = t.size();
    const long double eg = std::exp(kEulerGamma);
    const long double hi = eg * tau, lo = zeta_A2(t.q) / (eg * tau);
    for (long double v : t.L1) {
        if (v > hi) ++r.count_high;
        if (v < lo) ++r.count_low;
    }
    r.in_theorem_range = in_theorem_tau_range(t.q, t.n, tau);
    return r;
}

ExtremeReport extreme_scan(const LValueTable& t) {
    if (t.size() == 0) throw InputError("empty L-value table");
    ExtremeReport r;
    r.max_L = r.min_L = t.L1[0];
    r.argmax = r.argmin = t.index[0];
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (t.L1[i] > r.max_L) {
            r.max_L = t.L1[i];
            r.argmax = t.index[i];
        }
        if (t.L1[i] < r.min_L) {
            r.min_L = t.L1[i];
            r.argmin = t.index[i];
        }
    }
    const long double lq = std::log(static_cast<long double>(t.q));
    const long double l1 = std::log(static_cast<long double>(t.n)) / lq;
    const long double l2 = l1 > 0 ? std::log(l1) / lq : 0;
    r.conj_upper = std::exp(kEulerGamma) * (l1 + l2);
    r.conj_lower = r.conj_upper > 0 ? zeta_A2(t.q) / r.conj_upper : 0;
    return r;
}

OrthogonalityRecord orthogonality_sum(const EnsembleSpec& spec, const MonicPoly& f) {
    const PolyRing R(spec.field);
    OrthogonalityRecord rec;
    const Field& F = spec.field;
    iter_H_n(spec, [&](std::uint64_t, const Poly& D) { rec.sum += jacobi(F, D, f.coeffs()); });
    const long double H = static_cast<long double>(spec.size());
    rec.sqrt_H = std::sqrt(H);
    if (f.degree() == 0) {
        rec.square = true;
        rec.main_term = H;
    } else {
        const auto fac = R.factor(f);
        rec.square = std::all_of(fac.begin(), fac.end(), [](const FactorPart& p) { return p.exponent % 2 == 0; });
        if (rec.square) {
            long double m = H;
            for (const auto& p : fac) m /= 1 + std::pow(static_cast<long double>(F.q()), -p.prime.degree());
            rec.main_term = m;
        }
    }
    rec.deviation = std::fabs(static_cast<long double>(rec.sum) - rec.main_term);
    return rec;
}

}  // namespace lfq
