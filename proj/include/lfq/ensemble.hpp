#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "lfq/lfunction.hpp"
#include "lfq/store.hpp"

namespace lfq {

/// H_n: monic square-free polynomials of degree n over F_q.
struct EnsembleSpec {
    Field field;
    int n = 0;

    /// Throws InputError unless q = 1 mod 4 and n >= 1.
    EnsembleSpec(Field f, int n);
    /// q^(n-1) (q - 1) for n >= 2, q for n = 1.
    std::uint64_t size() const;
    int genus() const { return (n - 1) / 2; }
};

/// Calls fn(monic index, coefficients) for every D in H_n, in index order.
void iter_H_n(const EnsembleSpec& spec, const std::function<void(std::uint64_t, const Poly&)>& fn);
/// Streams H_n and counts it.
std::uint64_t count_H_n(const EnsembleSpec& spec);

/// L(1, chi_D) for every D in H_n, in index order.
struct LValueTable {
    std::uint32_t q = 0;
    int n = 0;
    std::vector<std::uint64_t> index;
    std::vector<long double> L1;
    bool from_cache = false;

    std::uint64_t size() const { return L1.size(); }
};

/// Sweep with the Euler-product kernel; the coefficient records are cached
/// in the store when one is given.
LValueTable sweep_lvalues(const EnsembleSpec& spec, Store* store = nullptr);
/// Coefficient records of a sweep (used for the cache and for the CLI).
std::vector<LCoeffRecord> sweep_coefficients(const EnsembleSpec& spec, Store* store = nullptr);

struct MomentReport {
    std::complex<long double> z;
    int n = 0;
    std::complex<long double> empirical;
    std::complex<long double> model;
    long double deviation = 0;  // |empirical / model - 1|
};
MomentReport empirical_moment(const LValueTable& t, std::complex<long double> z,
                              std::complex<long double> model_value);

struct TailReport {
    long double tau = 0;
    std::uint64_t count_high = 0, count_low = 0, total = 0;
    long double model_phi = 0, model_psi = 0;  // filled in by callers
    bool in_theorem_range = false;
};
/// #{L > e^gamma tau} and #{L < zeta_A(2) / (e^gamma tau)}.
TailReport tail_counts(const LValueTable& t, long double tau);

struct ExtremeReport {
    std::uint64_t argmax = 0, argmin = 0;
    long double max_L = 0, min_L = 0;
    long double conj_upper = 0;  // e^gamma (log n + log log n)
    long double conj_lower = 0;  // zeta_A(2) / that
};
ExtremeReport extreme_scan(const LValueTable& t);

struct OrthogonalityRecord {
    std::int64_t sum = 0;
    bool square = false;
    long double main_term = 0;  // |H_n| prod_{P | f} (1 + 1/|P|)^-1 when f is a square, else 0
    long double deviation = 0;  // |sum - main_term|
    long double sqrt_H = 0;
};
/// Exact sum over H_n of chi_D(f).
OrthogonalityRecord orthogonality_sum(const EnsembleSpec& spec, const MonicPoly& f);

/// 1 <= tau <= log n - 2 log log n - log log log n (base q), empty at small n.
bool in_theorem_tau_range(std::uint32_t q, int n, long double tau);

}  // namespace lfq
