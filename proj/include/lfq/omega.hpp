#pragma once

#include <map>
#include <optional>
#include <vector>

#include "lfq/lfunction.hpp"
#include "lfq/store.hpp"

namespace lfq {

/// A sign delta_P for every monic irreducible P with deg P <= n.
struct SymbolPrescription {
    int n = 0;
    std::vector<MonicPoly> primes;  // enumeration order, degree by degree
    std::vector<int> delta;

    static SymbolPrescription uniform(const PolyRing& R, int n, int sign, Store* store = nullptr);
    /// Throws InputError unless every prime of degree <= n appears exactly once with a sign of +-1.
    void validate(const PolyRing& R, Store* store = nullptr) const;
};

/// Product of all monic irreducibles of degree <= n. Throws when the degree exceeds cap.
MonicPoly script_P(const PolyRing& R, int n, int cap = 4096, Store* store = nullptr);

/// (P/Q) for each listed P, by Euler's criterion modulo Q.
std::vector<int> symbol_vector(const PolyRing& R, const MonicPoly& Q, const std::vector<MonicPoly>& primes);
/// prod (1 + delta_P (P/Q)), with the symbols from the Jacobi kernel.
BigInt indicator_product(const PolyRing& R, const MonicPoly& Q, const SymbolPrescription& s);

/// Degree-N irreducibles Q with (P/Q) = delta_P for every prescribed P.
std::vector<MonicPoly> find_S(const PolyRing& R, int N, const SymbolPrescription& s, Store* store = nullptr);

/// Number of degree-N irreducibles per symbol vector against the primes of degree <= n.
/// Keys are bit masks: bit i set means the i-th prime has symbol -1.
std::map<std::uint64_t, std::uint64_t> census(const PolyRing& R, int N, int n, Store* store = nullptr);

struct OmegaReport {
    int N = 0, n = 0;
    std::uint64_t size = 0;
    long double main_term = 0;              // q^N / (2^Pi_q(n) N)
    long double mean_L = 0;
    long double predicted = 0;              // zeta_A(2) prod (1 + delta_P / |P|)
    long double lemma_window_scale = 0;     // q^(N/2 + n)
    long double prop_window_scale = 0;      // N^2 q^(N/2 + 2n) / |S|
    long double max_L = 0, min_L = 0;
    MonicPoly argmax, argmin;
};
OmegaReport average_L_over_S(const PolyRing& R, const std::vector<MonicPoly>& S, int N, const SymbolPrescription& s,
                             Store* store = nullptr);

/// Largest n with q^n < N log_q N / (10 zeta_A(2)), at least 1.
int hunt_degree(std::uint32_t q, int N);

struct HuntResult {
    int n = 0, sign = 0;
    MonicPoly Q;
    long double L = 0;
    long double benchmark = 0;  // e^gamma (log log |Q| + log log log |Q|)
    OmegaReport report;
};
/// Extreme L(1, chi_Q) over S_N(n, delta = sign). Throws ConvergenceError if S is empty.
HuntResult omega_hunt(const PolyRing& R, int N, int sign, std::optional<int> n_override = std::nullopt,
                      Store* store = nullptr);

}  // namespace lfq
