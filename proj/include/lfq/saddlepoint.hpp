#pragma once

#include <cstdint>
#include <vector>

namespace lfq {

/// f(t) = ln cosh t for t < 1 and ln cosh t - t for t >= 1.
long double f_t(long double t);
long double f_prime(long double t);
/// ln cosh y / y - tanh y, the summand of -C_1.
long double g_summand(long double y);
/// d/dy of g_summand.
long double g_summand_prime(long double y);
long double ln_cosh(long double y);

struct LogDerivs {
    long double ln = 0, d1 = 0, d2 = 0;
};
/// ln E_P(r) and its first two r-derivatives for |P| = x.
LogDerivs ep_log_derivs(long double x, long double r);

/// L(r) = ln E(L(1, X)^r) summed by degree with exact prime counts.
class CurlyL {
   public:
    explicit CurlyL(std::uint32_t q, int min_degree = 20);

    std::uint32_t q() const { return q_; }
    LogDerivs eval(long double r) const;
    long double value(long double r) const { return eval(r).ln; }
    long double prime(long double r) const { return eval(r).d1; }
    long double second(long double r) const { return eval(r).d2; }
    /// Degree cutoff used at r: max(2 log_q |r| + 20, min_degree).
    int cutoff(long double r) const;

   private:
    LogDerivs sum_to(long double r, int D) const;
    long double pi_ld(int d) const;

    std::uint32_t q_;
    int min_degree_;
    mutable std::vector<long double> pi_cache_;
};

struct SaddleSolution {
    long double tau = 0, kappa = 0, residual = 0;
    long double L = 0, L1 = 0, L2 = 0;  // L(kappa), L'(kappa), L''(kappa)
    long double t = 0;                  // q^{frac(log_q kappa)}
    long double G1 = 0, G2 = 0, C0 = 0, C1 = 0;
    long double phi_saddle = 0;
    long double phi_asymptotic = 0;  // only meaningful for tau >= 2
};

struct SaddleOptions {
    long double tau_min = 0.8L;
    long double tol = 1e-10L;
    int bilateral = 60;
};

/// Solves L'(kappa) = ln tau + gamma and evaluates the tail estimates.
SaddleSolution solve_kappa(const CurlyL& L, long double tau, const SaddleOptions& opt = {});

/// exp(L(k) - k (ln tau + gamma)) / (k sqrt(2 pi L''(k))).
long double phi_saddle(const CurlyL& L, long double tau, const SaddleOptions& opt = {});
/// exp(-C_1(t) q^{tau - C_0(t)} / tau), t = q^{frac(log_q kappa)}.
long double phi_asymptotic(const CurlyL& L, long double tau, const SaddleOptions& opt = {});

/// The small-value tail by mirroring at -kappa: -L'(-kappa) = gamma + ln tau - ln zeta_A(2).
struct PsiSolution {
    long double tau = 0, kappa = 0, residual = 0, psi_saddle = 0;
};
PsiSolution psi_saddle(const CurlyL& L, long double tau, const SaddleOptions& opt = {});

/// Bilateral sums over l in [-B, B] for t in [1, q).
long double bilateral_f_sum(std::uint32_t q, long double t, int B = 60);
long double bilateral_fprime_sum(std::uint32_t q, long double t, int B = 60);
long double G1(std::uint32_t q, long double t, int B = 60);
long double G2(std::uint32_t q, long double t, int B = 60);
inline long double C0(std::uint32_t q, long double t, int B = 60) { return G2(q, t, B); }
long double C1(std::uint32_t q, long double t, int B = 60);

/// Root of g' on (0.5, 3).
long double find_c(long double tol = 1e-12L);

struct C1Bracket {
    long double lower = 0, upper = 0;
};
/// -1/ln q + g(c) < -C_1(t) < g(q).
C1Bracket c1_bracket(std::uint32_t q);

struct ConstantsRow {
    long double t = 0, c0 = 0, c1 = 0;
};
/// t_i = 1 + (q - 1) i / points, i = 0 .. points - 1.
std::vector<ConstantsRow> c0_c1_grid(std::uint32_t q, int points, int B = 60);

/// Degree-grouped sum over deg P <= M of -ln(1 - 1/|P|).
long double mertens_sum(std::uint32_t q, int M);
/// M^2 |mertens_sum - ln M - gamma - 1/(2M)|.
long double mertens_scaled_error(std::uint32_t q, int M);

}  // namespace lfq
