#include "lfq/saddlepoint.hpp"

#include <cmath>
#include <fmt/format.h>

#include "lfq/constants.hpp"
#include "lfq/error.hpp"
#include "lfq/primes.hpp"

namespace lfq {

long double ln_cosh(long double y) {
    y = std::fabs(y);
    if (y < 1) {
        const long double s = std::sinh(y / 2);
        return std::log1p(2 * s * s);
    }
    return y + std::log1p(std::exp(-2 * y)) - std::log(2.0L);
}

long double f_t(long double t) {
    if (t < 0) throw InputError("f(t) needs t >= 0");
    return t < 1 ? ln_cosh(t) : ln_cosh(t) - t;
}

long double f_prime(long double t) {
    if (t < 0) throw InputError("f'(t) needs t >= 0");
    return t < 1 ? std::tanh(t) : -2 / (std::exp(2 * t) + 1);
}

long double g_summand(long double y) { return ln_cosh(y) / y - std::tanh(y); }

long double g_summand_prime(long double y) {
    const long double c = std::cosh(y);
    return std::tanh(y) / y - ln_cosh(y) / (y * y) - 1 / (c * c);
}

LogDerivs ep_log_derivs(long double x, long double r) {
    if (!(x >= 2)) throw InputError("ep_log_derivs needs x >= 2");
    const long double eps = 1 / x;
    const long double sigma = -0.5L * std::log1p(-eps * eps);
    const long double eta = std::atanh(eps);
    const long double ap = sigma + eta, bp = sigma - eta;
    const long double s = r * sigma, h = std::fabs(r) * eta;
    const long double w = x / (2 * (x + 1)), z0 = 1 / (x + 1);
    LogDerivs out;
    long double p0, pp, pm;
    if (h < 1) {
        const long double em1 = 2 * w * (std::expm1(s) * std::cosh(h) + 2 * std::sinh(h / 2) * std::sinh(h / 2));
        const long double E = 1 + em1;
        out.ln = std::log1p(em1);
        const long double es = std::exp(s);
        out.d1 = 2 * w * es * (sigma * std::cosh(r * eta) + eta * std::sinh(r * eta)) / E;
        p0 = z0 / E;
        pp = w * std::exp(s + r * eta) / E;
        pm = w * std::exp(s - r * eta) / E;
    } else {
        const long double hi = s + h;
        const long double e2 = std::exp(-2 * h), eh = std::exp(-hi);
        const long double Et = eh * z0 + w * (1 + e2);
        out.ln = hi + std::log(Et);
        p0 = eh * z0 / Et;
        const long double pdom = w / Et, psub = w * e2 / Et;
        pp = r > 0 ? pdom : psub;
        pm = r > 0 ? psub : pdom;
        out.d1 = pp * ap + pm * bp;
    }
    out.d2 = p0 * pp * ap * ap + p0 * pm * bp * bp + pp * pm * (ap - bp) * (ap - bp);
    return out;
}

CurlyL::CurlyL(std::uint32_t q, int min_degree) : q_(q), min_degree_(min_degree) {
    if (q < 3) throw InputError("CurlyL needs q >= 3");
}

long double CurlyL::pi_ld(int d) const {
    while (static_cast<int>(pi_cache_.size()) <= d) {
        const int k = static_cast<int>(pi_cache_.size());
        pi_cache_.push_back(k == 0 ? 0 : to_ld(pi_q(q_, k)));
    }
    return pi_cache_[d];
}

int CurlyL::cutoff(long double r) const {
    const long double ar = std::fabs(r);
    const int lr = ar > 1 ? static_cast<int>(std::ceil(2 * std::log(ar) / std::log(static_cast<long double>(q_)))) : 0;
    return std::max(lr + 20, min_degree_);
}

LogDerivs CurlyL::sum_to(long double r, int D) const {
    LogDerivs s;
    for (int d = D; d >= 1; --d) {  // small terms first
        const auto t = ep_log_derivs(std::pow(static_cast<long double>(q_), d), r);
        const long double p = pi_ld(d);
        s.ln += p * t.ln;
        s.d1 += p * t.d1;
        s.d2 += p * t.d2;
    }
    return s;
}

LogDerivs CurlyL::eval(long double r) const {
    if (r == 0) {
        LogDerivs z = sum_to(0, cutoff(0));
        z.ln = 0;
        return z;
    }
    int D = cutoff(r);
    for (int attempt = 0; attempt < 2; ++attempt, D += 20) {
        const LogDerivs s = sum_to(r, D);
        const auto last = ep_log_derivs(std::pow(static_cast<long double>(q_), D), r);
        const long double tail = pi_ld(D) * std::fabs(last.ln) * q_;
        if (tail <= 1e-12L * std::fabs(s.ln)) return s;
    }
    throw ConvergenceError(fmt::format("curly L truncation insufficient at r = {}", static_cast<double>(r)));
}

namespace {

// Newton with a bisection safeguard on an increasing function phi(k) - target.
template <class Fn>
long double solve_increasing(Fn phi, long double target, long double guess, long double tol, long double& residual) {
    long double lo = guess, hi = guess;
    auto val = [&](long double k) { return phi(k).first - target; };
    int guard = 0;
    while (val(lo) > 0) {
        lo /= 2;
        if (++guard > 200) throw ConvergenceError("saddle bracket failure below");
    }
    guard = 0;
    while (val(hi) < 0) {
        hi *= 2;
        if (++guard > 200) throw ConvergenceError("saddle bracket failure above");
    }
    long double k = 0.5L * (lo + hi);
    for (int it = 0; it < 400; ++it) {
        const auto [v, dv] = phi(k);
        const long double f = v - target;
        if (std::fabs(f) < tol) {
            residual = std::fabs(f);
            return k;
        }
        if (f < 0) lo = k;
        else hi = k;
        long double next = dv > 0 ? k - f / dv : 0.5L * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5L * (lo + hi);
        k = next;
    }
    throw ConvergenceError("saddle Newton iteration did not converge");
}

long double frac_part(long double v) { return v - std::floor(v); }

}  // namespace

SaddleSolution solve_kappa(const CurlyL& L, long double tau, const SaddleOptions& opt) {
    if (tau < opt.tau_min)
        throw InputError(fmt::format("tau = {} is below tau_min = {}", static_cast<double>(tau), static_cast<double>(opt.tau_min)));
    const std::uint32_t q = L.q();
    const long double lq = std::log(static_cast<long double>(q));
    SaddleSolution s;
    s.tau = tau;
    const long double target = std::log(tau) + kEulerGamma;
    s.kappa = solve_increasing(
        [&](long double k) {
            const auto e = L.eval(k);
            return std::pair{e.d1, e.d2};
        },
        target, std::pow(static_cast<long double>(q), tau), opt.tol, s.residual);
    const auto e = L.eval(s.kappa);
    s.L = e.ln;
    s.L1 = e.d1;
    s.L2 = e.d2;
    s.t = std::pow(static_cast<long double>(q), frac_part(std::log(s.kappa) / lq));
    if (s.t >= q) s.t = 1;
    s.G1 = G1(q, s.t, opt.bilateral);
    s.G2 = G2(q, s.t, opt.bilateral);
    s.C0 = s.G2;
    s.C1 = s.G2 - s.G1;
    s.phi_saddle = std::exp(s.L - s.kappa * target) / (s.kappa * std::sqrt(2 * kPi * s.L2));
    s.phi_asymptotic = std::exp(-s.C1 * std::pow(static_cast<long double>(q), tau - s.C0) / tau);
    return s;
}

long double phi_saddle(const CurlyL& L, long double tau, const SaddleOptions& opt) {
    return solve_kappa(L, tau, opt).phi_saddle;
}

long double phi_asymptotic(const CurlyL& L, long double tau, const SaddleOptions& opt) {
    if (tau < 2) throw InputError("phi_asymptotic needs tau >= 2");
    return solve_kappa(L, tau, opt).phi_asymptotic;
}

PsiSolution psi_saddle(const CurlyL& L, long double tau, const SaddleOptions& opt) {
    if (tau < opt.tau_min) throw InputError("tau is below tau_min");
    const std::uint32_t q = L.q();
    PsiSolution s;
    s.tau = tau;
    const long double target = kEulerGamma + std::log(tau) - std::log(zeta_A2(q));
    s.kappa = solve_increasing(
        [&](long double k) {
            const auto e = L.eval(-k);
            return std::pair{-e.d1, e.d2};
        },
        target, std::pow(static_cast<long double>(q), tau), opt.tol, s.residual);
    const auto e = L.eval(-s.kappa);
    s.psi_saddle = std::exp(e.ln - s.kappa * target) / (s.kappa * std::sqrt(2 * kPi * e.d2));
    return s;
}

long double bilateral_f_sum(std::uint32_t q, long double t, int B) {
    long double s = 0;
    for (int l = B; l >= -B; --l) {
        const long double y = t * std::pow(static_cast<long double>(q), l);
        s += f_t(y) / y;
    }
    return s;
}

long double bilateral_fprime_sum(std::uint32_t q, long double t, int B) {
    long double s = 0;
    for (int l = B; l >= -B; --l) s += f_prime(t * std::pow(static_cast<long double>(q), l));
    return s;
}

long double G1(std::uint32_t q, long double t, int B) {
    return 0.5L - std::log(t) / std::log(static_cast<long double>(q)) + bilateral_f_sum(q, t, B);
}

long double G2(std::uint32_t q, long double t, int B) {
    return 0.5L - std::log(t) / std::log(static_cast<long double>(q)) + bilateral_fprime_sum(q, t, B);
}

long double C1(std::uint32_t q, long double t, int B) { return G2(q, t, B) - G1(q, t, B); }

long double find_c(long double tol) {
    long double lo = 0.5L, hi = 3.0L;
    long double flo = g_summand_prime(lo);
    while (hi - lo > tol) {
        const long double mid = 0.5L * (lo + hi);
        const long double fm = g_summand_prime(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5L * (lo + hi);
}

C1Bracket c1_bracket(std::uint32_t q) {
    const long double c = find_c();
    return {-1 / std::log(static_cast<long double>(q)) + g_summand(c), g_summand(static_cast<long double>(q))};
}

std::vector<ConstantsRow> c0_c1_grid(std::uint32_t q, int points, int B) {
    if (points < 1) throw InputError("grid needs at least one point");
    std::vector<ConstantsRow> rows;
    for (int i = 0; i < points; ++i) {
        const long double t = 1 + static_cast<long double>(q - 1) * i / points;
        rows.push_back({t, C0(q, t, B), C1(q, t, B)});
    }
    return rows;
}

long double mertens_sum(std::uint32_t q, int M) {
    long double s = 0;
    for (int d = M; d >= 1; --d) s -= to_ld(pi_q(q, d)) * std::log1p(-std::pow(static_cast<long double>(q), -d));
    return s;
}

long double mertens_scaled_error(std::uint32_t q, int M) {
    const long double main = std::log(static_cast<long double>(M)) + kEulerGamma + 1.0L / (2 * M);
    return static_cast<long double>(M) * M * std::fabs(mertens_sum(q, M) - main);
}

}  // namespace lfq
