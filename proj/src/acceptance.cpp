#include "lfq/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <fmt/format.h>
#include <map>
#include <memory>
#include <optional>

#include "lfq/constants.hpp"
#include "lfq/ensemble.hpp"
#include "lfq/omega.hpp"
#include "lfq/random_model.hpp"
#include "lfq/rng.hpp"
#include "lfq/saddlepoint.hpp"

namespace lfq {

namespace {

using cd = std::complex<long double>;

struct Outcome {
    bool ok = true;
    std::string detail;

    void check(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += "FAILED " + what;
        }
    }
    void note(const std::string& s) {
        if (!detail.empty()) detail += "; ";
        detail += s;
    }
};

class Context {
   public:
    explicit Context(const AcceptanceOptions& o) : opt(o), F5(Field::make(5, 1)), F9(Field::make(3, 2)) {}

    const LValueTable& sweep5(int n) {
        auto it = sweeps_.find(n);
        if (it == sweeps_.end()) it = sweeps_.emplace(n, sweep_lvalues(EnsembleSpec(F5, n), opt.store)).first;
        return it->second;
    }

    const SampleBatch& batch() {
        if (!batch_) {
            ModelParams mp;
            mp.seed = opt.seed;
            mp.samples = opt.samples;
            batch_ = sample_batch(5, mp, false);
        }
        return *batch_;
    }

    cd model5(cd z) { return expectation_euler(5, z, 12).value; }

    const AcceptanceOptions& opt;
    Field F5, F9;

   private:
    std::map<int, LValueTable> sweeps_;
    std::optional<SampleBatch> batch_;
};

// Random square-free monic D with 1 <= deg D <= 5.
MonicPoly random_squarefree(const PolyRing& R, SplitMix64& g, int max_deg) {
    for (;;) {
        const int d = 1 + static_cast<int>(g() % max_deg);
        const MonicPoly D = R.monic_from_index(d, g() % R.monic_count(d));
        if (R.is_squarefree(D)) return D;
    }
}

Outcome c1_prime_counts(Context&) {
    Outcome o;
    for (std::uint32_t q : {5u, 9u})
        for (int m = 1; m <= 12; ++m) {
            const BigInt lhs = divisor_weighted_count(q, m);
            const BigInt rhs = boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(m));
            o.check(lhs == rhs, fmt::format("q={} m={}", q, m));
        }
    o.note("sum_{k|m} k pi_q(k) = q^m for m <= 12, q in {5, 9}");
    return o;
}

Outcome c2_census(Context& c) {
    Outcome o;
    auto run = [&](const Field& F, int lo, int hi) {
        for (int n = lo; n <= hi; ++n) {
            const EnsembleSpec s(F, n);
            const std::uint64_t got = count_H_n(s);
            o.check(got == s.size(), fmt::format("q={} n={}: {} vs {}", F.q(), n, got, s.size()));
        }
    };
    run(c.F5, 2, 6);
    run(c.F9, 2, 4);
    o.note("|H_n| = q^(n-1)(q-1) for n = 2..6 (q=5), 2..4 (q=9)");
    return o;
}

Outcome c3_vanishing(Context& c) {
    Outcome o;
    int tested = 0;
    for (const Field* F : {&c.F5, &c.F9}) {
        const PolyRing R(*F);
        SplitMix64 g(c.opt.seed + F->q());
        for (int i = 0; i < 50; ++i) {
            const MonicPoly D = random_squarefree(R, g, 5);
            for (int k : {D.degree(), D.degree() + 1}) {
                const std::int64_t s = char_sum(R, D, k);
                o.check(s == 0, fmt::format("q={} D={} k={} sum={}", F->q(), R.to_string(D.coeffs()), k, s));
                ++tested;
            }
        }
    }
    o.note(fmt::format("{} character sums vanish exactly", tested));
    return o;
}

Outcome c4_weil(Context& c) {
    Outcome o;
    const PolyRing R(c.F5);
    std::uint64_t roots = 0;
    long double worst = 0;
    for (int n : {3, 5}) {
        iter_H_n(EnsembleSpec(c.F5, n), [&](std::uint64_t, const Poly& D) {
            const auto L = l_polynomial(R, MonicPoly(D));
            const auto alpha = inverse_roots(L);
            try {
                const auto m = classify_roots(alpha, 5, c.opt.cal.root_tol);
                o.check(m.unit == 0 && m.sqrt_q == n - 1, fmt::format("odd-degree D={} has unit roots", R.to_string(D)));
                worst = std::max(worst, m.max_error);
            } catch (const ArithmeticError& ex) {
                o.check(false, ex.what());
            }
            roots += alpha.size();
        });
    }
    o.note(fmt::format("{} inverse roots, all |alpha|^2 = 5, max error {:.2e}", roots, static_cast<double>(worst)));
    return o;
}

Outcome c5_integrality(Context& c) {
    Outcome o;
    const PolyRing R(c.F5);
    long double worst = 0;
    std::uint64_t count = 0;
    for (int n : {3, 5}) {
        iter_H_n(EnsembleSpec(c.F5, n), [&](std::uint64_t, const Poly& D) {
            try {
                const auto r = class_number(l_polynomial(R, MonicPoly(D)), c.opt.cal.integrality_tol);
                worst = std::max(worst, r.residual);
                if (n == 3) {
                    const auto pts = affine_point_count_plus_one(R, MonicPoly(D));
                    o.check(r.h == pts, fmt::format("h({}) = {} but point count gives {}", R.to_string(D), r.h.str(), pts));
                }
            } catch (const ArithmeticError& ex) {
                o.check(false, ex.what());
            }
            ++count;
        });
    }
    const MonicPoly D(R.from_indices({1, 1, 0, 1}));
    const auto r = class_number(R, D);
    const auto pts = affine_point_count_plus_one(R, D);
    o.check(r.h == 9 && pts == 9, fmt::format("h(T^3+T+1) = {}, oracle {}", r.h.str(), pts));
    o.note(fmt::format("{} class numbers integral (max residual {:.2e}); h(T^3+T+1) = {} = point count", count,
                       static_cast<double>(worst), r.h.str()));
    return o;
}

Outcome c6_first_moment(Context& c) {
    Outcome o;
    const cd model = c.model5(1);
    std::vector<long double> dev;
    for (int n : {5, 6, 7}) dev.push_back(empirical_moment(c.sweep5(n), 1, model).deviation);
    o.check(dev[2] < c.opt.cal.first_moment_tol, fmt::format("n=7 deviation {:.4f}", static_cast<double>(dev[2])));
    o.check(dev[0] > dev[1] && dev[1] > dev[2], "deviation not decreasing over n = 5, 6, 7");
    o.note(fmt::format("model {:.6f}; deviations n=5 {:.5f}, n=6 {:.5f}, n=7 {:.5f}", static_cast<double>(model.real()),
                       static_cast<double>(dev[0]), static_cast<double>(dev[1]), static_cast<double>(dev[2])));
    return o;
}

Outcome c7_complex_moment(Context& c) {
    Outcome o;
    for (cd z : {cd(1, 1), cd(2, 0)}) {
        const auto m = empirical_moment(c.sweep5(8), z, c.model5(z));
        o.check(m.deviation < c.opt.cal.complex_moment_tol,
                fmt::format("z={}+{}i deviation {:.4f}", static_cast<double>(z.real()), static_cast<double>(z.imag()),
                            static_cast<double>(m.deviation)));
        o.note(fmt::format("z={}+{}i deviation {:.5f}", static_cast<double>(z.real()), static_cast<double>(z.imag()),
                           static_cast<double>(m.deviation)));
    }
    return o;
}

Outcome c8_routes(Context& c) {
    Outcome o;
    long double worst = 0;
    const std::vector<cd> grid{0, 1, -1, 2, -2, cd(1, 1), cd(1, -1), cd(0.5, 0.5), cd(0.5, -0.5)};
    for (std::uint32_t q : {5u, 9u})
        for (cd z : grid) {
            const cd a = expectation_euler(q, z, 12).value;
            const cd b = expectation_divisor(q, z, 12).value;
            const long double rel = std::abs(a - b) / std::abs(a);
            worst = std::max(worst, rel);
            o.check(rel <= c.opt.cal.route_tol, fmt::format("q={} z={}+{}i rel {:.2e}", q, static_cast<double>(z.real()),
                                                            static_cast<double>(z.imag()), static_cast<double>(rel)));
        }
    o.note(fmt::format("max relative difference {:.2e}", static_cast<double>(worst)));
    return o;
}

Outcome c9_monte_carlo(Context& c) {
    Outcome o;
    const auto& b = c.batch();
    for (int k : {1, 2}) {
        const auto est = sample_moment(b, k);
        const long double exact = c.model5(k).real();
        const long double sig = std::fabs(est.mean - exact) / est.std_error;
        o.check(sig <= c.opt.cal.mc_sigmas, fmt::format("moment {} off by {:.2f} SE", k, static_cast<double>(sig)));
        o.note(fmt::format("E L^{}: sample {:.5f} exact {:.5f} ({:.2f} SE)", k, static_cast<double>(est.mean),
                           static_cast<double>(exact), static_cast<double>(sig)));
    }
    ModelParams mp;
    mp.seed = c.opt.seed;
    mp.samples = c.opt.samples;
    const auto again = sample_batch(5, mp, false);
    o.check(again.lnL == b.lnL, "rerun not bit-identical");
    o.note("rerun bit-identical");
    return o;
}

Outcome c10_distribution(Context& c) {
    Outcome o;
    const auto& t = c.sweep5(8);
    const auto tr = tail_counts(t, 1);
    const auto mc = phi_psi_empirical(c.batch(), 1);
    const long double emp = static_cast<long double>(tr.count_high) / tr.total;
    const long double rel = std::fabs(emp / mc.phi - 1);
    o.check(rel < c.opt.cal.tail_match_tol, fmt::format("tail fraction {:.5f} vs MC {:.5f}", static_cast<double>(emp),
                                                        static_cast<double>(mc.phi)));
    std::uint64_t prev_hi = UINT64_MAX, prev_lo = UINT64_MAX;
    bool mono = true;
    for (int i = 1; i <= 40; ++i) {
        const auto r = tail_counts(t, 0.05L * i);
        mono = mono && r.count_high <= prev_hi && r.count_low <= prev_lo;
        prev_hi = r.count_high;
        prev_lo = r.count_low;
    }
    o.check(mono, "tail counts not monotone in tau");
    o.note(fmt::format("H_8 fraction {:.5f}, MC {:.5f} +- {:.5f}, relative gap {:.4f}", static_cast<double>(emp),
                       static_cast<double>(mc.phi), static_cast<double>(mc.phi_se), static_cast<double>(rel)));
    return o;
}

Outcome c11_saddle(Context& c) {
    Outcome o;
    const CurlyL L(5);
    SaddleOptions so;
    so.tol = c.opt.cal.kappa_tol;
    long double worst_res = 0;
    for (int i = 0; i <= 20; ++i) {
        const auto s = solve_kappa(L, 1 + 0.25L * i, so);
        worst_res = std::max(worst_res, s.residual);
        o.check(s.residual < c.opt.cal.kappa_tol, fmt::format("kappa residual at tau={}", 1 + 0.25 * i));
    }
    long double worst_fd = 0;
    for (long double r : {10.0L, 100.0L, 1000.0L}) {
        const long double h = r * 1e-4L;
        const auto e = L.eval(r);
        const long double d1 = (L.value(r + h) - L.value(r - h)) / (2 * h);
        const long double d2 = (L.prime(r + h) - L.prime(r - h)) / (2 * h);
        const long double e1 = std::fabs(d1 / e.d1 - 1), e2 = std::fabs(d2 / e.d2 - 1);
        worst_fd = std::max({worst_fd, e1, e2});
        o.check(e1 < c.opt.cal.finite_difference_tol && e2 < c.opt.cal.finite_difference_tol,
                fmt::format("finite differences at r={}", static_cast<double>(r)));
    }
    std::string curv;
    for (long double r : {1e3L, 1e4L, 1e5L}) {
        const long double v = L.second(r) * r * std::log(r);
        o.check(v >= c.opt.cal.curvature_lo && v <= c.opt.cal.curvature_hi, fmt::format("curvature {} at r={}", static_cast<double>(v), static_cast<double>(r)));
        curv += fmt::format(" {:.3f}", static_cast<double>(v));
    }
    std::string ratios;
    int compared = 0;
    for (int i = 0; i <= 7; ++i) {
        const long double tau = 0.8L + 0.1L * i;
        const auto mc = phi_psi_empirical(c.batch(), tau);
        if (mc.phi_hits < c.opt.cal.saddle_min_hits) continue;
        const long double ratio = phi_saddle(L, tau, so) / mc.phi;
        ++compared;
        o.check(ratio >= c.opt.cal.saddle_ratio_lo && ratio <= c.opt.cal.saddle_ratio_hi,
                fmt::format("saddle/MC ratio {:.3f} at tau={:.1f}", static_cast<double>(ratio), static_cast<double>(tau)));
        ratios += fmt::format(" {:.1f}:{:.3f}", static_cast<double>(tau), static_cast<double>(ratio));
    }
    o.check(compared > 0, "no tau with enough Monte Carlo hits");
    o.note(fmt::format("max kappa residual {:.1e}; max FD error {:.1e}; curvature{}; saddle/MC{}", static_cast<double>(worst_res),
                       static_cast<double>(worst_fd), curv, ratios));
    return o;
}

Outcome c12_constants(Context&) {
    Outcome o;
    const long double cc = find_c();
    const long double gc = g_summand(cc);
    o.check(std::fabs(cc - 1.28377L) <= 1e-5L, fmt::format("c = {:.8f}", static_cast<double>(cc)));
    o.check(std::fabs(gc + 0.339834L) <= 1e-6L, fmt::format("g(c) = {:.8f}", static_cast<double>(gc)));
    for (std::uint32_t q : {5u, 9u}) {
        const auto br = c1_bracket(q);
        for (const auto& row : c0_c1_grid(q, 200)) {
            const long double m = -row.c1;
            o.check(br.lower < m && m < br.upper, fmt::format("q={} t={} -C1={}", q, static_cast<double>(row.t), static_cast<double>(m)));
        }
    }
    bool neg = true;
    for (int i = 1; i <= 50000; ++i) neg = neg && g_summand(i * 1e-3L) <= 0;
    o.check(neg, "a summand is positive on (0, 50]");
    o.note(fmt::format("c = {:.7f}, g(c) = {:.7f}; C1 bracket holds on both grids", static_cast<double>(cc),
                       static_cast<double>(gc)));
    return o;
}

Outcome c13_mertens(Context& c) {
    Outcome o;
    std::string vals;
    for (int M : {10, 20, 40}) {
        const long double v = mertens_scaled_error(5, M);
        o.check(v < c.opt.cal.mertens, fmt::format("M={} scaled error {:.4f}", M, static_cast<double>(v)));
        vals += fmt::format(" M={}:{:.5f}", M, static_cast<double>(v));
    }
    o.note("M^2 |error|" + vals + fmt::format(" < {}", c.opt.cal.mertens));
    return o;
}

Outcome c14_orthogonality(Context& c) {
    Outcome o;
    const PolyRing R(c.F5);
    const EnsembleSpec s(c.F5, 4);
    const auto sq = orthogonality_sum(s, MonicPoly(R.monomial(2)));
    const auto lin = orthogonality_sum(s, MonicPoly(R.monomial(1)));
    const long double k = c.opt.cal.orthogonality;
    o.check(sq.deviation <= k * sq.sqrt_H, fmt::format("T^2: sum {} main {:.2f}", sq.sum, static_cast<double>(sq.main_term)));
    o.check(std::fabs(static_cast<long double>(lin.sum)) <= k * lin.sqrt_H * 2, fmt::format("T: sum {}", lin.sum));
    o.note(fmt::format("T^2: {} vs {:.2f}; T: {}; window {:.1f}", sq.sum, static_cast<double>(sq.main_term), lin.sum,
                       static_cast<double>(k * sq.sqrt_H)));
    return o;
}

Outcome c15_omega(Context& c) {
    Outcome o;
    const PolyRing R(c.F5);
    for (int N : {6, 7}) {
        std::uint64_t total = 0;
        for (const auto& [mask, cnt] : census(R, N, 1, c.opt.store)) total += cnt;
        o.check(BigInt(total) == pi_q(5, N), fmt::format("census N={}", N));
    }
    const auto plus = SymbolPrescription::uniform(R, 1, 1, c.opt.store);
    const auto minus = SymbolPrescription::uniform(R, 1, -1, c.opt.store);
    const auto Sp = find_S(R, 8, plus, c.opt.store);
    const auto Sm = find_S(R, 8, minus, c.opt.store);
    const long double main = std::pow(5.0L, 8) / (32 * 8);
    const long double size_rel = std::fabs(Sp.size() / main - 1);
    o.check(size_rel <= c.opt.cal.omega_size_tol, fmt::format("|S| = {} vs {:.1f}", Sp.size(), static_cast<double>(main)));
    const auto rp = average_L_over_S(R, Sp, 8, plus, c.opt.store);
    const auto rm = average_L_over_S(R, Sm, 8, minus, c.opt.store);
    const long double ep = std::fabs(rp.mean_L / 3.1104L - 1), em = std::fabs(rm.mean_L / 0.4096L - 1);
    o.check(std::fabs(rp.predicted - 3.1104L) < 1e-12L && std::fabs(rm.predicted - 0.4096L) < 1e-12L, "closed-form predictions");
    o.check(ep <= c.opt.cal.omega_average_tol, fmt::format("plus mean {:.4f}", static_cast<double>(rp.mean_L)));
    o.check(em <= c.opt.cal.omega_average_tol, fmt::format("minus mean {:.4f}", static_cast<double>(rm.mean_L)));
    o.note(fmt::format("|S+| = {} (main {:.1f}), |S-| = {}; mean L+ {:.4f} vs 3.1104, mean L- {:.4f} vs 0.4096; census exact",
                       Sp.size(), static_cast<double>(main), Sm.size(), static_cast<double>(rp.mean_L),
                       static_cast<double>(rm.mean_L)));
    return o;
}

struct Criterion {
    int id;
    const char* name;
    Outcome (*fn)(Context&);
};

const Criterion kCriteria[] = {
    {1, "prime-count identity", c1_prime_counts},
    {2, "ensemble census", c2_census},
    {3, "character-sum vanishing", c3_vanishing},
    {4, "Weil root magnitudes", c4_weil},
    {5, "class-number integrality", c5_integrality},
    {6, "first moment", c6_first_moment},
    {7, "complex moments", c7_complex_moment},
    {8, "model route equivalence", c8_routes},
    {9, "Monte Carlo consistency", c9_monte_carlo},
    {10, "distribution match", c10_distribution},
    {11, "saddle machinery", c11_saddle},
    {12, "tail constants", c12_constants},
    {13, "Mertens estimate", c13_mertens},
    {14, "orthogonality", c14_orthogonality},
    {15, "Omega construction", c15_omega},
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
    Context ctx(opt);
    std::vector<CriterionResult> out;
    for (const auto& c : kCriteria) {
        if (!opt.only.empty() && !opt.only.count(c.id)) continue;
        CriterionResult r;
        r.id = c.id;
        r.name = c.name;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const Outcome o = c.fn(ctx);
            r.passed = o.ok;
            r.detail = o.detail;
        } catch (const std::exception& ex) {
            r.passed = false;
            r.detail = fmt::format("exception: {}", ex.what());
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (opt.on_result) opt.on_result(r);
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_result_line(const CriterionResult& r) {
    return fmt::format("{}  {:>2}  {:<26} {} ({:.1f} s)", r.passed ? "PASS" : "FAIL", r.id, r.name, r.detail, r.seconds);
}

}  // namespace lfq
