#include "lfq/lfunction.hpp"

#include <Eigen/Eigenvalues>
#include <array>
#include <cmath>
#include <fmt/format.h>
#include <iostream>

#include "lfq/constants.hpp"
#include "lfq/parallel.hpp"

namespace lfq {

int LPolynomial::degree() const {
    int m = static_cast<int>(coeffs.size()) - 1;
    while (m > 0 && coeffs[m] == 0) --m;
    return m;
}

std::int64_t char_sum(const PolyRing& R, const MonicPoly& D, int k) {
    require_reciprocity_field(R.field());
    if (k == 0) return 1;
    const std::uint64_t n = R.monic_count(k);
    const Field& F = R.field();
    return deterministic_sum<std::int64_t>(n, [&](std::uint64_t i) {
        thread_local Poly f;
        R.monic_from_index(k, i, f);
        return static_cast<std::int64_t>(jacobi(F, D.coeffs(), f));
    });
}

std::int64_t char_sum_safe(const PolyRing& R, const MonicPoly& D, int k) {
    if (k == 0) return 1;
    std::int64_t s = 0;
    for (std::uint64_t i = 0, n = R.monic_count(k); i < n; ++i) s += chi(R, D, R.monic_from_index(k, i));
    return s;
}

LPolynomial l_polynomial(const PolyRing& R, const MonicPoly& D) {
    if (D.degree() < 1) throw InputError("L-polynomial needs deg D >= 1");
    LPolynomial L{D, R.q(), {}, R.is_squarefree(D)};
    if (!L.primitive)
        std::cerr << "warning: " << R.to_string(D.coeffs()) << " is not square-free; the character is imprimitive\n";
    for (int k = 0; k < D.degree(); ++k) L.coeffs.push_back(char_sum(R, D, k));
    return L;
}

namespace {

// C(m + j - 1, j): coefficient of u^j in (1 - u)^-m.
std::int64_t rising_binom(std::int64_t m, int j) {
    __int128 r = 1;
    for (int i = 1; i <= j; ++i) r = r * (m + i - 1) / i;
    return static_cast<std::int64_t>(r);
}

constexpr std::uint32_t kTableLimit = 4096;

}  // namespace

EulerKernel::EulerKernel(const PolyRing& R, int n, Store* store) : R_(R), n_(n) {
    require_reciprocity_field(R.field());
    if (n < 1) throw InputError("EulerKernel needs n >= 1");
    kmax_ = (n - 1) / 2;
    const Field& F = R.field();
    const std::uint32_t q = R.q();
    for (int d = 1; d <= kmax_; ++d) {
        for (const auto& P : irreducibles(R, d, store)) {
            PrimeData pd;
            pd.d = d;
            pd.P = P;
            std::uint64_t res = 1;
            for (int i = 0; i < d; ++i) res *= q;
            pd.residues = res <= kTableLimit ? static_cast<std::uint32_t>(res) : 0;
            pd.tpow.assign(static_cast<std::size_t>(n + 1) * d, 0);
            Poly t{Fq{1}};
            for (int i = 0; i <= n; ++i) {
                for (int j = 0; j < static_cast<int>(t.size()); ++j) pd.tpow[i * d + j] = t[j].v;
                t = R.rem(R.mul(t, R.T()), P.coeffs());
            }
            if (pd.residues) {
                pd.table.assign(pd.residues, -1);
                pd.table[0] = 0;
                Poly x;
                for (std::uint32_t a = 1; a < pd.residues; ++a) {
                    x.assign(d, Fq{0});
                    for (std::uint32_t v = a, i = 0; v; v /= q, ++i) x[i] = Fq{static_cast<std::uint16_t>(v % q)};
                    normalize(x);
                    const Poly sq = R.rem(R.mul(x, x), P.coeffs());
                    std::uint32_t idx = 0;
                    for (std::size_t i = sq.size(); i-- > 0;) idx = idx * q + sq[i].v;
                    pd.table[idx] = 1;
                }
            }
            primes_.push_back(std::move(pd));
        }
    }
    (void)F;
}

void EulerKernel::coefficients(const Poly& D, std::vector<std::int64_t>& out) const {
    if (degree(D) != n_) throw InputError("EulerKernel degree mismatch");
    const Field& F = R_.field();
    const std::uint32_t q = R_.q();
    const int K = kmax_;
    std::array<std::int64_t, 64> plus{}, minus{};
    std::array<std::uint16_t, 64> r{};
    for (const auto& pd : primes_) {
        const int d = pd.d;
        int s;
        if (pd.residues) {
            std::fill(r.begin(), r.begin() + d, 0);
            for (int i = 0; i <= n_; ++i) {
                const Fq c = D[i];
                if (c.is_zero()) continue;
                const std::uint16_t* tp = &pd.tpow[static_cast<std::size_t>(i) * d];
                for (int j = 0; j < d; ++j) r[j] = F.add(Fq{r[j]}, F.mul(c, Fq{tp[j]})).v;
            }
            std::uint32_t idx = 0;
            for (int j = d; j-- > 0;) idx = idx * q + r[j];
            s = pd.table[idx];
        } else {
            s = jacobi(F, D, pd.P.coeffs());
        }
        if (s > 0) ++plus[d];
        else if (s < 0) ++minus[d];
    }
    std::vector<std::int64_t> ser(K + 1, 0), tmp(K + 1);
    ser[0] = 1;
    for (int d = 1; d <= K; ++d) {
        for (int sgn = 0; sgn < 2; ++sgn) {
            const std::int64_t m = sgn == 0 ? plus[d] : minus[d];
            if (m == 0) continue;
            std::fill(tmp.begin(), tmp.end(), 0);
            for (int j = 0; j * d <= K; ++j) {
                std::int64_t b = rising_binom(m, j);
                if (sgn == 1 && (j & 1)) b = -b;
                for (int k = 0; k + j * d <= K; ++k) tmp[k + j * d] += b * ser[k];
            }
            ser.swap(tmp);
        }
    }
    out.assign(n_, 0);
    if (n_ & 1) {
        const int g = (n_ - 1) / 2;
        for (int k = 0; k <= g; ++k) out[k] = ser[k];
        std::int64_t qp = 1;
        for (int k = g; k >= 0; --k) {
            out[2 * g - k] = qp * ser[k];
            qp *= q;
        }
    } else {
        const int g = (n_ - 2) / 2;
        std::vector<std::int64_t> p(2 * g + 2, 0);
        std::int64_t acc = 0;
        for (int k = 0; k <= g; ++k) p[k] = acc += ser[k];
        std::int64_t qp = 1;
        for (int k = g; k >= 0; --k) {
            p[2 * g - k] = qp * p[k];
            qp *= q;
        }
        for (int k = 0; k <= 2 * g + 1; ++k) out[k] = p[k] - (k ? p[k - 1] : 0);
    }
}

LPolynomial EulerKernel::l_polynomial(const MonicPoly& D) const {
    LPolynomial L{D, R_.q(), {}, true};
    coefficients(D.coeffs(), L.coeffs);
    return L;
}

long double l_value_at_1(const LPolynomial& L) {
    const int m = static_cast<int>(L.coeffs.size()) - 1;
    BigInt num = 0, qm = 1;
    for (int k = m; k >= 0; --k) {
        num += BigInt(L.coeffs[k]) * qm;
        qm *= L.q;
    }
    // qm is now q^(m+1); the denominator is q^m.
    const long double v = to_ld(num) / to_ld(qm / L.q);
    if (!(v > 0)) throw ArithmeticError(fmt::format("L(1) = {} is not positive; character bug", static_cast<double>(v)));
    return v;
}

std::vector<std::complex<long double>> inverse_roots(const LPolynomial& L) {
    using cld = std::complex<long double>;
    const int m = L.degree();
    if (m == 0) return {};
    Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> C =
        Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>::Zero(m, m);
    // Monic polynomial alpha^m + c_1 alpha^(m-1) + ... + c_m.
    for (int i = 1; i < m; ++i) C(i, i - 1) = 1;
    for (int j = 0; j < m; ++j) C(j, m - 1) = -static_cast<long double>(L.coeffs[m - j]);
    Eigen::EigenSolver<decltype(C)> es(C, false);
    if (es.info() != Eigen::Success) throw ConvergenceError("companion eigenvalue solver did not converge");
    std::vector<cld> roots;
    auto poly = [&](cld a, cld& dp) {
        cld p = 1;
        dp = 0;
        for (int k = 1; k <= m; ++k) {
            dp = dp * a + p;
            p = p * a + static_cast<long double>(L.coeffs[k]);
        }
        return p;
    };
    for (int i = 0; i < m; ++i) {
        cld a = es.eigenvalues()[i];
        for (int it = 0; it < 3; ++it) {
            cld dp;
            const cld p = poly(a, dp);
            if (std::abs(dp) == 0) break;
            const cld next = a - p / dp;
            cld dn;
            if (std::abs(poly(next, dn)) >= std::abs(p)) break;
            a = next;
        }
        roots.push_back(a);
    }
    std::sort(roots.begin(), roots.end(), [](cld a, cld b) {
        if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
        return std::arg(a) < std::arg(b);
    });
    return roots;
}

RootMagnitudes classify_roots(const std::vector<std::complex<long double>>& roots, std::uint32_t q, long double tol) {
    RootMagnitudes r;
    for (const auto& a : roots) {
        const long double m2 = std::norm(a);
        const long double e1 = std::fabs(m2 - 1), eq = std::fabs(m2 - q);
        if (e1 <= tol) {
            ++r.unit;
            r.max_error = std::max(r.max_error, e1);
        } else if (eq <= tol) {
            ++r.sqrt_q;
            r.max_error = std::max(r.max_error, eq);
        } else {
            throw ArithmeticError(fmt::format("|alpha|^2 = {:.12f} is neither 1 nor q", static_cast<double>(m2)));
        }
    }
    return r;
}

ClassNumberResult class_number(const LPolynomial& L, long double tol) {
    const int n = L.D.degree();
    if (n % 2 == 0) throw InputError("class number needs odd deg D; use hr_product for even degree");
    ClassNumberResult r;
    r.D = L.D;
    r.genus = (n - 1) / 2;
    r.L1 = l_value_at_1(L);
    const long double scaled = r.L1 * std::pow(static_cast<long double>(L.q), r.genus);
    const long double rounded = std::round(scaled);
    r.h = BigInt(static_cast<long long>(rounded));
    r.residual = std::fabs(scaled - rounded);
    if (r.residual > tol || r.h < 1)
        throw ArithmeticError(fmt::format("q^g L(1) = {} is not near a positive integer", static_cast<double>(scaled)));
    return r;
}

ClassNumberResult class_number(const PolyRing& R, const MonicPoly& D, long double tol) {
    if (D.degree() % 2 == 0) throw InputError("class number needs odd deg D; use hr_product for even degree");
    if (!R.is_squarefree(D)) throw InputError("class number needs square-free D");
    return class_number(l_polynomial(R, D), tol);
}

long double hr_product(const LPolynomial& L) {
    const int n = L.D.degree();
    if (n % 2 != 0) throw InputError("h R product needs even deg D");
    return std::pow(static_cast<long double>(L.q), n / 2) * l_value_at_1(L) / (L.q - 1);
}

long double truncated_log_l(const PolyRing& R, const MonicPoly& D, int M, Store* store) {
    require_reciprocity_field(R.field());
    long double s = 0;
    for (int d = 1; d <= M; ++d) {
        std::int64_t plus = 0, minus = 0;
        for (const auto& P : irreducibles(R, d, store)) {
            const int c = jacobi(R.field(), D.coeffs(), P.coeffs());
            if (c > 0) ++plus;
            else if (c < 0) ++minus;
        }
        const long double x = std::pow(static_cast<long double>(R.q()), -d);
        s -= plus * std::log1p(-x) + minus * std::log1p(x);
    }
    return s;
}

std::pair<long double, long double> edge_envelope(std::uint32_t q, int deg_D) {
    if (deg_D < 1) throw InputError("edge envelope needs deg D >= 1");
    const long double ll = std::log(static_cast<long double>(deg_D)) / std::log(static_cast<long double>(q));
    const long double e2 = 2 * std::exp(kEulerGamma);
    const long double upper = e2 * ll;
    const long double lower = ll > 0 ? zeta_A2(q) / (e2 * ll) : std::numeric_limits<long double>::infinity();
    return {lower, upper};
}

std::uint64_t affine_point_count_plus_one(const PolyRing& R, const MonicPoly& D) {
    const Field& F = R.field();
    std::uint64_t n = 1;
    for (std::uint32_t a = 0; a < F.q(); ++a) {
        const Fq v = R.eval(D.coeffs(), F.element(a));
        n += v.is_zero() ? 1 : (F.quadratic_character(v) > 0 ? 2 : 0);
    }
    return n;
}

}  // namespace lfq
