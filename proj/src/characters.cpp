#include "lfq/characters.hpp"

#include <array>
#include <fmt/format.h>

namespace lfq {

void require_reciprocity_field(const Field& F) {
    if (F.p() == 2 || F.q() % 4 != 1)
        throw InputError(fmt::format(
            "q = {} is not 1 mod 4: quadratic reciprocity (F/G) = (G/F) for monic F, G needs q = 1 mod 4", F.q()));
}

int residue_symbol_unchecked(const PolyRing& R, const Poly& D, const MonicPoly& P) {
    if (R.field().p() == 2) throw InputError("residue symbols need odd characteristic");
    const Poly& m = P.coeffs();
    const Poly r = R.rem(D, m);
    if (r.empty()) return 0;
    BigInt e = boost::multiprecision::pow(BigInt(R.q()), static_cast<unsigned>(P.degree()));
    e = (e - 1) / 2;
    const Poly v = R.powmod(r, e, m);
    if (v == Poly{Fq{1}}) return 1;
    if (v == R.constant(R.field().neg(Fq{1}))) return -1;
    throw ArithmeticError("Euler criterion gave neither 1 nor -1; modulus is not irreducible");
}

int residue_symbol(const PolyRing& R, const Poly& D, const MonicPoly& P) {
    if (P.degree() < 1 || !R.is_irreducible(P))
        throw InputError(fmt::format("{} is not irreducible", R.to_string(P.coeffs())));
    return residue_symbol_unchecked(R, D, P);
}

namespace {

constexpr int kMaxJacobiDeg = 64;
using Buf = std::array<std::uint16_t, kMaxJacobiDeg + 1>;

// a <- a mod b in place; degrees tracked as da, db (b monic). Returns new degree, -1 for zero.
inline int reduce(const Field& F, Buf& a, int da, const Buf& b, int db) {
    while (da >= db) {
        const Fq c{a[da]};
        if (!c.is_zero()) {
            const Fq nc = F.neg(c);
            const int shift = da - db;
            for (int i = 0; i < db; ++i) a[shift + i] = F.add(Fq{a[shift + i]}, F.mul(nc, Fq{b[i]})).v;
        }
        a[da] = 0;
        --da;
        while (da >= 0 && a[da] == 0) --da;
    }
    return da;
}

}  // namespace

int jacobi(const Field& F, const Poly& a, const Poly& b) {
    if (b.empty() || b.back() != Fq{1}) throw InputError("jacobi needs a monic modulus");
    if (degree(a) > kMaxJacobiDeg || degree(b) > kMaxJacobiDeg) throw InputError("jacobi degree limit exceeded");
    Buf A{}, B{};
    int da = degree(a), db = degree(b);
    for (int i = 0; i <= da; ++i) A[i] = a[i].v;
    for (int i = 0; i <= db; ++i) B[i] = b[i].v;
    Buf* x = &A;
    Buf* y = &B;
    int sign = 1;
    for (;;) {
        if (db == 0) return sign;
        da = reduce(F, *x, da, *y, db);
        if (da < 0) return 0;
        const Fq c{(*x)[da]};
        if ((db & 1) && F.quadratic_character(c) < 0) sign = -sign;
        if (c != Fq{1}) {
            const Fq ci = F.inv(c);
            for (int i = 0; i <= da; ++i) (*x)[i] = F.mul(Fq{(*x)[i]}, ci).v;
        }
        std::swap(x, y);
        std::swap(da, db);
    }
}

QuadChar::QuadChar(PolyRing R, MonicPoly D) : R_(std::move(R)), D_(std::move(D)) {
    require_reciprocity_field(R_.field());
}

int QuadChar::chi(const MonicPoly& f) const { return lfq::chi(R_, D_, f); }

int QuadChar::chi_fast(const MonicPoly& f) const { return jacobi(R_.field(), D_.coeffs(), f.coeffs()); }

int QuadChar::constant(Fq c) const {
    if (c.is_zero()) return 0;
    const int s = R_.field().quadratic_character(c);
    return (D_.degree() & 1) ? s : 1;
}

int chi(const PolyRing& R, const MonicPoly& D, const MonicPoly& f) {
    require_reciprocity_field(R.field());
    if (f.degree() == 0) return 1;
    int r = 1;
    for (const auto& part : R.factor(f)) {
        const int s = residue_symbol_unchecked(R, D.coeffs(), part.prime);
        if (s == 0) return 0;
        if (s < 0 && (part.exponent & 1)) r = -r;
    }
    return r;
}

}  // namespace lfq
