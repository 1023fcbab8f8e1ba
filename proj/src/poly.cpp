#include "lfq/poly.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <limits>
#include <map>

namespace lfq {

void normalize(Poly& a) {
    while (!a.empty() && a.back().is_zero()) a.pop_back();
}

MonicPoly::MonicPoly(Poly c) : c_(std::move(c)) {
    normalize(c_);
    if (c_.empty() || c_.back() != Fq{1}) throw InputError("polynomial is not monic");
}

std::strong_ordering operator<=>(const MonicPoly& a, const MonicPoly& b) {
    if (a.degree() != b.degree()) return a.degree() <=> b.degree();
    for (std::size_t i = a.c_.size(); i-- > 0;)
        if (a.c_[i] != b.c_[i]) return a.c_[i] <=> b.c_[i];
    return std::strong_ordering::equal;
}

Poly PolyRing::constant(Fq c) const {
    if (c.is_zero()) return {};
    return {c};
}

Poly PolyRing::monomial(int k, Fq c) const {
    if (c.is_zero()) return {};
    Poly r(static_cast<std::size_t>(k) + 1, Fq{0});
    r[k] = c;
    return r;
}

Poly PolyRing::from_indices(const std::vector<std::uint32_t>& idx) const {
    Poly r;
    r.reserve(idx.size());
    for (auto v : idx) r.push_back(F_.element(v));
    normalize(r);
    return r;
}

std::vector<std::uint32_t> PolyRing::to_indices(const Poly& a) const {
    std::vector<std::uint32_t> r;
    r.reserve(a.size());
    for (auto c : a) r.push_back(c.v);
    return r;
}

Poly PolyRing::add(const Poly& a, const Poly& b) const {
    const Poly& lo = a.size() < b.size() ? a : b;
    Poly r = a.size() < b.size() ? b : a;
    for (std::size_t i = 0; i < lo.size(); ++i) r[i] = F_.add(r[i], lo[i]);
    normalize(r);
    return r;
}

Poly PolyRing::neg(const Poly& a) const {
    Poly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = F_.neg(a[i]);
    return r;
}

Poly PolyRing::sub(const Poly& a, const Poly& b) const { return add(a, neg(b)); }

Poly PolyRing::scale(const Poly& a, Fq c) const {
    if (c.is_zero()) return {};
    Poly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = F_.mul(a[i], c);
    return r;
}

Poly PolyRing::mul(const Poly& a, const Poly& b) const {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, Fq{0});
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F_.add(r[i + j], F_.mul(a[i], b[j]));
    }
    normalize(r);
    return r;
}

std::pair<Poly, Poly> PolyRing::divrem(const Poly& a, const Poly& b) const {
    if (b.empty()) throw ArithmeticError("division by the zero polynomial");
    Poly r = a;
    normalize(r);
    if (r.size() < b.size()) return {Poly{}, r};
    const std::size_t db = b.size() - 1;
    const Fq li = F_.inv(b.back());
    Poly quot(r.size() - db, Fq{0});
    for (std::size_t top = r.size(); top-- > db;) {
        const Fq c = F_.mul(r[top], li);
        if (c.is_zero()) continue;
        const std::size_t shift = top - db;
        quot[shift] = c;
        const Fq nc = F_.neg(c);
        for (std::size_t i = 0; i <= db; ++i) r[shift + i] = F_.add(r[shift + i], F_.mul(nc, b[i]));
    }
    r.resize(db);
    normalize(r);
    normalize(quot);
    return {std::move(quot), std::move(r)};
}

Poly PolyRing::rem(const Poly& a, const Poly& b) const {
    if (b.empty()) throw ArithmeticError("division by the zero polynomial");
    if (a.size() < b.size()) {
        Poly r = a;
        normalize(r);
        return r;
    }
    Poly r = a;
    const std::size_t db = b.size() - 1;
    const Fq li = F_.inv(b.back());
    for (std::size_t top = r.size(); top-- > db;) {
        const Fq c = F_.mul(r[top], li);
        if (c.is_zero()) continue;
        const std::size_t shift = top - db;
        const Fq nc = F_.neg(c);
        for (std::size_t i = 0; i <= db; ++i) r[shift + i] = F_.add(r[shift + i], F_.mul(nc, b[i]));
    }
    r.resize(db);
    normalize(r);
    return r;
}

Poly PolyRing::quo(const Poly& a, const Poly& b) const { return divrem(a, b).first; }

Poly PolyRing::make_monic(const Poly& a) const {
    if (a.empty()) return {};
    return scale(a, F_.inv(a.back()));
}

Poly PolyRing::gcd(const Poly& a, const Poly& b) const {
    Poly x = a, y = b;
    normalize(x);
    normalize(y);
    while (!y.empty()) {
        x = rem(x, y);
        std::swap(x, y);
    }
    return make_monic(x);
}

Poly PolyRing::derivative(const Poly& a) const {
    if (a.size() <= 1) return {};
    Poly r(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = F_.mul(a[i], F_.from_int(static_cast<std::int64_t>(i)));
    normalize(r);
    return r;
}

Fq PolyRing::eval(const Poly& a, Fq x) const {
    Fq r{0};
    for (std::size_t i = a.size(); i-- > 0;) r = F_.add(F_.mul(r, x), a[i]);
    return r;
}

Poly PolyRing::mulmod(const Poly& a, const Poly& b, const Poly& m) const { return rem(mul(a, b), m); }

Poly PolyRing::powmod(const Poly& f, const BigInt& k, const Poly& m) const {
    if (m.empty()) throw ArithmeticError("powmod with zero modulus");
    if (k < 0) throw InputError("powmod exponent must be non-negative");
    Poly base = rem(f, m);
    Poly r = rem(Poly{Fq{1}}, m);
    if (k == 0) return r;
    const auto top = static_cast<std::ptrdiff_t>(boost::multiprecision::msb(k));
    for (std::ptrdiff_t i = top; i >= 0; --i) {
        r = mulmod(r, r, m);
        if (boost::multiprecision::bit_test(k, static_cast<unsigned>(i))) r = mulmod(r, base, m);
    }
    return r;
}

Poly PolyRing::powmod(const Poly& f, std::uint64_t k, const Poly& m) const {
    if (m.empty()) throw ArithmeticError("powmod with zero modulus");
    Poly base = rem(f, m);
    Poly r = rem(Poly{Fq{1}}, m);
    for (; k; k >>= 1) {
        if (k & 1) r = mulmod(r, base, m);
        if (k > 1) base = mulmod(base, base, m);
    }
    return r;
}

Poly PolyRing::pow(const Poly& f, unsigned k) const {
    Poly r{Fq{1}}, base = f;
    for (; k; k >>= 1) {
        if (k & 1) r = mul(r, base);
        if (k > 1) base = mul(base, base);
    }
    return r;
}

Poly PolyRing::frobenius_step(const Poly& h, const Poly& m) const { return powmod(h, std::uint64_t{F_.q()}, m); }

namespace {

std::vector<int> prime_divisors(int n) {
    std::vector<int> r;
    for (int d = 2; d * d <= n; ++d) {
        if (n % d) continue;
        r.push_back(d);
        while (n % d == 0) n /= d;
    }
    if (n > 1) r.push_back(n);
    return r;
}

}  // namespace

bool PolyRing::is_irreducible(const MonicPoly& f) const {
    const int n = f.degree();
    if (n < 1) throw InputError("irreducibility test needs degree >= 1");
    if (n == 1) return true;
    const Poly& m = f.coeffs();
    if (m[0].is_zero()) return false;
    // frob[i] = T^(q^i) mod f
    std::vector<Poly> frob{rem(T(), m)};
    for (int i = 1; i <= n; ++i) frob.push_back(frobenius_step(frob.back(), m));
    if (sub(frob[n], T()) != Poly{}) return false;
    for (int r : prime_divisors(n)) {
        const Poly g = gcd(sub(frob[n / r], T()), m);
        if (g.size() != 1) return false;
    }
    return true;
}

bool PolyRing::is_squarefree(const MonicPoly& f) const {
    if (f.degree() < 1) throw InputError("square-free test needs degree >= 1");
    const Poly d = derivative(f.coeffs());
    if (d.empty()) return false;
    return gcd(f.coeffs(), d).size() == 1;
}

void PolyRing::squarefree_parts(const Poly& f, int mult, std::vector<std::pair<Poly, int>>& out) const {
    const std::uint32_t p = F_.p();
    auto pth_root_poly = [&](const Poly& a) {
        Poly r(degree(a) / p + 1);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = F_.pth_root(a[i * p]);
        normalize(r);
        return r;
    };
    const Poly d = derivative(f);
    if (d.empty()) {
        squarefree_parts(pth_root_poly(f), mult * static_cast<int>(p), out);
        return;
    }
    Poly c = gcd(f, d);
    Poly w = quo(f, c);
    int i = 1;
    while (w.size() > 1) {
        Poly y = gcd(w, c);
        Poly fac = quo(w, y);
        if (fac.size() > 1) out.emplace_back(make_monic(fac), i * mult);
        ++i;
        w = std::move(y);
        c = quo(c, w);
    }
    if (c.size() > 1) squarefree_parts(pth_root_poly(c), mult * static_cast<int>(p), out);
}

namespace {

std::uint64_t splitmix(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

void PolyRing::equal_degree_split(const Poly& f, int d, std::uint64_t& state, std::vector<Poly>& out) const {
    const int n = degree(f);
    if (n == d) {
        out.push_back(f);
        return;
    }
    const std::uint32_t q = F_.q();
    BigInt qd = 1;
    for (int i = 0; i < d; ++i) qd *= q;
    for (;;) {
        Poly a(n);
        for (auto& c : a) c = Fq{static_cast<std::uint16_t>(splitmix(state) % q)};
        normalize(a);
        if (degree(a) < 1) continue;
        Poly b;
        if (F_.p() != 2) {
            b = sub(powmod(a, (qd - 1) / 2, f), Poly{Fq{1}});
        } else {
            // Absolute trace to F_2 of a in F_{q^d}.
            const int bits = static_cast<int>(F_.e()) * d;
            Poly t = a, acc = a;
            for (int j = 1; j < bits; ++j) {
                t = mulmod(t, t, f);
                acc = add(acc, t);
            }
            b = acc;
        }
        Poly g = gcd(b, f);
        if (g.size() > 1 && degree(g) < n) {
            equal_degree_split(g, d, state, out);
            equal_degree_split(quo(f, g), d, state, out);
            return;
        }
    }
}

Factorization PolyRing::factor(const MonicPoly& f, std::uint64_t seed) const {
    if (f.degree() < 1) throw InputError("factorization needs degree >= 1");
    std::vector<std::pair<Poly, int>> parts;
    squarefree_parts(f.coeffs(), 1, parts);
    std::map<MonicPoly, int> acc;
    std::uint64_t state = seed;
    for (auto& [sf, mult] : parts) {
        Poly rest = sf;
        Poly h = rem(T(), rest);
        for (int i = 1; degree(rest) >= 2 * i; ++i) {
            h = frobenius_step(h, rest);
            Poly g = gcd(sub(h, T()), rest);
            if (g.size() > 1) {
                std::vector<Poly> split;
                equal_degree_split(g, i, state, split);
                for (auto& s : split) acc[MonicPoly(make_monic(s))] += mult;
                rest = quo(rest, g);
                h = rem(h, rest);
            }
        }
        if (degree(rest) >= 1) acc[MonicPoly(make_monic(rest))] += mult;
    }
    Factorization out;
    for (auto& [p, e] : acc) out.push_back({p, e});
    return out;
}

Poly PolyRing::expand(const Factorization& fac) const {
    Poly r{Fq{1}};
    for (const auto& part : fac) r = mul(r, pow(part.prime.coeffs(), static_cast<unsigned>(part.exponent)));
    return r;
}

std::uint64_t PolyRing::monic_count(int d) const {
    if (d < 0) throw InputError("negative degree");
    std::uint64_t r = 1;
    for (int i = 0; i < d; ++i) {
        if (r > (std::uint64_t{1} << 63) / F_.q()) throw InputError(fmt::format("q^{} overflows 64 bits", d));
        r *= F_.q();
    }
    return r;
}

void PolyRing::monic_from_index(int d, std::uint64_t idx, Poly& out) const {
    const std::uint32_t q = F_.q();
    out.resize(static_cast<std::size_t>(d) + 1);
    for (int i = 0; i < d; ++i, idx /= q) out[i] = Fq{static_cast<std::uint16_t>(idx % q)};
    out[d] = Fq{1};
}

MonicPoly PolyRing::monic_from_index(int d, std::uint64_t idx) const {
    if (idx >= monic_count(d)) throw InputError(fmt::format("index {} out of range for degree {}", idx, d));
    Poly c;
    monic_from_index(d, idx, c);
    return MonicPoly(std::move(c));
}

std::uint64_t PolyRing::monic_index(const MonicPoly& f) const {
    std::uint64_t r = 0;
    for (int i = f.degree(); i-- > 0;) r = r * F_.q() + f[i].v;
    return r;
}

std::string PolyRing::to_string(const Poly& a) const {
    if (a.empty()) return "0";
    std::string s;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i].is_zero()) continue;
        if (!s.empty()) s += " + ";
        const bool unit = a[i] == Fq{1};
        if (i == 0 || !unit) s += std::to_string(a[i].v);
        if (i > 0) {
            if (!unit) s += "*";
            s += i == 1 ? "T" : fmt::format("T^{}", i);
        }
    }
    return s;
}

}  // namespace lfq
