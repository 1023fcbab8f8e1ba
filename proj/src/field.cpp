#include "lfq/field.hpp"

#include <algorithm>
#include <fmt/format.h>

namespace lfq {

namespace detail {

struct FieldData {
    std::uint32_t p = 0;
    std::uint32_t e = 0;
    std::uint32_t q = 0;
    std::vector<std::uint32_t> modulus;  // monic, degree e, over F_p; empty when e == 1
    std::uint64_t hash = 0;
    std::vector<std::uint16_t> add, mul, neg;  // q*q tables, only when q <= kMaxTableOrder
    std::vector<std::uint16_t> inv, pth_root;
    std::vector<std::int8_t> qchar;
};

}  // namespace detail

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace {

using PrimePoly = std::vector<std::uint32_t>;

void trim(PrimePoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
    std::uint64_t r = 1, b = a % p;
    for (std::uint32_t k = p - 2; k; k >>= 1, b = b * b % p)
        if (k & 1) r = r * b % p;
    return static_cast<std::uint32_t>(r);
}

PrimePoly rem_mod(PrimePoly a, const PrimePoly& m, std::uint32_t p) {
    trim(a);
    const std::size_t dm = m.size() - 1;
    const std::uint64_t li = inv_mod(m.back(), p);
    while (a.size() > dm) {
        const std::uint64_t c = a.back() * li % p;
        const std::size_t shift = a.size() - 1 - dm;
        for (std::size_t i = 0; i <= dm; ++i)
            a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - c * m[i] % p) % p);
        trim(a);
    }
    return a;
}

PrimePoly mulmod(const PrimePoly& a, const PrimePoly& b, const PrimePoly& m, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    PrimePoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t{a[i]} * b[j]) % p);
    return rem_mod(std::move(r), m, p);
}

PrimePoly gcd_mod(PrimePoly a, PrimePoly b, std::uint32_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        a = rem_mod(std::move(a), b, p);
        std::swap(a, b);
    }
    return a;
}

// Ben-Or: f of degree n is irreducible iff gcd(x^(p^i) - x, f) = 1 for 1 <= i <= n/2.
bool prime_field_irreducible(const PrimePoly& f, std::uint32_t p) {
    const std::size_t n = f.size() - 1;
    PrimePoly h{0, 1};
    for (std::size_t i = 1; i <= n / 2; ++i) {
        PrimePoly base = h, acc{1};
        for (std::uint32_t k = p; k; k >>= 1) {
            if (k & 1) acc = mulmod(acc, base, f, p);
            base = mulmod(base, base, f, p);
        }
        h = acc;
        PrimePoly t = h;
        t.resize(std::max<std::size_t>(t.size(), 2), 0);
        t[1] = (t[1] + p - 1) % p;
        trim(t);
        if (t.empty() || gcd_mod(t, f, p).size() != 1) return false;
    }
    return true;
}

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
        h ^= (word >> (8 * i)) & 0xffu;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

Field::Field(std::shared_ptr<const detail::FieldData> data) : data_(std::move(data)) {
    q_ = data_->q;
    if (!data_->add.empty()) {
        tab_add_ = data_->add.data();
        tab_mul_ = data_->mul.data();
        tab_neg_ = data_->neg.data();
    }
}

Field Field::make(std::uint32_t p, std::uint32_t e) {
    if (!is_prime(p)) throw InputError(fmt::format("characteristic {} is not prime", p));
    if (e == 0) throw InputError("extension degree must be at least 1");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
        q *= p;
        if (q > kMaxOrder) throw InputError(fmt::format("field order {}^{} exceeds {}", p, e, kMaxOrder));
    }

    auto d = std::make_shared<detail::FieldData>();
    d->p = p;
    d->e = e;
    d->q = static_cast<std::uint32_t>(q);

    if (e > 1) {
        // Lowest-lex monic irreducible: scan the lower coefficients as a base-p counter
        // with the top coefficient most significant.
        std::uint64_t count = q;
        bool found = false;
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            PrimePoly f(e + 1, 0);
            std::uint64_t rest = idx;
            for (std::uint32_t i = 0; i < e; ++i, rest /= p) f[i] = static_cast<std::uint32_t>(rest % p);
            f[e] = 1;
            if (f[0] == 0) continue;
            if (prime_field_irreducible(f, p)) {
                d->modulus = std::move(f);
                found = true;
                break;
            }
        }
        if (!found) throw ArithmeticError(fmt::format("no irreducible modulus of degree {} over F_{}", e, p));
    }

    std::uint64_t h = 0xcbf29ce484222325ULL;
    h = fnv1a(h, p);
    h = fnv1a(h, e);
    for (auto c : d->modulus) h = fnv1a(h, c);
    d->hash = h;

    Field tmp{d};
    if (q <= kMaxTableOrder) {
        d->add.resize(q * q);
        d->mul.resize(q * q);
        d->neg.resize(q);
        for (std::uint32_t a = 0; a < q; ++a) {
            d->neg[a] = tmp.slow_neg(Fq{static_cast<std::uint16_t>(a)}).v;
            for (std::uint32_t b = 0; b < q; ++b) {
                const Fq x{static_cast<std::uint16_t>(a)}, y{static_cast<std::uint16_t>(b)};
                d->add[a * q + b] = tmp.slow_add(x, y).v;
                d->mul[a * q + b] = tmp.slow_mul(x, y).v;
            }
        }
        tmp = Field{d};
    }
    d->inv.assign(q, 0);
    d->pth_root.assign(q, 0);
    d->qchar.assign(q, 0);
    for (std::uint32_t a = 1; a < q; ++a) {
        const Fq x{static_cast<std::uint16_t>(a)};
        d->inv[a] = tmp.pow(x, q - 2).v;
        const Fq xp = tmp.pow(x, p);
        d->pth_root[xp.v] = x.v;
        if (p != 2) d->qchar[a] = tmp.pow(x, (q - 1) / 2) == tmp.one() ? 1 : -1;
        else d->qchar[a] = 1;
    }
    return Field{d};
}

Field Field::from_order(std::uint32_t q) {
    if (q < 2) throw InputError(fmt::format("field order {} is not a prime power", q));
    std::uint32_t p = 2;
    while (q % p != 0) ++p;
    std::uint32_t e = 0, rest = q;
    while (rest % p == 0) {
        rest /= p;
        ++e;
    }
    if (rest != 1) throw InputError(fmt::format("field order {} is not a prime power", q));
    return make(p, e);
}

std::uint32_t Field::p() const { return data_->p; }
std::uint32_t Field::e() const { return data_->e; }
const std::vector<std::uint32_t>& Field::modulus() const { return data_->modulus; }
std::uint64_t Field::content_hash() const { return data_->hash; }

std::string Field::describe() const {
    if (data_->e == 1) return fmt::format("F_{}", data_->p);
    std::string m;
    for (std::size_t i = data_->modulus.size(); i-- > 0;) {
        if (data_->modulus[i] == 0) continue;
        if (!m.empty()) m += " + ";
        if (i == 0 || data_->modulus[i] != 1) m += std::to_string(data_->modulus[i]);
        if (i >= 1) m += i == 1 ? "x" : fmt::format("x^{}", i);
    }
    return fmt::format("F_{} = F_{}[x]/({})", data_->q, data_->p, m);
}

Fq Field::from_int(std::int64_t n) const {
    const std::int64_t p = data_->p;
    return Fq{static_cast<std::uint16_t>(((n % p) + p) % p)};
}

Fq Field::element(std::uint32_t index) const {
    if (index >= q_) throw InputError(fmt::format("element index {} out of range for {}", index, describe()));
    return Fq{static_cast<std::uint16_t>(index)};
}

std::vector<std::uint32_t> Field::coords(Fq a) const {
    std::vector<std::uint32_t> c(data_->e);
    std::uint32_t v = a.v;
    for (auto& x : c) {
        x = v % data_->p;
        v /= data_->p;
    }
    return c;
}

Fq Field::from_coords(std::span<const std::uint32_t> c) const {
    std::uint32_t v = 0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * data_->p + c[i] % data_->p;
    return Fq{static_cast<std::uint16_t>(v)};
}

Fq Field::slow_add(Fq a, Fq b) const {
    const std::uint32_t p = data_->p;
    std::uint32_t x = a.v, y = b.v, r = 0, w = 1;
    for (std::uint32_t i = 0; i < data_->e; ++i, x /= p, y /= p, w *= p) r += ((x % p + y % p) % p) * w;
    return Fq{static_cast<std::uint16_t>(r)};
}

Fq Field::slow_neg(Fq a) const {
    const std::uint32_t p = data_->p;
    std::uint32_t x = a.v, r = 0, w = 1;
    for (std::uint32_t i = 0; i < data_->e; ++i, x /= p, w *= p) r += ((p - x % p) % p) * w;
    return Fq{static_cast<std::uint16_t>(r)};
}

Fq Field::slow_mul(Fq a, Fq b) const {
    const std::uint32_t p = data_->p;
    if (data_->e == 1) return Fq{static_cast<std::uint16_t>(std::uint64_t{a.v} * b.v % p)};
    auto ca = coords(a), cb = coords(b);
    trim(ca);
    trim(cb);
    auto r = mulmod(ca, cb, data_->modulus, p);
    r.resize(data_->e, 0);
    return from_coords(r);
}

Fq Field::inv(Fq a) const {
    if (a.is_zero()) throw ArithmeticError("inverse of zero in " + describe());
    return Fq{data_->inv[a.v]};
}

Fq Field::pow(Fq a, std::uint64_t k) const {
    Fq r = one();
    for (; k; k >>= 1, a = mul(a, a))
        if (k & 1) r = mul(r, a);
    return r;
}

int Field::quadratic_character(Fq a) const {
    if (data_->p == 2) throw InputError("quadratic character undefined in characteristic 2");
    return data_->qchar[a.v];
}

Fq Field::pth_root(Fq a) const { return Fq{data_->pth_root[a.v]}; }

}  // namespace lfq
