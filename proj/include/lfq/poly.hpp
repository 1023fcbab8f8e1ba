#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lfq/field.hpp"

namespace lfq {

using BigInt = boost::multiprecision::cpp_int;

/// Coefficients low to high, no trailing zeros. The zero polynomial is empty.
using Poly = std::vector<Fq>;

inline int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }
void normalize(Poly& a);

/// A polynomial whose leading coefficient is 1. Degree 0 means the constant 1.
class MonicPoly {
   public:
    MonicPoly() : c_{Fq{1}} {}
    /// Throws InputError unless c is nonzero with leading coefficient 1.
    explicit MonicPoly(Poly c);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const Poly& coeffs() const { return c_; }
    Fq operator[](std::size_t i) const { return c_[i]; }

    /// Degree first, then coefficients from the top down: the enumeration order.
    friend bool operator==(const MonicPoly&, const MonicPoly&) = default;
    friend std::strong_ordering operator<=>(const MonicPoly& a, const MonicPoly& b);

   private:
    Poly c_;
};

struct FactorPart {
    MonicPoly prime;
    int exponent = 1;
    friend bool operator==(const FactorPart&, const FactorPart&) = default;
};
using Factorization = std::vector<FactorPart>;

/// Arithmetic in F_q[T]. Stateless apart from the field handle.
class PolyRing {
   public:
    explicit PolyRing(Field f) : F_(std::move(f)) {}

    const Field& field() const { return F_; }
    std::uint32_t q() const { return F_.q(); }

    Poly constant(Fq c) const;
    Poly monomial(int k, Fq c = Fq{1}) const;
    Poly T() const { return monomial(1); }
    /// Coefficients as element indices; throws InputError if any index >= q.
    Poly from_indices(const std::vector<std::uint32_t>& idx) const;
    std::vector<std::uint32_t> to_indices(const Poly& a) const;

    Poly add(const Poly& a, const Poly& b) const;
    Poly sub(const Poly& a, const Poly& b) const;
    Poly neg(const Poly& a) const;
    Poly scale(const Poly& a, Fq c) const;
    Poly mul(const Poly& a, const Poly& b) const;
    /// Throws ArithmeticError when b is zero.
    std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) const;
    Poly rem(const Poly& a, const Poly& b) const;
    Poly quo(const Poly& a, const Poly& b) const;
    /// Monic gcd; gcd(0, 0) = 0.
    Poly gcd(const Poly& a, const Poly& b) const;
    Poly derivative(const Poly& a) const;
    Fq eval(const Poly& a, Fq x) const;
    Poly make_monic(const Poly& a) const;
    MonicPoly monic(const Poly& a) const { return MonicPoly(make_monic(a)); }

    Poly mulmod(const Poly& a, const Poly& b, const Poly& m) const;
    Poly powmod(const Poly& f, const BigInt& k, const Poly& m) const;
    Poly powmod(const Poly& f, std::uint64_t k, const Poly& m) const;
    Poly pow(const Poly& f, unsigned k) const;

    /// Rabin's test. Throws InputError on degree 0.
    bool is_irreducible(const MonicPoly& f) const;
    /// gcd(f, f') == 1, and false whenever f' vanishes.
    bool is_squarefree(const MonicPoly& f) const;
    /// Complete factorization sorted by the MonicPoly order. The seed drives the
    /// equal-degree splitting only; the output does not depend on it.
    Factorization factor(const MonicPoly& f, std::uint64_t seed = 0x5eedULL) const;
    Poly expand(const Factorization& fac) const;

    /// Number of monic polynomials of degree d; throws if it exceeds 2^63.
    std::uint64_t monic_count(int d) const;
    /// Digit i of idx in base q is the coefficient of T^i.
    MonicPoly monic_from_index(int d, std::uint64_t idx) const;
    std::uint64_t monic_index(const MonicPoly& f) const;
    /// Same as monic_from_index but writes into a caller buffer of size d + 1.
    void monic_from_index(int d, std::uint64_t idx, Poly& out) const;

    std::string to_string(const Poly& a) const;

   private:
    Poly frobenius_step(const Poly& h, const Poly& m) const;
    void squarefree_parts(const Poly& f, int mult, std::vector<std::pair<Poly, int>>& out) const;
    void equal_degree_split(const Poly& f, int d, std::uint64_t& state, std::vector<Poly>& out) const;

    Field F_;
};

}  // namespace lfq
