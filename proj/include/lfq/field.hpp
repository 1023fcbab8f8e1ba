#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lfq/error.hpp"

namespace lfq {

/// Element of F_q, stored as its index sum_i coord_i * p^i in [0, q).
/// Index 0 is the additive identity and index 1 the multiplicative one.
struct Fq {
    std::uint16_t v = 0;

    constexpr Fq() = default;
    constexpr explicit Fq(std::uint16_t value) : v(value) {}

    constexpr bool is_zero() const { return v == 0; }
    friend constexpr bool operator==(Fq, Fq) = default;
    friend constexpr auto operator<=>(Fq, Fq) = default;
};

class Field;

namespace detail {
struct FieldData;
}

/// The finite field F_q with q = p^e.
///
/// A Field is a cheap shared handle to immutable tables, so copies are free and
/// safe to pass between threads. For e > 1 the elements are coordinate vectors
/// modulo the lowest-lex monic irreducible of degree e over F_p.
class Field {
   public:
    static constexpr std::uint32_t kMaxOrder = 65535;
    static constexpr std::uint32_t kMaxTableOrder = 1024;

    /// Throws InputError when p is not prime, e == 0 or p^e exceeds kMaxOrder.
    static Field make(std::uint32_t p, std::uint32_t e);
    /// Factors q as a prime power first.
    static Field from_order(std::uint32_t q);

    std::uint32_t p() const;
    std::uint32_t e() const;
    std::uint32_t q() const { return q_; }

    /// Coefficients of the defining modulus over F_p, low to high, monic of degree e.
    /// Empty for prime fields.
    const std::vector<std::uint32_t>& modulus() const;

    /// FNV-1a over (p, e, modulus). Keys cache files.
    std::uint64_t content_hash() const;
    std::string describe() const;

    Fq zero() const { return Fq{0}; }
    Fq one() const { return Fq{1}; }
    /// Image of an integer in the prime subfield.
    Fq from_int(std::int64_t n) const;
    /// Element with the given index; throws if index >= q.
    Fq element(std::uint32_t index) const;

    std::vector<std::uint32_t> coords(Fq a) const;
    Fq from_coords(std::span<const std::uint32_t> c) const;

    Fq add(Fq a, Fq b) const {
        return tab_add_ ? Fq{tab_add_[a.v * q_ + b.v]} : slow_add(a, b);
    }
    Fq mul(Fq a, Fq b) const {
        return tab_mul_ ? Fq{tab_mul_[a.v * q_ + b.v]} : slow_mul(a, b);
    }
    Fq neg(Fq a) const { return tab_neg_ ? Fq{tab_neg_[a.v]} : slow_neg(a); }
    Fq sub(Fq a, Fq b) const { return add(a, neg(b)); }
    /// Throws ArithmeticError on zero.
    Fq inv(Fq a) const;
    Fq div(Fq a, Fq b) const { return mul(a, inv(b)); }
    Fq pow(Fq a, std::uint64_t k) const;

    /// a^((q-1)/2) as -1, 0 or +1 (odd q only).
    int quadratic_character(Fq a) const;
    /// Inverse Frobenius a -> a^(1/p).
    Fq pth_root(Fq a) const;

    friend bool operator==(const Field& a, const Field& b) { return a.content_hash() == b.content_hash(); }

   private:
    explicit Field(std::shared_ptr<const detail::FieldData> data);

    Fq slow_add(Fq a, Fq b) const;
    Fq slow_mul(Fq a, Fq b) const;
    Fq slow_neg(Fq a) const;

    std::shared_ptr<const detail::FieldData> data_;
    std::uint32_t q_ = 0;
    const std::uint16_t* tab_add_ = nullptr;
    const std::uint16_t* tab_mul_ = nullptr;
    const std::uint16_t* tab_neg_ = nullptr;
};

bool is_prime(std::uint64_t n);

}  // namespace lfq
