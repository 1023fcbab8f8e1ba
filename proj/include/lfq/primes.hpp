#pragma once

#include <vector>

#include "lfq/poly.hpp"

namespace lfq {

class Store;

int mobius(int n);

/// Number of monic irreducibles of degree d over F_q, by Moebius inversion.
BigInt pi_q(std::uint32_t q, int d);
/// Sum of pi_q(d) over 1 <= d <= M.
BigInt Pi_q(std::uint32_t q, int M);
/// Sum over k | m of k * pi_q(k). Equals q^m.
BigInt divisor_weighted_count(std::uint32_t q, int m);

long double to_ld(const BigInt& x);

/// All monic irreducibles of degree d in enumeration order. With a store the
/// table is loaded from disk when valid and written back after a rebuild.
std::vector<MonicPoly> irreducibles(const PolyRing& R, int d, Store* store = nullptr);

/// Computes the table without touching any cache.
std::vector<MonicPoly> compute_irreducibles(const PolyRing& R, int d);

}  // namespace lfq
