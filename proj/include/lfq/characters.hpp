#pragma once

#include "lfq/poly.hpp"

namespace lfq {

/// Throws InputError unless q is odd with q = 1 mod 4. Reciprocity without a
/// sign correction holds only in that case.
void require_reciprocity_field(const Field& F);

/// (D/P) by Euler's criterion: D^((|P|-1)/2) mod P. Verifies that P is irreducible.
int residue_symbol(const PolyRing& R, const Poly& D, const MonicPoly& P);
/// Same, skipping the irreducibility check.
int residue_symbol_unchecked(const PolyRing& R, const Poly& D, const MonicPoly& P);

/// Jacobi symbol (a/b) for monic b by repeated reduction and reciprocity.
/// Requires q = 1 mod 4 and deg a, deg b <= 64.
int jacobi(const Field& F, const Poly& a, const Poly& b);

/// The quadratic character chi_D(f) = (D/f), extended multiplicatively over f.
class QuadChar {
   public:
    QuadChar(PolyRing R, MonicPoly D);

    const MonicPoly& modulus() const { return D_; }
    const PolyRing& ring() const { return R_; }

    /// Factor f, multiply the residue symbols of D at each prime.
    int chi(const MonicPoly& f) const;
    /// Jacobi kernel; agrees with chi on every monic f.
    int chi_fast(const MonicPoly& f) const;
    /// For a nonzero constant c: chi_q(c)^deg D, the Jacobi symbol (c/D).
    int constant(Fq c) const;

   private:
    PolyRing R_;
    MonicPoly D_;
};

/// Safe path convenience: factor f, multiply residue symbols.
int chi(const PolyRing& R, const MonicPoly& D, const MonicPoly& f);

}  // namespace lfq
