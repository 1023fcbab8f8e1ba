#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "lfq/characters.hpp"
#include "lfq/primes.hpp"

namespace lfq {

/// L(u, chi_D) = sum_k coeffs[k] u^k with u = q^-s.
struct LPolynomial {
    MonicPoly D;
    std::uint32_t q = 0;
    std::vector<std::int64_t> coeffs;  // c_0 .. c_{deg D - 1}
    bool primitive = true;             // false when D is not square-free

    /// Degree after dropping trailing zeros.
    int degree() const;
};

/// Sum of chi_D(f) over the q^k monic f of degree k (Jacobi kernel).
std::int64_t char_sum(const PolyRing& R, const MonicPoly& D, int k);
/// Same sum through factor-then-multiply.
std::int64_t char_sum_safe(const PolyRing& R, const MonicPoly& D, int k);

/// Direct route: every coefficient by char_sum.
LPolynomial l_polynomial(const PolyRing& R, const MonicPoly& D);

/// Fast route for square-free D of a fixed degree n: the Euler product over
/// primes of degree <= (n-1)/2 gives the low half of the coefficients and the
/// functional equation the rest.
class EulerKernel {
   public:
    EulerKernel(const PolyRing& R, int n, Store* store = nullptr);

    int n() const { return n_; }
    int kmax() const { return kmax_; }
    /// chi_D(P) for every tabulated prime, grouped by degree, then the coefficients.
    void coefficients(const Poly& D, std::vector<std::int64_t>& out) const;
    LPolynomial l_polynomial(const MonicPoly& D) const;

   private:
    struct PrimeData {
        int d = 0;
        std::uint32_t residues = 0;               // q^d
        std::vector<std::uint16_t> tpow;           // (n+1) x d: T^i mod P
        std::vector<std::int8_t> table;            // quadratic character on residues
        MonicPoly P;
    };

    PolyRing R_;
    int n_ = 0;
    int kmax_ = 0;
    std::vector<PrimeData> primes_;
    std::vector<std::vector<std::int64_t>> binom_;  // binom_[m][j] = C(m + j - 1, j), m up to max count
};

/// Sum c_k q^-k, obtained as one division of the exact integer numerator.
/// Throws ArithmeticError if the value is not positive.
long double l_value_at_1(const LPolynomial& L);

/// Inverse roots alpha_j: L(u) = prod (1 - alpha_j u).
std::vector<std::complex<long double>> inverse_roots(const LPolynomial& L);

struct RootMagnitudes {
    int unit = 0;    // |alpha|^2 = 1
    int sqrt_q = 0;  // |alpha|^2 = q
    long double max_error = 0;
};
/// Throws ArithmeticError when some |alpha|^2 is not within tol of 1 or q.
RootMagnitudes classify_roots(const std::vector<std::complex<long double>>& roots, std::uint32_t q,
                              long double tol = 1e-6L);

struct ClassNumberResult {
    MonicPoly D;
    int genus = 0;
    long double L1 = 0;
    BigInt h = 0;
    long double residual = 0;
};

/// h_D = q^g L(1, chi_D) for deg D = 2g + 1.
ClassNumberResult class_number(const PolyRing& R, const MonicPoly& D, long double tol = 1e-6L);
ClassNumberResult class_number(const LPolynomial& L, long double tol = 1e-6L);

/// h_D R_D = q^(n/2) L(1, chi_D) / (q - 1) for even n = deg D.
long double hr_product(const LPolynomial& L);

/// -sum over deg P <= M of ln(1 - chi_D(P)/|P|), grouped by degree.
long double truncated_log_l(const PolyRing& R, const MonicPoly& D, int M, Store* store = nullptr);

/// Main terms 2 e^gamma log log |D| and zeta_A(2) / (2 e^gamma log log |D|), base-q logs.
std::pair<long double, long double> edge_envelope(std::uint32_t q, int deg_D);

/// 1 + #{(x, y) in F_q^2 : y^2 = D(x)}. Equals h_D when deg D = 3.
std::uint64_t affine_point_count_plus_one(const PolyRing& R, const MonicPoly& D);

}  // namespace lfq
