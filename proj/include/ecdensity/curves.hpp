// Weierstrass models, invariants, admissible changes of variables, reduction
// data, approximate conductors, trace of Frobenius, and the affine group law.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <stdexcept>

#include "ecdensity/arith.hpp"

namespace ecdensity::curves {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct SingularCurveError : std::domain_error {
    SingularCurveError() : std::domain_error("singular curve: discriminant is zero") {}
};

// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
struct GeneralWeierstrass {
    BigInt a1, a2, a3, a4, a6;

    bool operator==(const GeneralWeierstrass&) const = default;
};

// y^2 = x^3 + a x + b
struct ShortWeierstrass {
    BigInt a, b;

    bool operator==(const ShortWeierstrass&) const = default;

    GeneralWeierstrass general() const { return {0, 0, 0, a, b}; }
};

struct Invariants {
    BigInt b2, b4, b6, b8, c4, c6, disc;
};

// b-, c-invariants and discriminant.  Throws SingularCurveError when disc = 0.
Invariants invariants(const GeneralWeierstrass& e);

// Discriminant only, no singularity check (enumeration uses this to skip).
BigInt discriminant(const GeneralWeierstrass& e);
BigInt short_discriminant(const BigInt& a, const BigInt& b);  // -16(4a^3+27b^2)

// Completed-square model y^2 = x^3 - 27 c4 x - 54 c6.
ShortWeierstrass short_form(const GeneralWeierstrass& e);

// Admissible substitution x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.
struct ChangeOfVariables {
    BigInt u, r, s, t;
};

// Transform E into the primed model (u^12 disc' = disc).  Throws on u = 0 or
// when the transformed coefficients are not integral.
GeneralWeierstrass apply_cov(const GeneralWeierstrass& e, const ChangeOfVariables& c);

// Exact inverse direction: given the primed model, recover the unprimed one
// (always integral; disc grows by u^12).
GeneralWeierstrass unapply_cov(const GeneralWeierstrass& eprime, const ChangeOfVariables& c);

// Minimality rule at p > 3: non-minimal iff p^4 | a and p^6 | b.
bool is_minimal_at(const ShortWeierstrass& e, uint64_t p);

// Divide out p^4 | a, p^6 | b repeatedly (p > 3).
ShortWeierstrass minimize_at(const ShortWeierstrass& e, uint64_t p);

// Approximate global minimization: the p > 3 rule for every prime with
// v_p(disc) >= 12, then a single u in {6, 3, 2} step at 2 and 3.
ShortWeierstrass minimize(const ShortWeierstrass& e);

enum class ReductionType { good, multiplicative, additive };

// Reduction at p > 3 on a model assumed minimal at p.
ReductionType reduction_type(const ShortWeierstrass& e, uint64_t p);

// lambda_E(p) = -sum_x ((x^3 + ax + b)/p) for p > 3.
int64_t lambda_p(const ShortWeierstrass& e, uint64_t p);
int64_t lambda_p(const ShortWeierstrass& e, const arith::QrTable& qr);
// Residue fast path: a, b already reduced mod qr.p.
int64_t lambda_p_residues(uint64_t a, uint64_t b, const arith::QrTable& qr);

// Prime factorization (p, multiplicity), ascending.  The table accelerates
// trial division when provided; correctness does not depend on it.
std::vector<std::pair<uint64_t, int>> factorize(BigInt n,
                                                const arith::PrimeTable* table = nullptr);

// log N with f_p from the reduction type at p > 3 and f_p = min(v_p(disc_min), 8)
// at p = 2, 3, all on the (approximately) minimized invariant triple.
double log_conductor(const GeneralWeierstrass& e, const arith::PrimeTable* table = nullptr);
double log_conductor(const ShortWeierstrass& e, const arith::PrimeTable* table = nullptr);

// Same conductor as an integer (shares the prime support of N away from 2, 3).
BigInt approx_conductor(const GeneralWeierstrass& e, const arith::PrimeTable* table = nullptr);
BigInt approx_conductor(const ShortWeierstrass& e, const arith::PrimeTable* table = nullptr);

// ---------------------------------------------------------------------------
// Affine points, exact rational group law

struct AffinePoint {
    Rational x, y;
    bool infinity = false;

    static AffinePoint at_infinity() { return {0, 0, true}; }
    bool operator==(const AffinePoint&) const = default;
};

bool on_curve(const GeneralWeierstrass& e, const AffinePoint& pt);

AffinePoint point_negate(const GeneralWeierstrass& e, const AffinePoint& pt);
AffinePoint point_add(const GeneralWeierstrass& e, const AffinePoint& p,
                      const AffinePoint& q);
AffinePoint point_mul(const GeneralWeierstrass& e, const AffinePoint& p, uint64_t n);

// Least n <= 12 with nP = O, else nullopt (Mazur's bound caps torsion at 12).
std::optional<int> torsion_order(const GeneralWeierstrass& e, const AffinePoint& p);

// Lutz-Nagell divisibility b^2 | 4a^3 for the rank-one family's point (0, b).
bool lutz_nagell_divides(const BigInt& a, const BigInt& b);

}  // namespace ecdensity::curves
