// The parametrized families: enumeration with weights and scalings,
// minimality filters, quadratic twists, and family-level aggregation.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ecdensity/curves.hpp"
#include "ecdensity/density.hpp"

namespace ecdensity::families {

using curves::BigInt;
using curves::GeneralWeierstrass;
using curves::ShortWeierstrass;

// Smooth compactly supported weight; the shipped choice is the C-infinity
// bump on (1, 2), tensor-squared for two-parameter families.
struct WeightFunction {
    int arity = 2;
    std::function<double(double)> factor;  // one-dimensional factor

    static WeightFunction bump(int arity);
    double operator()(double x) const { return factor(x); }
    double operator()(double x, double y) const { return factor(x) * factor(y); }
};

enum class FamilyKind {
    full, full_minimal, rank_one,
    tors_2x2, tors_3, tors_2, tors_4, tors_5,
    cm_b, cm_a, twist_cubic,
};

struct FamilySpec {
    FamilyKind kind;
    std::string label;
    // Scaling exponents A = sA X^{aA}, B = sB X^{aB}; a missing slot means a
    // one-parameter family.  The constants sA, sB were fixed once so that the
    // weighted mean of log N tracks log X (the conductor condition) at desk
    // scale; the exponents are the family's own.
    std::optional<double> alpha_A, alpha_B;
    double scale_A = 1.0, scale_B = 1.0;
    double extra_phi0 = 0.0;  // rank term beyond the symmetry-O prediction
    ShortWeierstrass twist_base{0, 0};

    static FamilySpec make(FamilyKind kind);
    static FamilySpec make_twist(const ShortWeierstrass& base);
    static FamilySpec parse(const std::string& name);  // CLI name -> spec

    // Model for parameter pair (a, b); one-parameter families use b only.
    GeneralWeierstrass model(int64_t a, int64_t b) const;
    // The conductor-condition polynomial R(d).
    BigInt R_value(int64_t a, int64_t b) const;
    bool two_param() const { return alpha_A && alpha_B; }
};

struct FamilyCurve {
    int64_t pa = 0, pb = 0;       // parameters (a, b), or (0, b) / (0, u)
    GeneralWeierstrass model;
    ShortWeierstrass short_model;
    double weight = 0.0;
    BigInt R;
};

// Lattice points of the scaled support box, in lexicographic parameter
// order, singular parameters skipped.
std::vector<FamilyCurve> enumerate(const FamilySpec& spec, double X,
                                   const WeightFunction& w);
std::vector<FamilyCurve> enumerate(const FamilySpec& spec, double X);

// Drop curves with q^4 | a and q^6 | b for some prime q.
std::vector<FamilyCurve> minimal_filter(std::vector<FamilyCurve> curves);

// Weighted family average of the explicit-formula statistic.  Deterministic
// for any thread count: fixed tiles, merged in ascending order.
density::DensityReport family_average(const FamilySpec& spec, double X,
                                      const density::TestFunctionPair& tf,
                                      int threads = 1,
                                      bool per_prime_ledger = false);

// The predicted limit of density_ratio for this family.
double predicted_target(const FamilySpec& spec, const density::TestFunctionPair& tf);

// lambda of the quadratic twist: (d/p) lambda_E(p).  p | d is an error.
int64_t twisted_lambda(const ShortWeierstrass& e, int64_t d, uint64_t p);

struct TwistData {
    int64_t d = 0;
    double N_d_log = 0.0;
    int root_number_factor = 0;  // Kronecker (d / -N)
};

// log N_d = 2 log|d| + log N and w_d = (d/-N) w, valid for d squarefree,
// d = 1 (mod 4), gcd(d, N) = 1; violations are rejected.
TwistData twist_conductor_and_sign(const ShortWeierstrass& e, int64_t d);

// Empirical conductor-condition statistic: the weighted square-divisor mass
// sum_E |w| sum_{p^a || R_E, a >= 2} log(p^{a-1}) / log X, divided by the
// total weight.  Bounded and decaying for the paper's families.
double square_divisor_stat(const FamilySpec& spec, double X,
                           const WeightFunction& w);
double square_divisor_stat(const FamilySpec& spec, double X);

}  // namespace ecdensity::families
