// Test-function pairs, symmetry-type scaling densities, and the prime-sum
// side of the explicit formula for a single curve.

#pragma once

#include <functional>
#include <string>

#include "ecdensity/arith.hpp"
#include "ecdensity/curves.hpp"

namespace ecdensity::density {

using curves::Rational;

// Even test function phi with phi_hat supported in [-nu, nu].
struct TestFunctionPair {
    std::function<double(double)> phi;
    std::function<double(double)> phi_hat;
    double nu = 0.0;
    std::string label;
    // Closed-form integral of phi_hat over [lo, hi] when available;
    // predicted_average falls back to adaptive Simpson otherwise.
    std::function<double(double, double)> hat_integral;
};

// Fejer pair phi(t) = (sin(pi nu t)/(pi nu t))^2, phi_hat(y) = (1/nu)(1-|y|/nu).
TestFunctionPair fejer_pair(double nu);

enum class SymmetryType { U, Sp, O, SOeven, SOodd };

const char* symmetry_name(SymmetryType g);

// Fourier transform of the 1-level scaling density, split as
// regular_part(y) + delta_mass * delta_0.  The regular parts are piecewise
// constant in eta(y) (1 for |y| < 1, 1/2 at |y| = 1, 0 beyond).
struct FtDensity {
    double regular = 0.0;
    double delta_mass = 0.0;
};

FtDensity symmetry_density_ft(SymmetryType g, double y);

// int phi(t) W(G)(t) dt computed on the Fourier side:
// delta_mass * phi_hat(0) + int regular(y) phi_hat(y) dy.
double predicted_average(SymmetryType g, const TestFunctionPair& tf);

// Exact rational value of the same integral for the Fejer pair.
Rational predicted_average_fejer(SymmetryType g, const Rational& nu);

// Average analytic rank bound 1/2 + 1/nu for a symmetry-O family with
// phi_hat supported in [-nu, nu].
Rational rank_bound(const Rational& nu);

// ---------------------------------------------------------------------------
// Explicit-formula statistic

// Shared per-(tf, X) precomputation for the prime sum: primes 3 < p <= X^nu,
// their coefficients 2 log p / (p log X) * phi_hat(log p / log X), and
// quadratic-residue tables.
struct PrimeData {
    double X = 0.0;
    double log_x = 0.0;
    std::vector<uint32_t> primes;
    std::vector<double> coef;
    std::vector<arith::QrTable> qr;
};

PrimeData build_prime_data(const TestFunctionPair& tf, double X);

// P(E; phi) = sum_{p > 3} lambda_E(p) phi_hat(log p/log X) 2 log p/(p log X),
// truncated at p <= X^nu where phi_hat vanishes.
double P_sum(const curves::ShortWeierstrass& e, const TestFunctionPair& tf, double X);
double P_sum(const curves::ShortWeierstrass& e, const PrimeData& pd);

// D(E; phi) = phi_hat(0) log N/log X + phi(0)/2 - P(E; phi),
// with the log-conductor computed on the approximately minimized model.
double D_statistic(const curves::ShortWeierstrass& e, const TestFunctionPair& tf,
                   double X, const arith::PrimeTable* factor_table = nullptr);

// Aggregated family statistics (filled by families::family_average).
struct DensityReport {
    std::string family;
    double X = 0.0;
    double nu = 0.0;
    double density_ratio = 0.0;
    double predicted = 0.0;
    double conductor_stat = 0.0;
    uint64_t curve_count = 0;
    double weight_total = 0.0;
    std::vector<std::pair<uint32_t, double>> per_prime_ledger;

    static std::string csv_header();
    std::string csv_row() const;
    std::string json(bool with_ledger = false) const;
};

// Adaptive Simpson quadrature (tolerance ~1e-10), used for generic pairs.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double tol = 1e-10);

}  // namespace ecdensity::density
