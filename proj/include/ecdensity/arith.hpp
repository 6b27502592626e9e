// Exact modular and complex arithmetic primitives: primes, residue symbols,
// modular inverses, roots of unity, Gauss and Kloosterman sums.

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ecdensity::arith {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Primes

struct PrimeTable {
    uint64_t limit = 0;
    std::vector<uint32_t> primes;   // ascending, complete up to limit

    bool contains(uint64_t n) const;

    // Index of first prime > n (for range iteration).
    size_t upper_bound_index(uint64_t n) const;
};

// Complete ascending list of primes <= limit.  limit < 2 is an error.
PrimeTable sieve_primes(uint64_t limit);

// Deterministic Miller-Rabin, valid for all 64-bit n.
bool is_prime_u64(uint64_t n);

// ---------------------------------------------------------------------------
// Modular arithmetic

uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m);
uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t m);

// Canonical residue of a in [0, m).
uint64_t residue_mod(int64_t a, uint64_t m);

// Modular inverse with the convention inverse(0 mod p) = 0 for prime moduli.
// gcd(a, m) > 1 with m composite is an error.
uint64_t mod_inverse(int64_t a, uint64_t m);

// Legendre symbol (a/p) for odd prime p, via Euler's criterion.
int legendre(int64_t a, uint64_t p);

// Jacobi symbol (a/n) for odd positive n.
int jacobi(int64_t a, uint64_t n);

// Kronecker symbol (a/n) for arbitrary nonzero n.
int kronecker(int64_t a, int64_t n);

// Per-prime quadratic-residue lookup table: chi(r) for r in [0, p).
// Built in O(p); lookups O(1).  Used by the batch lambda loops.
struct QrTable {
    uint32_t p = 0;
    std::vector<int8_t> chi;

    int operator()(uint64_t r) const { return chi[r]; }
};

QrTable make_qr_table(uint64_t p);

// Table of inverses mod p: inv[0] = 0 (paper's 0-bar convention).
std::vector<uint32_t> inverse_table(uint64_t p);

// ---------------------------------------------------------------------------
// Roots of unity and exponential sums

// e(num/den) = exp(2*pi*i*num/den), with num reduced mod den first.
Complex e_frac(int64_t num, int64_t den);

// Table of the p-th roots of unity: root[j] = e(j/p).
std::vector<Complex> roots_of_unity(uint64_t p);

// Sign of the quadratic Gauss sum: 1 for p = 1 (mod 4), i for p = 3 (mod 4);
// satisfies sum_x e(x^2/p) = eps_p * sqrt(p).
Complex gauss_sum_sign(uint64_t p);

// Closed form of sum_x e((a x^2 + b x)/p):
//   eps_p sqrt(p) (a/p) e(-abar b^2 4bar / p)   if p does not divide a,
//   p                                           if a = b = 0 (mod p),
//   0                                           otherwise.
Complex quadratic_gauss_sum(int64_t a, int64_t b, uint64_t p);

// Direct p-term evaluation of the same sum (oracle path).
Complex quadratic_gauss_sum_direct(int64_t a, int64_t b, uint64_t p);

// Kloosterman sum S(m, n; p) = sum_{g != 0} e((m g + n gbar)/p).  Real.
double kloosterman(int64_t m, int64_t n, uint64_t p);

// Direct sums sum_x e(x^3 k / p) and sum_x e(x^4 h / p).
Complex cubic_exp_sum(int64_t k, uint64_t p);
Complex quartic_exp_sum(int64_t h, uint64_t p);

// ---------------------------------------------------------------------------
// Helpers

inline bool complex_close(Complex a, Complex b, double tol) {
    return std::abs(a - b) < tol;
}

// C-infinity bump exp(1 - 1/(1 - (2x-3)^2)) supported on (1, 2), peak 1 at 3/2.
double smooth_bump(double x);

// Compensated (Kahan) accumulator; summation order defines the result.
struct KahanSum {
    double sum = 0.0;
    double c = 0.0;

    void add(double x) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

}  // namespace ecdensity::arith
