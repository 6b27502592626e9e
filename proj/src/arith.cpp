#include "ecdensity/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace ecdensity::arith {

PrimeTable sieve_primes(uint64_t limit) {
    if (limit < 2) throw std::domain_error("sieve_primes: limit must be >= 2");
    PrimeTable t;
    t.limit = limit;
    std::vector<bool> composite(limit + 1, false);
    for (uint64_t i = 2; i * i <= limit; ++i) {
        if (composite[i]) continue;
        for (uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    for (uint64_t i = 2; i <= limit; ++i)
        if (!composite[i]) t.primes.push_back(static_cast<uint32_t>(i));
    return t;
}

bool PrimeTable::contains(uint64_t n) const {
    if (n > limit) throw std::out_of_range("PrimeTable::contains: beyond limit");
    return std::binary_search(primes.begin(), primes.end(), n);
}

size_t PrimeTable::upper_bound_index(uint64_t n) const {
    return static_cast<size_t>(
        std::upper_bound(primes.begin(), primes.end(), n) - primes.begin());
}

uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t m) {
    if (m == 1) return 0;
    uint64_t r = 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mul_mod(r, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return r;
}

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                       29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // Sprp bases covering all 64-bit integers (Sinclair).
    for (uint64_t a : {2ull, 325ull, 9375ull, 28178ull, 450775ull,
                       9780504ull, 1795265022ull}) {
        uint64_t x = pow_mod(a % n, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

uint64_t residue_mod(int64_t a, uint64_t m) {
    int64_t r = a % static_cast<int64_t>(m);
    if (r < 0) r += static_cast<int64_t>(m);
    return static_cast<uint64_t>(r);
}

uint64_t mod_inverse(int64_t a, uint64_t m) {
    if (m < 2) throw std::domain_error("mod_inverse: modulus must be >= 2");
    uint64_t r = residue_mod(a, m);
    if (r == 0) {
        if (is_prime_u64(m)) return 0;  // 0bar = 0 at prime moduli
        throw std::domain_error("mod_inverse: residue 0 at composite modulus");
    }
    // Extended Euclid on (r, m).
    int64_t t0 = 0, t1 = 1;
    uint64_t r0 = m, r1 = r;
    while (r1 != 0) {
        uint64_t q = r0 / r1;
        uint64_t r2 = r0 - q * r1;
        int64_t t2 = t0 - static_cast<int64_t>(q) * t1;
        r0 = r1; r1 = r2;
        t0 = t1; t1 = t2;
    }
    if (r0 != 1) throw std::domain_error("mod_inverse: no inverse (gcd > 1)");
    return residue_mod(t0, m);
}

int legendre(int64_t a, uint64_t p) {
    if (p == 2 || !is_prime_u64(p))
        throw std::domain_error("legendre: p must be an odd prime");
    uint64_t r = residue_mod(a, p);
    if (r == 0) return 0;
    uint64_t e = pow_mod(r, (p - 1) / 2, p);
    return e == 1 ? 1 : -1;
}

int jacobi(int64_t a, uint64_t n) {
    if (n == 0 || (n & 1) == 0)
        throw std::domain_error("jacobi: n must be odd and positive");
    uint64_t r = residue_mod(a, n);
    int result = 1;
    while (r != 0) {
        while ((r & 1) == 0) {
            r >>= 1;
            uint64_t m8 = n & 7;
            if (m8 == 3 || m8 == 5) result = -result;
        }
        std::swap(r, n);
        if ((r & 3) == 3 && (n & 3) == 3) result = -result;
        r %= n;
    }
    return n == 1 ? result : 0;
}

int kronecker(int64_t a, int64_t n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    int v2 = 0;
    while ((n & 1) == 0) { n >>= 1; ++v2; }
    if (v2 > 0) {
        if ((a & 1) == 0) return 0;
        uint64_t a8 = residue_mod(a, 8);
        int k2 = (a8 == 1 || a8 == 7) ? 1 : -1;  // (a/2)
        if (v2 & 1) result *= k2;
    }
    return result * jacobi(a, static_cast<uint64_t>(n));
}

QrTable make_qr_table(uint64_t p) {
    QrTable t;
    t.p = static_cast<uint32_t>(p);
    t.chi.assign(p, -1);
    t.chi[0] = 0;
    for (uint64_t x = 1; x <= p / 2; ++x) t.chi[mul_mod(x, x, p)] = 1;
    return t;
}

std::vector<uint32_t> inverse_table(uint64_t p) {
    std::vector<uint32_t> inv(p, 0);
    if (p > 1) inv[1] = 1;
    for (uint64_t g = 2; g < p; ++g)
        inv[g] = static_cast<uint32_t>(p - mul_mod(p / g, inv[p % g], p));
    return inv;
}

Complex e_frac(int64_t num, int64_t den) {
    if (den == 0) throw std::domain_error("e_frac: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    uint64_t r = residue_mod(num, static_cast<uint64_t>(den));
    double t = 2.0 * std::numbers::pi * static_cast<double>(r) /
               static_cast<double>(den);
    return {std::cos(t), std::sin(t)};
}

std::vector<Complex> roots_of_unity(uint64_t p) {
    std::vector<Complex> w(p);
    for (uint64_t j = 0; j < p; ++j)
        w[j] = e_frac(static_cast<int64_t>(j), static_cast<int64_t>(p));
    return w;
}

Complex gauss_sum_sign(uint64_t p) {
    if (p == 2 || !is_prime_u64(p))
        throw std::domain_error("gauss_sum_sign: p must be an odd prime");
    return (p % 4 == 1) ? Complex{1.0, 0.0} : Complex{0.0, 1.0};
}

Complex quadratic_gauss_sum(int64_t a, int64_t b, uint64_t p) {
    uint64_t ar = residue_mod(a, p);
    uint64_t br = residue_mod(b, p);
    if (ar == 0)
        return (br == 0) ? Complex{static_cast<double>(p), 0.0} : Complex{0.0, 0.0};
    uint64_t abar = mod_inverse(static_cast<int64_t>(ar), p);
    uint64_t inv4 = mod_inverse(4, p);
    uint64_t phase = mul_mod(mul_mod(abar, mul_mod(br, br, p), p), inv4, p);
    Complex val = gauss_sum_sign(p) * std::sqrt(static_cast<double>(p)) *
                  static_cast<double>(legendre(static_cast<int64_t>(ar), p));
    return val * e_frac(-static_cast<int64_t>(phase), static_cast<int64_t>(p));
}

Complex quadratic_gauss_sum_direct(int64_t a, int64_t b, uint64_t p) {
    uint64_t ar = residue_mod(a, p);
    uint64_t br = residue_mod(b, p);
    Complex s{0.0, 0.0};
    for (uint64_t x = 0; x < p; ++x) {
        uint64_t e = (mul_mod(mul_mod(x, x, p), ar, p) + mul_mod(br, x, p)) % p;
        s += e_frac(static_cast<int64_t>(e), static_cast<int64_t>(p));
    }
    return s;
}

double kloosterman(int64_t m, int64_t n, uint64_t p) {
    if (p == 2 || !is_prime_u64(p))
        throw std::domain_error("kloosterman: p must be an odd prime");
    uint64_t mr = residue_mod(m, p), nr = residue_mod(n, p);
    auto inv = inverse_table(p);
    auto w = roots_of_unity(p);
    double re = 0.0;
    for (uint64_t g = 1; g < p; ++g) {
        uint64_t e = (mul_mod(mr, g, p) + mul_mod(nr, inv[g], p)) % p;
        re += w[e].real();
    }
    return re;
}

Complex cubic_exp_sum(int64_t k, uint64_t p) {
    uint64_t kr = residue_mod(k, p);
    auto w = roots_of_unity(p);
    Complex s{0.0, 0.0};
    for (uint64_t x = 0; x < p; ++x) {
        uint64_t e = mul_mod(mul_mod(mul_mod(x, x, p), x, p), kr, p);
        s += w[e];
    }
    return s;
}

double smooth_bump(double x) {
    double t = 2.0 * x - 3.0;
    double d = 1.0 - t * t;
    if (d <= 0.0) return 0.0;
    return std::exp(1.0 - 1.0 / d);
}

Complex quartic_exp_sum(int64_t h, uint64_t p) {
    uint64_t hr = residue_mod(h, p);
    auto w = roots_of_unity(p);
    Complex s{0.0, 0.0};
    for (uint64_t x = 0; x < p; ++x) {
        uint64_t x2 = mul_mod(x, x, p);
        uint64_t e = mul_mod(mul_mod(x2, x2, p), hr, p);
        s += w[e];
    }
    return s;
}

}  // namespace ecdensity::arith
