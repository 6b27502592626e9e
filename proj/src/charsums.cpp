#include "ecdensity/charsums.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

namespace ecdensity::charsums {

using arith::e_frac;
using arith::KahanSum;
using arith::legendre;
using arith::mod_inverse;
using arith::mul_mod;
using arith::residue_mod;

// ---------------------------------------------------------------------------
// Closed forms

CharSumValue T_closed(int64_t h, int64_t k, uint64_t p) {
    if (p <= 2 || !arith::is_prime_u64(p))
        throw std::domain_error("T_closed: p must be an odd prime");
    uint64_t kr = residue_mod(k, p);
    if (kr == 0) return {{0.0, 0.0}, Method::closed_form, p, h, k};
    uint64_t hr = residue_mod(h, p);
    uint64_t kbar = mod_inverse(static_cast<int64_t>(kr), p);
    uint64_t h3 = mul_mod(mul_mod(hr, hr, p), hr, p);
    uint64_t phase = mul_mod(h3, mul_mod(kbar, kbar, p), p);
    Complex v = -arith::gauss_sum_sign(p) *
                std::pow(static_cast<double>(p), 1.5) *
                static_cast<double>(legendre(static_cast<int64_t>(kr), p)) *
                e_frac(-static_cast<int64_t>(phase), static_cast<int64_t>(p));
    return {v, Method::closed_form, p, h, k};
}

CharSumValue Tprime_closed(int64_t h, int64_t k, uint64_t p) {
    if (p <= 2 || !arith::is_prime_u64(p))
        throw std::domain_error("Tprime_closed: p must be an odd prime");
    uint64_t hr = residue_mod(h, p);
    uint64_t kr = residue_mod(k, p);
    double pd = static_cast<double>(p);
    Complex v{pd, 0.0};  // the +p term
    if (hr == 0 && kr == 0) v -= Complex{pd * pd, 0.0};
    if (hr != 0) {
        uint64_t hbar = mod_inverse(static_cast<int64_t>(hr), p);
        uint64_t hbar3 = mul_mod(mul_mod(hbar, hbar, p), hbar, p);
        uint64_t k2 = mul_mod(kr, kr, p);
        uint64_t k4 = mul_mod(k2, k2, p);
        uint64_t inv64 = mod_inverse(64, p);  // 2bar^6
        uint64_t phase = mul_mod(mul_mod(k4, hbar3, p), inv64, p);
        v -= arith::gauss_sum_sign(p) * std::pow(pd, 1.5) *
             static_cast<double>(legendre(-static_cast<int64_t>(hr), p)) *
             e_frac(static_cast<int64_t>(phase), static_cast<int64_t>(p));
    }
    return {v, Method::closed_form, p, h, k};
}

// ---------------------------------------------------------------------------
// Oracles

TSumOracle::TSumOracle(uint64_t p) : p_(p) {
    if (p <= 2 || !arith::is_prime_u64(p))
        throw std::domain_error("TSumOracle: p must be an odd prime");
    auto qr = arith::make_qr_table(p);
    lambda_.resize(p * p);
    std::vector<uint64_t> g(p);
    for (uint64_t alpha = 0; alpha < p; ++alpha) {
        for (uint64_t x = 0; x < p; ++x)
            g[x] = ((x * x % p) * x + alpha * x) % p;
        for (uint64_t beta = 0; beta < p; ++beta) {
            int64_t s = 0;
            for (uint64_t x = 0; x < p; ++x) {
                uint64_t f = g[x] + beta;
                if (f >= p) f -= p;
                s += qr(f);
            }
            lambda_[alpha * p + beta] = static_cast<int16_t>(-s);
        }
    }
    roots_ = arith::roots_of_unity(p);
}

CharSumValue TSumOracle::T(int64_t h, int64_t k) const {
    const uint64_t p = p_;
    const uint64_t hr = residue_mod(h, p), kr = residue_mod(k, p);
    double re = 0.0, im = 0.0;
    for (uint64_t alpha = 0; alpha < p; ++alpha) {
        const int16_t* lam = &lambda_[alpha * p];
        uint64_t idx = alpha * hr % p;
        for (uint64_t beta = 0; beta < p; ++beta) {
            double l = lam[beta];
            re += l * roots_[idx].real();
            im += l * roots_[idx].imag();
            idx += kr;
            if (idx >= p) idx -= p;
        }
    }
    return {{re, im}, Method::brute_force, p, h, k};
}

CharSumValue TSumOracle::Tprime(int64_t h, int64_t k) const {
    const uint64_t p = p_;
    const uint64_t hr = residue_mod(h, p), kr = residue_mod(k, p);
    double re = 0.0, im = 0.0;
    for (uint64_t alpha = 0; alpha < p; ++alpha) {
        const int16_t* lam = &lambda_[alpha * p];
        uint64_t idx = alpha * hr % p;
        for (uint64_t beta = 0; beta < p; ++beta) {
            double l = lam[beta * beta % p];
            re += l * roots_[idx].real();
            im += l * roots_[idx].imag();
            idx += kr;
            if (idx >= p) idx -= p;
        }
    }
    return {{re, im}, Method::brute_force, p, h, k};
}

CharSumValue T_brute(int64_t h, int64_t k, uint64_t p) {
    return TSumOracle(p).T(h, k);
}

CharSumValue Tprime_brute(int64_t h, int64_t k, uint64_t p) {
    return TSumOracle(p).Tprime(h, k);
}

namespace {

CharSumValue reference_sum(int64_t h, int64_t k, uint64_t p, bool square_beta) {
    auto qr = arith::make_qr_table(p);
    auto w = arith::roots_of_unity(p);
    uint64_t hr = residue_mod(h, p), kr = residue_mod(k, p);
    double re = 0.0, im = 0.0;
    for (uint64_t alpha = 0; alpha < p; ++alpha) {
        for (uint64_t beta = 0; beta < p; ++beta) {
            uint64_t b = square_beta ? beta * beta % p : beta;
            int64_t s = 0;
            for (uint64_t x = 0; x < p; ++x)
                s += qr(((x * x % p) * x + alpha * x + b) % p);
            uint64_t idx = (alpha * hr + beta * kr) % p;
            re += -static_cast<double>(s) * w[idx].real();
            im += -static_cast<double>(s) * w[idx].imag();
        }
    }
    return {{re, im}, Method::brute_force, p, h, k};
}

}  // namespace

CharSumValue T_reference(int64_t h, int64_t k, uint64_t p) {
    return reference_sum(h, k, p, false);
}

CharSumValue Tprime_reference(int64_t h, int64_t k, uint64_t p) {
    return reference_sum(h, k, p, true);
}

// ---------------------------------------------------------------------------
// Identity checks

bool kloosterman_identity_check(int64_t h, int64_t k, uint64_t p, double tol) {
    uint64_t hr = residue_mod(h, p), kr = residue_mod(k, p);
    if (hr == 0 || kr == 0)
        throw std::domain_error("kloosterman_identity_check: requires h, k nonzero mod p");
    auto qr = arith::make_qr_table(p);
    auto w = arith::roots_of_unity(p);
    uint64_t kbar = mod_inverse(static_cast<int64_t>(kr), p);
    uint64_t hk = mul_mod(hr, kr, p);
    uint64_t step = mul_mod(2 * hr % p, kbar, p);
    Complex lhs{0.0, 0.0};
    for (uint64_t alpha = 0; alpha < p; ++alpha) {
        uint64_t v = (mul_mod(alpha, alpha, p) + hk) % p;
        lhs += static_cast<double>(qr(v)) * w[mul_mod(step, alpha, p)];
    }
    uint64_t h3 = mul_mod(mul_mod(hr, hr, p), hr, p);
    double rhs = arith::kloosterman(-static_cast<int64_t>(mul_mod(h3, kbar, p)), 1, p);
    return std::abs(lhs - Complex{rhs, 0.0}) < tol * std::sqrt(static_cast<double>(p));
}

curves::Rational reciprocity_residual(uint64_t u, uint64_t v) {
    if (std::gcd(u, v) != 1)
        throw std::domain_error("reciprocity_residual: u, v must be coprime");
    using curves::Rational;
    auto inv_term = [](uint64_t a, uint64_t m) -> Rational {
        if (m == 1) return 0;  // every residue is 0 mod 1
        return Rational(mod_inverse(static_cast<int64_t>(a % m), m), m);
    };
    Rational r = inv_term(u, v) + inv_term(v, u) -
                 Rational(1, static_cast<uint64_t>(u) * v);
    // The identity says r is an integer; report distance to the nearest one.
    Rational fl = boost::multiprecision::numerator(r) < 0
                      ? -((-boost::multiprecision::numerator(r) +
                           boost::multiprecision::denominator(r) - 1) /
                          boost::multiprecision::denominator(r))
                      : boost::multiprecision::numerator(r) /
                            boost::multiprecision::denominator(r);
    Rational frac = r - fl;
    return frac <= Rational(1, 2) ? frac : 1 - frac;
}

double poisson_residual(double D, int64_t a, uint64_t l) {
    constexpr double kCut = 1e-14;
    auto w = [](double x) { return std::exp(-std::numbers::pi * x * x); };
    // w(x) < kCut for |x| > reach.
    const double reach = std::sqrt(-std::log(kCut) / std::numbers::pi);

    KahanSum lhs;
    int64_t jmax = static_cast<int64_t>((reach * D + std::abs(static_cast<double>(a))) /
                                        static_cast<double>(l)) + 2;
    for (int64_t j = -jmax; j <= jmax; ++j) {
        double d = static_cast<double>(a + j * static_cast<int64_t>(l));
        double term = w(d / D);
        if (term >= kCut) lhs.add(term);
    }

    KahanSum rre, rim;
    int64_t hmax = static_cast<int64_t>(reach * static_cast<double>(l) / D) + 2;
    for (int64_t hh = -hmax; hh <= hmax; ++hh) {
        double term = w(static_cast<double>(hh) * D / static_cast<double>(l));
        if (term < kCut) continue;
        Complex ph = e_frac(hh * a, static_cast<int64_t>(l));
        rre.add(term * ph.real());
        rim.add(term * ph.imag());
    }
    Complex rhs = (D / static_cast<double>(l)) * Complex{rre.value(), rim.value()};
    return std::abs(Complex{lhs.value(), 0.0} - rhs);
}

// ---------------------------------------------------------------------------
// ScanReport

std::string ScanReport::csv_header() {
    return "kind,params,abs,normalizer,ratio,terms,note";
}

std::string ScanReport::csv_row() const {
    std::string ps;
    for (size_t i = 0; i < params.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s=%.12g", params[i].first.c_str(),
                      params[i].second);
        if (i) ps += ';';
        ps += buf;
    }
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%s,%.12g,%.12g,%.12g,%llu,%s",
                  kind.c_str(), ps.c_str(), aggregate_abs, normalizer, ratio,
                  static_cast<unsigned long long>(term_count), note.c_str());
    return buf;
}

// ---------------------------------------------------------------------------
// Scans

ScanReport sum_S_three_var(int64_t H, int64_t K, uint64_t P) {
    ScanReport rep;
    rep.kind = "three_var";
    rep.params = {{"H", double(H)}, {"K", double(K)}, {"P", double(P)}};
    if (H < 1 || K < 1) {
        rep.note = "empty range";
        rep.normalizer = 1.0;
        rep.finish();
        return rep;
    }
    auto table = arith::sieve_primes(2 * P);
    KahanSum re, im;
    uint64_t terms = 0;
    for (int64_t k = K; k < 2 * K; ++k) {
        int64_t k2 = k * k;
        for (int64_t h = H; h < 2 * H; ++h) {
            __int128 h3 = static_cast<__int128>(h) * h * h;
            for (uint32_t p : table.primes) {
                if (p <= P) continue;
                if (p <= 3) continue;
                int sym = legendre(k, p);
                if (sym == 0) continue;
                // e(h^3 / (p k^2)): exact reduction of the rational phase
                int64_t q = static_cast<int64_t>(p) * k2;
                int64_t r1 = static_cast<int64_t>(h3 % q);
                Complex second{1.0, 0.0};
                if (k2 > 1) {
                    uint64_t pbar = mod_inverse(static_cast<int64_t>(p % k2),
                                                static_cast<uint64_t>(k2));
                    uint64_t r2 = mul_mod(static_cast<uint64_t>(h3 % k2), pbar,
                                          static_cast<uint64_t>(k2));
                    second = e_frac(static_cast<int64_t>(r2), k2);
                }
                Complex t = static_cast<double>(sym) * e_frac(r1, q) * second;
                re.add(t.real());
                im.add(t.imag());
                ++terms;
            }
        }
    }
    rep.aggregate = {re.value(), im.value()};
    rep.term_count = terms;
    size_t np = table.primes.size() - table.upper_bound_index(std::max<uint64_t>(P, 3));
    rep.normalizer = std::max(1.0, double(H) * double(K) * double(np));
    rep.note = "normalizer=trivial bound";
    rep.finish();
    return rep;
}

ScanReport conjecture_prime_sum(int64_t k, uint64_t P, double delta) {
    if (k > 0) {
        int64_t r = static_cast<int64_t>(std::llround(std::sqrt(double(k))));
        for (int64_t c = std::max<int64_t>(0, r - 2); c <= r + 2; ++c)
            if (c * c == k)
                throw std::invalid_argument("conjecture_prime_sum: k must not be a square");
    }
    ScanReport rep;
    rep.kind = "conjecture71";
    int64_t H = static_cast<int64_t>(std::pow(double(P), 2.0 / 3.0 + delta));
    rep.params = {{"k", double(k)}, {"P", double(P)}, {"delta", delta}, {"H", double(H)}};
    uint64_t k2 = static_cast<uint64_t>(k * k);
    if (k2 < 2)
        throw std::invalid_argument("conjecture_prime_sum: |k| must exceed 1");
    auto roots = arith::roots_of_unity(k2);
    auto table = arith::sieve_primes(std::max<uint64_t>(P, 5));
    KahanSum re, im;
    uint64_t terms = 0;
    for (uint32_t p : table.primes) {
        if (p <= 3 || p > P) continue;
        int sym = legendre(k, p);
        if (sym == 0) continue;
        uint64_t pbar = mod_inverse(p, k2);
        for (int64_t h = 1; h <= H; ++h) {
            uint64_t h3 = mul_mod(mul_mod(residue_mod(h, k2), residue_mod(h, k2), k2),
                                  residue_mod(h, k2), k2);
            Complex t = static_cast<double>(sym) * roots[mul_mod(h3, pbar, k2)];
            re.add(t.real());
            im.add(t.imag());
            ++terms;
        }
    }
    rep.aggregate = {re.value(), im.value()};
    rep.term_count = terms;
    rep.normalizer = std::pow(double(P), 1.0 - 1.5 * delta);
    rep.note = "exploratory";
    rep.finish();
    return rep;
}

ScanReport integer_analogue_sum(uint64_t P, double delta, uint64_t k) {
    if (k % 2 == 0)
        throw std::invalid_argument("integer_analogue_sum: k must be odd");
    {
        uint64_t r = static_cast<uint64_t>(std::llround(std::sqrt(double(k))));
        for (uint64_t c = (r > 2 ? r - 2 : 0); c <= r + 2; ++c)
            if (c * c == k)
                throw std::invalid_argument("integer_analogue_sum: k must not be a square");
    }
    ScanReport rep;
    rep.kind = "integer_analogue";
    uint64_t H = static_cast<uint64_t>(std::pow(double(P), 2.0 / 3.0 + delta));
    double K = std::pow(double(H), 1.5) / std::sqrt(double(P));
    rep.params = {{"P", double(P)}, {"delta", delta}, {"k", double(k)},
                  {"H", double(H)}, {"K", K}};
    uint64_t k2 = k * k;
    auto roots = arith::roots_of_unity(k2);
    KahanSum re, im;
    uint64_t terms = 0;
    for (uint64_t h = H + 1; h < 2 * H; ++h) {
        if (std::gcd(h, k) != 1) continue;
        double wh = arith::smooth_bump(double(h) / double(H));
        if (wh == 0.0) continue;
        uint64_t h3 = mul_mod(mul_mod(h % k2, h % k2, k2), h % k2, k2);
        for (uint64_t m = P + 1; m < 2 * P; ++m) {
            int sym = arith::jacobi(static_cast<int64_t>(m), k);
            if (sym == 0) continue;
            double wm = arith::smooth_bump(double(m) / double(P));
            if (wm == 0.0) continue;
            uint64_t mbar = mod_inverse(static_cast<int64_t>(m % k2), k2);
            Complex t = sym * wh * wm * roots[mul_mod(h3, mbar, k2)];
            re.add(t.real());
            im.add(t.imag());
            ++terms;
        }
    }
    rep.aggregate = {re.value(), im.value()};
    rep.term_count = terms;
    rep.normalizer = std::pow(double(P), 5.0 / 6.0 + 6.5 * delta);
    rep.note = "trend statistic";
    rep.finish();
    return rep;
}

ScanReport cubic_scan(int64_t k, uint64_t P) {
    ScanReport rep;
    rep.kind = "cubic";
    rep.params = {{"k", double(k)}, {"P", double(P)}};
    auto table = arith::sieve_primes(2 * P);
    KahanSum re, im;
    uint64_t terms = 0;
    for (uint32_t p : table.primes) {
        if (p <= std::max<uint64_t>(P, 3)) continue;
        int sym = legendre(k, p);
        if (sym == 0) continue;
        Complex t = static_cast<double>(sym) * arith::cubic_exp_sum(k, p);
        re.add(t.real());
        im.add(t.imag());
        terms += p;
    }
    rep.aggregate = {re.value(), im.value()};
    rep.term_count = terms;
    rep.normalizer = std::pow(double(P), 4.0 / 3.0);
    rep.note = "exploratory";
    rep.finish();
    return rep;
}

// ---------------------------------------------------------------------------
// C(Y)

namespace {

bool is_pm_square(__int128 v, bool* nonzero) {
    if (v == 0) { *nonzero = false; return true; }
    *nonzero = true;
    unsigned __int128 m = v < 0 ? static_cast<unsigned __int128>(-v)
                                : static_cast<unsigned __int128>(v);
    if (m > static_cast<unsigned __int128>(UINT64_MAX)) return false;
    uint64_t u = static_cast<uint64_t>(m);
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(u)));
    for (uint64_t c = (r > 1 ? r - 1 : 0); c <= r + 1; ++c)
        if (c * c == u) return true;
    return false;
}

}  // namespace

CountC count_C(int64_t Y) {
    if (Y < 0) throw std::domain_error("count_C: Y must be >= 0");
    CountC out;
    for (int64_t h = -Y; h <= Y; ++h) {
        int64_t rem = Y - std::llabs(h);
        for (int64_t k = -rem; k <= rem; ++k) {
            __int128 prod = static_cast<__int128>(h) * k * (h - k);
            bool nonzero;
            if (is_pm_square(prod, &nonzero)) {
                ++out.total;
                if (nonzero) ++out.nonzero_part;
            }
        }
    }
    return out;
}

uint64_t count_C_parametrization(int64_t Y) {
    if (Y < 0) throw std::domain_error("count_C_parametrization: Y >= 0");
    std::set<std::pair<int64_t, int64_t>> found;
    auto squarefree = [](int64_t n) {
        for (int64_t d = 2; d * d <= n; ++d)
            if (n % (d * d) == 0) return false;
        return true;
    };
    for (int64_t d = 1; d * d <= Y; ++d) {
        int64_t d2 = d * d;
        for (int64_t l1 = 1; d2 * l1 * l1 <= Y; ++l1)
            for (int64_t l2 = 1; d2 * l1 * l1 * l2 <= Y; ++l2)
                for (int64_t l3 = 1; d2 * l1 * l1 * l2 * l3 <= Y; ++l3) {
                    if (!squarefree(l1 * l2 * l3)) continue;
                    for (int64_t x = 1; d2 * l1 * l1 * l2 * l3 * x * x <= Y; ++x) {
                        int64_t h = d2 * l1 * l1 * l2 * l3 * x * x;
                        for (int64_t y = 1;; ++y) {
                            int64_t k = d2 * l1 * l2 * l2 * l3 * y * y;
                            if (h + k > Y || k >= h) break;
                            // l1 x^2 = l2 y^2 + l3 z^2 with z >= 1
                            int64_t rhs = l1 * x * x - l2 * y * y;
                            if (rhs <= 0 || rhs % l3 != 0) continue;
                            int64_t z2 = rhs / l3;
                            int64_t z = static_cast<int64_t>(std::llround(std::sqrt(double(z2))));
                            bool sq = false;
                            for (int64_t c = std::max<int64_t>(1, z - 1); c <= z + 1; ++c)
                                if (c * c == z2) { sq = true; z = c; break; }
                            if (!sq) continue;
                            if (std::gcd(x, y) != 1 || std::gcd(x, z) != 1 ||
                                std::gcd(y, z) != 1)
                                continue;
                            found.emplace(h, k);
                        }
                    }
                }
    }
    // Each positive solution h > k > 0 has the four distinct images
    // (h,k), (k,h), (-h,-k), (-k,-h) inside C(Y).
    return 4 * found.size();
}

// ---------------------------------------------------------------------------
// Oscillatory double sum

OscSumResult appendix_exp_sum(uint64_t M, uint64_t N, double Y, CoeffRule rule,
                              uint64_t seed) {
    if (M < 1 || N < 1) throw std::domain_error("appendix_exp_sum: M, N >= 1");
    std::vector<double> c(N, 1.0);
    if (rule == CoeffRule::rademacher) {
        std::mt19937_64 rng(seed);
        for (auto& v : c) v = (rng() & 1) ? 1.0 : -1.0;
    }
    KahanSum total;
    for (uint64_t m = M; m < 2 * M; ++m) {
        double g = static_cast<double>(M) / static_cast<double>(m);  // (m/M)^{-1}
        KahanSum re, im;
        for (uint64_t n = N; n < 2 * N; ++n) {
            double f = std::pow(static_cast<double>(n) / static_cast<double>(N), 3);
            double t = 2.0 * std::numbers::pi * Y * f * g;
            re.add(c[n - N] * std::cos(t));
            im.add(c[n - N] * std::sin(t));
        }
        total.add(std::hypot(re.value(), im.value()));
    }
    OscSumResult out;
    out.S = total.value();
    const double C = kOscSumConstant;
    double ay = std::abs(Y);
    out.small_m_case = static_cast<double>(M) <= C * ay;
    double first = std::sqrt(static_cast<double>(N)) * static_cast<double>(M);
    double nm = static_cast<double>(N) * static_cast<double>(M);
    if (out.small_m_case)
        out.bound = C * (first + nm / (1.0 + std::sqrt(ay)) * std::log(double(N)));
    else
        out.bound = C * (first + nm / (1.0 + std::pow(ay, 0.25)));
    return out;
}

}  // namespace ecdensity::charsums
