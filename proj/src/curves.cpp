#include "ecdensity/curves.hpp"

#include <cmath>

namespace ecdensity::curves {

namespace {

Invariants compute_invariants(const GeneralWeierstrass& e) {
    Invariants v;
    v.b2 = e.a1 * e.a1 + 4 * e.a2;
    v.b4 = 2 * e.a4 + e.a1 * e.a3;
    v.b6 = e.a3 * e.a3 + 4 * e.a6;
    v.b8 = e.a1 * e.a1 * e.a6 + 4 * e.a2 * e.a6 - e.a1 * e.a3 * e.a4 +
           e.a2 * e.a3 * e.a3 - e.a4 * e.a4;
    v.c4 = v.b2 * v.b2 - 24 * v.b4;
    v.c6 = -v.b2 * v.b2 * v.b2 + 36 * v.b2 * v.b4 - 216 * v.b6;
    v.disc = -v.b2 * v.b2 * v.b8 - 8 * v.b4 * v.b4 * v.b4 -
             27 * v.b6 * v.b6 + 9 * v.b2 * v.b4 * v.b6;
    return v;
}

// Exact division, throwing when the quotient is not integral.
BigInt exact_div(const BigInt& n, const BigInt& d, const char* what) {
    if (n % d != 0) throw std::domain_error(what);
    return n / d;
}

}  // namespace

Invariants invariants(const GeneralWeierstrass& e) {
    Invariants v = compute_invariants(e);
    if (v.disc == 0) throw SingularCurveError{};
    // 1728 disc = c4^3 - c6^2 must hold identically.
    if (1728 * v.disc != v.c4 * v.c4 * v.c4 - v.c6 * v.c6)
        throw std::logic_error("invariants: c-identity violated");
    return v;
}

BigInt discriminant(const GeneralWeierstrass& e) {
    return compute_invariants(e).disc;
}

BigInt short_discriminant(const BigInt& a, const BigInt& b) {
    return -16 * (4 * a * a * a + 27 * b * b);
}

ShortWeierstrass short_form(const GeneralWeierstrass& e) {
    Invariants v = compute_invariants(e);
    return {-27 * v.c4, -54 * v.c6};
}

GeneralWeierstrass apply_cov(const GeneralWeierstrass& e, const ChangeOfVariables& c) {
    if (c.u == 0) throw std::domain_error("apply_cov: u must be nonzero");
    const BigInt u2 = c.u * c.u, u3 = u2 * c.u, u4 = u2 * u2, u6 = u3 * u3;
    GeneralWeierstrass out;
    out.a1 = exact_div(e.a1 + 2 * c.s, c.u, "apply_cov: a1 not integral");
    out.a2 = exact_div(e.a2 - c.s * e.a1 + 3 * c.r - c.s * c.s, u2,
                       "apply_cov: a2 not integral");
    out.a3 = exact_div(e.a3 + c.r * e.a1 + 2 * c.t, u3,
                       "apply_cov: a3 not integral");
    out.a4 = exact_div(e.a4 - c.s * e.a3 + 2 * c.r * e.a2 -
                           (c.t + c.r * c.s) * e.a1 + 3 * c.r * c.r -
                           2 * c.s * c.t,
                       u4, "apply_cov: a4 not integral");
    out.a6 = exact_div(e.a6 + c.r * e.a4 + c.r * c.r * e.a2 +
                           c.r * c.r * c.r - c.t * e.a3 - c.t * c.t -
                           c.r * c.t * e.a1,
                       u6, "apply_cov: a6 not integral");
    return out;
}

GeneralWeierstrass unapply_cov(const GeneralWeierstrass& ep, const ChangeOfVariables& c) {
    if (c.u == 0) throw std::domain_error("unapply_cov: u must be nonzero");
    const BigInt u2 = c.u * c.u, u3 = u2 * c.u, u4 = u2 * u2, u6 = u3 * u3;
    GeneralWeierstrass out;
    out.a1 = c.u * ep.a1 - 2 * c.s;
    out.a2 = u2 * ep.a2 + c.s * out.a1 - 3 * c.r + c.s * c.s;
    out.a3 = u3 * ep.a3 - c.r * out.a1 - 2 * c.t;
    out.a4 = u4 * ep.a4 + c.s * out.a3 - 2 * c.r * out.a2 +
             (c.t + c.r * c.s) * out.a1 - 3 * c.r * c.r + 2 * c.s * c.t;
    out.a6 = u6 * ep.a6 - c.r * out.a4 - c.r * c.r * out.a2 -
             c.r * c.r * c.r + c.t * out.a3 + c.t * c.t + c.r * c.t * out.a1;
    return out;
}

bool is_minimal_at(const ShortWeierstrass& e, uint64_t p) {
    if (p <= 3) throw std::domain_error("is_minimal_at: requires p > 3");
    const BigInt p4 = BigInt(p) * p * p * p;
    const BigInt p6 = p4 * p * p;
    return !(e.a % p4 == 0 && e.b % p6 == 0);
}

ShortWeierstrass minimize_at(const ShortWeierstrass& e, uint64_t p) {
    ShortWeierstrass m = e;
    while (!is_minimal_at(m, p)) {
        const BigInt p4 = BigInt(p) * p * p * p;
        m.a /= p4;
        m.b /= p4 * p * p;
    }
    return m;
}

ShortWeierstrass minimize(const ShortWeierstrass& e) {
    ShortWeierstrass m = e;
    BigInt disc = short_discriminant(m.a, m.b);
    if (disc == 0) throw SingularCurveError{};
    if (disc < 0) disc = -disc;
    // p^4 | a and p^6 | b forces p^12 | disc, so candidates satisfy
    // p <= |disc|^(1/12).
    for (uint64_t p = 5;; p += 2) {
        BigInt p12 = BigInt(p);
        p12 = p12 * p12 * p12;          // p^3
        p12 = p12 * p12 * p12 * p12;    // p^12
        if (p12 > disc) break;
        if (arith::is_prime_u64(p)) m = minimize_at(m, p);
    }
    // Single search at 2 and 3 via the largest admissible u in {6, 3, 2}.
    for (uint64_t u : {6, 3, 2}) {
        const BigInt u4 = BigInt(u) * u * u * u;
        const BigInt u6 = u4 * u * u;
        if (m.a % u4 == 0 && m.b % u6 == 0) {
            m.a /= u4;
            m.b /= u6;
            break;
        }
    }
    return m;
}

ReductionType reduction_type(const ShortWeierstrass& e, uint64_t p) {
    if (p <= 3) throw std::domain_error("reduction_type: requires p > 3");
    if (!is_minimal_at(e, p))
        throw std::domain_error("reduction_type: model not minimal at p");
    BigInt disc = short_discriminant(e.a, e.b);
    if (disc % p != 0) return ReductionType::good;
    // c4 = -48a for the short model.
    return (48 * e.a) % p != 0 ? ReductionType::multiplicative
                               : ReductionType::additive;
}

int64_t lambda_p_residues(uint64_t a, uint64_t b, const arith::QrTable& qr) {
    const uint64_t p = qr.p;
    int64_t s = 0;
    for (uint64_t x = 0; x < p; ++x) {
        uint64_t f = ((x * x % p) * x + a * x + b) % p;
        s += qr(f);
    }
    return -s;
}

int64_t lambda_p(const ShortWeierstrass& e, const arith::QrTable& qr) {
    const uint64_t p = qr.p;
    uint64_t a = static_cast<uint64_t>(((e.a % p) + p) % p);
    uint64_t b = static_cast<uint64_t>(((e.b % p) + p) % p);
    return lambda_p_residues(a, b, qr);
}

int64_t lambda_p(const ShortWeierstrass& e, uint64_t p) {
    if (p <= 3) throw std::domain_error("lambda_p: requires p > 3");
    return lambda_p(e, arith::make_qr_table(p));
}

std::vector<std::pair<uint64_t, int>> factorize(BigInt n, const arith::PrimeTable* table) {
    if (n == 0) throw std::domain_error("factorize: zero");
    if (n < 0) n = -n;
    std::vector<std::pair<uint64_t, int>> out;
    size_t table_idx = 0;
    uint64_t d = 2;
    auto next_candidate = [&]() -> uint64_t {
        if (table && table_idx < table->primes.size())
            return table->primes[table_idx++];
        uint64_t c = d;
        d = (d <= 2) ? 3 : d + 2;
        return c;
    };
    if (table) d = table->limit + 1 + (table->limit % 2);  // first odd beyond
    uint64_t cand = next_candidate();
    while (n > 1) {
        if (n <= std::numeric_limits<uint64_t>::max() &&
            arith::is_prime_u64(static_cast<uint64_t>(n))) {
            out.emplace_back(static_cast<uint64_t>(n), 1);
            break;
        }
        if (BigInt(cand) * cand > n) {
            out.emplace_back(static_cast<uint64_t>(n), 1);
            break;
        }
        if (n % cand == 0) {
            int mult = 0;
            while (n % cand == 0) { n /= cand; ++mult; }
            out.emplace_back(cand, mult);
        }
        cand = next_candidate();
    }
    return out;
}

namespace {

// Minimization on the invariant triple (c4, c6, disc): for p > 3 the model is
// non-minimal iff p^4 | c4 and p^6 | c6 (equivalently p^12 | disc); at 2 and 3
// a single u in {6, 3, 2} step approximates the true reduction.
struct InvariantTriple {
    BigInt c4, c6, disc;

    bool divide_once(uint64_t u) {
        BigInt u4 = BigInt(u) * u * u * u;
        BigInt u6 = u4 * u * u;
        BigInt u12 = u6 * u6;
        if (c4 % u4 != 0 || c6 % u6 != 0 || disc % u12 != 0) return false;
        c4 /= u4;
        c6 /= u6;
        disc /= u12;
        return true;
    }
};

// Shared conductor walk: calls visit(p, f_p) for each conductor prime.
template <typename Visit>
void conductor_exponents(const GeneralWeierstrass& e, const arith::PrimeTable* table,
                         Visit visit) {
    Invariants v = compute_invariants(e);
    if (v.disc == 0) throw SingularCurveError{};
    InvariantTriple t{v.c4, v.c6, v.disc};

    // p > 3 rule, candidates limited by p^12 | disc.
    BigInt bound = t.disc < 0 ? -t.disc : t.disc;
    for (uint64_t p = 5;; p += 2) {
        BigInt p12 = BigInt(p);
        p12 = p12 * p12 * p12;
        p12 = p12 * p12 * p12 * p12;
        if (p12 > bound) break;
        if (!arith::is_prime_u64(p)) continue;
        while (t.divide_once(p)) {}
    }
    // Single search at 2 and 3 via the largest admissible u.
    for (uint64_t u : {6, 3, 2})
        if (t.divide_once(u)) break;

    for (auto [p, mult] : factorize(t.disc, table)) {
        int f;
        if (p == 2 || p == 3) {
            f = std::min(mult, 8);
        } else {
            f = t.c4 % p != 0 ? 1 : 2;  // multiplicative vs additive
        }
        visit(p, f);
    }
}

}  // namespace

double log_conductor(const GeneralWeierstrass& e, const arith::PrimeTable* table) {
    double s = 0.0;
    conductor_exponents(e, table, [&](uint64_t p, int f) {
        s += f * std::log(static_cast<double>(p));
    });
    return s;
}

double log_conductor(const ShortWeierstrass& e, const arith::PrimeTable* table) {
    return log_conductor(e.general(), table);
}

BigInt approx_conductor(const GeneralWeierstrass& e, const arith::PrimeTable* table) {
    BigInt n = 1;
    conductor_exponents(e, table, [&](uint64_t p, int f) {
        for (int i = 0; i < f; ++i) n *= p;
    });
    return n;
}

BigInt approx_conductor(const ShortWeierstrass& e, const arith::PrimeTable* table) {
    return approx_conductor(e.general(), table);
}

bool on_curve(const GeneralWeierstrass& e, const AffinePoint& pt) {
    if (pt.infinity) return true;
    const Rational &x = pt.x, &y = pt.y;
    return y * y + e.a1 * x * y + e.a3 * y ==
           x * x * x + e.a2 * x * x + e.a4 * x + e.a6;
}

AffinePoint point_negate(const GeneralWeierstrass& e, const AffinePoint& pt) {
    if (pt.infinity) return pt;
    return {pt.x, -pt.y - e.a1 * pt.x - e.a3, false};
}

AffinePoint point_add(const GeneralWeierstrass& e, const AffinePoint& p,
                      const AffinePoint& q) {
    if (!on_curve(e, p) || !on_curve(e, q))
        throw std::domain_error("point_add: point not on curve");
    if (p.infinity) return q;
    if (q.infinity) return p;

    Rational lambda, nu;
    if (p.x == q.x) {
        if (p.y != q.y) return AffinePoint::at_infinity();
        Rational den = 2 * p.y + e.a1 * p.x + e.a3;
        if (den == 0) return AffinePoint::at_infinity();
        lambda = (3 * p.x * p.x + 2 * e.a2 * p.x + e.a4 - e.a1 * p.y) / den;
        nu = (-p.x * p.x * p.x + e.a4 * p.x + 2 * e.a6 - e.a3 * p.y) / den;
    } else {
        lambda = (q.y - p.y) / (q.x - p.x);
        nu = p.y - lambda * p.x;
    }
    Rational x3 = lambda * lambda + e.a1 * lambda - e.a2 - p.x - q.x;
    Rational y3 = -(lambda + e.a1) * x3 - nu - e.a3;
    return {x3, y3, false};
}

AffinePoint point_mul(const GeneralWeierstrass& e, const AffinePoint& p, uint64_t n) {
    AffinePoint acc = AffinePoint::at_infinity();
    AffinePoint base = p;
    while (n) {
        if (n & 1) acc = point_add(e, acc, base);
        n >>= 1;
        if (n) base = point_add(e, base, base);
    }
    return acc;
}

std::optional<int> torsion_order(const GeneralWeierstrass& e, const AffinePoint& p) {
    if (!on_curve(e, p)) throw std::domain_error("torsion_order: point not on curve");
    AffinePoint q = p;
    for (int n = 1; n <= 12; ++n) {
        if (q.infinity) return n;
        q = point_add(e, q, p);
    }
    return std::nullopt;
}

bool lutz_nagell_divides(const BigInt& a, const BigInt& b) {
    if (b == 0) return a == 0;
    return (4 * a * a * a) % (b * b) == 0;
}

}  // namespace ecdensity::curves
