#include "ecdensity/families.hpp"

#include <cmath>

#include "ecdensity/parallel.hpp"

namespace ecdensity::families {

WeightFunction WeightFunction::bump(int arity) {
    WeightFunction w;
    w.arity = arity;
    w.factor = arith::smooth_bump;
    return w;
}

namespace {

// Box constants per family.  Exponents are the paper's; the constants were
// calibrated once (at X = 1e6, shipped bump weight) so the weighted mean of
// log N stays within a few percent of log X across the desk-scale ladder,
// then frozen.
struct KindInfo {
    FamilyKind kind;
    const char* name;
    std::optional<double> aA, aB;
    double sA, sB;
    double extra;
};

const KindInfo kKinds[] = {
    {FamilyKind::full,         "full",         1.0 / 3, 1.0 / 2, 0.09076, 0.03072, 0.0},
    {FamilyKind::full_minimal, "full_minimal", 1.0 / 3, 1.0 / 2, 0.09076, 0.03072, 0.0},
    {FamilyKind::rank_one,     "rank_one",     1.0 / 3, 1.0 / 4, 0.13334, 0.12482, 1.0},
    {FamilyKind::tors_2x2,     "tors_2x2",     1.0 / 3, 1.0 / 3, 0.11914, 0.15617, 0.0},
    {FamilyKind::tors_3,       "tors_3",       1.0 / 6, 1.0 / 2, 0.4860, 0.04860,  0.0},
    {FamilyKind::tors_2,       "tors_2",       1.0 / 4, 1.0 / 2, 0.3540, 0.05665,  0.0},
    {FamilyKind::tors_4,       "tors_4",       std::nullopt, 1.0 / 2, 1.0, 0.03512, 0.0},
    {FamilyKind::tors_5,       "tors_5",       std::nullopt, 1.0 / 3, 1.0, 0.25062, 0.0},
    {FamilyKind::cm_b,         "cm_b",         std::nullopt, 1.0 / 2, 1.0, 0.03899, 0.0},
    {FamilyKind::cm_a,         "cm_a",         1.0 / 2, std::nullopt, 0.1421, 1.0,  0.0},
    {FamilyKind::twist_cubic,  "twist_cubic",  std::nullopt, 1.0 / 6, 1.0, 0.666,   1.0},
};

const KindInfo& info_for(FamilyKind k) {
    for (const auto& i : kKinds)
        if (i.kind == k) return i;
    throw std::logic_error("unknown family kind");
}

}  // namespace

FamilySpec FamilySpec::make(FamilyKind kind) {
    if (kind == FamilyKind::twist_cubic)
        throw std::invalid_argument("twist_cubic needs a base curve; use make_twist");
    const KindInfo& i = info_for(kind);
    FamilySpec s;
    s.kind = kind;
    s.label = i.name;
    s.alpha_A = i.aA;
    s.alpha_B = i.aB;
    s.scale_A = i.sA;
    s.scale_B = i.sB;
    s.extra_phi0 = i.extra;
    return s;
}

FamilySpec FamilySpec::make_twist(const ShortWeierstrass& base) {
    const KindInfo& i = info_for(FamilyKind::twist_cubic);
    FamilySpec s;
    s.kind = FamilyKind::twist_cubic;
    s.label = i.name;
    s.alpha_B = i.aB;
    s.scale_B = i.sB;
    s.extra_phi0 = i.extra;
    s.twist_base = base;
    if (curves::short_discriminant(base.a, base.b) == 0)
        throw curves::SingularCurveError{};
    return s;
}

FamilySpec FamilySpec::parse(const std::string& name) {
    for (const auto& i : kKinds) {
        if (name == i.name) {
            if (i.kind == FamilyKind::twist_cubic)
                return make_twist({1, 1});  // default base y^2 = x^3 + x + 1
            return make(i.kind);
        }
    }
    throw std::invalid_argument("unknown family: " + name);
}

GeneralWeierstrass FamilySpec::model(int64_t a, int64_t b) const {
    switch (kind) {
        case FamilyKind::full:
        case FamilyKind::full_minimal:
            return {0, 0, 0, a, b};
        case FamilyKind::rank_one:
            return {0, 0, 0, a, BigInt(b) * b};
        case FamilyKind::tors_2x2:  // y^2 = x(x-a)(x+b)
            return {0, BigInt(b) - a, 0, -BigInt(a) * b, 0};
        case FamilyKind::tors_3:    // y^2 + axy - by = x^3
            return {a, 0, -b, 0, 0};
        case FamilyKind::tors_2:    // y^2 = x(x^2 + ax - b)
            return {0, a, 0, -b, 0};
        case FamilyKind::tors_4:    // y^2 + xy - by = x^3 - bx^2
            return {1, -b, -b, 0, 0};
        case FamilyKind::tors_5:    // y^2 + (1-b)xy - by = x^3 - bx^2
            return {BigInt(1) - b, -b, -b, 0, 0};
        case FamilyKind::cm_b:
            return {0, 0, 0, 0, b};
        case FamilyKind::cm_a:
            return {0, 0, 0, a, 0};
        case FamilyKind::twist_cubic: {
            BigInt d = BigInt(b) * b * b + twist_base.a * b + twist_base.b;
            return {0, 0, 0, twist_base.a * d * d, twist_base.b * d * d * d};
        }
    }
    throw std::logic_error("model: bad kind");
}

BigInt FamilySpec::R_value(int64_t a, int64_t b) const {
    auto abs_big = [](BigInt v) { return v < 0 ? -v : v; };
    switch (kind) {
        case FamilyKind::full:
        case FamilyKind::full_minimal:
            return abs_big(16 * (4 * BigInt(a) * a * a + 27 * BigInt(b) * b));
        case FamilyKind::rank_one:
            return abs_big(16 * (4 * BigInt(a) * a * a + 27 * BigInt(b) * b * b * b));
        case FamilyKind::tors_2x2:
            return abs_big(BigInt(a) * b * (BigInt(a) + b));
        case FamilyKind::tors_3:
            return abs_big(BigInt(b) * (BigInt(a) * a * a + 27 * b));
        case FamilyKind::tors_2:
            return abs_big(16 * BigInt(b) * (BigInt(a) * a + 4 * b));
        case FamilyKind::tors_4:
            return abs_big(BigInt(b) * (1 + 16 * BigInt(b)));
        case FamilyKind::tors_5:
            return abs_big(BigInt(b) * (BigInt(b) * b - 11 * b - 1));
        case FamilyKind::cm_b:
            return abs_big(BigInt(b));
        case FamilyKind::cm_a:
            return abs_big(BigInt(a));
        case FamilyKind::twist_cubic:
            return abs_big(BigInt(b) * b * b + twist_base.a * b + twist_base.b);
    }
    throw std::logic_error("R_value: bad kind");
}

std::vector<FamilyCurve> enumerate(const FamilySpec& spec, double X,
                                   const WeightFunction& w) {
    if (X < 2.0) throw std::domain_error("enumerate: X must be >= 2");
    std::vector<FamilyCurve> out;

    auto push = [&](int64_t a, int64_t b, double weight) {
        if (weight <= 0.0) return;
        GeneralWeierstrass m = spec.model(a, b);
        if (curves::discriminant(m) == 0) return;
        FamilyCurve fc;
        fc.pa = a;
        fc.pb = b;
        fc.model = m;
        fc.short_model = curves::short_form(m);
        fc.weight = weight;
        fc.R = spec.R_value(a, b);
        out.push_back(std::move(fc));
    };

    if (spec.two_param()) {
        double A = spec.scale_A * std::pow(X, *spec.alpha_A);
        double B = spec.scale_B * std::pow(X, *spec.alpha_B);
        for (int64_t a = static_cast<int64_t>(A) + 1; a < 2.0 * A; ++a) {
            double wa = w(static_cast<double>(a) / A);
            if (wa <= 0.0) continue;
            for (int64_t b = static_cast<int64_t>(B) + 1; b < 2.0 * B; ++b)
                push(a, b, wa * w(static_cast<double>(b) / B));
        }
    } else {
        bool a_side = spec.alpha_A.has_value();
        double B = a_side ? spec.scale_A * std::pow(X, *spec.alpha_A)
                          : spec.scale_B * std::pow(X, *spec.alpha_B);
        for (int64_t b = static_cast<int64_t>(B) + 1; b < 2.0 * B; ++b) {
            double wb = w(static_cast<double>(b) / B);
            if (a_side)
                push(b, 0, wb);
            else
                push(0, b, wb);
        }
    }
    if (spec.kind == FamilyKind::full_minimal) out = minimal_filter(std::move(out));
    return out;
}

std::vector<FamilyCurve> enumerate(const FamilySpec& spec, double X) {
    return enumerate(spec, X, WeightFunction::bump(spec.two_param() ? 2 : 1));
}

std::vector<FamilyCurve> minimal_filter(std::vector<FamilyCurve> curves) {
    std::erase_if(curves, [](const FamilyCurve& fc) {
        const BigInt& a = fc.short_model.a;
        const BigInt& b = fc.short_model.b;
        for (uint64_t q = 2;; q = (q == 2 ? 3 : q + 2)) {
            BigInt q4 = BigInt(q) * q * q * q;
            if (a != 0 && q4 > (a < 0 ? -a : a)) break;
            if (a == 0 && q4 * q * q > (b < 0 ? -b : b)) break;
            if (!arith::is_prime_u64(q)) continue;
            if (a % q4 == 0 && b % (q4 * q * q) == 0) return true;
        }
        return false;
    });
    return curves;
}

namespace {

struct TileAccum {
    arith::KahanSum wD, wlogN, wsum;
    uint64_t count = 0;
    std::vector<double> per_prime;
};

}  // namespace

density::DensityReport family_average(const FamilySpec& spec, double X,
                                      const density::TestFunctionPair& tf,
                                      int threads, bool per_prime_ledger) {
    auto curves_list = enumerate(spec, X);
    density::PrimeData pd = density::build_prime_data(tf, X);
    arith::PrimeTable factor_table = arith::sieve_primes(1 << 16);

    constexpr size_t kTileSize = 128;  // fixed: reports are thread-count invariant
    size_t n = curves_list.size();
    size_t n_tiles = n ? (n + kTileSize - 1) / kTileSize : 0;
    std::vector<TileAccum> tiles(n_tiles);

    const double log_x = std::log(X);
    const double phihat0 = tf.phi_hat(0.0);
    const double half_phi0 = 0.5 * tf.phi(0.0);

    parallel::tiles(n, kTileSize, threads, [&](size_t t, size_t lo, size_t hi) {
        TileAccum& acc = tiles[t];
        if (per_prime_ledger) acc.per_prime.assign(pd.primes.size(), 0.0);
        for (size_t i = lo; i < hi; ++i) {
            const FamilyCurve& fc = curves_list[i];
            double logN = curves::log_conductor(fc.model, &factor_table);
            arith::KahanSum psum;
            for (size_t j = 0; j < pd.primes.size(); ++j) {
                int64_t lam = curves::lambda_p(fc.short_model, pd.qr[j]);
                double term = static_cast<double>(lam) * pd.coef[j];
                psum.add(term);
                if (per_prime_ledger) acc.per_prime[j] += fc.weight * term;
            }
            double d_stat = phihat0 * logN / log_x + half_phi0 - psum.value();
            acc.wD.add(fc.weight * d_stat);
            acc.wlogN.add(fc.weight * logN / log_x);
            acc.wsum.add(fc.weight);
            acc.count++;
        }
    });

    arith::KahanSum wD, wlogN, wsum;
    uint64_t count = 0;
    std::vector<double> ledger(per_prime_ledger ? pd.primes.size() : 0, 0.0);
    for (const auto& acc : tiles) {
        wD.add(acc.wD.value());
        wlogN.add(acc.wlogN.value());
        wsum.add(acc.wsum.value());
        count += acc.count;
        for (size_t j = 0; j < ledger.size(); ++j) ledger[j] += acc.per_prime[j];
    }

    if (!(wsum.value() > 0.0))
        throw std::domain_error("family_average: total weight is zero");

    density::DensityReport rep;
    rep.family = spec.label;
    rep.X = X;
    rep.nu = tf.nu;
    rep.curve_count = count;
    rep.weight_total = wsum.value();
    rep.density_ratio = wD.value() / wsum.value();
    rep.conductor_stat = wlogN.value() / wsum.value();
    rep.predicted = predicted_target(spec, tf);
    if (per_prime_ledger) {
        for (size_t j = 0; j < ledger.size(); ++j)
            rep.per_prime_ledger.emplace_back(pd.primes[j], ledger[j] / wsum.value());
    }
    return rep;
}

double predicted_target(const FamilySpec& spec, const density::TestFunctionPair& tf) {
    return density::predicted_average(density::SymmetryType::O, tf) +
           spec.extra_phi0 * tf.phi(0.0);
}

int64_t twisted_lambda(const ShortWeierstrass& e, int64_t d, uint64_t p) {
    if (p <= 3) throw std::domain_error("twisted_lambda: requires p > 3");
    if (arith::residue_mod(d, p) == 0)
        throw std::domain_error("twisted_lambda: undefined for p | d");
    return arith::legendre(d, p) * curves::lambda_p(e, p);
}

TwistData twist_conductor_and_sign(const ShortWeierstrass& e, int64_t d) {
    if (d == 0) throw std::domain_error("twist_conductor_and_sign: d = 0");
    if (arith::residue_mod(d, 4) != 1)
        throw std::domain_error("twist formulas require d = 1 (mod 4)");
    for (auto [p, mult] : curves::factorize(BigInt(d)))
        if (mult >= 2)
            throw std::domain_error("twist formulas require squarefree d");
    BigInt N = curves::approx_conductor(e);
    if (boost::multiprecision::gcd(BigInt(d < 0 ? -d : d), N) != 1)
        throw std::domain_error("twist formulas require gcd(d, N) = 1");
    if (N > BigInt(std::numeric_limits<int64_t>::max()))
        throw std::domain_error("twist_conductor_and_sign: conductor too large");
    TwistData td;
    td.d = d;
    td.N_d_log = 2.0 * std::log(std::abs(static_cast<double>(d))) +
                 curves::log_conductor(e);
    td.root_number_factor =
        arith::kronecker(d, -static_cast<int64_t>(N.convert_to<int64_t>()));
    return td;
}

double square_divisor_stat(const FamilySpec& spec, double X,
                           const WeightFunction& w) {
    auto curves_list = enumerate(spec, X, w);
    arith::KahanSum num, den;
    const double log_x = std::log(X);
    for (const auto& fc : curves_list) {
        double mass = 0.0;
        if (fc.R != 0) {
            for (auto [p, mult] : curves::factorize(fc.R)) {
                if (mult >= 2)
                    mass += (mult - 1) * std::log(static_cast<double>(p));
            }
        }
        num.add(std::abs(fc.weight) * mass / log_x);
        den.add(fc.weight);
    }
    if (!(den.value() > 0.0))
        throw std::domain_error("square_divisor_stat: total weight is zero");
    return num.value() / den.value();
}

double square_divisor_stat(const FamilySpec& spec, double X) {
    return square_divisor_stat(spec, X, WeightFunction::bump(spec.two_param() ? 2 : 1));
}

}  // namespace ecdensity::families
