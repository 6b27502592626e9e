// Acceptance suite: one criterion per invocation (argument 1..13), or all in
// sequence when invoked without arguments.  Each criterion prints a single
// PASS/FAIL line; the exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "ecdensity/charsums.hpp"
#include "ecdensity/cli.hpp"
#include "ecdensity/density.hpp"
#include "ecdensity/families.hpp"

using namespace ecdensity;
using arith::Complex;
using curves::ShortWeierstrass;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

// ---------------------------------------------------------------------------
// 1. Complete-sum identity suite, 5 <= p <= 97, all (h, k) mod p, with one
//    literal O(p^3) spot check per decade above 31.

Outcome criterion1() {
    auto t0 = std::chrono::steady_clock::now();
    auto table = arith::sieve_primes(97);
    double worst = 0.0;
    uint64_t pairs = 0;
    for (uint32_t p : table.primes) {
        if (p < 5) continue;
        charsums::TSumOracle oracle(p);
        double scale = std::pow(static_cast<double>(p), 1.5);
        for (int64_t h = 0; h < static_cast<int64_t>(p); ++h)
            for (int64_t k = 0; k < static_cast<int64_t>(p); ++k) {
                double e1 = std::abs(oracle.T(h, k).value -
                                     charsums::T_closed(h, k, p).value) / scale;
                double e2 = std::abs(oracle.Tprime(h, k).value -
                                     charsums::Tprime_closed(h, k, p).value) / scale;
                worst = std::max({worst, e1, e2});
                ++pairs;
                if (worst >= 1e-8) {
                    char buf[128];
                    std::snprintf(buf, sizeof buf, "first failure at p=%u h=%lld k=%lld",
                                  p, (long long)h, (long long)k);
                    return {false, buf};
                }
            }
    }
    // Literal triple-sum spot checks, one prime per decade above 31.
    for (uint64_t p : {41, 53, 61, 71, 83, 97}) {
        charsums::TSumOracle oracle(p);
        double scale = std::pow(static_cast<double>(p), 1.5);
        for (auto [h, k] : std::vector<std::pair<int64_t, int64_t>>{
                 {1, 2}, {static_cast<int64_t>(p) - 1, 3}}) {
            double e1 = std::abs(oracle.T(h, k).value -
                                 charsums::T_reference(h, k, p).value) / scale;
            double e2 = std::abs(oracle.Tprime(h, k).value -
                                 charsums::Tprime_reference(h, k, p).value) / scale;
            worst = std::max({worst, e1, e2});
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%llu (h,k) pairs over 5<=p<=97, max |T-closed|/p^1.5 = %.2e, "
                  "spot checks ok, %.1fs",
                  (unsigned long long)pairs, worst, seconds_since(t0));
    return {worst < 1e-8, buf};
}

// ---------------------------------------------------------------------------
// 2. Quadratic Gauss sums for all (a, b) mod p, odd p <= 100; sign eps_p for
//    all odd p <= 500.

Outcome criterion2() {
    double worst = 0.0;
    auto table = arith::sieve_primes(500);
    for (uint32_t p : table.primes) {
        if (p == 2) continue;
        double sp = std::sqrt(static_cast<double>(p));
        double err = std::abs(arith::quadratic_gauss_sum_direct(1, 0, p) -
                              arith::gauss_sum_sign(p) * sp) / sp;
        worst = std::max(worst, err);
        if (p <= 100) {
            for (int64_t a = 0; a < static_cast<int64_t>(p); ++a)
                for (int64_t b = 0; b < static_cast<int64_t>(p); ++b) {
                    double e = std::abs(arith::quadratic_gauss_sum(a, b, p) -
                                        arith::quadratic_gauss_sum_direct(a, b, p)) / sp;
                    worst = std::max(worst, e);
                }
        }
    }
    char buf[120];
    std::snprintf(buf, sizeof buf,
                  "all (a,b) mod p<=100 and eps_p to 500, max err/sqrt(p) = %.2e",
                  worst);
    return {worst < 1e-8, buf};
}

// ---------------------------------------------------------------------------
// 3. Kloosterman identity for all p <= 50 and h, k nonzero mod p.

Outcome criterion3() {
    auto table = arith::sieve_primes(50);
    uint64_t checked = 0;
    for (uint32_t p : table.primes) {
        if (p < 5) continue;
        for (int64_t h = 1; h < static_cast<int64_t>(p); ++h)
            for (int64_t k = 1; k < static_cast<int64_t>(p); ++k) {
                if (!charsums::kloosterman_identity_check(h, k, p)) {
                    char buf[96];
                    std::snprintf(buf, sizeof buf, "fails at p=%u h=%lld k=%lld", p,
                                  (long long)h, (long long)k);
                    return {false, buf};
                }
                ++checked;
            }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "%llu (h,k,p) triples verified",
                  (unsigned long long)checked);
    return {true, buf};
}

// ---------------------------------------------------------------------------
// 4. Hasse bound on 1e4 random curves at all good p <= 100.

Outcome criterion4() {
    std::mt19937_64 rng(20240601);
    auto table = arith::sieve_primes(100);
    std::vector<arith::QrTable> qr;
    for (uint32_t p : table.primes)
        if (p > 3) qr.push_back(arith::make_qr_table(p));
    uint64_t violations = 0, curve_count = 0;
    while (curve_count < 10000) {
        int64_t a = static_cast<int64_t>(rng() % 2000001) - 1000000;
        int64_t b = static_cast<int64_t>(rng() % 2000001) - 1000000;
        ShortWeierstrass e{a, b};
        curves::BigInt disc = curves::short_discriminant(e.a, e.b);
        if (disc == 0) continue;
        ++curve_count;
        for (const auto& q : qr) {
            if (disc % q.p == 0) continue;  // bad reduction: Hasse not asserted
            int64_t lam = curves::lambda_p(e, q);
            if (std::abs(static_cast<double>(lam)) >= 2.0 * std::sqrt(double(q.p)))
                ++violations;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "10^4 curves, good p <= 100, %llu violations",
                  (unsigned long long)violations);
    return {violations == 0, buf};
}

// ---------------------------------------------------------------------------
// 5. Predicted-average arithmetic.

Outcome criterion5() {
    using density::SymmetryType;
    bool ok = density::predicted_average_fejer(SymmetryType::O,
                                               curves::Rational(7, 9)) ==
              curves::Rational(25, 14);

    auto tf9 = density::fejer_pair(0.9);
    double o9 = density::predicted_average(SymmetryType::O, tf9);
    double se9 = density::predicted_average(SymmetryType::SOeven, tf9);
    double so9 = density::predicted_average(SymmetryType::SOodd, tf9);
    ok = ok && std::abs(o9 - se9) < 1e-12 && std::abs(o9 - so9) < 1e-12;

    auto tf15 = density::fejer_pair(1.5);
    double o15 = density::predicted_average(SymmetryType::O, tf15);
    double se15 = density::predicted_average(SymmetryType::SOeven, tf15);
    double so15 = density::predicted_average(SymmetryType::SOodd, tf15);
    // O - SOeven = eta-mass on 1 < |y| < 1.5 (one side counted twice by
    // symmetry: 2 * (1/2) * tail); SOodd sits the same mass above O.
    double eta_mass = tf15.hat_integral(1.0, 1.5);
    ok = ok && std::abs((o15 - se15) - eta_mass) < 1e-12;
    ok = ok && std::abs((so15 - o15) - eta_mass) < 1e-12 && se15 != so15 &&
         o15 != so15;

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "O@fejer(7/9) = 25/14 exactly; O/SOeven/SOodd coincide at "
                  "nu=0.9 (%.1e) and split at nu=1.5 by %.6f",
                  std::abs(o9 - se9), eta_mass);
    return {ok, buf};
}

// ---------------------------------------------------------------------------
// 6. Density trend for the full family.

Outcome criterion6() {
    auto spec = families::FamilySpec::parse("full");
    auto tf = density::fejer_pair(0.4);
    std::vector<double> gaps;
    std::ostringstream det;
    for (double X : {1e4, 1e5, 1e6}) {
        auto rep = families::family_average(spec, X, tf, 0);
        gaps.push_back(std::abs(rep.density_ratio - rep.predicted));
        det << " X=1e" << static_cast<int>(std::log10(X)) << " gap="
            << gaps.back() << " (" << rep.curve_count << " curves)";
    }
    bool ok = gaps[0] >= gaps[1] && gaps[1] >= gaps[2] && gaps[2] < 0.35;
    return {ok, "gaps non-increasing, final < 0.35*phi(0):" + det.str()};
}

// ---------------------------------------------------------------------------
// 7. Rank-one separation at X = 1e6.

Outcome criterion7() {
    auto tf = density::fejer_pair(0.3);
    auto r1 = families::family_average(families::FamilySpec::parse("rank_one"),
                                       1e6, tf, 0);
    auto fu = families::family_average(families::FamilySpec::parse("full"), 1e6,
                                       tf, 0);
    double diff = r1.density_ratio - fu.density_ratio;
    bool ok = diff >= 0.5 && diff <= 1.5;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "density_ratio(rank_one) - density_ratio(full) = %.4f, "
                  "required [0.5, 1.5]*phi(0)%s",
                  diff,
                  ok ? "" : " (the prime range p <= X^0.3 = 63 carries only "
                            "~1/3 of the phi(0) mass; see docs/notes)");
    return {ok, buf};
}

// ---------------------------------------------------------------------------
// 8. Conductor condition for four families.

Outcome criterion8() {
    bool ok = true;
    std::ostringstream det;
    auto tf = density::fejer_pair(0.4);
    for (const char* name : {"full", "tors_2x2", "tors_4", "tors_5"}) {
        auto spec = families::FamilySpec::parse(name);
        auto rep = families::family_average(spec, 1e6, tf, 0);
        double s4 = families::square_divisor_stat(spec, 1e4);
        double s5 = families::square_divisor_stat(spec, 1e5);
        double s6 = families::square_divisor_stat(spec, 1e6);
        bool stat_ok = rep.conductor_stat >= 0.85 && rep.conductor_stat <= 1.02;
        bool sds_ok = s4 >= s5 && s5 >= s6;
        ok = ok && stat_ok && sds_ok;
        det << " " << name << ": stat=" << rep.conductor_stat << " sds=" << s4
            << "/" << s5 << "/" << s6 << (stat_ok && sds_ok ? "" : " <-FAIL");
    }
    return {ok, "conductor_stat in [0.85,1.02] at 1e6, sds non-increasing:" +
                    det.str()};
}

// ---------------------------------------------------------------------------
// 9. Torsion structure via the exact group law.

Outcome criterion9() {
    std::mt19937_64 rng(987654);
    auto rnd = [&](int64_t lo, int64_t hi) {
        return static_cast<int64_t>(lo + rng() % (hi - lo + 1));
    };
    curves::AffinePoint origin{0, 0, false};
    uint64_t checked = 0;

    for (int trial = 0; trial < 1000; ++trial) {
        int64_t a = rnd(1, 100000), b = rnd(1, 100000);

        auto m22 = families::FamilySpec::parse("tors_2x2").model(a, b);
        if (curves::discriminant(m22) != 0) {
            if (curves::torsion_order(m22, origin) != 2) return {false, "tors_2x2 (0,0)"};
            curves::AffinePoint second{a, 0, false};
            if (curves::torsion_order(m22, second) != 2) return {false, "tors_2x2 (a,0)"};
            auto sum = curves::point_add(m22, origin, second);
            if (curves::torsion_order(m22, sum) != 2) return {false, "tors_2x2 sum"};
            ++checked;
        }
        auto m3 = families::FamilySpec::parse("tors_3").model(a, b);
        if (curves::discriminant(m3) != 0) {
            if (curves::torsion_order(m3, origin) != 3) return {false, "tors_3"};
            ++checked;
        }
        auto m4 = families::FamilySpec::parse("tors_4").model(0, b);
        if (curves::discriminant(m4) != 0) {
            if (curves::torsion_order(m4, origin) != 4) return {false, "tors_4"};
            ++checked;
        }
        auto m5 = families::FamilySpec::parse("tors_5").model(0, b);
        if (curves::discriminant(m5) != 0) {
            if (curves::torsion_order(m5, origin) != 5) return {false, "tors_5"};
            ++checked;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "%llu generator orders {2&2,3,4,5} verified on 10^3 params/family",
                  (unsigned long long)checked);
    return {true, buf};
}

// ---------------------------------------------------------------------------
// 10. C(Y) growth and the parametrization cross-check.

Outcome criterion10() {
    bool ok = true;
    std::ostringstream det;
    for (int64_t Y : {100, 1000, 10000}) {
        auto c = charsums::count_C(Y);
        uint64_t param = charsums::count_C_parametrization(Y);
        double bound = 40.0 * static_cast<double>(Y) *
                       std::pow(1.0 + std::log(static_cast<double>(Y)), 2);
        bool here = static_cast<double>(c.total) <= bound &&
                    param <= c.nonzero_part;
        ok = ok && here;
        det << " Y=" << Y << ": total=" << c.total << " nonzero="
            << c.nonzero_part << " param=" << param
            << " bound=" << static_cast<uint64_t>(bound)
            << (here ? "" : " <-FAIL");
    }
    return {ok, "total <= 40Y(1+logY)^2, parametrization lower-bounds:" +
                    det.str()};
}

// ---------------------------------------------------------------------------
// 11. Oscillatory-sum bound with the frozen constant.

Outcome criterion11() {
    int small_cases = 0, large_cases = 0, points = 0;
    double worst = 0.0;
    bool ok = true;
    // 20-point grid: (M, N) pairs x Y values, both Lemma cases exercised.
    const std::pair<uint64_t, uint64_t> mn[] = {
        {16, 16}, {32, 64}, {64, 32}, {128, 256}, {256, 256}};
    const double ys[] = {0.0, 317.0, -3000.0, 100000.0};
    for (auto [M, N] : mn)
        for (double Y : ys) {
            auto rule = (points % 2) ? charsums::CoeffRule::rademacher
                                     : charsums::CoeffRule::ones;
            auto r = charsums::appendix_exp_sum(M, N, Y, rule, 1000 + points);
            (r.small_m_case ? small_cases : large_cases)++;
            worst = std::max(worst, r.S / r.bound);
            ok = ok && r.S <= r.bound;
            ++points;
        }
    ok = ok && small_cases > 0 && large_cases > 0;
    char buf[140];
    std::snprintf(buf, sizeof buf,
                  "%d grid points, C=10 frozen, worst S/bound = %.3f, cases "
                  "small/large = %d/%d",
                  points, worst, small_cases, large_cases);
    return {ok, buf};
}

// ---------------------------------------------------------------------------
// 12. Integer-analogue trend.

Outcome criterion12() {
    const double delta = 1.0 / 60;
    auto is_sq = [](uint64_t v) {
        uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(v)));
        for (uint64_t c = r > 1 ? r - 1 : 0; c <= r + 1; ++c)
            if (c * c == v) return true;
        return false;
    };
    // Admissible k (odd, non-square, k = K up to a bounded factor): the five
    // smallest at or beyond K/2, where the m-range spans several periods of
    // the character and the decay is visible at these P.
    auto pick_ks = [&](double K) {
        std::vector<uint64_t> ks;
        uint64_t k = static_cast<uint64_t>(std::ceil(K / 2));
        if (k < 3) k = 3;
        if (k % 2 == 0) ++k;
        while (ks.size() < 5) {
            while (is_sq(k)) k += 2;
            ks.push_back(k);
            k += 2;
        }
        return ks;
    };
    std::vector<double> medians;
    std::ostringstream det;
    for (uint64_t P : {200, 400, 800}) {
        uint64_t H = static_cast<uint64_t>(std::pow(double(P), 2.0 / 3.0 + delta));
        double K = std::pow(static_cast<double>(H), 1.5) / std::sqrt(double(P));
        std::vector<double> ratios;
        for (uint64_t k : pick_ks(K))
            ratios.push_back(charsums::integer_analogue_sum(P, delta, k).ratio);
        std::sort(ratios.begin(), ratios.end());
        medians.push_back(ratios[2]);
        det << " P=" << P << ": median=" << ratios[2];
    }
    bool ok = medians[0] >= medians[1] && medians[1] >= medians[2];
    return {ok, "medians over 5 admissible k non-increasing in P:" + det.str()};
}

// ---------------------------------------------------------------------------
// 13. Determinism: two runs of the criterion-6 command are byte-identical.

Outcome criterion13() {
    std::string f1 = "/tmp/ecdensity_det_1.csv";
    std::string f2 = "/tmp/ecdensity_det_2.csv";
    std::vector<std::string> args = {"density", "--family", "full",
                                     "--X", "1e4,1e5,1e6", "--nu", "0.4"};
    auto run_to = [&](const std::string& path, int threads) {
        auto a = args;
        a.push_back("--out");
        a.push_back(path);
        a.push_back("--threads");
        a.push_back(std::to_string(threads));
        return cli::run(a);
    };
    if (run_to(f1, 2) != 0 || run_to(f2, 7) != 0)
        return {false, "density command failed"};
    std::ifstream s1(f1, std::ios::binary), s2(f2, std::ios::binary);
    std::stringstream b1, b2;
    b1 << s1.rdbuf();
    b2 << s2.rdbuf();
    bool same = b1.str() == b2.str() && !b1.str().empty();
    char buf[96];
    std::snprintf(buf, sizeof buf, "two runs (2 vs 7 threads), %zu bytes, %s",
                  b1.str().size(), same ? "byte-identical" : "DIFFER");
    return {same, buf};
}

using CriterionFn = Outcome (*)();
const CriterionFn kCriteria[] = {
    criterion1, criterion2, criterion3, criterion4, criterion5,
    criterion6, criterion7, criterion8, criterion9, criterion10,
    criterion11, criterion12, criterion13,
};

const char* kTitles[] = {
    "complete-sum identities (Lemma 2a / Lemma 6)",
    "quadratic Gauss sums and eps_p",
    "Kloosterman identity",
    "Hasse bound",
    "predicted-average arithmetic",
    "density trend, full family",
    "rank-one separation",
    "conductor condition",
    "torsion structure",
    "C(Y) growth",
    "oscillatory-sum bound",
    "integer-analogue trend",
    "determinism",
};

int run_one(int n) {
    Outcome o = kCriteria[n - 1]();
    std::printf("criterion %2d [%s]: %s — %s\n", n, kTitles[n - 1],
                o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    return o.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) {
        int n = std::atoi(argv[1]);
        if (n < 1 || n > 13) {
            std::fprintf(stderr, "usage: acceptance [1..13]\n");
            return 2;
        }
        return run_one(n);
    }
    int failures = 0;
    for (int n = 1; n <= 13; ++n) failures += run_one(n);
    std::printf("%d/13 criteria passed\n", 13 - failures);
    return failures;
}
