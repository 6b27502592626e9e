#include "ecdensity/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "ecdensity/parallel.hpp"

#include "ecdensity/charsums.hpp"
#include "ecdensity/density.hpp"
#include "ecdensity/families.hpp"

namespace ecdensity::cli {

namespace {

int default_threads() {
    if (const char* env = std::getenv("ECDENSITY_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

std::vector<double> parse_ladder(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw CLI::ValidationError("--X", "empty X ladder");
    return out;
}

curves::Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return curves::Rational(std::stoll(s));
    return curves::Rational(std::stoll(s.substr(0, slash)),
                            std::stoll(s.substr(slash + 1)));
}

struct Output {
    std::string path;  // empty = stdout
    void write(const std::string& text) const {
        if (path.empty()) {
            std::fputs(text.c_str(), stdout);
        } else {
            std::ofstream f(path, std::ios::binary);
            if (!f) throw std::runtime_error("cannot open output file: " + path);
            f << text;
        }
    }
};

}  // namespace

int verify_charsums(uint64_t p_max, bool inject_fault, std::string* summary,
                    uint64_t seed, int threads) {
    using namespace charsums;

    auto table = arith::sieve_primes(p_max);
    std::vector<uint32_t> primes(table.primes.begin(), table.primes.end());

    // Each prime's suites are independent; run them as parallel tiles and
    // merge the results in ascending prime order.
    struct PrimeResult {
        bool ok = true;
        std::string first_fail;
        uint64_t pairs = 0;
        double t_err = 0.0, g_err = 0.0;
    };
    std::vector<PrimeResult> results(primes.size());

    parallel::tiles(primes.size(), 1, threads, [&](size_t idx, size_t, size_t) {
        uint32_t p = primes[idx];
        PrimeResult& r = results[idx];
        std::ostringstream fail;
        double p15 = std::pow(static_cast<double>(p), 1.5);
        double sp = std::sqrt(static_cast<double>(p));

        if (p >= 3) {
            // Gauss sign and the quadratic closed form, all (a, b) mod p.
            double err = std::abs(arith::quadratic_gauss_sum_direct(1, 0, p) -
                                  arith::gauss_sum_sign(p) * sp);
            r.g_err = err / sp;
            for (int64_t a = 0; a < static_cast<int64_t>(p) && r.ok; ++a)
                for (int64_t b = 0; b < static_cast<int64_t>(p); ++b) {
                    double e = std::abs(arith::quadratic_gauss_sum(a, b, p) -
                                        arith::quadratic_gauss_sum_direct(a, b, p));
                    r.g_err = std::max(r.g_err, e / sp);
                    if (e >= 1e-8 * sp) {
                        fail << "FAIL quadratic-gauss p=" << p << " a=" << a
                             << " b=" << b << "\n";
                        r.ok = false;
                        break;
                    }
                }
        }
        if (p >= 5 && r.ok) {
            // Lemma-2a / Lemma-6 complete sums, all (h, k) mod p.
            TSumOracle oracle(p);
            for (int64_t h = 0; h < static_cast<int64_t>(p) && r.ok; ++h)
                for (int64_t k = 0; k < static_cast<int64_t>(p); ++k) {
                    Complex closed = T_closed(h, k, p).value;
                    if (inject_fault && p == 5 && h == 1 && k == 1)
                        closed = -closed;
                    double e1 = std::abs(oracle.T(h, k).value - closed) / p15;
                    double e2 = std::abs(oracle.Tprime(h, k).value -
                                         Tprime_closed(h, k, p).value) / p15;
                    r.t_err = std::max({r.t_err, e1, e2});
                    ++r.pairs;
                    if (r.t_err >= 1e-8) {
                        fail << "FAIL " << (e1 >= 1e-8 ? "lemma2a" : "lemma6")
                             << " p=" << p << " h=" << h << " k=" << k << "\n";
                        r.ok = false;
                        break;
                    }
                }
        }
        if (p >= 5 && r.ok) {
            // Kloosterman symmetry, Weil bound, three-torsion identity.
            auto inv = arith::inverse_table(p);
            auto w = arith::roots_of_unity(p);
            auto S = [&](uint64_t m, uint64_t n) {
                double re = 0.0;
                for (uint64_t g = 1; g < p; ++g)
                    re += w[(m * g + n * inv[g]) % p].real();
                return re;
            };
            double weil = 2.0 * sp + 1e-8 * sp;
            for (uint64_t m = 1; m < p && r.ok; ++m)
                for (uint64_t n = m; n < p; ++n) {
                    double s1 = S(m, n);
                    if (std::abs(s1 - S(n, m)) >= 1e-8 * sp ||
                        std::abs(s1) > weil) {
                        fail << "FAIL kloosterman p=" << p << " m=" << m
                             << " n=" << n << "\n";
                        r.ok = false;
                        break;
                    }
                }
            for (int64_t h = 1; h < static_cast<int64_t>(p) && r.ok; ++h)
                for (int64_t k = 1; k < static_cast<int64_t>(p); ++k)
                    if (!kloosterman_identity_check(h, k, p)) {
                        fail << "FAIL kloosterman-identity p=" << p << " h=" << h
                             << " k=" << k << "\n";
                        r.ok = false;
                        break;
                    }
        }
        r.first_fail = fail.str();
    });

    std::ostringstream out;
    bool ok = true;
    uint64_t pairs = 0;
    double t_err = 0.0, g_err = 0.0;
    for (const auto& r : results) {
        if (!r.ok && ok) out << r.first_fail;
        ok = ok && r.ok;
        pairs += r.pairs;
        t_err = std::max(t_err, r.t_err);
        g_err = std::max(g_err, r.g_err);
    }
    out << "complete-sum pairs checked: " << pairs
        << "  max scaled err T/T'=" << t_err << "\n";
    out << "gauss suites done  max scaled err=" << g_err << "\n";
    out << "kloosterman suites done\n";

    // Elementary reciprocity on seeded random coprime pairs.
    if (ok) {
        std::mt19937_64 rng(seed);
        int done = 0;
        while (done < 1000) {
            uint64_t u = rng() % 10000 + 1, v = rng() % 10000 + 1;
            if (std::gcd(u, v) != 1) continue;
            if (reciprocity_residual(u, v) != 0) {
                out << "FAIL reciprocity u=" << u << " v=" << v << "\n";
                ok = false;
                break;
            }
            ++done;
        }
        out << "reciprocity pairs checked: " << done << "\n";
    }

    out << (ok ? "verify-charsums: all identities hold\n"
               : "verify-charsums: FAILURE\n");
    if (summary) *summary = out.str();
    return ok ? 0 : 1;
}

namespace {

int cmd_density(const std::string& family, const std::string& ladder, double nu,
                int threads, const Output& output, const std::string& format,
                bool ledger) {
    if (!(nu > 0.0)) throw CLI::ValidationError("--nu", "must be positive");
    auto spec = families::FamilySpec::parse(family);
    auto tf = density::fejer_pair(nu);
    std::vector<double> xs = parse_ladder(ladder);
    for (double x : xs)
        if (!(x >= 2.0)) throw CLI::ValidationError("--X", "values must be >= 2");
    std::string text;
    if (format == "csv") text += density::DensityReport::csv_header() + "\n";
    std::string jacc = "[";
    for (size_t i = 0; i < xs.size(); ++i) {
        auto rep = families::family_average(spec, xs[i], tf, threads, ledger);
        if (format == "csv") {
            text += rep.csv_row() + "\n";
        } else {
            if (i) jacc += ",";
            jacc += rep.json(ledger);
        }
    }
    if (format == "json") text = jacc + "]\n";
    output.write(text);
    return 0;
}

int cmd_scan(const std::string& kind, int64_t Y, int64_t k, uint64_t P,
             double delta, uint64_t M, uint64_t N, double oscY,
             const std::string& coeff, uint64_t seed, const std::string& family,
             const std::string& ladder, int64_t H, int64_t K,
             const Output& output) {
    using namespace charsums;
    std::string text;
    if (kind == "countC") {
        auto c = count_C(Y);
        uint64_t param = count_C_parametrization(Y);
        double norm = static_cast<double>(Y) *
                      std::pow(1.0 + std::log(std::max<double>(Y, 1)), 2);
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "Y,total,nonzero,param_lower,growth_ratio\n"
                      "%lld,%llu,%llu,%llu,%.12g\n",
                      static_cast<long long>(Y),
                      static_cast<unsigned long long>(c.total),
                      static_cast<unsigned long long>(c.nonzero_part),
                      static_cast<unsigned long long>(param),
                      static_cast<double>(c.total) / std::max(norm, 1.0));
        text = buf;
    } else if (kind == "conjecture71") {
        auto rep = conjecture_prime_sum(k, P, delta);
        text = ScanReport::csv_header() + "\n" + rep.csv_row() + "\n";
    } else if (kind == "integer_analogue") {
        text = ScanReport::csv_header() + "\n";
        uint64_t kk = static_cast<uint64_t>(k);
        if (k <= 0) {
            // nearest odd non-square to K = H^{3/2} P^{-1/2}
            double H0 = std::pow(static_cast<double>(P), 2.0 / 3.0 + delta);
            double K0 = std::pow(std::floor(H0), 1.5) / std::sqrt(double(P));
            kk = static_cast<uint64_t>(K0) | 1;
            auto is_sq = [](uint64_t v) {
                uint64_t r = static_cast<uint64_t>(std::sqrt(double(v)));
                for (uint64_t c = r > 1 ? r - 1 : 0; c <= r + 1; ++c)
                    if (c * c == v) return true;
                return false;
            };
            while (is_sq(kk)) kk += 2;
        }
        text += integer_analogue_sum(P, delta, kk).csv_row() + "\n";
    } else if (kind == "cubic") {
        auto rep = cubic_scan(k, P);
        text = ScanReport::csv_header() + "\n" + rep.csv_row() + "\n";
    } else if (kind == "appendix_b") {
        auto rule = coeff == "pm1" ? CoeffRule::rademacher : CoeffRule::ones;
        auto r = appendix_exp_sum(M, N, oscY, rule, seed);
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "M,N,Y,coeff,S,bound,case,ok\n%llu,%llu,%.12g,%s,%.12g,%.12g,%s,%d\n",
                      static_cast<unsigned long long>(M),
                      static_cast<unsigned long long>(N), oscY, coeff.c_str(),
                      r.S, r.bound, r.small_m_case ? "small_m" : "large_m",
                      r.S <= r.bound ? 1 : 0);
        text = buf;
    } else if (kind == "three_var") {
        auto rep = sum_S_three_var(H, K, P);
        text = ScanReport::csv_header() + "\n" + rep.csv_row() + "\n";
    } else if (kind == "square_divisors") {
        auto spec = families::FamilySpec::parse(family);
        text = "family,X,square_divisor_stat\n";
        for (double X : parse_ladder(ladder)) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "%s,%.12g,%.12g\n",
                          spec.label.c_str(), X,
                          families::square_divisor_stat(spec, X));
            text += buf;
        }
    } else {
        throw CLI::ValidationError("--kind", "unknown scan kind: " + kind);
    }
    output.write(text);
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"1-level density statistics of elliptic curve L-function "
                 "families and character-sum identity verification"};
    app.set_config("--config", "", "plain key = value config file");
    app.require_subcommand(1);

    int threads = default_threads();
    app.add_option("--threads", threads, "worker threads")
        ->check(CLI::PositiveNumber);

    // verify-charsums
    auto* vc = app.add_subcommand("verify-charsums",
                                  "exhaustive complete-sum identity suites");
    vc->fallthrough();
    uint64_t p_max = 97;
    bool inject = false;
    vc->add_option("--pmax", p_max, "largest prime checked")->required();
    vc->add_flag("--inject-fault", inject,
                 "corrupt one closed form (test mode)");
    uint64_t vc_seed = 12345;
    vc->add_option("--seed", vc_seed, "seed for the randomized suites");

    // density
    auto* dn = app.add_subcommand("density", "family density report");
    dn->fallthrough();
    std::string family = "full", ladder = "1e6", format = "csv", out_path;
    double nu = 0.5;
    bool ledger = false;
    dn->add_option("--family", family, "family name")->required();
    dn->add_option("--X", ladder, "comma-separated X ladder")->required();
    dn->add_option("--nu", nu, "Fejer test-pair support radius")->required();
    dn->add_option("--out", out_path, "output file (default stdout)");
    dn->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    dn->add_flag("--ledger", ledger, "include per-prime ledger (json)");

    // scan
    auto* sc = app.add_subcommand("scan", "character-sum scans and counts");
    sc->fallthrough();
    std::string kind, coeff = "ones";
    int64_t Y = 1000, k = 2, H = 10, K = 10;
    uint64_t P = 100, M = 32, N = 32, seed = 1;
    double delta = 1.0 / 48, oscY = 1000.0;
    sc->add_option("--kind", kind,
                   "countC|conjecture71|integer_analogue|cubic|appendix_b|"
                   "three_var|square_divisors")
        ->required();
    sc->add_option("--Y", Y, "countC range");
    sc->add_option("--k", k, "character parameter (<=0: auto for integer_analogue)");
    sc->add_option("--P", P, "prime range");
    sc->add_option("--delta", delta, "support excess delta");
    sc->add_option("--M", M, "appendix_b outer length");
    sc->add_option("--N", N, "appendix_b inner length");
    sc->add_option("--oscY", oscY, "appendix_b oscillation parameter Y");
    sc->add_option("--coeff", coeff, "ones|pm1")
        ->check(CLI::IsMember({"ones", "pm1"}));
    sc->add_option("--seed", seed, "seed for pm1 coefficients");
    sc->add_option("--H", H, "three_var h range");
    sc->add_option("--K", K, "three_var k range");
    sc->add_option("--family", family, "family for square_divisors");
    sc->add_option("--X", ladder, "X ladder for square_divisors");
    std::string scan_out;
    sc->add_option("--out", scan_out, "output file (default stdout)");

    // rank-bound
    auto* rb = app.add_subcommand("rank-bound",
                                  "average-rank bound 1/2 + 1/nu");
    rb->fallthrough();
    std::string nu_str;
    rb->add_option("--nu", nu_str, "support radius as a rational, e.g. 7/9")
        ->required();

    // conductor-check = scan --kind square_divisors
    auto* cc = app.add_subcommand("conductor-check",
                                  "square-divisor statistic along an X ladder");
    cc->fallthrough();
    cc->add_option("--family", family, "family name")->required();
    cc->add_option("--X", ladder, "comma-separated X ladder")->required();
    std::string cc_out;
    cc->add_option("--out", cc_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (vc->parsed()) {
            if (p_max < 5) {
                std::fprintf(stderr, "verify-charsums: --pmax must be >= 5\n");
                return 2;
            }
            std::string summary;
            int rc = verify_charsums(p_max, inject, &summary, vc_seed, threads);
            std::fputs(summary.c_str(), stdout);
            return rc;
        }
        if (dn->parsed())
            return cmd_density(family, ladder, nu, threads, Output{out_path},
                               format, ledger);
        if (sc->parsed())
            return cmd_scan(kind, Y, k, P, delta, M, N, oscY, coeff, seed,
                            family, ladder, H, K, Output{scan_out});
        if (rb->parsed()) {
            curves::Rational nu_r = parse_rational(nu_str);
            if (!(nu_r > 0)) {
                std::fprintf(stderr, "rank-bound: nu must be positive\n");
                return 2;
            }
            curves::Rational g = density::rank_bound(nu_r);
            std::printf("%s ~ %.4f\n",
                        g.str().c_str(),
                        g.convert_to<double>());
            return 0;
        }
        if (cc->parsed())
            return cmd_scan("square_divisors", 0, 0, 0, 0.0, 0, 0, 0.0, "ones",
                            1, family, ladder, 0, 0, Output{cc_out});
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("ecdensity");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace ecdensity::cli
