#include "ecdensity/density.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "json.hpp"

namespace ecdensity::density {

TestFunctionPair fejer_pair(double nu) {
    if (!(nu > 0.0)) throw std::domain_error("fejer_pair: nu must be positive");
    TestFunctionPair tf;
    tf.nu = nu;
    char buf[48];
    std::snprintf(buf, sizeof buf, "fejer(%.6g)", nu);
    tf.label = buf;
    tf.phi = [nu](double t) {
        double z = std::numbers::pi * nu * t;
        if (z == 0.0) return 1.0;
        double s = std::sin(z) / z;
        return s * s;
    };
    tf.phi_hat = [nu](double y) {
        double a = std::abs(y);
        if (a >= nu) return 0.0;
        return (1.0 - a / nu) / nu;
    };
    // Tent integral: int_0^c (1/nu)(1 - y/nu) dy = c/nu - c^2/(2 nu^2).
    tf.hat_integral = [nu](double lo, double hi) {
        auto anti = [nu](double y) {  // antiderivative on [0, nu], odd-extended
            double s = y < 0 ? -1.0 : 1.0;
            double a = std::min(std::abs(y), nu);
            return s * (a / nu - a * a / (2.0 * nu * nu));
        };
        return anti(hi) - anti(lo);
    };
    return tf;
}

const char* symmetry_name(SymmetryType g) {
    switch (g) {
        case SymmetryType::U: return "U";
        case SymmetryType::Sp: return "Sp";
        case SymmetryType::O: return "O";
        case SymmetryType::SOeven: return "SOeven";
        case SymmetryType::SOodd: return "SOodd";
    }
    return "?";
}

namespace {

double eta(double y) {
    double a = std::abs(y);
    if (a < 1.0) return 1.0;
    if (a == 1.0) return 0.5;
    return 0.0;
}

}  // namespace

FtDensity symmetry_density_ft(SymmetryType g, double y) {
    switch (g) {
        case SymmetryType::U: return {0.0, 1.0};
        case SymmetryType::Sp: return {-0.5 * eta(y), 1.0};
        case SymmetryType::O: return {0.5, 1.0};
        case SymmetryType::SOeven: return {0.5 * eta(y), 1.0};
        case SymmetryType::SOodd: return {1.0 - 0.5 * eta(y), 1.0};
    }
    throw std::logic_error("symmetry_density_ft: bad tag");
}

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double tol) {
    // Adaptive Simpson with explicit recursion.
    struct Rec {
        const std::function<double(double)>& f;
        double run(double a, double b, double fa, double fm, double fb,
                   double whole, double eps, int depth) {
            double m = 0.5 * (a + b);
            double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            double flm = f(lm), frm = f(rm);
            double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps)
                return left + right + (left + right - whole) / 15.0;
            return run(a, m, fa, flm, fm, left, eps / 2.0, depth - 1) +
                   run(m, b, fm, frm, fb, right, eps / 2.0, depth - 1);
        }
    } rec{f};
    if (lo >= hi) return 0.0;
    double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
    double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    return rec.run(lo, hi, fa, fm, fb, whole, tol, 48);
}

double predicted_average(SymmetryType g, const TestFunctionPair& tf) {
    double phihat0 = tf.phi_hat(0.0);
    FtDensity at0 = symmetry_density_ft(g, 0.0);
    double total = at0.delta_mass * phihat0;

    // The regular part is piecewise constant with the only breaks at |y| = 1;
    // integrate phi_hat segment by segment.
    auto seg_integral = [&](double lo, double hi) {
        if (lo >= hi) return 0.0;
        if (tf.hat_integral) return tf.hat_integral(lo, hi);
        return integrate(tf.phi_hat, lo, hi);
    };
    const double nu = tf.nu;
    double inner_hi = std::min(1.0, nu);
    double inner = seg_integral(-inner_hi, inner_hi);       // where eta = 1
    double outer = seg_integral(-nu, -1.0) + seg_integral(1.0, nu);  // eta = 0
    double reg_inner = symmetry_density_ft(g, 0.0).regular;
    double reg_outer = symmetry_density_ft(g, 2.0).regular;
    total += reg_inner * inner + reg_outer * outer;
    return total;
}

Rational predicted_average_fejer(SymmetryType g, const Rational& nu) {
    if (!(nu > 0)) throw std::domain_error("predicted_average_fejer: nu > 0");
    // phi_hat(0) = 1/nu; int_{-c}^{c} phi_hat = 2(c/nu - c^2/(2 nu^2)) for
    // c <= nu, and the full mass is 1.
    Rational phihat0 = 1 / nu;
    Rational c = nu < 1 ? nu : Rational(1);
    Rational inner = 2 * (c / nu - c * c / (2 * nu * nu));
    Rational outer = 1 - inner;

    switch (g) {
        case SymmetryType::U: return phihat0;
        case SymmetryType::Sp: return phihat0 - inner / 2;
        case SymmetryType::O: return phihat0 + Rational(1, 2);
        case SymmetryType::SOeven: return phihat0 + inner / 2;
        case SymmetryType::SOodd: return phihat0 + 1 - inner / 2;
    }
    throw std::logic_error("predicted_average_fejer: bad tag");
}

Rational rank_bound(const Rational& nu) {
    if (!(nu > 0)) throw std::domain_error("rank_bound: nu must be positive");
    return Rational(1, 2) + 1 / nu;
}

PrimeData build_prime_data(const TestFunctionPair& tf, double X) {
    if (X < 2.0) throw std::domain_error("build_prime_data: X must be >= 2");
    PrimeData pd;
    pd.X = X;
    pd.log_x = std::log(X);
    double cutoff = std::pow(X, tf.nu);
    if (cutoff < 5.0) return pd;  // empty prime range
    auto table = arith::sieve_primes(static_cast<uint64_t>(cutoff));
    for (uint32_t p : table.primes) {
        if (p <= 3) continue;
        double u = std::log(static_cast<double>(p)) / pd.log_x;
        double w = tf.phi_hat(u);
        if (w == 0.0) continue;
        pd.primes.push_back(p);
        pd.coef.push_back(w * 2.0 * std::log(static_cast<double>(p)) /
                          (static_cast<double>(p) * pd.log_x));
        pd.qr.push_back(arith::make_qr_table(p));
    }
    return pd;
}

double P_sum(const curves::ShortWeierstrass& e, const PrimeData& pd) {
    arith::KahanSum s;
    for (size_t i = 0; i < pd.primes.size(); ++i) {
        int64_t lam = curves::lambda_p(e, pd.qr[i]);
        s.add(static_cast<double>(lam) * pd.coef[i]);
    }
    return s.value();
}

double P_sum(const curves::ShortWeierstrass& e, const TestFunctionPair& tf, double X) {
    return P_sum(e, build_prime_data(tf, X));
}

double D_statistic(const curves::ShortWeierstrass& e, const TestFunctionPair& tf,
                   double X, const arith::PrimeTable* factor_table) {
    if (X < 2.0) throw std::domain_error("D_statistic: X must be >= 2");
    double logN = curves::log_conductor(e, factor_table);
    return tf.phi_hat(0.0) * logN / std::log(X) + 0.5 * tf.phi(0.0) -
           P_sum(e, tf, X);
}

std::string DensityReport::csv_header() {
    return "family,X,nu,curves,weight_total,density_ratio,predicted,gap,conductor_stat";
}

std::string DensityReport::csv_row() const {
    char buf[320];
    std::snprintf(buf, sizeof buf,
                  "%s,%.12g,%.12g,%llu,%.12g,%.12g,%.12g,%.12g,%.12g",
                  family.c_str(), X, nu,
                  static_cast<unsigned long long>(curve_count), weight_total,
                  density_ratio, predicted, std::abs(density_ratio - predicted),
                  conductor_stat);
    return buf;
}

std::string DensityReport::json(bool with_ledger) const {
    nlohmann::json j;
    j["family"] = family;
    j["X"] = X;
    j["nu"] = nu;
    j["count"] = curve_count;
    j["weight_total"] = weight_total;
    j["density_ratio"] = density_ratio;
    j["predicted"] = predicted;
    j["gap"] = std::abs(density_ratio - predicted);
    j["conductor_stat"] = conductor_stat;
    if (with_ledger) {
        auto arr = nlohmann::json::array();
        for (auto& [p, c] : per_prime_ledger) arr.push_back({p, c});
        j["per_prime"] = arr;
    }
    return j.dump();
}

}  // namespace ecdensity::density
