#include "bosecycle/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace bosecycle {

namespace {

// B_2, B_4, ..., B_30
constexpr std::array<double, 15> kBernoulliEven = {
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
};

constexpr long long kEulerMaclaurinStart = 12;
constexpr long long kDirectSeriesCap = 100'000'000;

// Sum_{n >= m} n^{-s}, valid for every real s != 1 once m exceeds |s|.
double euler_maclaurin_tail(double s, long long m, double eps) {
    const long long start = std::max<long long>(
        {m, kEulerMaclaurinStart, static_cast<long long>(std::abs(s)) + kEulerMaclaurinStart});
    double head = 0.0;
    for (long long n = m; n < start; ++n) {
        head += std::pow(static_cast<double>(n), -s);
    }
    const double M = static_cast<double>(start);
    double tail = std::pow(M, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(M, -s);

    // rising factorial s(s+1)...(s+2k-2) / (2k)! times M^{-s-2k+1}
    double factor = s * std::pow(M, -s - 1.0) / 2.0;
    for (std::size_t k = 0; k < kBernoulliEven.size(); ++k) {
        const double term = kBernoulliEven[k] * factor;
        tail += term;
        if (std::abs(term) <= 0.1 * eps * std::abs(head + tail)) {
            break;
        }
        const double twok = 2.0 * static_cast<double>(k + 1);
        factor *= (s + twok - 1.0) * (s + twok) / ((twok + 1.0) * (twok + 2.0) * M * M);
    }
    return head + tail;
}

bool is_integer(double s) { return s == std::round(s); }

double polylog_direct(double s, double z, double eps) {
    double sum = 0.0;
    double comp = 0.0;
    double zn = 1.0;
    for (long long n = 1; n <= kDirectSeriesCap; ++n) {
        zn *= z;
        if (zn == 0.0) {
            break;
        }
        const double term = zn * std::pow(static_cast<double>(n), -s);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        // tail bound z^{n+1} / ((1-z) (n+1)^s)
        const double bound =
            zn * z / ((1.0 - z) * std::pow(static_cast<double>(n + 1), s));
        if (bound <= eps * sum) {
            return sum;
        }
    }
    throw std::runtime_error("polylog: direct series did not converge within the term cap");
}

// Expansion around z = 1 in mu = ln z (|mu| < 2 pi).
double polylog_near_one(double s, double mu, double eps) {
    constexpr int kMaxTerms = 80;
    double sum = 0.0;
    double mu_pow_over_fact = 1.0;  // mu^k / k!
    int small_run = 0;
    const bool integer_order = is_integer(s);
    const int m = static_cast<int>(std::round(s));

    for (int k = 0; k < kMaxTerms; ++k) {
        if (k > 0) {
            mu_pow_over_fact *= mu / k;
        }
        double term = 0.0;
        if (integer_order && k == m - 1) {
            double harmonic = 0.0;
            for (int i = 1; i <= m - 1; ++i) {
                harmonic += 1.0 / i;
            }
            term = mu_pow_over_fact * (harmonic - std::log(-mu));
        } else {
            term = detail::zeta_continued(s - k) * mu_pow_over_fact;
        }
        sum += term;
        if (k > s + 2 && std::abs(term) <= 0.1 * eps * std::abs(sum)) {
            if (++small_run >= 2) {
                break;
            }
        } else {
            small_run = 0;
        }
    }
    if (!integer_order) {
        sum += std::tgamma(1.0 - s) * std::pow(-mu, s - 1.0);
    }
    return sum;
}

void require_order(double s, const char* who) {
    if (!(s > 1.0)) {
        throw std::domain_error(std::string(who) + ": order must satisfy s > 1");
    }
}

}  // namespace

Tolerance::Tolerance(double eps) : rel_eps(eps) {
    if (!(eps > 0.0 && eps < 1e-3)) {
        throw std::invalid_argument("Tolerance: rel_eps must lie in (0, 1e-3)");
    }
}

double detail::zeta_continued(double x) {
    if (x == 1.0) {
        throw std::domain_error("zeta: pole at x = 1");
    }
    if (x < 0.0) {
        // trivial zeros
        if (is_integer(x) && static_cast<long long>(x) % 2 == 0) {
            return 0.0;
        }
        return std::pow(2.0, x) * std::pow(std::numbers::pi, x - 1.0) *
               std::sin(0.5 * std::numbers::pi * x) * std::tgamma(1.0 - x) *
               euler_maclaurin_tail(1.0 - x, 1, 1e-16);
    }
    return euler_maclaurin_tail(x, 1, 1e-16);
}

double riemann_zeta(double s, Tolerance tol) {
    require_order(s, "riemann_zeta");
    return euler_maclaurin_tail(s, 1, tol.rel_eps);
}

double zeta_tail(double s, long long m, Tolerance tol) {
    require_order(s, "zeta_tail");
    if (m < 1) {
        throw std::domain_error("zeta_tail: start index must be >= 1");
    }
    return euler_maclaurin_tail(s, m, tol.rel_eps);
}

double polylog(double s, double z, Tolerance tol) {
    require_order(s, "polylog");
    if (!(z >= 0.0 && z <= 1.0)) {
        throw std::domain_error("polylog: argument must lie in [0, 1]");
    }
    if (z == 0.0) {
        return 0.0;
    }
    if (z == 1.0) {
        return riemann_zeta(s, tol);
    }
    if (z <= 0.5) {
        return polylog_direct(s, z, tol.rel_eps);
    }
    const bool near_integer = !is_integer(s) && std::abs(s - std::round(s)) < 1e-6;
    if (near_integer) {
        return polylog_direct(s, z, tol.rel_eps);
    }
    return polylog_near_one(s, std::log(z), tol.rel_eps);
}

double invert_polylog(double s, double target, Tolerance tol) {
    require_order(s, "invert_polylog");
    if (!(target >= 0.0)) {
        throw std::domain_error("invert_polylog: target must be nonnegative");
    }
    const double zeta_s = riemann_zeta(s, tol);
    if (target > zeta_s * (1.0 + tol.rel_eps)) {
        throw SaturationError("invert_polylog: target exceeds zeta(s); use the saturated branch z = 1");
    }
    if (target == 0.0) {
        return 0.0;
    }
    if (target >= zeta_s) {
        return 1.0;
    }

    double lo = 0.0;
    double hi = 1.0;
    double f_lo = 0.0;
    double f_hi = zeta_s;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double f_mid = polylog(s, mid, tol);
        if (f_mid < target) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
        if (f_hi - f_lo <= 0.5 * tol.rel_eps * target) {
            break;
        }
    }
    return (target - f_lo <= f_hi - target) ? lo : hi;
}

}  // namespace bosecycle
