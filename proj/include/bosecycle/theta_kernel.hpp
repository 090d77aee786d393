#pragma once

#include <variant>
#include <vector>

namespace bosecycle {

/// Arguments of a shifted Gaussian lattice sum over Z^d.
/// `w` is the shift and `x` the phase position (in units of the torus side).
/// Empty `w` or `x` means the zero vector.
struct ThetaArgs {
    int d = 1;
    double s = 1.0;
    std::vector<double> w;
    std::vector<double> x;
};

struct TruncationCert {
    long radius = 1;
    /// Bound on |truncated - exact| relative to the absolute-value sum.
    double tail_bound = 0.0;
};

struct ThetaResult {
    double value = 0.0;
    TruncationCert cert;
};

inline constexpr double kDefaultThetaTol = 1e-15;

/// Sum_z exp(-pi s (z+w)^2) cos(2 pi z.x).
ThetaResult theta_direct(const ThetaArgs& args, double tol = kDefaultThetaTol);

/// Poisson-dual form s^{-d/2} Sum_z exp(-pi (x+z)^2 / s) cos(2 pi w.(x+z)).
ThetaResult theta_dual(const ThetaArgs& args, double tol = kDefaultThetaTol);

/// Picks the cheaper representation (direct for s >= 1, dual below).
double theta(const ThetaArgs& args, double tol = kDefaultThetaTol);

/// Sum_z exp(-pi s z^2) - 1 over Z^d, accurate when the result is tiny.
double theta_minus_one(int d, double s);

/// f_n(x; w) on a torus of side L. Position x in length units, w dimensionless.
double f_kernel(long n, double lambda, double L, const std::vector<double>& x,
                const std::vector<double>& w, double tol = kDefaultThetaTol);
double f_kernel_direct(long n, double lambda, double L, const std::vector<double>& x,
                       const std::vector<double>& w, double tol = kDefaultThetaTol);
double f_kernel_dual(long n, double lambda, double L, const std::vector<double>& x,
                     const std::vector<double>& w, double tol = kDefaultThetaTol);

/// Sum_z exp(-pi s z.(z+2w)) and its logarithm (safe for large s w^2).
double denominator_sum(int d, double s, const std::vector<double>& w, double tol = kDefaultThetaTol);
double log_denominator_sum(int d, double s, const std::vector<double>& w,
                           double tol = kDefaultThetaTol);

/// Componentwise fractional part in (-1/2, 1/2].
double fractional_part(double w);
std::vector<double> fractional_part(const std::vector<double>& w);

struct RegimeSmall {};
struct RegimeLarge {};
struct RegimeCritical {
    double c = 1.0;
};
using Regime = std::variant<RegimeSmall, RegimeCritical, RegimeLarge>;

struct RegimeThresholds {
    double lo = 0.1;
    double hi = 10.0;
};

Regime regime_classify(long n, double lambda, double L, RegimeThresholds thresholds = {});

/// Leading-order form of f_n(x; w) in the given regime.
double f_asymptotic(const Regime& regime, long n, double lambda, double L,
                    const std::vector<double>& x, const std::vector<double>& w);

}  // namespace bosecycle
