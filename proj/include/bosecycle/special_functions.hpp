#pragma once

#include <stdexcept>

namespace bosecycle {

/// Relative accuracy target for the scalar special functions.
struct Tolerance {
    double rel_eps = 1e-12;

    Tolerance() = default;
    explicit Tolerance(double eps);
};

/// Raised by invert_polylog when the target exceeds zeta(s); the caller is
/// expected to switch to the saturated branch z = 1.
class SaturationError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Riemann zeta at real s > 1 (Euler-Maclaurin corrected partial sums).
double riemann_zeta(double s, Tolerance tol = {});

/// Sum_{n >= m} n^{-s} for s > 1 and m >= 1.
double zeta_tail(double s, long long m, Tolerance tol = {});

/// Polylogarithm Li_s(z) = Sum_{n>=1} z^n / n^s for s > 1 and z in [0, 1].
double polylog(double s, double z, Tolerance tol = {});

/// Solves polylog(s, z) = target for z in [0, 1] by bisection.
/// Throws SaturationError when target > zeta(s).
double invert_polylog(double s, double target, Tolerance tol = {});

namespace detail {
// Zeta continued to all real x != 1 (reflection for x < 0). Used by the
// polylog expansion around z = 1.
double zeta_continued(double x);
}  // namespace detail

}  // namespace bosecycle
