#include "bosecycle/theta_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace bosecycle {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr long kMaxRadius = 50'000'000;

struct Sum1D {
    cplx value;
    double abs_sum = 0.0;
    double tail = 0.0;  // absolute bound on the omitted terms
    long radius = 0;
};

// Sum_z exp(-pi s (z+w)^2) exp(2 pi i z x), truncated symmetrically around the
// dominant term with a certified Gaussian tail bound.
Sum1D sum_1d(double s, double w, double x, double rel_tol) {
    const double center = -std::round(w);
    const double delta = center + w;  // in [-1/2, 1/2]
    const double log_peak = -kPi * s * delta * delta;
    const double log_target = std::log(rel_tol) + log_peak;

    long R = 1;
    double log_tail = 0.0;
    for (;; ++R) {
        const double u0 = static_cast<double>(R) + 0.5;
        log_tail = std::log(2.0) - kPi * s * u0 * u0 - std::log1p(-std::exp(-2.0 * kPi * s * u0));
        if (log_tail <= log_target) {
            break;
        }
        if (R >= kMaxRadius) {
            throw std::runtime_error("theta: truncation radius exceeds the supported maximum");
        }
    }

    Sum1D out;
    out.radius = R;
    out.tail = std::exp(log_tail);
    // accumulate from the outside in so small terms are added first
    for (long m = R; m >= 0; --m) {
        for (int side = (m == 0 ? 1 : 0); side < 2; ++side) {
            const double z = center + (side == 0 ? -static_cast<double>(m) : static_cast<double>(m));
            const double u = z + w;
            const double mag = std::exp(-kPi * s * u * u);
            const double phase = 2.0 * kPi * z * x;
            out.value += mag * cplx(std::cos(phase), std::sin(phase));
            out.abs_sum += mag;
        }
    }
    return out;
}

// Poisson dual of sum_1d; returns the same complex number.
Sum1D sum_1d_dual(double s, double w, double x, double rel_tol) {
    Sum1D inner = sum_1d(1.0 / s, x, -w, rel_tol);
    const double scale = 1.0 / std::sqrt(s);
    const double phase = -2.0 * kPi * w * x;
    inner.value *= scale * cplx(std::cos(phase), std::sin(phase));
    inner.abs_sum *= scale;
    inner.tail *= scale;
    return inner;
}

void validate(const ThetaArgs& a) {
    if (!(a.s > 0.0) || !std::isfinite(a.s)) {
        throw std::domain_error("theta: scale s must be positive and finite");
    }
    if (a.d < 1 || a.d > 4) {
        throw std::domain_error("theta: dimension must lie in 1..4");
    }
    if ((!a.w.empty() && static_cast<int>(a.w.size()) != a.d) ||
        (!a.x.empty() && static_cast<int>(a.x.size()) != a.d)) {
        throw std::domain_error("theta: vector length does not match dimension");
    }
}

double component(const std::vector<double>& v, int i) { return v.empty() ? 0.0 : v[i]; }

template <typename OneDim>
ThetaResult theta_product(const ThetaArgs& a, double tol, OneDim one_dim) {
    validate(a);
    if (!(tol > 0.0 && tol < 1.0)) {
        throw std::domain_error("theta: tolerance must lie in (0, 1)");
    }
    const double per_dim = tol / (2.0 * a.d);
    cplx prod(1.0, 0.0);
    double rel_growth = 1.0;
    ThetaResult res;
    res.cert.radius = 1;
    for (int i = 0; i < a.d; ++i) {
        const Sum1D s1 = one_dim(a.s, component(a.w, i), component(a.x, i), per_dim);
        prod *= s1.value;
        rel_growth *= 1.0 + s1.tail / s1.abs_sum;
        res.cert.radius = std::max(res.cert.radius, s1.radius);
    }
    res.value = prod.real();
    res.cert.tail_bound = rel_growth - 1.0;
    return res;
}

std::vector<double> scaled(const std::vector<double>& v, double factor) {
    std::vector<double> out(v);
    for (double& e : out) {
        e *= factor;
    }
    return out;
}

ThetaArgs kernel_args(long n, double lambda, double L, const std::vector<double>& x,
                      const std::vector<double>& w) {
    if (n < 1 || !(lambda > 0.0) || !(L > 0.0)) {
        throw std::domain_error("f_kernel: need n >= 1, lambda > 0, L > 0");
    }
    ThetaArgs a;
    a.d = static_cast<int>(!x.empty() ? x.size() : w.size());
    a.s = static_cast<double>(n) * lambda * lambda / (L * L);
    a.w = w;
    a.x = scaled(x, 1.0 / L);
    return a;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) {
        return 0.0;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

}  // namespace

ThetaResult theta_direct(const ThetaArgs& args, double tol) {
    return theta_product(args, tol, sum_1d);
}

ThetaResult theta_dual(const ThetaArgs& args, double tol) {
    return theta_product(args, tol, sum_1d_dual);
}

double theta(const ThetaArgs& args, double tol) {
    return args.s >= 1.0 ? theta_direct(args, tol).value : theta_dual(args, tol).value;
}

double theta_minus_one(int d, double s) {
    if (!(s > 0.0)) {
        throw std::domain_error("theta_minus_one: s must be positive");
    }
    double t1_minus_one = 0.0;
    if (s >= 1.0) {
        for (long z = 1;; ++z) {
            const double term = 2.0 * std::exp(-kPi * s * static_cast<double>(z * z));
            t1_minus_one += term;
            if (term <= 1e-17 * t1_minus_one || term == 0.0) {
                break;
            }
        }
    } else {
        double acc = 1.0;
        for (long z = 1;; ++z) {
            const double term = 2.0 * std::exp(-kPi * static_cast<double>(z * z) / s);
            acc += term;
            if (term <= 1e-17 * acc) {
                break;
            }
        }
        t1_minus_one = acc / std::sqrt(s) - 1.0;
    }
    return std::expm1(static_cast<double>(d) * std::log1p(t1_minus_one));
}

double f_kernel_direct(long n, double lambda, double L, const std::vector<double>& x,
                       const std::vector<double>& w, double tol) {
    const ThetaArgs a = kernel_args(n, lambda, L, x, w);
    return theta_direct(a, tol).value / std::pow(L, a.d);
}

double f_kernel_dual(long n, double lambda, double L, const std::vector<double>& x,
                     const std::vector<double>& w, double tol) {
    const ThetaArgs a = kernel_args(n, lambda, L, x, w);
    return theta_dual(a, tol).value / std::pow(L, a.d);
}

double f_kernel(long n, double lambda, double L, const std::vector<double>& x,
                const std::vector<double>& w, double tol) {
    const ThetaArgs a = kernel_args(n, lambda, L, x, w);
    return theta(a, tol) / std::pow(L, a.d);
}

double log_denominator_sum(int d, double s, const std::vector<double>& w, double tol) {
    ThetaArgs a;
    a.d = d;
    a.s = s;
    a.w = w;
    validate(a);
    double total = 0.0;
    for (int i = 0; i < d; ++i) {
        const double wi = component(w, i);
        if (s >= 1.0) {
            // shift by the dominant exponent so the largest term is exactly 1
            const double delta = wi - std::round(wi);
            double acc = 0.0;
            for (long m = 1;; ++m) {
                const double lo = -static_cast<double>(m) + delta;
                const double hi = static_cast<double>(m) + delta;
                const double term = std::exp(-kPi * s * (lo * lo - delta * delta)) +
                                    std::exp(-kPi * s * (hi * hi - delta * delta));
                acc += term;
                if (term <= 0.1 * tol * (1.0 + acc)) {
                    break;
                }
            }
            total += kPi * s * (wi * wi - delta * delta) + std::log1p(acc);
        } else {
            const Sum1D s1 = sum_1d_dual(s, wi, 0.0, tol);
            total += kPi * s * wi * wi + std::log(s1.value.real());
        }
    }
    return total;
}

double denominator_sum(int d, double s, const std::vector<double>& w, double tol) {
    return std::exp(log_denominator_sum(d, s, w, tol));
}

double fractional_part(double w) { return w - std::ceil(w - 0.5); }

std::vector<double> fractional_part(const std::vector<double>& w) {
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        out[i] = fractional_part(w[i]);
    }
    return out;
}

Regime regime_classify(long n, double lambda, double L, RegimeThresholds thresholds) {
    const double c = static_cast<double>(n) * lambda * lambda / (L * L);
    if (c < thresholds.lo) {
        return RegimeSmall{};
    }
    if (c > thresholds.hi) {
        return RegimeLarge{};
    }
    return RegimeCritical{c};
}

double f_asymptotic(const Regime& regime, long n, double lambda, double L,
                    const std::vector<double>& x, const std::vector<double>& w) {
    const int d = static_cast<int>(!x.empty() ? x.size() : w.size());
    const double s = static_cast<double>(n) * lambda * lambda / (L * L);
    const double cos_factor = std::cos(2.0 * kPi * dot(w, x) / L);
    const std::vector<double> wf = fractional_part(w);

    if (std::holds_alternative<RegimeSmall>(regime)) {
        const double lambda_n = std::sqrt(static_cast<double>(n)) * lambda;
        const double x2 = dot(x, x);
        return std::pow(lambda_n, -d) * std::exp(-kPi * x2 / (lambda_n * lambda_n)) * cos_factor;
    }
    if (const auto* crit = std::get_if<RegimeCritical>(&regime)) {
        ThetaArgs a;
        a.d = d;
        a.s = crit->c;
        a.w = wf;
        return theta(a) / std::pow(L, d) * cos_factor;
    }

    // Large: the 3^d - 1 neighbours with max |z_i| = 1.
    double wf2 = dot(wf, wf);
    double shell = 0.0;
    int total = 1;
    for (int i = 0; i < d; ++i) {
        total *= 3;
    }
    for (int code = 0; code < total; ++code) {
        int rest = code;
        double z2 = 0.0;
        double zw = 0.0;
        bool zero = true;
        for (int i = 0; i < d; ++i) {
            const int zi = rest % 3 - 1;
            rest /= 3;
            if (zi != 0) {
                zero = false;
            }
            z2 += zi * zi;
            zw += zi * (wf.empty() ? 0.0 : wf[i]);
        }
        if (!zero) {
            shell += std::exp(-kPi * s * (z2 + 2.0 * zw));
        }
    }
    return std::exp(-kPi * s * wf2) * (1.0 + shell) * cos_factor / std::pow(L, d);
}

}  // namespace bosecycle
