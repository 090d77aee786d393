#include "bosecycle/limit_shape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bosecycle/special_functions.hpp"

namespace bosecycle {

namespace {

struct Branch {
    double z = 1.0;
    double denom = 1.0;  // rho lambda^d or zeta(d/2)
};

Branch branch(int d, double rho, double lambda, Normalization norm) {
    if (d < 3) {
        throw std::domain_error("limit shape: requires d >= 3");
    }
    if (!(rho > 0.0) || !(lambda > 0.0)) {
        throw std::domain_error("limit shape: rho and lambda must be positive");
    }
    const double s = 0.5 * d;
    const double rl = rho * std::pow(lambda, d);
    const double zeta_s = riemann_zeta(s);
    if (rl <= zeta_s) {
        return {invert_polylog(s, rl), rl};
    }
    return {1.0, norm == Normalization::PerParticle ? rl : zeta_s};
}

}  // namespace

double limit_cycle_fraction(long k, int d, double rho, double lambda, Normalization norm) {
    if (k < 1) {
        throw std::domain_error("limit_cycle_fraction: k must be >= 1");
    }
    const Branch b = branch(d, rho, lambda, norm);
    const double kd = static_cast<double>(k);
    return std::pow(b.z, kd) / (std::pow(kd, 0.5 * d + 1.0) * b.denom);
}

double finite_shape(double t, const ShapeParams& p) {
    if (!(t > 0.0)) {
        throw std::domain_error("finite_shape: t must be positive");
    }
    const Branch b = branch(p.d, p.rho, p.lambda, p.norm);
    const long first = std::max(1L, static_cast<long>(std::ceil(t)));
    const double expo = 0.5 * p.d + 1.0;
    if (b.z >= 1.0) {
        return zeta_tail(expo, first) / b.denom;
    }
    double acc = 0.0;
    for (long k = first;; ++k) {
        const double kd = static_cast<double>(k);
        const double term = std::exp(kd * std::log(b.z) - expo * std::log(kd));
        acc += term;
        // remaining terms are bounded by a geometric series in z
        if (term * b.z / (1.0 - b.z) <= 1e-16 * acc || term == 0.0) {
            break;
        }
    }
    return acc / b.denom;
}

double macroscopic_shape(double t) {
    if (!(t > 0.0)) {
        throw std::domain_error("macroscopic_shape: t must be positive");
    }
    return std::max(0.0, -std::log(t));
}

double infinite_cycle_count(double x, double rho0, double rho) {
    if (!(x > 0.0) || !(rho > 0.0)) {
        throw std::domain_error("infinite_cycle_count: x and rho must be positive");
    }
    if (x >= rho0 / rho) {
        return 0.0;
    }
    return std::log(rho0 / (x * rho));
}

std::vector<double> default_shape_grid() {
    constexpr int kPoints = 40;
    std::vector<double> grid(kPoints);
    const double lo = std::log(0.02);
    const double hi = std::log(2.0);
    for (int i = 0; i < kPoints; ++i) {
        grid[i] = std::exp(lo + (hi - lo) * i / (kPoints - 1));
    }
    return grid;
}

ShapeCurve empirical_shape(const std::vector<PartitionSample>& samples, long N, Scaling scaling,
                           double a, std::vector<double> grid) {
    if (grid.empty()) {
        throw std::invalid_argument("empirical_shape: empty grid");
    }
    if (samples.empty()) {
        throw std::invalid_argument("empirical_shape: need at least one sample");
    }
    if (!(a > 0.0) || N < 1) {
        throw std::invalid_argument("empirical_shape: need a > 0 and N >= 1");
    }
    std::sort(grid.begin(), grid.end());
    ShapeCurve curve;
    curve.grid = grid;
    curve.scaling = scaling;
    curve.a = a;
    curve.values.assign(grid.size(), 0.0);
    curve.stderr_values.assign(grid.size(), 0.0);
    std::vector<double> sum_sq(grid.size(), 0.0);

    const double weight = scaling == Scaling::Finite ? a / static_cast<double>(N) : 1.0;
    for (const PartitionSample& s : samples) {
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const double cut = a * grid[g];
            long count = 0;
            for (long len : s.lengths) {
                if (static_cast<double>(len) >= cut) {
                    ++count;
                }
            }
            const double v = weight * static_cast<double>(count);
            curve.values[g] += v;
            sum_sq[g] += v * v;
        }
    }
    const double m = static_cast<double>(samples.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const double mean = curve.values[g] / m;
        curve.values[g] = mean;
        if (samples.size() > 1) {
            const double var = std::max(0.0, (sum_sq[g] - m * mean * mean) / (m - 1.0));
            curve.stderr_values[g] = std::sqrt(var / m);
        }
    }
    return curve;
}

}  // namespace bosecycle
