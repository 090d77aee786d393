#pragma once

#include <vector>

#include "bosecycle/ideal_gas.hpp"

namespace bosecycle {

/// How the finite-cycle fractions are normalized in the super-critical phase.
/// PerParticle divides by the total density, so Sum_k k r_k/N = min(1, rho_c/rho).
/// PerFiniteParticle divides by the critical density, giving 1/(k^{d/2+1} zeta(d/2)).
enum class Normalization { PerParticle, PerFiniteParticle };

/// lim r_k / N for the cycle length k.
double limit_cycle_fraction(long k, int d, double rho, double lambda,
                            Normalization norm = Normalization::PerParticle);

struct ShapeParams {
    int d = 3;
    double rho = 1.0;
    double lambda = 1.0;
    Normalization norm = Normalization::PerParticle;
};

/// Sum_{k >= t} of limit_cycle_fraction.
double finite_shape(double t, const ShapeParams& p);

/// (ln 1/t)_+
double macroscopic_shape(double t);

/// ln(rho0 / (x rho)) for x < rho0/rho, else 0.
double infinite_cycle_count(double x, double rho0, double rho);

enum class Scaling { Finite, Macroscopic };

struct ShapeCurve {
    std::vector<double> grid;
    std::vector<double> values;
    /// Standard error of each value across samples.
    std::vector<double> stderr_values;
    Scaling scaling = Scaling::Finite;
    double a = 1.0;
};

/// 40 log-spaced points in [0.02, 2].
std::vector<double> default_shape_grid();

/// Finite scaling: (1/N) Sum_{k >= t} r_k, averaged over samples.
/// Macroscopic scaling: number of cycles with k >= a_N t, a_N = N rho0/rho.
ShapeCurve empirical_shape(const std::vector<PartitionSample>& samples, long N, Scaling scaling,
                           double a, std::vector<double> grid = default_shape_grid());

}  // namespace bosecycle
