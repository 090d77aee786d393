#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace bosecycle {

/// Finite-size ensemble: N bosons on a d-torus of side L at thermal wavelength lambda.
struct SystemSpec {
    int d = 3;
    double lambda = 1.0;
    double L = 10.0;
    long N = 1;

    /// Chooses L so that N / L^d = rho with rho lambda^d = rho_lambda_d.
    static SystemSpec from_density(int d, double lambda, double rho_lambda_d, long N);

    double volume() const { return std::pow(L, d); }
    double rho() const { return static_cast<double>(N) / volume(); }
    /// n lambda^2 / L^2
    double scale(long n) const { return static_cast<double>(n) * lambda * lambda / (L * L); }
    void validate() const;
};

/// Strictly positive real stored as its logarithm.
struct LogValue {
    double log_magnitude = 0.0;

    double value() const { return std::exp(log_magnitude); }
    static LogValue from(double v) { return {std::log(v)}; }
};

/// q_n for n = 1..n_max; entry 0 is unused and set to 0.
std::vector<double> q_sequence(const SystemSpec& sys, long n_max);

/// q_n - 1 for n = 1..n_max, accurate when q_n is close to 1; entry 0 unused.
std::vector<double> q_minus_one_sequence(const SystemSpec& sys, long n_max);

/// log A_M for A_0 = 1, A_M = (1/M) Sum_{n<=M} a_n A_{M-n}, M = 0..size-1.
/// Terms with a_n == 0 are skipped; all a_n must be nonnegative.
std::vector<double> log_recursion(const std::vector<double>& a, long M_max);

/// Q_0 .. Q_N.
std::vector<LogValue> partition_recursion(const SystemSpec& sys);

struct DeltaIdentityReport {
    /// max_M |Q_{M-1} + Qhat_M - Q_M| / Q_M, with Qhat from its own recursion.
    double max_residual = 0.0;
    /// Qhat_M > (q_1 - 1)^M / M! for every M.
    bool lower_bound_holds = true;
    /// Q_M > Q_{M-1} for every M, decided in 50-digit arithmetic.
    bool strictly_increasing = true;
    /// min_M (Q_M - Q_{M-1}) / Q_M from the same extended-precision recursion.
    double min_relative_increment = 0.0;
    std::vector<LogValue> log_qhat;
};

DeltaIdentityReport delta_identity_check(const SystemSpec& sys);

/// (Q_{M+1} - 2 Q_M + Q_{M-1}) / Q_M for M = 1..N-1 (entry 0 unused).
std::vector<double> second_difference(const std::vector<LogValue>& logQ);

struct FixedLLimit {
    /// -Sum_{z != 0} log(1 - exp(-pi (lambda/L)^2 z^2))
    double log_product = 0.0;
    /// Sum_n (q_n - 1) / n
    double log_series = 0.0;
    long shells = 0;
    long series_terms = 0;
};

/// log lim_{N -> inf} Q_N at fixed L in both representations.
FixedLLimit fixed_L_limit(int d, double lambda, double L, double tol = 1e-13);

/// Exact densities of particles in n-cycles, n = 1..N.
struct CycleDensityTable {
    SystemSpec system;
    std::vector<double> q;       ///< index n, entry 0 unused
    std::vector<double> rho_n;   ///< index n, entry 0 unused
    std::vector<LogValue> logQ;  ///< Q_0 .. Q_N

    double rho() const { return system.rho(); }
    /// Sum of rho_n over lo <= n <= hi (clamped to 1..N).
    double mass_between(double lo, double hi) const;
    /// Sum of rho_n over n > threshold.
    double mass_above(double threshold) const;
    /// Sum of rho_n over n >= threshold.
    double mass_at_least(double threshold) const;
};

CycleDensityTable cycle_densities(const SystemSpec& sys);

/// rho_0^{N,L} = Sum_n rho_n / q_n.
double condensate_density(const CycleDensityTable& table);

/// <x|sigma_1|0> = Sum_n rho_n f_n(x;0) / f_n(0;0).
double sigma1_kernel(const CycleDensityTable& table, const std::vector<double>& x);

/// Sum_n rho_n exp(-pi x^2 / (n lambda^2)).
double sigma1_upper(const CycleDensityTable& table, const std::vector<double>& x);

/// zeta(d/2) / lambda^d; +infinity for d <= 2.
double critical_density(int d, double lambda);

/// beta f = -zeta(1 + d/2) / lambda^d.
double free_energy_limit(int d, double lambda);

/// Cycle lengths of one exact draw; the first entry is the cycle of particle 1.
struct PartitionSample {
    std::vector<long> lengths;
};

/// Draws the cycle of particle 1 with probability q_n Q_{M-n} / (M Q_M), removes
/// it and repeats on the remaining M - n particles.
template <typename Rng>
PartitionSample sample_partition(const CycleDensityTable& table, Rng& rng);

PartitionSample sample_partition(const CycleDensityTable& table, std::uint64_t seed);

/// `count` independent draws; draw i is seeded from (seed, i) so the result does
/// not depend on the thread count.
std::vector<PartitionSample> sample_partitions(const CycleDensityTable& table, long count,
                                               std::uint64_t seed, unsigned threads = 0);

}  // namespace bosecycle

#include "bosecycle/detail/ideal_gas_sampler.hpp"
