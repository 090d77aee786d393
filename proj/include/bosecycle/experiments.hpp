#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bosecycle/config.hpp"
#include "bosecycle/ideal_gas.hpp"
#include "bosecycle/output.hpp"

namespace bosecycle {

struct ScanConfig {
    int d = 3;
    double lambda = 1.0;
    /// Densities in units of lambda^{-d}.
    std::vector<double> rho_lambda_d{2.0 * 2.612375348685488};
    std::vector<long> N_grid{500, 1000, 2000, 4000};
    /// Tail threshold c N^{2/d} and the softer N^gamma.
    double tail_c = 1.0;
    double tail_gamma = 0.5;
    /// Macroscopic cut eps N.
    std::vector<double> eps{0.1};
    /// K_N = floor(N^slow_exponent).
    double slow_exponent = 0.9;
    /// Points of the ODLRO profile on [0, L/2].
    int odlro_points = 41;
    /// Number of largest N used by the extrapolation fit.
    int fit_points = 4;
    std::uint64_t seed = 20240611;
    unsigned threads = 0;
    std::string output_dir = "out";

    void apply(const KeyValueConfig& cfg);
    void validate() const;
};

/// Densities for one grid point.
CycleDensityTable density_table(const ScanConfig& cfg, double rho_lambda_d, long N);

/// Least-squares fit y = a + b N^{-p} over the last `points` entries.
struct PowerFit {
    double a = 0.0;
    double b = 0.0;
    double rms_residual = 0.0;
    int points = 0;
};
PowerFit fit_inverse_power(const std::vector<long>& N, const std::vector<double>& y, double p, int points);

/// max(0, 1 - rho_c / rho): limiting condensate fraction.
double limit_condensate_fraction(int d, double lambda, double rho_lambda_d);

struct CondensateScan {
    double rho_lambda_d = 0.0;
    std::vector<long> N;
    std::vector<double> fraction;  ///< rho_0^{N,L} / rho
    PowerFit fit;                  ///< in N^{-1/3}
    double limit = 0.0;
};
CondensateScan scan_condensate(const ScanConfig& cfg, double rho_lambda_d);
Table to_table(const CondensateScan& s);

struct TailScan {
    double rho_lambda_d = 0.0;
    std::vector<long> N;
    std::vector<double> threshold;     ///< c N^{2/d}
    std::vector<double> mass;          ///< Sum_{n > c N^{2/d}} rho_n / rho
    std::vector<double> mass_gamma;    ///< Sum_{n > N^gamma} rho_n / rho
    std::vector<double> fraction;      ///< rho_0^{N,L} / rho
    double limit = 0.0;
};
TailScan scan_tail_threshold(const ScanConfig& cfg, double rho_lambda_d);
Table to_table(const TailScan& s);

struct MacroScan {
    double rho_lambda_d = 0.0;
    std::vector<long> N;
    std::vector<double> eps;
    std::vector<double> mass;      ///< Sum_{n > eps N} rho_n / rho
    std::vector<double> target;    ///< (rho_0^{N,L}/rho - eps)_+
    std::vector<double> target_limit;  ///< (rho_0/rho - eps)_+ with the limiting rho_0
};
MacroScan scan_macroscopic(const ScanConfig& cfg, double rho_lambda_d);
Table to_table(const MacroScan& s);

struct SlowScan {
    double rho_lambda_d = 0.0;
    std::vector<long> N;
    std::vector<long> K_power;       ///< floor(N^slow_exponent)
    std::vector<double> mass_power;  ///< Sum_{n <= K} rho_n / rho
    std::vector<long> K_log;         ///< floor(N / ln N)
    std::vector<double> mass_log;
    double target = 0.0;             ///< min(rho, rho_c) / rho
    /// |mass_power - target| along the grid.
    std::vector<double> gap;
    bool gap_monotone = false;
};
SlowScan scan_slow_cycles(const ScanConfig& cfg, double rho_lambda_d);
Table to_table(const SlowScan& s);

struct OdlroProfile {
    double rho_lambda_d = 0.0;
    long N = 0;
    double L = 0.0;
    double rho = 0.0;
    double rho0_finite = 0.0;
    double rho0_limit = 0.0;
    long K = 0;  ///< finite-cycle cut of the sandwich
    std::vector<double> x;
    std::vector<double> sigma1;
    std::vector<double> upper;          ///< Sum_n rho_n exp(-pi x^2/(n lambda^2))
    std::vector<double> sandwich_lower; ///< rho - Sum_{n<=K} rho_n
    std::vector<double> sandwich_upper; ///< lower + Sum_{n<=K} rho_n exp(-pi x^2/(n lambda^2))
};
OdlroProfile odlro_profile(const ScanConfig& cfg, double rho_lambda_d, long N);
Table to_table(const OdlroProfile& p);

/// Sum_n rho_n times the integrand with nu = delta_0.
double theorem_side_condensate(const CycleDensityTable& table);

}  // namespace bosecycle
