#pragma once

#include <cstdint>
#include <vector>

#include "bosecycle/cycle_kinematics.hpp"
#include "bosecycle/pair_potential.hpp"

namespace bosecycle {

struct MCRun {
    AlphaPattern pattern;
    int n = 1000;
    /// Number of particles outside the zeroth cycle (N - n).
    long outside = 0;
    int batches = 30;
    long samples_per_batch = 1000;
    std::uint64_t seed = 1;
    int d = 3;
    /// Worker threads; 0 picks the hardware concurrency.
    unsigned threads = 0;

    void validate() const;
};

struct MomentEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    double closed_form = 0.0;
    double z_score = 0.0;
    std::vector<double> batch_means;
};

/// E|Y0|^2 = Sum j^2 alpha / (n^2 lambda_u^2) with j the gap k - j.
double y0_second_moment(const std::vector<PairCount>& intra, int n, double lambda_u);

/// Monte Carlo estimate of E|Y0|^2 with batch-mean error bars.
MomentEstimate simulate_Y0(const MCRun& run, const PairPotential& u);

/// Times t^{+k}_{j,r} of the expanded plus entries, one per interaction, in
/// the order of plus_pairs(pattern, n, N) expanded over r. Drawn once per run.
std::vector<double> draw_plus_times(const MCRun& run);

/// Elimination coefficients (j - 1 + t - t_first) of the expanded plus entries.
std::vector<double> plus_coefficients(const MCRun& run, const std::vector<double>& times);

struct YplusResult {
    MomentEstimate moment;
    /// Largest |Sum of plus steps| per sample after elimination (should be 0).
    double max_constraint_residual = 0.0;
    /// Largest gap between Y+ from the full formula and from the eliminated one.
    double max_elimination_gap = 0.0;
    bool degenerate = false;
    std::vector<double> times;
};

/// Monte Carlo estimate of E|Y+|^2 with the first plus step eliminated by the
/// zero-sum constraint. `run.outside` is overridden by `outside`.
YplusResult simulate_Yplus(const MCRun& run, const PairPotential& u, long outside);

struct VarianceClosedForm {
    /// E[avg(X^2) - avg(X)^2]
    double variance = 0.0;
    /// E[avg(X^2)]
    double second_moment = 0.0;
    /// ||alpha_n|| / (n lambda_u^2)
    double norm_approximation = 0.0;
};

/// Closed form with fixed plus times (empty when there are no plus entries).
VarianceClosedForm variance_closed_form(const AlphaPattern& p, int n, long N, double lambda_u,
                                        const std::vector<double>& plus_times);

struct ExponentInputs {
    int a = 1;
    long j = 1;
    long i = 1;
    long n = 100;
    double beta_norm1 = 1.0;  ///< beta ||u_hat||_1
    double lambda_beta = 1.0;
    double lambda_u = 1.0;
    double A = 2.0;
    double c = 0.0;
};

struct ExponentSuite {
    double norm0 = 0.0;           ///< ||alpha^0_n|| = a i j (j+1) / 2
    double entropy = 0.0;         ///< ln C(n-j, i)
    double weight_log = 0.0;      ///< exact log weight
    double weight_stirling = 0.0; ///< first displayed form (Stirling for a!)
    double weight_norm_form = 0.0;///< second displayed form in terms of norm0
    double bracket = 0.0;         ///< ln(beta||u||/a) + 1 - ln(2 pi a)/(2a)
    double E_av = 0.0;
    double E_markov = 0.0;        ///< lower bound holding with probability >= 1 - 1/A
};

ExponentSuite exponent_suite(const ExponentInputs& in);

/// Random exponent for a sampled value of avg(X^2) - avg(X)^2.
double random_exponent(const ExponentInputs& in, double variance_sample);

/// eps [ln(1/(eps (1-eps)^{(1-eps)/eps})) - A pi (lb/lu)^2 + ln(e beta||u|| / sqrt(2 pi))] n
double energy_entropy_exponent(double eps, double lambda_ratio, double A, double beta_norm1, double n);

/// f(eps) = eps (1 - eps)^{(1-eps)/eps} and its logarithm.
double threshold_function(double eps);
double log_threshold_function(double eps);

struct EpsilonThreshold {
    double lower = 0.0;  ///< e^{-X}
    double upper = 0.0;  ///< min(1, e^{-X+1})
    double star = 0.0;   ///< f(star) = e^{-X}
};

/// X = A pi (lambda_beta / lambda_u)^2.
EpsilonThreshold epsilon_threshold(double lambda_beta, double lambda_u, double A);

struct ConcentrationReport {
    double A = 3.0;
    double frequency = 0.0;  ///< P(|X0| < A sqrt(E|X0|^2)) at the largest n
    double chebyshev = 0.0;  ///< 1 - 1/A^2
    std::vector<int> n_grid;
    std::vector<double> rms;          ///< empirical sqrt(E|X0|^2)
    std::vector<double> rms_closed;   ///< closed form
    std::vector<double> rms_bound;    ///< (1/(n lu)) sqrt(j0 ||a0|| + j0+ ||a+||)
    /// Batch-mean estimate of E|X0|^2 against its closed form, per grid point.
    std::vector<MomentEstimate> moments;
    double decay_exponent = 0.0;      ///< minus the log-log slope of rms vs n
};

/// Concentration of the cycle mean X0 = Y0 + Y+ for the run's pattern over an n-grid.
ConcentrationReport concentration_check(const MCRun& run, const PairPotential& u, double A,
                                        const std::vector<int>& n_grid);

/// Mean over samples y of 1 / Sum_z exp(-pi (n lambda^2/L^2) z.(z + 2 L y)).
double rho_infty_c_integrand(long n, double lambda, double L, const std::vector<Vec>& samples);

/// Samples of the cycle mean X0 for the run's pattern at length run.n.
std::vector<Vec> sample_cycle_means(const MCRun& run, const PairPotential& u, long count);

}  // namespace bosecycle
