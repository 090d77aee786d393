#include "bosecycle/ideal_gas.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "bosecycle/special_functions.hpp"
#include "bosecycle/theta_kernel.hpp"

namespace bosecycle {

namespace {

constexpr double kPi = std::numbers::pi;

double neumaier_sum_sorted(std::vector<double>& terms) {
    std::sort(terms.begin(), terms.end());
    double sum = 0.0;
    double comp = 0.0;
    for (double t : terms) {
        const double s = sum + t;
        if (std::abs(sum) >= std::abs(t)) {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    return sum + comp;
}

}  // namespace

SystemSpec SystemSpec::from_density(int d, double lambda, double rho_lambda_d, long N) {
    if (!(rho_lambda_d > 0.0)) {
        throw std::invalid_argument("SystemSpec: density must be positive");
    }
    SystemSpec s;
    s.d = d;
    s.lambda = lambda;
    s.N = N;
    const double rho = rho_lambda_d / std::pow(lambda, d);
    s.L = std::pow(static_cast<double>(N) / rho, 1.0 / d);
    s.validate();
    return s;
}

void SystemSpec::validate() const {
    if (d < 1 || d > 4) {
        throw std::invalid_argument("SystemSpec: d must lie in 1..4");
    }
    if (!(lambda > 0.0) || !(L > 0.0)) {
        throw std::invalid_argument("SystemSpec: lambda and L must be positive");
    }
    if (N < 1) {
        throw std::invalid_argument("SystemSpec: N must be at least 1");
    }
}

std::vector<double> q_minus_one_sequence(const SystemSpec& sys, long n_max) {
    sys.validate();
    if (n_max < 1) {
        throw std::invalid_argument("q_sequence: n_max must be at least 1");
    }
    std::vector<double> a(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (long n = 1; n <= n_max; ++n) {
        a[n] = theta_minus_one(sys.d, sys.scale(n));
    }
    return a;
}

std::vector<double> q_sequence(const SystemSpec& sys, long n_max) {
    std::vector<double> q = q_minus_one_sequence(sys, n_max);
    for (long n = 1; n <= n_max; ++n) {
        q[n] += 1.0;
    }
    return q;
}

std::vector<double> log_recursion(const std::vector<double>& a, long M_max) {
    if (static_cast<long>(a.size()) < M_max + 1) {
        throw std::invalid_argument("log_recursion: coefficient table too short");
    }
    std::vector<double> log_a(a.size(), -std::numeric_limits<double>::infinity());
    for (std::size_t n = 1; n < a.size(); ++n) {
        if (a[n] < 0.0) {
            throw std::invalid_argument("log_recursion: coefficients must be nonnegative");
        }
        if (a[n] > 0.0) {
            log_a[n] = std::log(a[n]);
        }
    }
    std::vector<double> logA(static_cast<std::size_t>(M_max) + 1, 0.0);
    std::vector<double> exps;
    exps.reserve(static_cast<std::size_t>(M_max));
    for (long M = 1; M <= M_max; ++M) {
        double peak = -std::numeric_limits<double>::infinity();
        for (long n = 1; n <= M; ++n) {
            peak = std::max(peak, log_a[n] + logA[M - n]);
        }
        if (!std::isfinite(peak)) {
            throw std::domain_error("log_recursion: all terms vanish");
        }
        exps.clear();
        for (long n = 1; n <= M; ++n) {
            const double t = log_a[n] + logA[M - n];
            if (std::isfinite(t)) {
                exps.push_back(std::exp(t - peak));
            }
        }
        logA[M] = peak + std::log(neumaier_sum_sorted(exps)) - std::log(static_cast<double>(M));
    }
    return logA;
}

std::vector<LogValue> partition_recursion(const SystemSpec& sys) {
    const std::vector<double> logQ = log_recursion(q_sequence(sys, sys.N), sys.N);
    std::vector<LogValue> out(logQ.size());
    for (std::size_t i = 0; i < logQ.size(); ++i) {
        out[i].log_magnitude = logQ[i];
    }
    return out;
}

DeltaIdentityReport delta_identity_check(const SystemSpec& sys) {
    const std::vector<double> a = q_minus_one_sequence(sys, sys.N);
    std::vector<double> q(a);
    for (std::size_t n = 1; n < q.size(); ++n) {
        q[n] += 1.0;
    }
    const std::vector<double> logQ = log_recursion(q, sys.N);
    const std::vector<double> logQhat = log_recursion(a, sys.N);

    DeltaIdentityReport rep;
    rep.log_qhat.resize(logQhat.size());
    const double log_q1m1 = std::log(a[1]);
    for (long M = 0; M <= sys.N; ++M) {
        rep.log_qhat[M].log_magnitude = logQhat[M];
        if (M == 0) {
            continue;
        }
        const double r = std::exp(logQ[M - 1] - logQ[M]) + std::exp(logQhat[M] - logQ[M]) - 1.0;
        rep.max_residual = std::max(rep.max_residual, std::abs(r));
        const double bound = static_cast<double>(M) * log_q1m1 - std::lgamma(static_cast<double>(M) + 1.0);
        // M = 1 is an identity, Qhat_1 = q_1 - 1
        const bool ok = M == 1 ? std::abs(logQhat[1] - bound) < 1e-12 : logQhat[M] > bound;
        if (!ok) {
            rep.lower_bound_holds = false;
        }
    }

    // Q_M - Q_{M-1} = Qhat_M falls far below double resolution of Q_M in the
    // condensed phase, so monotonicity is decided on a 50-digit recursion.
    using Big = boost::multiprecision::cpp_bin_float_50;
    // q_n is rebuilt as 1 + a_n so that the tiny excesses survive rounding
    std::vector<Big> qbig(static_cast<std::size_t>(sys.N) + 1);
    for (long n = 1; n <= sys.N; ++n) {
        qbig[n] = Big(1) + Big(a[n]);
    }
    std::vector<Big> Q(static_cast<std::size_t>(sys.N) + 1);
    Q[0] = 1;
    rep.min_relative_increment = std::numeric_limits<double>::infinity();
    for (long M = 1; M <= sys.N; ++M) {
        Big acc = 0;
        for (long n = 1; n <= M; ++n) {
            acc += qbig[n] * Q[M - n];
        }
        Q[M] = acc / M;
        const Big inc = (Q[M] - Q[M - 1]) / Q[M];
        if (!(inc > 0)) {
            rep.strictly_increasing = false;
        }
        rep.min_relative_increment = std::min(rep.min_relative_increment, inc.convert_to<double>());
    }
    return rep;
}

std::vector<double> second_difference(const std::vector<LogValue>& logQ) {
    std::vector<double> out(logQ.size() >= 2 ? logQ.size() - 1 : 0, 0.0);
    for (std::size_t M = 1; M + 1 < logQ.size(); ++M) {
        const double c = logQ[M].log_magnitude;
        out[M] = std::exp(logQ[M + 1].log_magnitude - c) - 2.0 + std::exp(logQ[M - 1].log_magnitude - c);
    }
    return out;
}

FixedLLimit fixed_L_limit(int d, double lambda, double L, double tol) {
    if (d < 1 || d > 4 || !(lambda > 0.0) || !(L > 0.0)) {
        throw std::invalid_argument("fixed_L_limit: invalid system");
    }
    const double a = (lambda / L) * (lambda / L);
    FixedLLimit out;

    // Product over z != 0, grouped by shells |z|^2 = m with lattice counts r_d(m).
    const long M = static_cast<long>(std::ceil((std::log(1.0 / tol) + 40.0) / (kPi * a))) + 1;
    std::vector<double> one_dim(static_cast<std::size_t>(M) + 1, 0.0);
    for (long z = 0; z * z <= M; ++z) {
        one_dim[z * z] += z == 0 ? 1.0 : 2.0;
    }
    std::vector<double> counts(one_dim);
    for (int k = 1; k < d; ++k) {
        std::vector<double> next(counts.size(), 0.0);
        for (long m = 0; m <= M; ++m) {
            if (counts[m] == 0.0) {
                continue;
            }
            for (long z = 0; m + z * z <= M; ++z) {
                next[m + z * z] += counts[m] * one_dim[z * z];
            }
        }
        counts.swap(next);
    }
    std::vector<double> terms;
    for (long m = 1; m <= M; ++m) {
        if (counts[m] > 0.0) {
            terms.push_back(-counts[m] * std::log1p(-std::exp(-kPi * a * m)));
        }
    }
    out.log_product = neumaier_sum_sorted(terms);
    out.shells = M;

    // Series Sum_n (q_n - 1)/n with a geometric tail bound once n a >= 1.
    terms.clear();
    double sum = 0.0;
    for (long n = 1;; ++n) {
        const double term = theta_minus_one(d, n * a) / static_cast<double>(n);
        terms.push_back(term);
        sum += term;
        if (n * a >= 1.0) {
            const double x = kPi * a;
            const double tail = 2.2 * d * std::exp(-x * (n + 1)) / ((n + 1) * -std::expm1(-x));
            if (tail <= 0.01 * tol * sum) {
                out.series_terms = n;
                break;
            }
        }
    }
    out.log_series = neumaier_sum_sorted(terms);
    return out;
}

double CycleDensityTable::mass_between(double lo, double hi) const {
    const long N = system.N;
    const long first = std::max(1L, static_cast<long>(std::ceil(lo)));
    const long last = std::min(N, static_cast<long>(std::floor(hi)));
    double acc = 0.0;
    for (long n = last; n >= first; --n) {
        acc += rho_n[n];
    }
    return acc;
}

double CycleDensityTable::mass_above(double threshold) const {
    return mass_between(std::floor(threshold) + 1.0, static_cast<double>(system.N));
}

double CycleDensityTable::mass_at_least(double threshold) const {
    return mass_between(threshold, static_cast<double>(system.N));
}

CycleDensityTable cycle_densities(const SystemSpec& sys) {
    CycleDensityTable t;
    t.system = sys;
    t.q = q_sequence(sys, sys.N);
    t.logQ = partition_recursion(sys);
    t.rho_n.assign(static_cast<std::size_t>(sys.N) + 1, 0.0);
    const double vol = sys.volume();
    const double logQN = t.logQ[sys.N].log_magnitude;
    for (long n = 1; n <= sys.N; ++n) {
        t.rho_n[n] = t.q[n] * std::exp(t.logQ[sys.N - n].log_magnitude - logQN) / vol;
    }
    return t;
}

double condensate_density(const CycleDensityTable& table) {
    double acc = 0.0;
    for (long n = table.system.N; n >= 1; --n) {
        acc += table.rho_n[n] / table.q[n];
    }
    return acc;
}

double sigma1_kernel(const CycleDensityTable& table, const std::vector<double>& x) {
    const SystemSpec& s = table.system;
    if (static_cast<int>(x.size()) != s.d) {
        throw std::invalid_argument("sigma1_kernel: position dimension mismatch");
    }
    ThetaArgs args;
    args.d = s.d;
    args.x.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        args.x[i] = x[i] / s.L;
    }
    double acc = 0.0;
    for (long n = s.N; n >= 1; --n) {
        args.s = s.scale(n);
        acc += table.rho_n[n] * theta(args) / table.q[n];
    }
    return acc;
}

double sigma1_upper(const CycleDensityTable& table, const std::vector<double>& x) {
    const SystemSpec& s = table.system;
    double x2 = 0.0;
    for (double c : x) {
        x2 += c * c;
    }
    double acc = 0.0;
    for (long n = s.N; n >= 1; --n) {
        acc += table.rho_n[n] * std::exp(-kPi * x2 / (static_cast<double>(n) * s.lambda * s.lambda));
    }
    return acc;
}

double critical_density(int d, double lambda) {
    if (d <= 2) {
        return std::numeric_limits<double>::infinity();
    }
    return riemann_zeta(0.5 * d) / std::pow(lambda, d);
}

double free_energy_limit(int d, double lambda) {
    return -riemann_zeta(1.0 + 0.5 * d) / std::pow(lambda, d);
}

PartitionSample sample_partition(const CycleDensityTable& table, std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    std::mt19937_64 rng(seq);
    return sample_partition(table, rng);
}

std::vector<PartitionSample> sample_partitions(const CycleDensityTable& table, long count,
                                               std::uint64_t seed, unsigned threads) {
    std::vector<PartitionSample> out(static_cast<std::size_t>(std::max(0L, count)));
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    auto work = [&](unsigned worker) {
        for (long i = worker; i < count; i += threads) {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(i)};
            std::mt19937_64 rng(seq);
            out[i] = sample_partition(table, rng);
        }
    };
    if (threads == 1) {
        work(0);
        return out;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back(work, w);
    }
    for (auto& t : pool) {
        t.join();
    }
    return out;
}

}  // namespace bosecycle
