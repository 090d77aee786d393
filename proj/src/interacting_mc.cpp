#include "bosecycle/interacting_mc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "bosecycle/theta_kernel.hpp"

namespace bosecycle {

namespace {

std::mt19937_64 batch_rng(std::uint64_t seed, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
    return std::mt19937_64(seq);
}

constexpr std::uint32_t kTimesStream = 0xffffffffu;

/// Runs body(b) for b = 0..count-1 over a pool of threads.
void parallel_for(int count, unsigned threads, const std::function<void(int)>& body) {
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(1, count)));
    if (threads <= 1) {
        for (int b = 0; b < count; ++b) {
            body(b);
        }
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            for (int b = static_cast<int>(w); b < count; b += static_cast<int>(threads)) {
                body(b);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
}

MomentEstimate summarize(std::vector<double> batch_means, double closed_form) {
    MomentEstimate est;
    const double m = static_cast<double>(batch_means.size());
    double mean = 0.0;
    for (double v : batch_means) {
        mean += v;
    }
    mean /= m;
    double var = 0.0;
    for (double v : batch_means) {
        var += (v - mean) * (v - mean);
    }
    var /= (m - 1.0);
    est.mean = mean;
    est.std_error = std::sqrt(var / m);
    est.closed_form = closed_form;
    if (est.std_error > 0.0) {
        est.z_score = (mean - closed_form) / est.std_error;
    } else {
        est.z_score = mean == closed_form ? 0.0 : std::copysign(INFINITY, mean - closed_form);
    }
    est.batch_means = std::move(batch_means);
    return est;
}

struct PlusEntry {
    int j = 1;
    double t = 0.0;
    double weight = 0.0;  // j - 1 + t
};

std::vector<PlusEntry> expand_plus(const AlphaPattern& p, int n, long outside,
                                   const std::vector<double>& times) {
    std::vector<PlusEntry> out;
    const long N = n + outside;
    for (const PairCount& c : plus_pairs(p, n, static_cast<int>(N))) {
        for (int r = 0; r < c.alpha; ++r) {
            out.push_back({c.j, 0.0, 0.0});
        }
    }
    if (times.size() != out.size()) {
        throw std::invalid_argument("plus times do not match the expanded plus entries");
    }
    for (std::size_t e = 0; e < out.size(); ++e) {
        if (!(times[e] >= 0.0 && times[e] < 1.0)) {
            throw std::invalid_argument("plus times must lie in [0, 1)");
        }
        out[e].t = times[e];
        out[e].weight = out[e].j - 1.0 + times[e];
    }
    return out;
}

double sq_norm(const double* v, int d) {
    double acc = 0.0;
    for (int i = 0; i < d; ++i) {
        acc += v[i] * v[i];
    }
    return acc;
}

/// Gap-weighted steps (gap, multiplicity) of the intra pairs.
struct IntraTerm {
    int gap = 1;
    int alpha = 1;
};

std::vector<IntraTerm> intra_terms(const AlphaPattern& p, int n) {
    std::vector<IntraTerm> out;
    for (const PairCount& c : intra_pairs(p, n)) {
        out.push_back({c.k - c.j, c.alpha});
    }
    return out;
}

/// Adds -(1/n) Sum gap x to acc.
void accumulate_Y0(const std::vector<IntraTerm>& terms, int n, const PairPotential& u,
                   std::mt19937_64& rng, double* acc) {
    const int d = u.dim();
    double step[4];
    const double inv_n = 1.0 / n;
    for (const IntraTerm& term : terms) {
        const double w = -term.gap * inv_n;
        for (int r = 0; r < term.alpha; ++r) {
            u.sample_step(rng, step);
            for (int i = 0; i < d; ++i) {
                acc[i] += w * step[i];
            }
        }
    }
}

/// Adds (1/n) Sum_{e != first} c_e x_e to acc.
void accumulate_Yplus(const std::vector<double>& coeffs, int n, const PairPotential& u,
                      std::mt19937_64& rng, double* acc) {
    const int d = u.dim();
    double step[4];
    const double inv_n = 1.0 / n;
    for (std::size_t e = 1; e < coeffs.size(); ++e) {
        u.sample_step(rng, step);
        for (int i = 0; i < d; ++i) {
            acc[i] += coeffs[e] * inv_n * step[i];
        }
    }
}

void check_run(const MCRun& run, const PairPotential& u) {
    run.validate();
    if (u.dim() != run.d) {
        throw std::invalid_argument("MCRun: potential dimension differs from run dimension");
    }
}

}  // namespace

void MCRun::validate() const {
    pattern.validate();
    if (n < 1) {
        throw std::invalid_argument("MCRun: n must be >= 1");
    }
    if (outside < 0) {
        throw std::invalid_argument("MCRun: outside must be >= 0");
    }
    if (batches < 2) {
        throw std::invalid_argument("MCRun: need at least two batches");
    }
    if (samples_per_batch < 1) {
        throw std::invalid_argument("MCRun: samples_per_batch must be >= 1");
    }
    if (d < 1 || d > 4) {
        throw std::invalid_argument("MCRun: d must lie in 1..4");
    }
}

double y0_second_moment(const std::vector<PairCount>& intra, int n, double lambda_u) {
    double acc = 0.0;
    for (const PairCount& c : intra) {
        const double gap = c.k - c.j;
        acc += gap * gap * c.alpha;
    }
    return acc / (static_cast<double>(n) * n * lambda_u * lambda_u);
}

MomentEstimate simulate_Y0(const MCRun& run, const PairPotential& u) {
    check_run(run, u);
    const std::vector<IntraTerm> terms = intra_terms(run.pattern, run.n);
    const double closed = y0_second_moment(intra_pairs(run.pattern, run.n), run.n, u.lambda_u());
    std::vector<double> means(static_cast<std::size_t>(run.batches), 0.0);
    parallel_for(run.batches, run.threads, [&](int b) {
        std::mt19937_64 rng = batch_rng(run.seed, static_cast<std::uint32_t>(b));
        double acc = 0.0;
        for (long s = 0; s < run.samples_per_batch; ++s) {
            double y[4] = {0.0, 0.0, 0.0, 0.0};
            accumulate_Y0(terms, run.n, u, rng, y);
            acc += sq_norm(y, run.d);
        }
        means[b] = acc / static_cast<double>(run.samples_per_batch);
    });
    return summarize(std::move(means), closed);
}

std::vector<double> draw_plus_times(const MCRun& run) {
    const long N = run.n + run.outside;
    std::size_t count = 0;
    for (const PairCount& c : plus_pairs(run.pattern, run.n, static_cast<int>(N))) {
        count += static_cast<std::size_t>(c.alpha);
    }
    std::mt19937_64 rng = batch_rng(run.seed, kTimesStream);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> times(count);
    for (double& t : times) {
        t = unif(rng);
    }
    return times;
}

std::vector<double> plus_coefficients(const MCRun& run, const std::vector<double>& times) {
    const std::vector<PlusEntry> entries = expand_plus(run.pattern, run.n, run.outside, times);
    std::vector<double> c(entries.size(), 0.0);
    for (std::size_t e = 1; e < entries.size(); ++e) {
        c[e] = entries[e].weight - entries[0].weight;
    }
    return c;
}

YplusResult simulate_Yplus(const MCRun& run_in, const PairPotential& u, long outside) {
    MCRun run = run_in;
    run.outside = outside;
    check_run(run, u);
    YplusResult result;
    result.times = draw_plus_times(run);
    if (result.times.empty()) {
        result.degenerate = true;
        result.moment.batch_means.assign(static_cast<std::size_t>(run.batches), 0.0);
        return result;
    }
    const std::vector<PlusEntry> entries = expand_plus(run.pattern, run.n, run.outside, result.times);
    const std::vector<double> coeffs = plus_coefficients(run, result.times);
    double closed = 0.0;
    for (double c : coeffs) {
        closed += c * c;
    }
    const double lu = u.lambda_u();
    closed /= static_cast<double>(run.n) * run.n * lu * lu;

    const int d = run.d;
    const std::size_t m = entries.size();
    std::vector<double> means(static_cast<std::size_t>(run.batches), 0.0);
    std::vector<double> residual(static_cast<std::size_t>(run.batches), 0.0);
    std::vector<double> gap(static_cast<std::size_t>(run.batches), 0.0);
    parallel_for(run.batches, run.threads, [&](int b) {
        std::mt19937_64 rng = batch_rng(run.seed, static_cast<std::uint32_t>(b));
        std::vector<double> x(m * static_cast<std::size_t>(d), 0.0);
        double acc = 0.0;
        double worst_residual = 0.0;
        double worst_gap = 0.0;
        for (long s = 0; s < run.samples_per_batch; ++s) {
            double first[4] = {0.0, 0.0, 0.0, 0.0};
            for (std::size_t e = 1; e < m; ++e) {
                u.sample_step(rng, &x[e * d]);
                for (int i = 0; i < d; ++i) {
                    first[i] -= x[e * d + i];
                }
            }
            for (int i = 0; i < d; ++i) {
                x[i] = first[i];
            }
            double y_elim[4] = {0.0, 0.0, 0.0, 0.0};
            double y_full[4] = {0.0, 0.0, 0.0, 0.0};
            double z1[4] = {0.0, 0.0, 0.0, 0.0};
            for (std::size_t e = 0; e < m; ++e) {
                for (int i = 0; i < d; ++i) {
                    const double xi = x[e * d + i];
                    y_elim[i] += coeffs[e] * xi / run.n;
                    y_full[i] += entries[e].weight * xi / run.n;
                    z1[i] += xi;
                }
            }
            acc += sq_norm(y_elim, d);
            double diff[4];
            for (int i = 0; i < d; ++i) {
                diff[i] = y_full[i] - y_elim[i];
            }
            worst_residual = std::max(worst_residual, std::sqrt(sq_norm(z1, d)));
            worst_gap = std::max(worst_gap, std::sqrt(sq_norm(diff, d)));
        }
        means[b] = acc / static_cast<double>(run.samples_per_batch);
        residual[b] = worst_residual;
        gap[b] = worst_gap;
    });
    result.moment = summarize(std::move(means), closed);
    result.max_constraint_residual = *std::max_element(residual.begin(), residual.end());
    result.max_elimination_gap = *std::max_element(gap.begin(), gap.end());
    return result;
}

VarianceClosedForm variance_closed_form(const AlphaPattern& p, int n, long N, double lambda_u,
                                        const std::vector<double>& plus_times) {
    if (n < 1 || N < n) {
        throw std::invalid_argument("variance_closed_form: need 1 <= n <= N");
    }
    if (!(lambda_u > 0.0)) {
        throw std::invalid_argument("variance_closed_form: lambda_u must be positive");
    }
    const double nd = static_cast<double>(n);
    double second = 0.0;
    double variance = 0.0;
    for (const PairCount& c : intra_pairs(p, n)) {
        const double gap = c.k - c.j;
        second += gap * c.alpha;
        variance += gap * (1.0 - gap / nd) * c.alpha;
    }
    const std::vector<PlusEntry> entries = expand_plus(p, n, N - n, plus_times);
    for (std::size_t e = 1; e < entries.size(); ++e) {
        const double c = std::abs(entries[e].weight - entries[0].weight);
        second += c;
        variance += c * (1.0 - c / nd);
    }
    const double scale = 1.0 / (nd * lambda_u * lambda_u);
    VarianceClosedForm out;
    out.second_moment = second * scale;
    out.variance = variance * scale;
    const AlphaNorms norms = alpha_norms(p, n, static_cast<int>(N));
    out.norm_approximation = static_cast<double>(norms.total()) * scale;
    return out;
}

namespace {

double log_binomial(long n, long k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

void check_exponent_inputs(const ExponentInputs& in) {
    if (in.a < 1 || in.j < 1 || in.i < 0 || in.n < 1) {
        throw std::invalid_argument("exponent inputs: need a >= 1, j >= 1, i >= 0, n >= 1");
    }
    if (in.i > in.n - in.j) {
        throw std::invalid_argument("exponent inputs: i > n - j is combinatorially impossible");
    }
    if (!(in.beta_norm1 > 0.0) || !(in.lambda_u > 0.0) || !(in.lambda_beta >= 0.0)) {
        throw std::invalid_argument("exponent inputs: beta||u||, lambda_u must be positive");
    }
}

double bracket_term(const ExponentInputs& in) {
    const double a = in.a;
    return std::log(in.beta_norm1 / a) + 1.0 - std::log(2.0 * std::numbers::pi * a) / (2.0 * a);
}

}  // namespace

ExponentSuite exponent_suite(const ExponentInputs& in) {
    check_exponent_inputs(in);
    const double pi = std::numbers::pi;
    const double a = in.a;
    const double ij = static_cast<double>(in.i) * static_cast<double>(in.j);
    const double jd = static_cast<double>(in.j);
    ExponentSuite s;
    s.norm0 = 0.5 * a * ij * (jd + 1.0);
    s.entropy = log_binomial(in.n - in.j, in.i);
    s.weight_log = ij * (a * std::log(in.beta_norm1) - std::lgamma(a + 1.0)) + s.entropy;
    s.weight_stirling = a * ij * (std::log(in.beta_norm1) - std::log(a) + 1.0) -
                        0.5 * ij * std::log(2.0 * pi * a) + s.entropy;
    s.bracket = bracket_term(in);
    const double shape = 2.0 / (jd + 1.0);
    s.weight_norm_form = s.norm0 * shape * s.bracket + s.entropy;
    const double energy = pi * in.lambda_beta * in.lambda_beta *
                          (1.0 / (in.lambda_u * in.lambda_u) - in.c);
    s.E_av = -s.norm0 * (energy - shape * s.bracket) + s.entropy;
    s.E_markov = s.norm0 * (-in.A * energy + shape * s.bracket) + s.entropy;
    return s;
}

double random_exponent(const ExponentInputs& in, double variance_sample) {
    check_exponent_inputs(in);
    const double ij = static_cast<double>(in.i) * static_cast<double>(in.j);
    return -std::numbers::pi * in.lambda_beta * in.lambda_beta * static_cast<double>(in.n) * variance_sample +
           in.a * ij * bracket_term(in) + log_binomial(in.n - in.j, in.i);
}

double log_threshold_function(double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) {
        throw std::domain_error("threshold function: eps must lie in (0, 1]");
    }
    if (eps == 1.0) {
        return 0.0;
    }
    return std::log(eps) + ((1.0 - eps) / eps) * std::log1p(-eps);
}

double threshold_function(double eps) {
    return std::exp(log_threshold_function(eps));
}

double energy_entropy_exponent(double eps, double lambda_ratio, double A, double beta_norm1, double n) {
    if (!(beta_norm1 > 0.0)) {
        throw std::invalid_argument("energy_entropy_exponent: beta||u|| must be positive");
    }
    const double pi = std::numbers::pi;
    return eps *
           (-log_threshold_function(eps) - A * pi * lambda_ratio * lambda_ratio +
            std::log(std::numbers::e * beta_norm1 / std::sqrt(2.0 * pi))) *
           n;
}

EpsilonThreshold epsilon_threshold(double lambda_beta, double lambda_u, double A) {
    if (!(A > 1.0)) {
        throw std::invalid_argument("epsilon_threshold: A must exceed 1");
    }
    if (!(lambda_u > 0.0) || !(lambda_beta >= 0.0)) {
        throw std::invalid_argument("epsilon_threshold: lengths must be positive");
    }
    const double ratio = lambda_beta / lambda_u;
    const double X = A * std::numbers::pi * ratio * ratio;
    EpsilonThreshold out;
    out.lower = std::exp(-X);
    out.upper = std::min(1.0, std::exp(1.0 - X));
    if (X == 0.0) {
        out.star = 1.0;
        return out;
    }
    // f is increasing with f(lower) <= e^{-X} <= f(upper); bisect in log eps
    double lo = std::log(out.lower);
    double hi = std::log(out.upper);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (log_threshold_function(std::exp(mid)) < -X) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    out.star = std::clamp(std::exp(0.5 * (lo + hi)), out.lower, out.upper);
    return out;
}

namespace {

struct CycleMeanSampler {
    std::vector<IntraTerm> terms;
    std::vector<double> coeffs;
    double closed = 0.0;
};

CycleMeanSampler make_cycle_mean_sampler(const MCRun& run, const PairPotential& u) {
    CycleMeanSampler s;
    s.terms = intra_terms(run.pattern, run.n);
    const std::vector<double> times = draw_plus_times(run);
    if (!times.empty()) {
        s.coeffs = plus_coefficients(run, times);
    }
    double plus = 0.0;
    for (double c : s.coeffs) {
        plus += c * c;
    }
    const double lu = u.lambda_u();
    s.closed = y0_second_moment(intra_pairs(run.pattern, run.n), run.n, lu) +
               plus / (static_cast<double>(run.n) * run.n * lu * lu);
    return s;
}

}  // namespace

ConcentrationReport concentration_check(const MCRun& run, const PairPotential& u, double A,
                                        const std::vector<int>& n_grid) {
    if (!(A > 1.0)) {
        throw std::invalid_argument("concentration_check: A must exceed 1");
    }
    if (n_grid.size() < 2) {
        throw std::invalid_argument("concentration_check: need at least two grid points");
    }
    check_run(run, u);
    ConcentrationReport rep;
    rep.A = A;
    rep.chebyshev = 1.0 - 1.0 / (A * A);
    rep.n_grid = n_grid;
    std::sort(rep.n_grid.begin(), rep.n_grid.end());
    const double lu = u.lambda_u();

    for (std::size_t g = 0; g < rep.n_grid.size(); ++g) {
        MCRun r = run;
        r.n = rep.n_grid[g];
        r.validate();
        const CycleMeanSampler sampler = make_cycle_mean_sampler(r, u);
        const double cut = A * std::sqrt(sampler.closed);
        std::vector<double> sum_sq(static_cast<std::size_t>(r.batches), 0.0);
        std::vector<long> inside(static_cast<std::size_t>(r.batches), 0);
        parallel_for(r.batches, r.threads, [&](int b) {
            std::mt19937_64 rng = batch_rng(r.seed + 0x9e3779b97f4a7c15ULL * (g + 1),
                                            static_cast<std::uint32_t>(b));
            double acc = 0.0;
            long hits = 0;
            for (long s = 0; s < r.samples_per_batch; ++s) {
                double y[4] = {0.0, 0.0, 0.0, 0.0};
                accumulate_Y0(sampler.terms, r.n, u, rng, y);
                accumulate_Yplus(sampler.coeffs, r.n, u, rng, y);
                const double q = sq_norm(y, r.d);
                acc += q;
                if (std::sqrt(q) < cut) {
                    ++hits;
                }
            }
            sum_sq[b] = acc;
            inside[b] = hits;
        });
        std::vector<double> batch_means(sum_sq.size());
        for (std::size_t b = 0; b < sum_sq.size(); ++b) {
            batch_means[b] = sum_sq[b] / static_cast<double>(r.samples_per_batch);
        }
        rep.moments.push_back(summarize(std::move(batch_means), sampler.closed));
        double total = 0.0;
        long hits = 0;
        for (int b = 0; b < r.batches; ++b) {
            total += sum_sq[b];
            hits += inside[b];
        }
        const double count = static_cast<double>(r.batches) * static_cast<double>(r.samples_per_batch);
        rep.rms.push_back(std::sqrt(total / count));
        rep.rms_closed.push_back(std::sqrt(sampler.closed));

        int j0 = 0;
        for (const PairCount& c : intra_pairs(r.pattern, r.n)) {
            j0 = std::max(j0, c.k - c.j);
        }
        int j0p = 0;
        for (const PairCount& c : plus_pairs(r.pattern, r.n, static_cast<int>(r.n + r.outside))) {
            j0p = std::max(j0p, c.j);
        }
        const AlphaNorms norms = alpha_norms(r.pattern, r.n, static_cast<int>(r.n + r.outside));
        rep.rms_bound.push_back(std::sqrt(static_cast<double>(j0) * static_cast<double>(norms.zero) +
                                          static_cast<double>(j0p) * static_cast<double>(norms.plus)) /
                                (r.n * lu));
        if (g + 1 == rep.n_grid.size()) {
            rep.frequency = static_cast<double>(hits) / count;
        }
    }

    // least-squares slope of log rms against log n
    const double m = static_cast<double>(rep.n_grid.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t g = 0; g < rep.n_grid.size(); ++g) {
        const double x = std::log(static_cast<double>(rep.n_grid[g]));
        const double y = std::log(rep.rms[g]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    rep.decay_exponent = denom > 0.0 ? -(m * sxy - sx * sy) / denom : 0.0;
    return rep;
}

std::vector<Vec> sample_cycle_means(const MCRun& run, const PairPotential& u, long count) {
    check_run(run, u);
    const CycleMeanSampler sampler = make_cycle_mean_sampler(run, u);
    std::vector<Vec> out(static_cast<std::size_t>(std::max(0L, count)), Vec(run.d, 0.0));
    const int chunks = static_cast<int>(std::min<long>(count, run.batches));
    parallel_for(chunks, run.threads, [&](int b) {
        std::mt19937_64 rng = batch_rng(run.seed, static_cast<std::uint32_t>(b));
        for (long s = b; s < count; s += chunks) {
            double y[4] = {0.0, 0.0, 0.0, 0.0};
            accumulate_Y0(sampler.terms, run.n, u, rng, y);
            accumulate_Yplus(sampler.coeffs, run.n, u, rng, y);
            std::copy(y, y + run.d, out[s].begin());
        }
    });
    return out;
}

double rho_infty_c_integrand(long n, double lambda, double L, const std::vector<Vec>& samples) {
    if (n < 1) {
        throw std::invalid_argument("rho_infty_c_integrand: n must be >= 1");
    }
    if (samples.empty()) {
        throw std::invalid_argument("rho_infty_c_integrand: need at least one sample");
    }
    if (!(lambda > 0.0) || !(L > 0.0)) {
        throw std::invalid_argument("rho_infty_c_integrand: lambda and L must be positive");
    }
    const int d = static_cast<int>(samples.front().size());
    const double s = static_cast<double>(n) * lambda * lambda / (L * L);
    double acc = 0.0;
    Vec w(d);
    for (const Vec& y : samples) {
        if (static_cast<int>(y.size()) != d) {
            throw std::invalid_argument("rho_infty_c_integrand: samples differ in dimension");
        }
        for (int i = 0; i < d; ++i) {
            w[i] = L * y[i];
        }
        acc += std::exp(-log_denominator_sum(d, s, w));
    }
    return acc / static_cast<double>(samples.size());
}

}  // namespace bosecycle
