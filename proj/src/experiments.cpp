#include "bosecycle/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "bosecycle/interacting_mc.hpp"
#include "bosecycle/special_functions.hpp"

namespace bosecycle {

void ScanConfig::apply(const KeyValueConfig& cfg) {
    cfg.read("d", d);
    cfg.read("lambda", lambda);
    cfg.read("rho_lambda_d", rho_lambda_d);
    cfg.read("N_grid", N_grid);
    cfg.read("tail_c", tail_c);
    cfg.read("tail_gamma", tail_gamma);
    cfg.read("eps", eps);
    cfg.read("slow_exponent", slow_exponent);
    cfg.read("odlro_points", odlro_points);
    cfg.read("fit_points", fit_points);
    unsigned long s = seed;
    cfg.read("seed", s);
    seed = s;
    unsigned long t = threads;
    cfg.read("threads", t);
    threads = static_cast<unsigned>(t);
    cfg.read("output_dir", output_dir);
}

void ScanConfig::validate() const {
    if (d < 1 || d > 4) {
        throw std::invalid_argument("ScanConfig: d must lie in 1..4");
    }
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("ScanConfig: lambda must be positive");
    }
    if (rho_lambda_d.empty()) {
        throw std::invalid_argument("ScanConfig: need at least one density");
    }
    for (double r : rho_lambda_d) {
        if (!(r > 0.0)) {
            throw std::invalid_argument("ScanConfig: densities must be positive");
        }
    }
    if (N_grid.empty()) {
        throw std::invalid_argument("ScanConfig: empty N grid");
    }
    for (std::size_t i = 0; i < N_grid.size(); ++i) {
        if (N_grid[i] < 1 || (i > 0 && N_grid[i] <= N_grid[i - 1])) {
            throw std::invalid_argument("ScanConfig: N grid must be positive and increasing");
        }
    }
    for (double e : eps) {
        if (!(e > 0.0 && e < 1.0)) {
            throw std::invalid_argument("ScanConfig: eps must lie in (0, 1)");
        }
    }
    if (!(tail_c > 0.0) || !(tail_gamma > 0.0) || !(slow_exponent > 0.0 && slow_exponent < 1.0)) {
        throw std::invalid_argument("ScanConfig: thresholds out of range");
    }
    if (odlro_points < 2 || fit_points < 2) {
        throw std::invalid_argument("ScanConfig: need at least two profile and fit points");
    }
}

CycleDensityTable density_table(const ScanConfig& cfg, double rho_lambda_d, long N) {
    return cycle_densities(SystemSpec::from_density(cfg.d, cfg.lambda, rho_lambda_d, N));
}

namespace {

/// Evaluates f on every grid point concurrently; results keep grid order.
template <typename F>
auto map_grid(const ScanConfig& cfg, F f) {
    using R = decltype(f(0L));
    std::vector<R> out;
    out.reserve(cfg.N_grid.size());
    const unsigned threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
    if (threads <= 1) {
        for (long N : cfg.N_grid) {
            out.push_back(f(N));
        }
        return out;
    }
    std::vector<std::future<R>> jobs;
    for (long N : cfg.N_grid) {
        jobs.push_back(std::async(std::launch::async, f, N));
    }
    for (auto& j : jobs) {
        out.push_back(j.get());
    }
    return out;
}

Table base_table(const std::string& name, const ScanConfig& cfg, double rho_lambda_d) {
    Table t;
    t.name = name;
    t.meta["d"] = cfg.d;
    t.meta["lambda"] = cfg.lambda;
    t.meta["rho_lambda_d"] = rho_lambda_d;
    return t;
}

}  // namespace

PowerFit fit_inverse_power(const std::vector<long>& N, const std::vector<double>& y, double p, int points) {
    if (N.size() != y.size() || points < 2 || static_cast<std::size_t>(points) > N.size()) {
        throw std::invalid_argument("fit_inverse_power: inconsistent inputs");
    }
    const std::size_t first = N.size() - static_cast<std::size_t>(points);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = first; i < N.size(); ++i) {
        const double x = std::pow(static_cast<double>(N[i]), -p);
        sx += x;
        sy += y[i];
        sxx += x * x;
        sxy += x * y[i];
    }
    const double m = points;
    PowerFit fit;
    fit.points = points;
    fit.b = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    fit.a = (sy - fit.b * sx) / m;
    double rss = 0.0;
    for (std::size_t i = first; i < N.size(); ++i) {
        const double r = y[i] - fit.a - fit.b * std::pow(static_cast<double>(N[i]), -p);
        rss += r * r;
    }
    fit.rms_residual = std::sqrt(rss / m);
    return fit;
}

double limit_condensate_fraction(int d, double lambda, double rho_lambda_d) {
    if (d <= 2) {
        return 0.0;
    }
    const double rho = rho_lambda_d / std::pow(lambda, d);
    return std::max(0.0, 1.0 - critical_density(d, lambda) / rho);
}

CondensateScan scan_condensate(const ScanConfig& cfg, double rho_lambda_d) {
    cfg.validate();
    CondensateScan s;
    s.rho_lambda_d = rho_lambda_d;
    s.N = cfg.N_grid;
    s.fraction = map_grid(cfg, [&](long N) {
        const CycleDensityTable t = density_table(cfg, rho_lambda_d, N);
        return condensate_density(t) / t.rho();
    });
    s.fit = fit_inverse_power(s.N, s.fraction, 1.0 / 3.0,
                              std::min<int>(cfg.fit_points, static_cast<int>(s.N.size())));
    s.limit = limit_condensate_fraction(cfg.d, cfg.lambda, rho_lambda_d);
    return s;
}

Table to_table(const CondensateScan& s) {
    Table t;
    t.name = "condensate";
    t.meta["rho_lambda_d"] = s.rho_lambda_d;
    t.meta["fit_a"] = s.fit.a;
    t.meta["fit_b"] = s.fit.b;
    t.meta["fit_rms_residual"] = s.fit.rms_residual;
    t.meta["fit_points"] = s.fit.points;
    t.meta["limit_fraction"] = s.limit;
    t.columns = {"N", "rho0_over_rho"};
    for (std::size_t i = 0; i < s.N.size(); ++i) {
        t.add_row({static_cast<double>(s.N[i]), s.fraction[i]});
    }
    return t;
}

TailScan scan_tail_threshold(const ScanConfig& cfg, double rho_lambda_d) {
    cfg.validate();
    TailScan s;
    s.rho_lambda_d = rho_lambda_d;
    s.N = cfg.N_grid;
    struct Row {
        double thr, mass, mass_gamma, fraction;
    };
    const auto rows = map_grid(cfg, [&](long N) {
        const CycleDensityTable t = density_table(cfg, rho_lambda_d, N);
        const double Nd = static_cast<double>(N);
        const double thr = cfg.tail_c * std::pow(Nd, 2.0 / cfg.d);
        return Row{thr, t.mass_above(thr) / t.rho(), t.mass_above(std::pow(Nd, cfg.tail_gamma)) / t.rho(),
                   condensate_density(t) / t.rho()};
    });
    for (const Row& r : rows) {
        s.threshold.push_back(r.thr);
        s.mass.push_back(r.mass);
        s.mass_gamma.push_back(r.mass_gamma);
        s.fraction.push_back(r.fraction);
    }
    s.limit = limit_condensate_fraction(cfg.d, cfg.lambda, rho_lambda_d);
    return s;
}

Table to_table(const TailScan& s) {
    Table t;
    t.name = "tail_threshold";
    t.meta["rho_lambda_d"] = s.rho_lambda_d;
    t.meta["limit_fraction"] = s.limit;
    t.columns = {"N", "threshold", "mass_above_threshold", "mass_above_N_gamma", "rho0_over_rho"};
    for (std::size_t i = 0; i < s.N.size(); ++i) {
        t.add_row({static_cast<double>(s.N[i]), s.threshold[i], s.mass[i], s.mass_gamma[i], s.fraction[i]});
    }
    return t;
}

MacroScan scan_macroscopic(const ScanConfig& cfg, double rho_lambda_d) {
    cfg.validate();
    MacroScan s;
    s.rho_lambda_d = rho_lambda_d;
    const double limit = limit_condensate_fraction(cfg.d, cfg.lambda, rho_lambda_d);
    struct Row {
        std::vector<double> mass;
        double fraction;
    };
    const auto rows = map_grid(cfg, [&](long N) {
        const CycleDensityTable t = density_table(cfg, rho_lambda_d, N);
        Row r;
        for (double e : cfg.eps) {
            r.mass.push_back(t.mass_above(e * static_cast<double>(N)) / t.rho());
        }
        r.fraction = condensate_density(t) / t.rho();
        return r;
    });
    for (std::size_t g = 0; g < cfg.N_grid.size(); ++g) {
        for (std::size_t e = 0; e < cfg.eps.size(); ++e) {
            s.N.push_back(cfg.N_grid[g]);
            s.eps.push_back(cfg.eps[e]);
            s.mass.push_back(rows[g].mass[e]);
            s.target.push_back(std::max(0.0, rows[g].fraction - cfg.eps[e]));
            s.target_limit.push_back(std::max(0.0, limit - cfg.eps[e]));
        }
    }
    return s;
}

Table to_table(const MacroScan& s) {
    Table t;
    t.name = "macroscopic";
    t.meta["rho_lambda_d"] = s.rho_lambda_d;
    t.columns = {"N", "eps", "mass_above_eps_N", "rho0_over_rho_minus_eps", "limit_minus_eps"};
    for (std::size_t i = 0; i < s.N.size(); ++i) {
        t.add_row({static_cast<double>(s.N[i]), s.eps[i], s.mass[i], s.target[i], s.target_limit[i]});
    }
    return t;
}

SlowScan scan_slow_cycles(const ScanConfig& cfg, double rho_lambda_d) {
    cfg.validate();
    SlowScan s;
    s.rho_lambda_d = rho_lambda_d;
    s.N = cfg.N_grid;
    const double rho = rho_lambda_d / std::pow(cfg.lambda, cfg.d);
    s.target = std::min(1.0, critical_density(cfg.d, cfg.lambda) / rho);
    struct Row {
        long Kp, Kl;
        double mp, ml;
    };
    const auto rows = map_grid(cfg, [&](long N) {
        const CycleDensityTable t = density_table(cfg, rho_lambda_d, N);
        const double Nd = static_cast<double>(N);
        const long Kp = static_cast<long>(std::floor(std::pow(Nd, cfg.slow_exponent)));
        const long Kl = N >= 3 ? static_cast<long>(std::floor(Nd / std::log(Nd))) : 1;
        return Row{Kp, Kl, t.mass_between(1.0, static_cast<double>(Kp)) / t.rho(),
                   t.mass_between(1.0, static_cast<double>(Kl)) / t.rho()};
    });
    for (const Row& r : rows) {
        s.K_power.push_back(r.Kp);
        s.mass_power.push_back(r.mp);
        s.K_log.push_back(r.Kl);
        s.mass_log.push_back(r.ml);
        s.gap.push_back(std::abs(r.mp - s.target));
    }
    s.gap_monotone = true;
    for (std::size_t i = 1; i < s.gap.size(); ++i) {
        if (!(s.gap[i] < s.gap[i - 1])) {
            s.gap_monotone = false;
        }
    }
    return s;
}

Table to_table(const SlowScan& s) {
    Table t;
    t.name = "slow_cycles";
    t.meta["rho_lambda_d"] = s.rho_lambda_d;
    t.meta["target_over_rho"] = s.target;
    t.meta["gap_monotone"] = s.gap_monotone;
    t.columns = {"N", "K_power", "mass_up_to_K_power", "K_log", "mass_up_to_K_log", "gap"};
    for (std::size_t i = 0; i < s.N.size(); ++i) {
        t.add_row({static_cast<double>(s.N[i]), static_cast<double>(s.K_power[i]), s.mass_power[i],
                   static_cast<double>(s.K_log[i]), s.mass_log[i], s.gap[i]});
    }
    return t;
}

OdlroProfile odlro_profile(const ScanConfig& cfg, double rho_lambda_d, long N) {
    cfg.validate();
    const CycleDensityTable t = density_table(cfg, rho_lambda_d, N);
    OdlroProfile p;
    p.rho_lambda_d = rho_lambda_d;
    p.N = N;
    p.L = t.system.L;
    p.rho = t.rho();
    p.rho0_finite = condensate_density(t);
    p.rho0_limit = p.rho * limit_condensate_fraction(cfg.d, cfg.lambda, rho_lambda_d);
    p.K = static_cast<long>(std::floor(std::pow(static_cast<double>(N), cfg.slow_exponent)));
    const double finite = t.mass_between(1.0, static_cast<double>(p.K));
    const double lam2 = cfg.lambda * cfg.lambda;
    for (int i = 0; i < cfg.odlro_points; ++i) {
        const double r = 0.5 * p.L * i / (cfg.odlro_points - 1);
        std::vector<double> x(static_cast<std::size_t>(cfg.d), 0.0);
        x[0] = r;
        p.x.push_back(r);
        p.sigma1.push_back(sigma1_kernel(t, x));
        p.upper.push_back(sigma1_upper(t, x));
        double decay = 0.0;
        for (long n = 1; n <= p.K; ++n) {
            decay += t.rho_n[n] * std::exp(-std::numbers::pi * r * r / (static_cast<double>(n) * lam2));
        }
        p.sandwich_lower.push_back(p.rho - finite);
        p.sandwich_upper.push_back(p.rho - finite + decay);
    }
    return p;
}

Table to_table(const OdlroProfile& p) {
    Table t;
    t.name = "odlro";
    t.meta["rho_lambda_d"] = p.rho_lambda_d;
    t.meta["N"] = p.N;
    t.meta["L"] = p.L;
    t.meta["rho"] = p.rho;
    t.meta["rho0_finite"] = p.rho0_finite;
    t.meta["rho0_limit"] = p.rho0_limit;
    t.meta["K"] = p.K;
    t.columns = {"x", "sigma1", "upper_bound", "sandwich_lower", "sandwich_upper"};
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        t.add_row({p.x[i], p.sigma1[i], p.upper[i], p.sandwich_lower[i], p.sandwich_upper[i]});
    }
    return t;
}

double theorem_side_condensate(const CycleDensityTable& table) {
    const int d = table.system.d;
    const std::vector<Vec> origin{Vec(static_cast<std::size_t>(d), 0.0)};
    std::vector<double> terms;
    for (long n = 1; n <= table.system.N; ++n) {
        terms.push_back(table.rho_n[n] *
                        rho_infty_c_integrand(n, table.system.lambda, table.system.L, origin));
    }
    std::sort(terms.begin(), terms.end());
    double acc = 0.0;
    for (double v : terms) {
        acc += v;
    }
    return acc;
}

}  // namespace bosecycle
