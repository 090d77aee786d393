// Acceptance checks. Each criterion prints one PASS/FAIL line; the exit code is
// nonzero if any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bosecycle/cycle_kinematics.hpp"
#include "bosecycle/experiments.hpp"
#include "bosecycle/ideal_gas.hpp"
#include "bosecycle/interacting_mc.hpp"
#include "bosecycle/limit_shape.hpp"
#include "bosecycle/theta_kernel.hpp"
#include "random_config.hpp"

using namespace bosecycle;

namespace {

const double kZeta32 = 2.61237534868548834334856756792;
const double kSuper = 2.0 * kZeta32;
const double kSub = 0.5 * kZeta32;

struct Outcome {
    bool pass = false;
    std::string detail;
};

class Timer {
  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

ScanConfig scan_config() {
    ScanConfig c;
    c.d = 3;
    c.lambda = 1.0;
    c.N_grid = {500, 1000, 2000, 4000};
    c.fit_points = 4;
    c.tail_c = 1.0;
    c.eps = {0.1};
    c.slow_exponent = 0.9;
    return c;
}

// Poisson duality over shifts and scales.
Outcome criterion1() {
    const double tol = 1e-10;
    const Timer timer;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> shift(-1.0, 1.0);
    double worst = 0.0;
    for (int d = 1; d <= 3; ++d) {
        for (double s : {1e-2, 1e-1, 1.0, 10.0, 100.0}) {
            const double scale = theta_direct({d, s, {}, {}}).value;
            for (int i = 0; i < 20; ++i) {
                ThetaArgs a{d, s, std::vector<double>(d), std::vector<double>(d)};
                for (int c = 0; c < d; ++c) {
                    a.w[c] = shift(rng);
                    a.x[c] = shift(rng);
                }
                const double diff = std::abs(theta_direct(a).value - theta_dual(a).value);
                worst = std::max(worst, diff / scale);
            }
        }
    }
    const double t = timer.seconds();
    return {worst <= tol && t < 1.0,
            "max relative difference " + fmt("%.3g", worst) + " (tol 1e-10), " + fmt("%.3f", t) + " s (limit 1 s)"};
}

// Q_2 identity, delta identity and monotonicity at N = 4000.
Outcome criterion2() {
    const Timer timer;
    bool ok = true;
    std::ostringstream out;
    for (double rl : {kSub, kSuper}) {
        const SystemSpec sys = SystemSpec::from_density(3, 1.0, rl, 4000);
        const std::vector<double> q = q_sequence(sys, 2);
        const std::vector<LogValue> logQ = partition_recursion(sys);
        const double q2_err = std::abs(logQ[2].value() / ((q[1] * q[1] + q[2]) / 2.0) - 1.0);
        const DeltaIdentityReport rep = delta_identity_check(sys);
        ok = ok && q2_err <= 1e-12 && rep.max_residual < 1e-9 && rep.strictly_increasing;
        out << "rho lambda^3 = " << fmt("%.4f", rl) << ": Q2 error " << fmt("%.2g", q2_err) << ", residual "
            << fmt("%.2g", rep.max_residual) << ", increasing " << (rep.strictly_increasing ? "yes" : "no")
            << "; ";
    }
    const double t = timer.seconds();
    out << fmt("%.1f", t) << " s (limit 30 s)";
    return {ok && t < 30.0, out.str()};
}

// Extrapolated condensate fractions.
Outcome criterion3() {
    const ScanConfig c = scan_config();
    const CondensateScan up = scan_condensate(c, kSuper);
    const CondensateScan down = scan_condensate(c, kSub);
    const bool ok = std::abs(up.fit.a - 0.5) <= 0.02 && std::abs(down.fit.a) <= 0.02;
    return {ok, "super-critical " + fmt("%.5f", up.fit.a) + " (target 0.50 +- 0.02), sub-critical " +
                    fmt("%.5f", down.fit.a) + " (target 0 +- 0.02)"};
}

// Macroscopic mass against rho0/rho - eps.
Outcome criterion4() {
    const MacroScan s = scan_macroscopic(scan_config(), kSuper);
    const double mass = s.mass.back();
    const double target = s.target.back();
    return {std::abs(mass - target) <= 0.02,
            "N = 4000: mass " + fmt("%.6f", mass) + ", rho0/rho - 0.1 = " + fmt("%.6f", target) + " (tol 0.02)"};
}

// Mass in cycles up to N^0.9 against rho_c.
Outcome criterion5() {
    const SlowScan s = scan_slow_cycles(scan_config(), kSuper);
    std::ostringstream out;
    out << "gap/rho along N:";
    for (double g : s.gap) {
        out << " " << fmt("%.4f", g);
    }
    out << " (tol 0.02 at N = 4000), monotone " << (s.gap_monotone ? "yes" : "no");
    return {s.gap.back() <= 0.02 && s.gap_monotone, out.str()};
}

// Tail mass above N^{2/3}.
Outcome criterion6() {
    const ScanConfig c = scan_config();
    const TailScan sub = scan_tail_threshold(c, kSub);
    const TailScan super = scan_tail_threshold(c, kSuper);
    bool decreasing = true;
    for (std::size_t i = 1; i < sub.mass.size(); ++i) {
        decreasing = decreasing && sub.mass[i] < sub.mass[i - 1];
    }
    double super_min = 1.0;
    for (double m : super.mass) {
        super_min = std::min(super_min, m);
    }
    const bool ok = decreasing && sub.mass.back() < 0.01 && super_min > 0.9 * super.limit;
    return {ok, "sub-critical tail/rho at N = 4000 " + fmt("%.3g", sub.mass.back()) + " (limit 0.01, decreasing " +
                    (decreasing ? "yes" : "no") + "), super-critical min tail/rho " + fmt("%.5f", super_min) +
                    " (floor " + fmt("%.4f", 0.9 * super.limit) + ")"};
}

// Off-diagonal plateau of sigma_1.
Outcome criterion7() {
    const ScanConfig c = scan_config();
    const OdlroProfile up = odlro_profile(c, kSuper, 4000);
    const OdlroProfile down = odlro_profile(c, kSub, 4000);
    const double at0 = std::abs(up.sigma1.front() - up.rho) / up.rho;
    const double plateau = std::abs(up.sigma1.back() - up.rho0_finite) / up.rho;
    const double sub_tail = down.sigma1.back() / down.rho;
    const bool ok = at0 <= 1e-10 && plateau <= 0.03 && sub_tail < 0.01;
    return {ok, "sigma1(0) relative error " + fmt("%.2g", at0) + ", |sigma1(L/2) - rho0|/rho " +
                    fmt("%.4f", plateau) + " (tol 0.03), sub-critical sigma1(L/2)/rho " + fmt("%.3g", sub_tail) +
                    " (limit 0.01)"};
}

// Closed-form kinematics against direct piecewise integration.
Outcome criterion8() {
    std::mt19937_64 rng(8);
    double worst_mean = 0.0;
    double worst_moment = 0.0;
    bool zero_sum = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const AlphaAssignment a = testing::random_assignment(rng);
        Vec total(static_cast<std::size_t>(a.d), 0.0);
        for (int l = 0; l < a.structure.cycles(); ++l) {
            const Vec closed = cycle_mean_closed(a, l);
            const Vec direct = cycle_mean_direct(a, l);
            for (std::size_t i = 0; i < closed.size(); ++i) {
                worst_mean = std::max(worst_mean, std::abs(closed[i] - direct[i]) / std::max(1.0, std::abs(direct[i])));
            }
            const Vec z = z_constraint(a, l);
            for (std::size_t i = 0; i < total.size(); ++i) {
                total[i] += z[i];
            }
        }
        const double direct = cycle_second_moment_direct(a, 0);
        worst_moment = std::max(worst_moment, std::abs(cycle_second_moment(a) - direct) / std::max(1.0, direct));
        for (double v : total) {
            zero_sum = zero_sum && v == 0.0;
        }
    }
    const bool ok = worst_mean <= 1e-12 && worst_moment <= 1e-12 && zero_sum;
    return {ok, "max cycle-mean error " + fmt("%.2g", worst_mean) + ", max second-moment error " +
                    fmt("%.2g", worst_moment) + " (tol 1e-12), zero sum exact " + (zero_sum ? "yes" : "no")};
}

// Monte Carlo moments and concentration for Intracycle(1, 2).
Outcome criterion9() {
    const Timer timer;
    const PairPotential u = PairPotential::ball(3, 1.0);
    MCRun run;
    run.pattern = AlphaPattern{pattern::Intracycle{1, 2}, {}};
    run.n = 10000;
    run.batches = 30;
    run.samples_per_batch = 1000;
    run.seed = 9;
    run.d = 3;
    const ConcentrationReport rep = concentration_check(run, u, 3.0, {1250, 2500, 5000, 10000});
    // without plus entries X0 = Y0
    const MomentEstimate& m = rep.moments.back();
    const double t = timer.seconds();
    const double floor = 1.0 - 1.0 / 9.0 - 0.02;
    const bool ok = std::abs(m.z_score) <= 3.0 && rep.frequency >= floor && rep.decay_exponent >= 0.45 &&
                    rep.decay_exponent <= 0.55 && t < 120.0;
    return {ok, "E|Y0|^2 " + fmt("%.6g", m.mean) + " vs " + fmt("%.6g", m.closed_form) + " (z = " +
                    fmt("%.2f", m.z_score) + ", tol 3), frequency " + fmt("%.4f", rep.frequency) + " (floor " +
                    fmt("%.4f", floor) + "), decay exponent " + fmt("%.4f", rep.decay_exponent) +
                    " (in [0.45, 0.55]), " + fmt("%.1f", t) + " s (limit 120 s)"};
}

// Threshold function bracket and epsilon_star location.
Outcome criterion10() {
    bool bracket = true;
    for (int i = 1; i <= 1000; ++i) {
        const double eps = i / 1001.0;
        const double f = threshold_function(eps);
        bracket = bracket && eps / std::exp(1.0) <= f && f <= eps;
    }
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> A_dist(1.0, 10.0);
    std::uniform_real_distribution<double> ratio_dist(0.05, 1.0);
    bool located = true;
    for (int i = 0; i < 20; ++i) {
        const double A = A_dist(rng);
        const double ratio = ratio_dist(rng);
        const double X = A * std::numbers::pi * ratio * ratio;
        const EpsilonThreshold e = epsilon_threshold(ratio, 1.0, A);
        located = located && e.star >= std::exp(-X) && e.star <= std::exp(-X + 1.0);
    }
    return {bracket && located, std::string("eps/e <= f(eps) <= eps on 1000 points: ") + (bracket ? "yes" : "no") +
                                    ", eps_star in [e^-X, e^(1-X)] for 20 pairs: " + (located ? "yes" : "no")};
}

// Limit shapes from exact partition samples.
Outcome criterion11() {
    const long N = 4000;
    const CycleDensityTable sub = cycle_densities(SystemSpec::from_density(3, 1.0, kSub, N));
    const std::vector<PartitionSample> sub_samples = sample_partitions(sub, 1000, 111);
    std::vector<double> finite_grid;
    for (int i = 0; i <= 38; ++i) {
        finite_grid.push_back(1.0 + 0.5 * i);
    }
    const ShapeCurve fc = empirical_shape(sub_samples, N, Scaling::Finite, 1.0, finite_grid);
    const ShapeParams sp{3, kSub, 1.0, Normalization::PerParticle};
    double finite_gap = 0.0;
    for (std::size_t i = 0; i < finite_grid.size(); ++i) {
        finite_gap = std::max(finite_gap, std::abs(fc.values[i] - finite_shape(finite_grid[i], sp)));
    }

    const CycleDensityTable super = cycle_densities(SystemSpec::from_density(3, 1.0, kSuper, N));
    const std::vector<PartitionSample> super_samples = sample_partitions(super, 1000, 112);
    const double rho0 = condensate_density(super);
    const double fraction = rho0 / super.rho();
    std::vector<double> macro_grid;
    for (int i = 0; i <= 16; ++i) {
        macro_grid.push_back(0.2 + 0.05 * i);
    }
    const ShapeCurve mc = empirical_shape(super_samples, N, Scaling::Macroscopic, fraction * static_cast<double>(N), macro_grid);
    double macro_gap = 0.0;
    for (std::size_t i = 0; i < macro_grid.size(); ++i) {
        macro_gap = std::max(macro_gap, std::abs(mc.values[i] - macroscopic_shape(macro_grid[i])));
    }

    // cycles holding at least a tenth of the particles
    const double x = 0.1;
    double sum = 0.0;
    double sum2 = 0.0;
    for (const PartitionSample& s : super_samples) {
        double count = 0.0;
        for (long k : s.lengths) {
            count += static_cast<double>(k) >= x * static_cast<double>(N) ? 1.0 : 0.0;
        }
        sum += count;
        sum2 += count * count;
    }
    const double m = static_cast<double>(super_samples.size());
    const double mean = sum / m;
    const double se = std::sqrt((sum2 / m - mean * mean) / (m - 1.0));
    const double expected = infinite_cycle_count(x, rho0, super.rho());
    const double z = (mean - expected) / se;

    const bool ok = finite_gap <= 0.05 && macro_gap <= 0.1 && std::abs(z) <= 3.0;
    return {ok, "finite sup-gap " + fmt("%.4f", finite_gap) + " (tol 0.05), macroscopic sup-gap " +
                    fmt("%.4f", macro_gap) + " (tol 0.1), count at x = 0.1 " + fmt("%.4f", mean) + " vs " +
                    fmt("%.4f", expected) + " (z = " + fmt("%.2f", z) + ", tol 3)"};
}

// Theorem-side integrand with a point mass against the ideal-gas condensate.
Outcome criterion12() {
    const ScanConfig c = scan_config();
    double worst = 0.0;
    for (double rl : {kSub, kSuper}) {
        const CycleDensityTable t = density_table(c, rl, 2000);
        const double a = theorem_side_condensate(t);
        const double b = condensate_density(t);
        worst = std::max(worst, std::abs(a - b) / b);
    }
    return {worst <= 1e-10, "max relative difference " + fmt("%.2g", worst) + " (tol 1e-10)"};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "Run a single criterion (1-12)")->check(CLI::Range(1, 12));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2,  criterion3,  criterion4,
                                                         criterion5, criterion6,  criterion7,  criterion8,
                                                         criterion9, criterion10, criterion11, criterion12};
    bool all = true;
    for (int k = 1; k <= 12; ++k) {
        if (only != 0 && k != only) {
            continue;
        }
        Outcome o;
        try {
            o = criteria[k - 1]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << "criterion " << k << ": " << (o.pass ? "PASS" : "FAIL") << ": " << o.detail << std::endl;
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
