// Command-line driver for the scans and Monte Carlo checks.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bosecycle/config.hpp"
#include "bosecycle/cycle_kinematics.hpp"
#include "bosecycle/experiments.hpp"
#include "bosecycle/ideal_gas.hpp"
#include "bosecycle/interacting_mc.hpp"
#include "bosecycle/limit_shape.hpp"
#include "bosecycle/output.hpp"
#include "bosecycle/pair_potential.hpp"

using namespace bosecycle;

namespace {

struct McOptions {
    std::string pattern = "intracycle";
    int a = 1;
    int j0 = 2;
    double theta = 0.25;
    std::string gap = "log";
    int n = 1000;
    long outside = 0;
    int partners = 0;
    int plus_j0 = 1;
    int batches = 30;
    long samples = 1000;
    double Rc = 1.0;
    double A = 3.0;
    std::vector<long> n_grid{625, 1250, 2500, 5000, 10000};

    // exponent inputs
    long j = 1;
    long i = 10;
    double beta_norm1 = 1.0;
    double lambda_beta = 1.0;
    double lambda_u = 1.0;
    double c = 0.0;
    double eps = 0.01;

    void apply(const KeyValueConfig& cfg) {
        cfg.read("pattern", pattern);
        cfg.read("a", a);
        cfg.read("j0", j0);
        cfg.read("theta", theta);
        cfg.read("gap", gap);
        cfg.read("n", n);
        cfg.read("outside", outside);
        cfg.read("partners", partners);
        cfg.read("plus_j0", plus_j0);
        cfg.read("batches", batches);
        cfg.read("samples", samples);
        cfg.read("Rc", Rc);
        cfg.read("A", A);
        cfg.read("n_grid", n_grid);
        cfg.read("j", j);
        cfg.read("i", i);
        cfg.read("beta_norm1", beta_norm1);
        cfg.read("lambda_beta", lambda_beta);
        cfg.read("lambda_u", lambda_u);
        cfg.read("c", c);
        cfg.read("eps_value", eps);
    }

    AlphaPattern build(int n_value) const {
        AlphaPattern p;
        if (pattern == "intracycle") {
            p.kind = pattern::Intracycle{a, j0};
        } else if (pattern == "powerlaw") {
            p.kind = pattern::PowerLaw{a, theta};
        } else if (pattern == "lacunary") {
            GapFunction g = GapFunction::Log;
            if (gap == "sqrt") {
                g = GapFunction::Sqrt;
            } else if (gap == "doubling") {
                g = GapFunction::Doubling;
            } else if (gap != "log") {
                throw std::invalid_argument("unknown gap function: " + gap);
            }
            p.kind = pattern::Lacunary{a, j0, g};
        } else if (pattern == "boundary") {
            p.kind = boundary_block(n_value, j0);
        } else if (pattern == "none") {
            p.kind = pattern::Rational{};
        } else {
            throw std::invalid_argument("unknown pattern: " + pattern);
        }
        if (partners > 0) {
            p.plus = plus_block(a, plus_j0, partners);
        }
        return p;
    }
};

struct Common {
    ScanConfig scan;
    McOptions mc;
    std::string config_path;
    bool svg = false;
    long N = 4000;
    long count = 1000;
    std::string scaling = "finite";
};

void emit(const Common& c, const Table& t, const std::string& stem) {
    const std::string base = c.scan.output_dir + "/" + stem;
    write_csv(t, base + ".csv");
    write_json(to_json(t), base + ".json");
    std::cout << "wrote " << base << ".csv and .json\n";
}

void emit_svg(const Common& c, const SvgPlot& plot, const std::string& stem) {
    if (!c.svg) {
        return;
    }
    const std::string path = c.scan.output_dir + "/" + stem + ".svg";
    write_svg(plot, path);
    std::cout << "wrote " << path << "\n";
}

std::string tag(double rho_lambda_d) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "rho%.6g", rho_lambda_d);
    return buf;
}

std::vector<double> to_doubles(const std::vector<long>& v) {
    return {v.begin(), v.end()};
}

void finalize(Common& c) {
    if (!c.config_path.empty()) {
        const KeyValueConfig cfg = KeyValueConfig::load(c.config_path);
        static const std::set<std::string> known{
            "d", "lambda", "rho_lambda_d", "N_grid", "tail_c", "tail_gamma", "eps", "slow_exponent",
            "odlro_points", "fit_points", "seed", "threads", "output_dir", "pattern", "a", "j0", "theta", "gap", "n",
            "outside", "partners", "plus_j0", "batches", "samples", "Rc", "A", "n_grid", "j", "i", "beta_norm1",
            "lambda_beta", "lambda_u", "c", "eps_value", "N", "count", "scaling"};
        for (const auto& [key, value] : cfg.entries()) {
            if (known.count(key) == 0) {
                throw std::invalid_argument(c.config_path + ": unknown key '" + key + "'");
            }
        }
        c.scan.apply(cfg);
        c.mc.apply(cfg);
        cfg.read("N", c.N);
        cfg.read("count", c.count);
        cfg.read("scaling", c.scaling);
    }
    c.scan.validate();
}

void run_recursion(Common& c) {
    const SystemSpec sys = SystemSpec::from_density(c.scan.d, c.scan.lambda, c.scan.rho_lambda_d.front(), c.N);
    const std::vector<LogValue> logQ = partition_recursion(sys);
    const DeltaIdentityReport rep = delta_identity_check(sys);
    const std::vector<double> q = q_sequence(sys, 2);
    const double q2_check = std::abs(logQ[2].value() - 0.5 * (q[1] * q[1] + q[2])) / logQ[2].value();
    Table t;
    t.name = "recursion";
    t.meta["N"] = c.N;
    t.meta["L"] = sys.L;
    t.meta["max_identity_residual"] = rep.max_residual;
    t.meta["lower_bound_holds"] = rep.lower_bound_holds;
    t.meta["strictly_increasing"] = rep.strictly_increasing;
    t.meta["Q2_relative_error"] = q2_check;
    t.columns = {"M", "log_Q", "log_Qhat"};
    for (std::size_t m = 0; m < logQ.size(); ++m) {
        t.add_row({static_cast<double>(m), logQ[m].log_magnitude,
                   m < rep.log_qhat.size() ? rep.log_qhat[m].log_magnitude : NAN});
    }
    emit(c, t, "recursion");
    std::cout << "max identity residual " << rep.max_residual << ", strictly increasing "
              << (rep.strictly_increasing ? "yes" : "no") << ", Q2 relative error " << q2_check << "\n";
}

void run_densities(Common& c) {
    for (double r : c.scan.rho_lambda_d) {
        const CycleDensityTable t = density_table(c.scan, r, c.N);
        Table out;
        out.name = "densities";
        out.meta["N"] = c.N;
        out.meta["rho_lambda_d"] = r;
        out.meta["rho0_finite"] = condensate_density(t);
        out.columns = {"n", "q_n", "rho_n_over_rho"};
        for (long n = 1; n <= c.N; ++n) {
            out.add_row({static_cast<double>(n), t.q[n], t.rho_n[n] / t.rho()});
        }
        emit(c, out, "densities_" + tag(r));
    }
}

void run_condensate(Common& c) {
    SvgPlot plot{"condensate fraction", "N", "rho0/rho", true, {}};
    for (double r : c.scan.rho_lambda_d) {
        const CondensateScan s = scan_condensate(c.scan, r);
        emit(c, to_table(s), "condensate_" + tag(r));
        plot.series.push_back({tag(r), to_doubles(s.N), s.fraction});
        std::cout << tag(r) << ": extrapolated " << s.fit.a << " (limit " << s.limit << ")\n";
    }
    emit_svg(c, plot, "condensate");
}

void run_tail(Common& c) {
    SvgPlot plot{"tail mass above c N^(2/d)", "N", "mass/rho", true, {}};
    for (double r : c.scan.rho_lambda_d) {
        const TailScan s = scan_tail_threshold(c.scan, r);
        emit(c, to_table(s), "tail_" + tag(r));
        plot.series.push_back({tag(r), to_doubles(s.N), s.mass});
    }
    emit_svg(c, plot, "tail");
}

void run_macro(Common& c) {
    for (double r : c.scan.rho_lambda_d) {
        const MacroScan s = scan_macroscopic(c.scan, r);
        emit(c, to_table(s), "macro_" + tag(r));
    }
}

void run_slow(Common& c) {
    SvgPlot plot{"mass in cycles up to K_N", "N", "mass/rho", true, {}};
    for (double r : c.scan.rho_lambda_d) {
        const SlowScan s = scan_slow_cycles(c.scan, r);
        emit(c, to_table(s), "slow_" + tag(r));
        plot.series.push_back({tag(r) + " N^a", to_doubles(s.N), s.mass_power});
        plot.series.push_back({tag(r) + " N/lnN", to_doubles(s.N), s.mass_log});
    }
    emit_svg(c, plot, "slow");
}

void run_odlro(Common& c) {
    SvgPlot plot{"sigma1 along an axis", "x", "sigma1", false, {}};
    for (double r : c.scan.rho_lambda_d) {
        const OdlroProfile p = odlro_profile(c.scan, r, c.N);
        emit(c, to_table(p), "odlro_" + tag(r));
        plot.series.push_back({tag(r), p.x, p.sigma1});
        std::cout << tag(r) << ": sigma1(L/2) = " << p.sigma1.back() << ", rho0 = " << p.rho0_finite << "\n";
    }
    emit_svg(c, plot, "odlro");
}

void run_sample_partitions(Common& c) {
    const CycleDensityTable t = density_table(c.scan, c.scan.rho_lambda_d.front(), c.N);
    const auto samples = sample_partitions(t, c.count, c.scan.seed, c.scan.threads);
    Table out;
    out.name = "partitions";
    out.meta["N"] = c.N;
    out.meta["seed"] = c.scan.seed;
    out.columns = {"sample", "cycle_length"};
    for (std::size_t s = 0; s < samples.size(); ++s) {
        for (long len : samples[s].lengths) {
            out.add_row({static_cast<double>(s), static_cast<double>(len)});
        }
    }
    emit(c, out, "partitions");
}

void run_shape(Common& c) {
    const double r = c.scan.rho_lambda_d.front();
    const CycleDensityTable t = density_table(c.scan, r, c.N);
    const auto samples = sample_partitions(t, c.count, c.scan.seed, c.scan.threads);
    const bool macro = c.scaling == "macro";
    const double rho = t.rho();
    const double a = macro ? static_cast<double>(c.N) * condensate_density(t) / rho : 1.0;
    std::vector<double> grid;
    if (macro) {
        grid = default_shape_grid();
    } else {
        for (int k = 1; k <= 40; ++k) {
            grid.push_back(0.5 * k);
        }
    }
    const ShapeCurve curve = empirical_shape(samples, c.N, macro ? Scaling::Macroscopic : Scaling::Finite, a, grid);
    const ShapeParams params{c.scan.d, rho, c.scan.lambda, Normalization::PerParticle};
    Table out;
    out.name = "shape";
    out.meta["N"] = c.N;
    out.meta["scaling"] = c.scaling;
    out.meta["a"] = a;
    out.columns = {"t", "empirical", "stderr", "closed_form"};
    std::vector<double> closed;
    for (std::size_t g = 0; g < curve.grid.size(); ++g) {
        const double v = macro ? macroscopic_shape(curve.grid[g]) : finite_shape(curve.grid[g], params);
        closed.push_back(v);
        out.add_row({curve.grid[g], curve.values[g], curve.stderr_values[g], v});
    }
    emit(c, out, "shape_" + c.scaling);
    emit_svg(c, SvgPlot{"limit shape", "t", "shape", macro, {{"empirical", curve.grid, curve.values},
                                                             {"closed form", curve.grid, closed}}},
             "shape_" + c.scaling);
}

MCRun make_run(const Common& c, int n) {
    MCRun run;
    run.pattern = c.mc.build(n);
    run.n = n;
    run.outside = c.mc.outside;
    run.batches = c.mc.batches;
    run.samples_per_batch = c.mc.samples;
    run.seed = c.scan.seed;
    run.d = c.scan.d;
    run.threads = c.scan.threads;
    return run;
}

nlohmann::ordered_json moment_json(const MomentEstimate& m) {
    nlohmann::ordered_json j;
    j["empirical"] = m.mean;
    j["std_error"] = m.std_error;
    j["closed_form"] = m.closed_form;
    j["z_score"] = m.z_score;
    return j;
}

void run_mc_moments(Common& c) {
    const PairPotential u = PairPotential::ball(c.scan.d, c.mc.Rc);
    const MCRun run = make_run(c, c.mc.n);
    const MomentEstimate y0 = simulate_Y0(run, u);
    nlohmann::ordered_json j;
    j["pattern"] = c.mc.pattern;
    j["n"] = run.n;
    j["outside"] = run.outside;
    j["lambda_u"] = u.lambda_u();
    j["moments"]["Y0"] = moment_json(y0);
    std::vector<double> times;
    if (!run.pattern.plus.empty()) {
        const YplusResult yp = simulate_Yplus(run, u, run.outside);
        j["moments"]["Yplus"] = moment_json(yp.moment);
        j["moments"]["Yplus"]["max_constraint_residual"] = yp.max_constraint_residual;
        j["moments"]["Yplus"]["degenerate"] = yp.degenerate;
        times = yp.times;
    }
    const VarianceClosedForm v = variance_closed_form(run.pattern, run.n, run.n + run.outside, u.lambda_u(), times);
    j["closed_forms"]["variance"] = v.variance;
    j["closed_forms"]["second_moment"] = v.second_moment;
    j["closed_forms"]["norm_approximation"] = v.norm_approximation;
    j["z_scores"]["Y0"] = y0.z_score;
    const std::string path = c.scan.output_dir + "/mc_moments.json";
    write_json(j, path);
    std::cout << j.dump(2) << "\n";
}

void run_mc_exponents(Common& c) {
    ExponentInputs in;
    in.a = c.mc.a;
    in.j = c.mc.j;
    in.i = c.mc.i;
    in.n = c.mc.n;
    in.beta_norm1 = c.mc.beta_norm1;
    in.lambda_beta = c.mc.lambda_beta;
    in.lambda_u = c.mc.lambda_u;
    in.A = c.mc.A;
    in.c = c.mc.c;
    const ExponentSuite s = exponent_suite(in);
    const EpsilonThreshold eps = epsilon_threshold(in.lambda_beta, in.lambda_u, in.A);
    nlohmann::ordered_json j;
    j["inputs"] = {{"a", in.a}, {"j", in.j}, {"i", in.i}, {"n", in.n}, {"beta_norm1", in.beta_norm1},
                   {"lambda_beta", in.lambda_beta}, {"lambda_u", in.lambda_u}, {"A", in.A}, {"c", in.c}};
    j["norm0"] = s.norm0;
    j["entropy"] = s.entropy;
    j["weight_log"] = s.weight_log;
    j["weight_stirling"] = s.weight_stirling;
    j["weight_norm_form"] = s.weight_norm_form;
    j["E_av"] = s.E_av;
    j["E_markov"] = s.E_markov;
    j["energy_entropy"] = energy_entropy_exponent(c.mc.eps, in.lambda_beta / in.lambda_u, in.A, in.beta_norm1,
                                                  static_cast<double>(in.n));
    j["epsilon_threshold"] = {{"lower", eps.lower}, {"upper", eps.upper}, {"star", eps.star}};
    write_json(j, c.scan.output_dir + "/mc_exponents.json");
    std::cout << j.dump(2) << "\n";
}

void run_mc_concentration(Common& c) {
    const PairPotential u = PairPotential::ball(c.scan.d, c.mc.Rc);
    std::vector<int> grid(c.mc.n_grid.begin(), c.mc.n_grid.end());
    const MCRun run = make_run(c, grid.back());
    const ConcentrationReport rep = concentration_check(run, u, c.mc.A, grid);
    Table t;
    t.name = "concentration";
    t.meta["pattern"] = c.mc.pattern;
    t.meta["A"] = rep.A;
    t.meta["frequency"] = rep.frequency;
    t.meta["chebyshev"] = rep.chebyshev;
    t.meta["decay_exponent"] = rep.decay_exponent;
    t.columns = {"n", "rms", "rms_closed", "rms_bound"};
    for (std::size_t g = 0; g < rep.n_grid.size(); ++g) {
        t.add_row({static_cast<double>(rep.n_grid[g]), rep.rms[g], rep.rms_closed[g], rep.rms_bound[g]});
    }
    emit(c, t, "concentration");
    emit_svg(c, SvgPlot{"rms of the cycle mean", "n", "rms", true,
                        {{"empirical", to_doubles(c.mc.n_grid), rep.rms},
                         {"closed form", to_doubles(c.mc.n_grid), rep.rms_closed}}},
             "concentration");
    std::cout << "frequency " << rep.frequency << " (Chebyshev " << rep.chebyshev << "), decay exponent "
              << rep.decay_exponent << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Permutation-cycle statistics of the Bose gas"};
    app.require_subcommand(1);
    app.fallthrough();
    Common c;
    app.add_option("--d", c.scan.d, "Dimension");
    app.add_option("--lambda", c.scan.lambda, "Thermal wavelength");
    app.add_option("--rho-lambda-d", c.scan.rho_lambda_d, "Densities rho lambda^d");
    app.add_option("--N-grid", c.scan.N_grid, "Increasing particle numbers");
    app.add_option("--seed", c.scan.seed, "Random seed");
    app.add_option("--threads", c.scan.threads, "Worker threads (0 = all)");
    app.add_option("--out", c.scan.output_dir, "Output directory");
    app.add_option("--config", c.config_path, "key = value file; its entries override flags");
    app.add_flag("--svg", c.svg, "Also write SVG line plots");

    struct Sub {
        const char* name;
        const char* help;
        void (*fn)(Common&);
    };
    const Sub subs[] = {
        {"recursion", "Partition-function recursion and identity check", run_recursion},
        {"densities", "Cycle densities rho_n", run_densities},
        {"condensate-scan", "rho_0^{N,L}/rho along the N grid", run_condensate},
        {"tail-scan", "Mass above c N^{2/d} and N^gamma", run_tail},
        {"macro-scan", "Mass above eps N", run_macro},
        {"slow-scan", "Mass in cycles up to K_N", run_slow},
        {"odlro", "sigma1 profile on [0, L/2]", run_odlro},
        {"sample-partitions", "Exact cycle-structure draws", run_sample_partitions},
        {"shape", "Empirical and closed-form limit shapes", run_shape},
        {"mc-moments", "Monte Carlo moments of Y0 and Y+", run_mc_moments},
        {"mc-exponents", "Weight, entropy and exponent formulas", run_mc_exponents},
        {"mc-concentration", "Concentration of the cycle mean", run_mc_concentration},
    };
    std::vector<std::pair<CLI::App*, void (*)(Common&)>> handlers;
    for (const Sub& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        handlers.emplace_back(sub, s.fn);
        const std::string name = s.name;
        if (name == "recursion" || name == "densities" || name == "odlro" || name == "sample-partitions" ||
            name == "shape") {
            sub->add_option("--N", c.N, "Particle number");
        }
        if (name == "sample-partitions" || name == "shape") {
            sub->add_option("--count", c.count, "Number of draws");
        }
        if (name == "shape") {
            sub->add_option("--scaling", c.scaling, "finite or macro")->check(CLI::IsMember({"finite", "macro"}));
        }
        if (name.rfind("mc-", 0) == 0) {
            sub->add_option("--pattern", c.mc.pattern, "intracycle, powerlaw, lacunary, boundary or none");
            sub->add_option("--a", c.mc.a, "Multiplicity a");
            sub->add_option("--j0", c.mc.j0, "Largest gap j0");
            sub->add_option("--theta", c.mc.theta, "Power-law exponent");
            sub->add_option("--gap", c.mc.gap, "Lacunary set: log, sqrt or doubling");
            sub->add_option("--n", c.mc.n, "Cycle length");
            sub->add_option("--outside", c.mc.outside, "Particles outside the cycle");
            sub->add_option("--partners", c.mc.partners, "Outside partners of the plus block");
            sub->add_option("--plus-j0", c.mc.plus_j0, "Cycle particles in the plus block");
            sub->add_option("--batches", c.mc.batches, "Batches");
            sub->add_option("--samples", c.mc.samples, "Samples per batch");
            sub->add_option("--Rc", c.mc.Rc, "Support radius of the ball profile");
            sub->add_option("--A", c.mc.A, "Chebyshev or Markov factor");
            sub->add_option("--n-grid", c.mc.n_grid, "Cycle lengths for the decay fit");
            sub->add_option("--j", c.mc.j, "j of the exponent formulas");
            sub->add_option("--i", c.mc.i, "i of the exponent formulas");
            sub->add_option("--beta-norm1", c.mc.beta_norm1, "beta ||u_hat||_1");
            sub->add_option("--lambda-beta", c.mc.lambda_beta, "Thermal wavelength in the exponents");
            sub->add_option("--lambda-u", c.mc.lambda_u, "Interaction length in the exponents");
            sub->add_option("--c", c.mc.c, "Constant c of the averaged exponent");
            sub->add_option("--eps", c.mc.eps, "eps of the energy-entropy exponent");
        }
    }

    CLI11_PARSE(app, argc, argv);
    try {
        finalize(c);
        for (auto& [sub, fn] : handlers) {
            if (sub->parsed()) {
                fn(c);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
