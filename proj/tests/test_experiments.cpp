#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bosecycle/config.hpp"
#include "bosecycle/experiments.hpp"
#include "bosecycle/ideal_gas.hpp"
#include "bosecycle/output.hpp"
#include "bosecycle/special_functions.hpp"

using namespace bosecycle;

namespace {
const double kZeta32 = 2.61237534868548834334856756792;

ScanConfig small_scan() {
    ScanConfig c;
    c.N_grid = {100, 200, 400, 800};
    c.rho_lambda_d = {2.0 * kZeta32};
    c.odlro_points = 9;
    return c;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
}  // namespace

TEST_CASE("config grammar") {
    const KeyValueConfig cfg = KeyValueConfig::parse(
        "# scan settings\n"
        "d = 3\n"
        "\n"
        "rho_lambda_d = 1.5, 5.2   # two densities\n"
        "N_grid=500,1000\n"
        "output_dir = runs/a\n"
        "seed = 17\n");
    CHECK(cfg.get_long("d") == 3);
    CHECK(cfg.get_doubles("rho_lambda_d") == std::vector<double>{1.5, 5.2});
    CHECK(cfg.get_longs("N_grid") == std::vector<long>{500, 1000});
    CHECK(cfg.get_string("output_dir") == "runs/a");
    CHECK_FALSE(cfg.has("eps"));

    ScanConfig s;
    s.apply(cfg);
    CHECK(s.d == 3);
    CHECK(s.rho_lambda_d == std::vector<double>{1.5, 5.2});
    CHECK(s.N_grid == std::vector<long>{500, 1000});
    CHECK(s.seed == 17);
    CHECK(s.output_dir == "runs/a");
    CHECK(s.eps == std::vector<double>{0.1});
}

TEST_CASE("config errors") {
    CHECK_THROWS(KeyValueConfig::parse("d = 3\nd = 4\n"));
    CHECK_THROWS(KeyValueConfig::parse("no equals sign\n"));
    CHECK_THROWS(KeyValueConfig::parse("bad key! = 3\n"));
    const KeyValueConfig cfg = KeyValueConfig::parse("x = abc\nn = 2.5\nneg = -1\n");
    CHECK_THROWS(cfg.get_double("x"));
    CHECK_THROWS(cfg.get_long("n"));
    CHECK_THROWS(cfg.get_double("missing"));
    unsigned long u = 0;
    CHECK_THROWS(cfg.read("neg", u));
    CHECK_THROWS(KeyValueConfig::load("/nonexistent/run.cfg"));
}

TEST_CASE("scan validation") {
    ScanConfig c;
    c.validate();
    c.d = 7;
    CHECK_THROWS(c.validate());
    c = ScanConfig{};
    c.N_grid = {};
    CHECK_THROWS(c.validate());
    c.N_grid = {400, 100};
    CHECK_THROWS(c.validate());
    c = ScanConfig{};
    c.eps = {1.0};
    CHECK_THROWS(c.validate());
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 2.612375348685488, 1e-300, -7.25, 0.0}) {
        CHECK(std::stod(format_number(v)) == v);
    }
    CHECK(format_number(0.5) == "0.5");
}

TEST_CASE("table output") {
    Table t{"demo", {"N", "value"}, {}};
    t.add_row({1.0, 0.25});
    t.add_row({2.0, 0.5});
    t.meta["seed"] = 3;
    CHECK_THROWS(t.add_row({1.0}));
    CHECK(t.column("value") == std::vector<double>{0.25, 0.5});
    CHECK_THROWS(t.column("missing"));
    CHECK(to_csv(t) == "N,value\n1,0.25\n2,0.5\n");
    const auto j = to_json(t);
    CHECK(j["name"] == "demo");
    CHECK(j["meta"]["seed"] == 3);

    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "bosecycle_test_out" / "nested";
    std::filesystem::remove_all(dir.parent_path());
    write_csv(t, (dir / "demo.csv").string());
    write_json(j, (dir / "demo.json").string());
    CHECK(read_file((dir / "demo.csv").string()) == to_csv(t));
    CHECK(nlohmann::ordered_json::parse(read_file((dir / "demo.json").string())) == j);

    SvgPlot plot{"demo", "N", "value", true, {{"series", {1.0, 2.0}, {0.25, 0.5}}}};
    const std::string svg = render_svg(plot);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("series") != std::string::npos);
    std::filesystem::remove_all(dir.parent_path());
}

TEST_CASE("inverse-power fit recovers an exact law") {
    const std::vector<long> N{100, 200, 400, 800, 1600};
    std::vector<double> y;
    for (long n : N) {
        y.push_back(0.5 - 2.0 * std::pow(static_cast<double>(n), -1.0 / 3.0));
    }
    const PowerFit f = fit_inverse_power(N, y, 1.0 / 3.0, 4);
    CHECK(f.a == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(f.b == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(f.rms_residual < 1e-12);
    CHECK(f.points == 4);
    CHECK_THROWS(fit_inverse_power(N, y, 1.0 / 3.0, 1));
}

TEST_CASE("limiting condensate fraction") {
    CHECK(limit_condensate_fraction(3, 1.0, 2.0 * kZeta32) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(limit_condensate_fraction(3, 1.0, 0.5 * kZeta32) == 0.0);
    CHECK(limit_condensate_fraction(1, 1.0, 100.0) == 0.0);
}

TEST_CASE("scans are deterministic and tables are canonical") {
    ScanConfig c = small_scan();
    c.threads = 1;
    const CondensateScan a = scan_condensate(c, c.rho_lambda_d[0]);
    c.threads = 4;
    const CondensateScan b = scan_condensate(c, c.rho_lambda_d[0]);
    CHECK(to_csv(to_table(a)) == to_csv(to_table(b)));
    CHECK(to_json(to_table(a)).dump() == to_json(to_table(b)).dump());
    CHECK(to_csv(to_table(scan_tail_threshold(c, 2.0 * kZeta32))) ==
          to_csv(to_table(scan_tail_threshold(c, 2.0 * kZeta32))));
}

TEST_CASE("condensate scan trends") {
    const ScanConfig c = small_scan();
    const CondensateScan up = scan_condensate(c, 2.0 * kZeta32);
    const CondensateScan down = scan_condensate(c, 0.5 * kZeta32);
    // both approach their limits from above
    for (std::size_t i = 1; i < up.fraction.size(); ++i) {
        CHECK(up.fraction[i] < up.fraction[i - 1]);
        CHECK(down.fraction[i] < down.fraction[i - 1]);
    }
    CHECK(up.fraction.back() > up.limit);
    CHECK(up.limit == doctest::Approx(0.5));
    CHECK(down.limit == 0.0);
}

TEST_CASE("tail, macroscopic and slow-cycle scans") {
    const ScanConfig c = small_scan();
    const TailScan tail = scan_tail_threshold(c, 2.0 * kZeta32);
    for (std::size_t i = 0; i < tail.N.size(); ++i) {
        CHECK(tail.threshold[i] == doctest::Approx(std::pow(static_cast<double>(tail.N[i]), 2.0 / 3.0)));
        // N^{1/2} < N^{2/3}: the softer cut keeps more mass
        CHECK(tail.mass_gamma[i] >= tail.mass[i]);
    }
    const MacroScan macro = scan_macroscopic(c, 2.0 * kZeta32);
    for (std::size_t i = 0; i < macro.N.size(); ++i) {
        CHECK(macro.mass[i] >= 0.0);
        CHECK(macro.mass[i] <= 1.0);
    }
    ScanConfig big_eps = c;
    big_eps.eps = {0.9};
    const MacroScan none = scan_macroscopic(big_eps, 2.0 * kZeta32);
    CHECK(none.target_limit.back() == 0.0);
    const SlowScan slow = scan_slow_cycles(c, 0.5 * kZeta32);
    CHECK(slow.target == 1.0);
    for (std::size_t i = 0; i < slow.N.size(); ++i) {
        CHECK(slow.K_power[i] == static_cast<long>(std::floor(std::pow(static_cast<double>(slow.N[i]), 0.9))));
        CHECK(slow.mass_power[i] <= 1.0 + 1e-12);
    }
    // one dimension has no critical density, so all mass sits in finite cycles
    ScanConfig one = c;
    one.d = 1;
    const SlowScan s1 = scan_slow_cycles(one, 2.0);
    CHECK(s1.target == 1.0);
}

TEST_CASE("ODLRO profile") {
    const ScanConfig c = small_scan();
    const OdlroProfile p = odlro_profile(c, 2.0 * kZeta32, 800);
    REQUIRE(p.x.size() == 9);
    CHECK(p.x.front() == 0.0);
    CHECK(p.x.back() == doctest::Approx(0.5 * p.L));
    CHECK(p.sigma1.front() == doctest::Approx(p.rho).epsilon(1e-12));
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        CHECK(p.sandwich_lower[i] <= p.sandwich_upper[i]);
        if (i > 0) {
            CHECK(p.sigma1[i] <= p.sigma1[i - 1] + 1e-12);
        }
    }
    CHECK(p.K == static_cast<long>(std::floor(std::pow(800.0, 0.9))));
    CHECK(p.rho0_limit == doctest::Approx(0.5 * p.rho).epsilon(1e-6));
    CHECK(to_table(p).rows.size() == 9);
}

TEST_CASE("torus kernel approaches the Gaussian-mixture form") {
    // the gap comes from periodic images and closes as the box grows
    auto gap = [](long N) {
        const OdlroProfile p = odlro_profile(small_scan(), 2.0 * kZeta32, N);
        double g = 0.0;
        for (std::size_t i = 0; i < p.x.size(); ++i) {
            g = std::max(g, std::abs(p.sigma1[i] - p.upper[i]));
        }
        return g / p.rho;
    };
    const double g400 = gap(400);
    const double g1600 = gap(1600);
    const double g3200 = gap(3200);
    CHECK(g1600 < g400);
    CHECK(g3200 < g1600);
}

TEST_CASE("theorem-side condensate equals the ideal-gas sum") {
    for (double rl : {0.5 * kZeta32, 2.0 * kZeta32}) {
        const CycleDensityTable t = density_table(small_scan(), rl, 500);
        const double a = theorem_side_condensate(t);
        const double b = condensate_density(t);
        CHECK(std::abs(a - b) <= 1e-10 * b);
    }
}
