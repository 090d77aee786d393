#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "bosecycle/ideal_gas.hpp"
#include "bosecycle/limit_shape.hpp"
#include "bosecycle/special_functions.hpp"

using namespace bosecycle;

namespace {
bool rel_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(b), 1e-300);
}

const double kZeta32 = 2.61237534868548834334856756792;
const ShapeParams kSub{3, 0.5 * kZeta32, 1.0, Normalization::PerParticle};
const ShapeParams kSuper{3, 2.0 * kZeta32, 1.0, Normalization::PerParticle};
}  // namespace

TEST_CASE("finite shape against series evaluations") {
    CHECK(rel_close(finite_shape(1.0, kSub), 0.76320750434006881443550268601, 1e-12));
    CHECK(rel_close(finite_shape(3.0, kSub), 0.0484881347669491060571864105216, 1e-12));
    CHECK(rel_close(finite_shape(3.0, kSuper), 0.0315250566954630764637265778774, 1e-12));
    // non-integer t rounds up to the next cycle length
    CHECK(finite_shape(2.5, kSub) == finite_shape(3.0, kSub));
}

TEST_CASE("cycle fractions") {
    CHECK(rel_close(limit_cycle_fraction(1, 3, kSuper.rho, 1.0, Normalization::PerFiniteParticle), 1.0 / kZeta32,
                    1e-13));
    CHECK(rel_close(limit_cycle_fraction(4, 3, kSuper.rho, 1.0, Normalization::PerFiniteParticle),
                    1.0 / (32.0 * kZeta32), 1e-13));
    // very dilute: z ~ rho lambda^d
    const double rho = 1e-6;
    const double z = invert_polylog(1.5, rho);
    CHECK(rel_close(limit_cycle_fraction(2, 3, rho, 1.0), z * z / (std::pow(2.0, 2.5) * rho), 1e-12));
    CHECK(rel_close(limit_cycle_fraction(1, 3, rho, 1.0), 1.0, 1e-5));
    CHECK_THROWS(limit_cycle_fraction(0, 3, 1.0, 1.0));
    CHECK_THROWS(limit_cycle_fraction(1, 2, 1.0, 1.0));
}

TEST_CASE("particle fractions sum to min(1, rho_c / rho)") {
    for (double rl : {0.2, 0.5 * kZeta32, 0.99 * kZeta32, 2.0 * kZeta32, 5.0}) {
        const double z = rl < kZeta32 ? invert_polylog(1.5, rl) : 1.0;
        for (long k : {1L, 2L, 7L, 50L}) {
            CHECK(rel_close(limit_cycle_fraction(k, 3, rl, 1.0), std::pow(z, k) / (std::pow(k, 2.5) * rl), 1e-12));
        }
        // Sum_k k z^k / k^{5/2} = Li_{3/2}(z)
        CAPTURE(rl);
        CHECK(rel_close(polylog(1.5, z) / rl, std::min(1.0, kZeta32 / rl), 1e-10));
    }
}

TEST_CASE("normalizations differ by the condensate factor") {
    const ShapeParams per_finite{3, kSuper.rho, 1.0, Normalization::PerFiniteParticle};
    CHECK(rel_close(finite_shape(2.0, per_finite) * kZeta32, finite_shape(2.0, kSuper) * kSuper.rho, 1e-13));
    // below the critical point the two coincide
    const ShapeParams sub_finite{3, kSub.rho, 1.0, Normalization::PerFiniteParticle};
    CHECK(finite_shape(2.0, sub_finite) == finite_shape(2.0, kSub));
}

TEST_CASE("shapes are nonincreasing") {
    double prev_sub = finite_shape(0.1, kSub);
    double prev_super = finite_shape(0.1, kSuper);
    double prev_macro = macroscopic_shape(0.1 / 20.0);
    for (double t = 0.1; t < 40.0; t *= 1.1) {
        CHECK(finite_shape(t, kSub) <= prev_sub);
        CHECK(finite_shape(t, kSuper) <= prev_super);
        CHECK(macroscopic_shape(t / 20.0) <= prev_macro);
        prev_sub = finite_shape(t, kSub);
        prev_super = finite_shape(t, kSuper);
        prev_macro = macroscopic_shape(t / 20.0);
    }
}

TEST_CASE("macroscopic shape and infinite cycle counts") {
    CHECK(macroscopic_shape(1.0) == 0.0);
    CHECK(macroscopic_shape(2.0) == 0.0);
    CHECK(macroscopic_shape(std::exp(-1.0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS(macroscopic_shape(0.0));
    CHECK(infinite_cycle_count(0.5, 1.0, 2.0) == 0.0);
    CHECK(infinite_cycle_count(0.5 / std::exp(1.0), 1.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    // one expected cycle per interval [e^{-(m+1)}, e^{-m}) of the fraction, scaled by rho0/rho
    for (int m = 0; m < 5; ++m) {
        const double hi = 0.5 * std::exp(-m);
        const double lo = 0.5 * std::exp(-(m + 1));
        CHECK(infinite_cycle_count(lo, 1.0, 2.0) - infinite_cycle_count(hi, 1.0, 2.0) ==
              doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("empirical shape from single-particle samples is a step") {
    const std::vector<PartitionSample> samples(5, PartitionSample{{1}});
    const ShapeCurve c = empirical_shape(samples, 1, Scaling::Finite, 1.0, {0.25, 0.5, 1.0, 1.5, 3.0});
    CHECK(c.values == std::vector<double>{1.0, 1.0, 1.0, 0.0, 0.0});
    for (double se : c.stderr_values) {
        CHECK(se == 0.0);
    }
    CHECK_THROWS(empirical_shape(samples, 1, Scaling::Finite, 1.0, {}));
    CHECK_THROWS(empirical_shape({}, 1, Scaling::Finite, 1.0));
}

TEST_CASE("empirical curves are nonincreasing and follow the sub-critical law") {
    const long N = 1000;
    const CycleDensityTable t = cycle_densities(SystemSpec::from_density(3, 1.0, kSub.rho, N));
    const std::vector<PartitionSample> samples = sample_partitions(t, 300, 5, 0);
    std::vector<double> grid;
    for (int k = 1; k <= 20; ++k) {
        grid.push_back(k);
    }
    const ShapeCurve c = empirical_shape(samples, N, Scaling::Finite, 1.0, grid);
    for (std::size_t i = 1; i < c.values.size(); ++i) {
        CHECK(c.values[i] <= c.values[i - 1]);
    }
    double gap = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        gap = std::max(gap, std::abs(c.values[i] - finite_shape(grid[i], kSub)));
    }
    CHECK(gap < 0.05);
}

TEST_CASE("default grid") {
    const std::vector<double> g = default_shape_grid();
    REQUIRE(g.size() == 40);
    CHECK(g.front() == doctest::Approx(0.02));
    CHECK(g.back() == doctest::Approx(2.0));
    for (std::size_t i = 1; i < g.size(); ++i) {
        CHECK(g[i] > g[i - 1]);
    }
}
