#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "bosecycle/special_functions.hpp"

using namespace bosecycle;

namespace {
bool rel_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(b), 1e-300);
}
}  // namespace

TEST_CASE("zeta at classical points") {
    CHECK(rel_close(riemann_zeta(2.0), std::numbers::pi * std::numbers::pi / 6.0, 1e-13));
    CHECK(rel_close(riemann_zeta(4.0), std::pow(std::numbers::pi, 4) / 90.0, 1e-13));
}

TEST_CASE("zeta against high-precision values") {
    CHECK(rel_close(riemann_zeta(1.5), 2.61237534868548834334856756792, 1e-13));
    CHECK(rel_close(riemann_zeta(2.5), 1.34148725725091717975676969335, 1e-13));
    CHECK(rel_close(riemann_zeta(3.0), 1.20205690315959428539973816151, 1e-13));
    CHECK(rel_close(riemann_zeta(1.1), 10.5844484649508009509826043743, 1e-12));
}

TEST_CASE("zeta continued below one") {
    CHECK(rel_close(detail::zeta_continued(0.5), -1.46035450880958681288949915252, 1e-12));
    CHECK(rel_close(detail::zeta_continued(-1.5), -0.0254852018898330359495429869107, 1e-11));
    CHECK(detail::zeta_continued(-2.0) == 0.0);
}

TEST_CASE("zeta tails") {
    CHECK(rel_close(zeta_tail(1.5, 10), 0.648661631941570422146862910654, 1e-12));
    CHECK(rel_close(zeta_tail(2.5, 1000), 0.0000210976690441667667583195099471, 1e-12));
    CHECK(rel_close(zeta_tail(1.2, 7), 3.43783494893167745480845953732, 1e-12));
    CHECK(rel_close(zeta_tail(1.5, 1), riemann_zeta(1.5), 1e-14));
}

TEST_CASE("zeta rejects the pole and below") {
    CHECK_THROWS_AS(riemann_zeta(1.0), std::domain_error);
    CHECK_THROWS_AS(riemann_zeta(0.5), std::domain_error);
    CHECK_THROWS_AS(zeta_tail(2.0, 0), std::domain_error);
}

TEST_CASE("polylog values") {
    struct Case {
        double s, z, expect;
    };
    const Case cases[] = {
        {1.5, 0.5, 0.624837020819913853633819312946},
        {1.5, 0.3, 0.338311095544806269298519907434},
        {1.5, 0.99, 2.27166007700799913478069175394},
        {1.5, 0.9999, 2.5770714271060568111991216087},
        {1.5, 0.999999, 2.60883190045253402378409154042},
        {2.5, 0.9, 1.13900302520215679463909820597},
        {2.0, 0.5, 0.58224052646501250590265632016},
        {3.0, 0.7, 0.780063934257661504460282467358},
        {3.5, 0.95, 1.06083065449878605669611493792},
    };
    for (const Case& c : cases) {
        CAPTURE(c.s);
        CAPTURE(c.z);
        CHECK(rel_close(polylog(c.s, c.z), c.expect, 1e-12));
    }
}

TEST_CASE("polylog boundary values") {
    CHECK(polylog(1.5, 0.0) == 0.0);
    CHECK(rel_close(polylog(1.5, 1.0), riemann_zeta(1.5), 1e-14));
    CHECK(rel_close(polylog(2.5, 1.0), 1.34148725725091717975676969335, 1e-13));
    const double ln2 = std::log(2.0);
    CHECK(rel_close(polylog(2.0, 0.5), std::numbers::pi * std::numbers::pi / 12.0 - 0.5 * ln2 * ln2, 1e-12));
}

TEST_CASE("polylog is monotone in z") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int k = 0; k < 500; ++k) {
        const double s = 1.05 + 3.0 * unif(rng);
        double a = unif(rng);
        double b = unif(rng);
        if (a > b) {
            std::swap(a, b);
        }
        if (b - a < 1e-9) {
            continue;
        }
        CAPTURE(s);
        CAPTURE(a);
        CAPTURE(b);
        CHECK(polylog(s, a) < polylog(s, b));
    }
}

TEST_CASE("invert_polylog round trip") {
    for (double s : {1.5, 2.0, 2.5}) {
        const double zs = riemann_zeta(s);
        for (int k = 0; k <= 40; ++k) {
            const double target = zs * k / 40.0;
            const double z = invert_polylog(s, target);
            CAPTURE(s);
            CAPTURE(target);
            CHECK(std::abs(polylog(s, z) - target) <= 10.0 * 1e-12 * std::max(1.0, target));
        }
    }
    CHECK(invert_polylog(1.5, 0.0) == 0.0);
    CHECK(invert_polylog(1.5, riemann_zeta(1.5)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(invert_polylog(1.5, 1.0) == doctest::Approx(0.698614359135065034696243121817).epsilon(1e-11));
}

TEST_CASE("invert_polylog saturates above zeta") {
    CHECK_THROWS_AS(invert_polylog(1.5, 2.7), SaturationError);
    CHECK_THROWS_AS(invert_polylog(1.5, -0.1), std::domain_error);
}

TEST_CASE("tolerance must be sensible") {
    CHECK_THROWS_AS(Tolerance(0.0), std::invalid_argument);
    CHECK_THROWS_AS(Tolerance(0.1), std::invalid_argument);
    CHECK_NOTHROW(Tolerance(1e-10));
    CHECK(rel_close(riemann_zeta(1.5, Tolerance(1e-6)), riemann_zeta(1.5), 1e-6));
}
