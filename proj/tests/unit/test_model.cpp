#include "fixtures.hpp"

#include "nsk/error.hpp"
#include "nsk/model.hpp"

#include <boost/math/tools/roots.hpp>
#include <doctest.h>

#include <cmath>
#include <random>

using namespace nsk;

namespace {

// Independent root of (p(v-) - p(v+))(v+ - v-) = u+^2 by Boost's bisection.
double oracle_v_minus(const PressureLaw& p, double v_plus, double u_plus) {
    auto g = [&](double vm) { return (p.p(vm) - p.p(v_plus)) * (v_plus - vm) - u_plus * u_plus; };
    auto tol = [](double a, double b) { return std::abs(a - b) < 1e-15; };
    const auto [lo, hi] = boost::math::tools::bisect(g, 1e-9 * v_plus, v_plus * (1 - 1e-12), tol);
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("char_speed for p = 1/v") {
    const PressureLaw p{1.0, 1.0};
    CHECK(char_speed(p, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(char_speed(p, 2.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(char_speed(p, 1.7) == char_speed(p, 1.7));
    CHECK_THROWS_AS(char_speed(p, 0.0), Error);
}

TEST_CASE("pressure law derivatives agree with finite differences") {
    for (double gamma : {1.0, 1.4, 3.0}) {
        const PressureLaw p{1.3, gamma};
        for (double e = -3.0; e <= 3.0; e += 0.25) {
            const double v = std::pow(10.0, e);
            const double h = 1e-6 * v;
            CHECK(p.p(v) > 0.0);
            CHECK(p.dp(v) < 0.0);
            CHECK(p.d2p(v) > 0.0);
            const double fd1 = (p.p(v + h) - p.p(v - h)) / (2 * h);
            const double fd2 = (p.dp(v + h) - p.dp(v - h)) / (2 * h);
            CHECK(std::abs(fd1 - p.dp(v)) <= 1e-6 * std::abs(p.dp(v)));
            CHECK(std::abs(fd2 - p.d2p(v)) <= 1e-6 * std::abs(p.d2p(v)));
        }
    }
}

TEST_CASE("Rankine-Hugoniot: reference configurations") {
    const ModelParams a = fixtures::r2();
    CHECK(a.v_minus == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(a.s == doctest::Approx(0.7071067812).epsilon(1e-10));
    CHECK(a.u_minus == 0.0);
    CHECK(a.delta == a.v_plus - a.v_minus);

    const ModelParams b = fixtures::r1();
    CHECK(b.v_minus == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(b.s == doctest::Approx(0.9534625892).epsilon(1e-9));

    for (const ModelParams& p : {a, b}) {
        const auto [r1, r2] = rankine_hugoniot_residuals(p);
        CHECK(std::abs(r1) <= 1e-12);
        CHECK(std::abs(r2) <= 1e-12);
        CHECK(p.v_minus == doctest::Approx(oracle_v_minus(p.pressure, p.v_plus, p.u_plus)).epsilon(1e-12));
    }
}

TEST_CASE("Rankine-Hugoniot: error paths") {
    const PressureLaw p{1.0, 1.0};
    try {
        solve_rankine_hugoniot(p, 2.0, 0.0);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotTwoShock);
    }
    CHECK_THROWS_AS(solve_rankine_hugoniot(p, 2.0, 0.1), Error);
    CHECK_THROWS_AS(solve_rankine_hugoniot(p, -1.0, -0.1), Error);
    try {
        solve_rankine_hugoniot({1e-12, 1.0}, 2.0, -5.0);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::VacuumExceeded);
    }
}

TEST_CASE("Rankine-Hugoniot: randomized admissible shocks") {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> vp_dist(0.5, 5.0);
    std::uniform_real_distribution<double> frac(0.01, 0.5);
    for (int k = 0; k < 200; ++k) {
        const double v_plus = vp_dist(rng);
        const double v_minus = v_plus * (1.0 - frac(rng));
        const PressureLaw p{1.0, k % 2 == 0 ? 1.0 : 1.4};
        const double u_plus = -std::sqrt((p.p(v_minus) - p.p(v_plus)) * (v_plus - v_minus));
        const ModelParams m = solve_rankine_hugoniot(p, v_plus, u_plus);
        CHECK(m.v_minus == doctest::Approx(v_minus).epsilon(1e-9));
        const auto [lp, lm] = lax_entropy_margin(m);
        CHECK(lp > 0.0);
        CHECK(lm > 0.0);
        // (2.6)_1 recovers u_plus from v_minus and s.
        CHECK(std::abs(-m.s * (m.v_plus - m.v_minus) - u_plus) <= 1e-10);
    }
}

TEST_CASE("Lax margins") {
    const auto [a_plus, a_minus] = lax_entropy_margin(fixtures::r2());
    CHECK(a_plus == doctest::Approx(0.20711).epsilon(1e-4));
    CHECK(a_minus == doctest::Approx(0.29289).epsilon(1e-4));
    const auto [b_plus, b_minus] = lax_entropy_margin(fixtures::r1());
    CHECK(b_plus == doctest::Approx(0.04437).epsilon(1e-3));
    CHECK(b_minus == doctest::Approx(0.04654).epsilon(1e-3));
}

TEST_CASE("profile existence margin") {
    CHECK(std::abs(profile_existence_margin(fixtures::r2()) - 388.0) <= 1e-9);
    CHECK(profile_existence_margin(fixtures::r1()) == doctest::Approx(8.425).epsilon(1e-3));

    double previous = -1e300;
    for (double kappa : {1.0, 0.5, 0.1, 0.01, 0.001}) {
        const ModelParams m = solve_rankine_hugoniot({1.0, 1.0}, 2.0, fixtures::kR2UPlus, 10.0, kappa);
        const double margin = profile_existence_margin(m);
        CHECK(margin > previous);
        previous = margin;
    }
}
