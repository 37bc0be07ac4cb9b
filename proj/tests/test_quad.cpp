#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "isospec/errors.hpp"
#include "isospec/quad.hpp"

#include <cmath>

using namespace isospec;

TEST_CASE("panel rule is exact on low-order polynomials") {
    const auto r = quad::kronrod_panel([](double x) { return x * x * x - 2.0 * x + 1.0; },
                                       -1.0, 3.0);
    // antiderivative x^4/4 - x^2 + x: F(3) - F(-1) = (81/4 - 9 + 3) - (1/4 - 1 - 1)
    CHECK(r.value == doctest::Approx(16.0).epsilon(1e-14));
    CHECK(r.error < 1e-12);
}

TEST_CASE("adaptive integration") {
    CHECK(quad::integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12) ==
          doctest::Approx(2.0).epsilon(1e-13));
    const double whole = quad::integrate([](double x) { return std::exp(-2.0 * x); }, 0.0,
                                         4.0, 1e-13);
    const double split = quad::integrate([](double x) { return std::exp(-2.0 * x); }, 0.0,
                                         2.0, 1e-13) +
                         quad::integrate([](double x) { return std::exp(-2.0 * x); }, 2.0,
                                         4.0, 1e-13);
    CHECK(whole == doctest::Approx(split).epsilon(1e-13));
    CHECK(whole == doctest::Approx(0.5 * (1.0 - std::exp(-8.0))).epsilon(1e-12));
    // a genuinely nasty integrand still converges
    CHECK(quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 1e-12, 1.0, 1e-9) ==
          doctest::Approx(2.0 * (1.0 - 1e-6)).epsilon(1e-7));
}

TEST_CASE("cumulative integral of exp(-2x)") {
    const auto mu = [](double x) { return std::exp(-2.0 * x); };
    const auto ci = quad::build_cumulative(mu, -10.0, 10.0, 1e-10, 801);
    CHECK(ci(0.0) == doctest::Approx(0.0));
    for (double x : {-7.0, -2.0, -0.3, 0.4, 3.0, 9.5}) {
        const double exact = 0.5 * (1.0 - std::exp(-2.0 * x));
        CHECK(ci(x) == doctest::Approx(exact).epsilon(1e-9));
        CHECK(ci.derivative(x) == doctest::Approx(mu(x)).epsilon(1e-6));
    }
    CHECK_THROWS_AS(ci(10.5), domain_error);

    SUBCASE("tail classification and bracketing") {
        CHECK(ci.right_tail().kind == quad::TailKind::finite);
        CHECK(ci.left_tail().kind == quad::TailKind::divergent);
        const auto& t = ci.right_tail();
        CHECK(t.asymptote == doctest::Approx(0.5).epsilon(1e-7));
        CHECK(ci(10.0) <= t.asymptote);
        CHECK(ci(10.0) >= t.asymptote - t.uncertainty);
    }

    SUBCASE("inversion") {
        const auto x1 = quad::invert(ci, 0.4);
        REQUIRE(x1.has_value());
        CHECK(ci(*x1) == doctest::Approx(0.4).epsilon(1e-12));
        CHECK(!quad::invert(ci, 0.7).has_value()); // above Gamma(x_max)
        const auto x2 = quad::invert(ci, -100.0);
        REQUIRE(x2.has_value());
        CHECK(ci(*x2) == doctest::Approx(-100.0).epsilon(1e-10));
    }
}

TEST_CASE("signed cumulative integral") {
    // E(x) = int_0^x t dt = x^2/2, no positivity requirement
    const auto ci = quad::build_cumulative_signed([](double x) { return x; }, -6.0, 6.0,
                                                  1e-11, 801);
    for (double x : {-5.0, -1.0, 0.5, 2.0, 6.0})
        CHECK(ci(x) == doctest::Approx(0.5 * x * x).epsilon(1e-10));
}

TEST_CASE("guards") {
    CHECK_THROWS_AS(quad::build_cumulative([](double x) { return x; }, -1.0, 1.0, 1e-10, 101),
                    invalid_superpotential); // negative density
    CHECK_THROWS_AS(quad::build_cumulative([](double x) { return std::exp(800.0 * (x + 1.0)); },
                                           -1.0, 1.0, 1e-10, 101),
                    window_error); // overflows inside the window
    // 0 must lie strictly inside
    CHECK_THROWS_AS(quad::build_cumulative([](double) { return 1.0; }, 1.0, 2.0, 1e-10, 101),
                    error);
}

TEST_CASE("outward accumulation keeps the small side accurate") {
    // Density grows enormously to the left; the right-side values must still
    // carry full precision instead of being absorbed by the big side.
    const auto mu = [](double x) { return std::exp(-2.0 * x); };
    const auto ci = quad::build_cumulative(mu, -300.0, 10.0, 1e-10, 2001);
    CHECK(ci(-300.0) < -1e259); // e^600 / 2 scale
    CHECK(ci(5.0) == doctest::Approx(0.5 * (1.0 - std::exp(-10.0))).epsilon(1e-9));
    CHECK(ci(0.25) == doctest::Approx(0.5 * (1.0 - std::exp(-0.5))).epsilon(1e-9));
}
