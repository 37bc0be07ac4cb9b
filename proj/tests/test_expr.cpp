#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "isospec/errors.hpp"
#include "isospec/expr.hpp"

#include <cmath>

using namespace isospec;

TEST_CASE("numbers and arithmetic") {
    CHECK(expr::parse("2+3*4", "x")(0.0) == doctest::Approx(14.0));
    CHECK(expr::parse("2*3^2", "x")(0.0) == doctest::Approx(18.0));
    CHECK(expr::parse("2^3^2", "x")(0.0) == doctest::Approx(512.0)); // right associative
    CHECK(expr::parse("7-2-1", "x")(0.0) == doctest::Approx(4.0));   // left associative
    CHECK(expr::parse("12/4/3", "x")(0.0) == doctest::Approx(1.0));
    CHECK(expr::parse("1.5e-3", "x")(7.0) == doctest::Approx(0.0015));
    CHECK(expr::parse("1E2", "x")(0.0) == doctest::Approx(100.0));
}

TEST_CASE("unary minus binds looser than the power") {
    const auto e = expr::parse("-x^2", "x");
    CHECK(e(3.0) == doctest::Approx(-9.0));
    CHECK(expr::parse("(-x)^2", "x")(3.0) == doctest::Approx(9.0));
    CHECK(expr::parse("x^-2", "x")(2.0) == doctest::Approx(0.25));
    CHECK(expr::parse("x--3", "x")(1.0) == doctest::Approx(4.0));
    CHECK(expr::parse("--5", "x")(0.0) == doctest::Approx(5.0));
}

TEST_CASE("unicode minus is accepted") {
    CHECK(expr::parse("5−3", "x")(0.0) == doctest::Approx(2.0));
    CHECK(expr::parse("−x", "x")(4.0) == doctest::Approx(-4.0));
}

TEST_CASE("builtins") {
    CHECK(expr::parse("sin(x)", "x")(1.2) == doctest::Approx(std::sin(1.2)));
    CHECK(expr::parse("cos(x)", "x")(1.2) == doctest::Approx(std::cos(1.2)));
    CHECK(expr::parse("tan(x)", "x")(0.3) == doctest::Approx(std::tan(0.3)));
    CHECK(expr::parse("exp(x)", "x")(2.0) == doctest::Approx(std::exp(2.0)));
    CHECK(expr::parse("ln(x)", "x")(2.0) == doctest::Approx(std::log(2.0)));
    CHECK(expr::parse("sqrt(x)", "x")(9.0) == doctest::Approx(3.0));
    CHECK(expr::parse("abs(x)", "x")(-2.5) == doctest::Approx(2.5));
    CHECK(expr::parse("sign(x)", "x")(-2.5) == doctest::Approx(-1.0));
    CHECK(expr::parse("sign(x)", "x")(0.0) == doctest::Approx(0.0));
}

TEST_CASE("free variable name is caller-chosen") {
    CHECK(expr::parse("u^2-1", "u")(3.0) == doctest::Approx(8.0));
    CHECK_THROWS_AS(expr::parse("u^2-1", "x"), parse_error);
}

TEST_CASE("parse errors carry byte offsets") {
    CHECK_THROWS_AS(expr::parse("", "x"), parse_error);
    CHECK_THROWS_AS(expr::parse("foo(3)", "x"), parse_error);
    CHECK_THROWS_AS(expr::parse("x y", "x"), parse_error);
    CHECK_THROWS_AS(expr::parse("(x+1", "x"), parse_error);
    CHECK_THROWS_AS(expr::parse("x+*2", "x"), parse_error);
    try {
        expr::parse("x+foo(3)", "x");
        CHECK(false);
    } catch (const parse_error& e) {
        CHECK(e.offset == 2);
        CHECK(std::string(e.what()).find("byte 2") != std::string::npos);
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(expr::parse("sqrt(x)", "x")(-1.0), domain_error);
    CHECK_THROWS_AS(expr::parse("ln(x)", "x")(0.0), domain_error);
    CHECK_THROWS_AS(expr::parse("1/x", "x")(0.0), domain_error);
    CHECK_THROWS_AS(expr::parse("x^0.5", "x")(-2.0), domain_error);
    CHECK_THROWS_AS(expr::parse("x^(-1)", "x")(0.0), domain_error);
    CHECK(expr::parse("x^3", "x")(-2.0) == doctest::Approx(-8.0)); // integer powers stay real
    CHECK(expr::parse("exp(x)", "x")(-800.0) == doctest::Approx(0.0)); // underflow is fine
    CHECK_THROWS_AS(expr::parse("exp(x)", "x")(800.0), domain_error); // overflow is not
}

TEST_CASE("differentiation") {
    const auto d1 = expr::differentiate(expr::parse("sin(x^2)", "x"));
    CHECK(d1(1.3) == doctest::Approx(2.0 * 1.3 * std::cos(1.3 * 1.3)));

    const auto d2 = expr::differentiate(expr::parse("x/(1+x^2)", "x"));
    const double x = 0.7;
    CHECK(d2(x) == doctest::Approx((1.0 - x * x) / ((1.0 + x * x) * (1.0 + x * x))));

    const auto d3 = expr::differentiate(expr::parse("x^x", "x"));
    CHECK(d3(2.0) == doctest::Approx(4.0 * (std::log(2.0) + 1.0)));

    const auto d4 = expr::differentiate(expr::parse("abs(x)", "x"));
    CHECK(d4(-3.0) == doctest::Approx(-1.0));
    CHECK(d4(3.0) == doctest::Approx(1.0));

    const auto d5 = expr::differentiate(expr::parse("sqrt(u)", "u"));
    CHECK(d5(4.0) == doctest::Approx(0.25));

    const auto d6 = expr::differentiate(expr::parse("3", "x"));
    CHECK(d6(5.0) == doctest::Approx(0.0));
}

TEST_CASE("render round-trips structurally") {
    for (const char* src : {"x^2+1", "sqrt(u)", "u^2-1", "sin(u)", "x-1",
                            "-x^2", "(-x)^2", "x^-2", "x*(x+1)/(x-2)", "2^3^2",
                            "exp(-x^2/2)*sin(3*x)", "x--3", "1/(1+exp(-x))"}) {
        const char* var = std::string(src).find('u') != std::string::npos ? "u" : "x";
        const auto e = expr::parse(src, var);
        const auto back = expr::parse(expr::render(e), var);
        INFO(src << " -> " << expr::render(e));
        CHECK(expr::same_structure(e, back));
        // and the rendered form evaluates identically
        const double at = 3.3;
        bool threw1 = false, threw2 = false;
        double v1 = 0, v2 = 0;
        try {
            v1 = e(at);
        } catch (const domain_error&) {
            threw1 = true;
        }
        try {
            v2 = back(at);
        } catch (const domain_error&) {
            threw2 = true;
        }
        CHECK(threw1 == threw2);
        if (!threw1) CHECK(v1 == doctest::Approx(v2).epsilon(1e-14));
    }
}

TEST_CASE("structural comparison is not commutative blind") {
    CHECK(!expr::same_structure(expr::parse("x+1", "x"), expr::parse("1+x", "x")));
    CHECK(expr::same_structure(expr::parse("x+1", "x"), expr::parse("x + 1", "x")));
}

TEST_CASE("constant folding keeps evaluation exact") {
    const auto e = expr::parse("2*3+x*0^2", "x"); // folds to 6 + x*0
    CHECK(e(123.0) == doctest::Approx(6.0));
    // deferred domain error: folding must not hide 1/0 behind a literal
    CHECK_THROWS_AS(expr::parse("x+1/0", "x")(1.0), domain_error);
}
