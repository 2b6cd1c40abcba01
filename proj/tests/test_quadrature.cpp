#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cuspdiv/errors.hpp"
#include "cuspdiv/quadrature.hpp"

using namespace cuspdiv;

TEST_CASE("gauss-kronrod handles smooth integrands") {
    auto r = quad::integrate([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    r = quad::integrate([](double x) { return std::sin(x); }, 0.0, M_PI);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));

    // reversed limits flip the sign
    r = quad::integrate([](double x) { return std::sin(x); }, M_PI, 0.0);
    CHECK(r.value == doctest::Approx(-2.0).epsilon(1e-13));
}

TEST_CASE("adaptive bisection resolves peaked integrands") {
    // narrow gaussian: integral over (-1, 1) ~ sqrt(pi) * 0.01
    auto f = [](double x) { return std::exp(-x * x / 1e-4); };
    auto r = quad::integrate(f, -1.0, 1.0, 1e-12);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(std::sqrt(M_PI) * 0.01).epsilon(1e-11));
}

TEST_CASE("dyadic splitting integrates endpoint singularities") {
    auto r = quad::integrate_to_zero([](double x) { return 1.0 / std::sqrt(x); }, 1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-9));

    r = quad::integrate_to_zero([](double x) { return std::log(x); }, 1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-9));

    // x^{-0.9}: slow decay of the dyadic pieces
    r = quad::integrate_to_zero([](double x) { return std::pow(x, -0.9); }, 1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(10.0).epsilon(1e-8));
}

TEST_CASE("exponential tail integration") {
    auto r = quad::integrate_exp_tail([](double t) { return std::exp(-t); }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));

    // int_2^inf e^{-3t} t^2 dt, closed form by parts
    auto g = [](double t) { return std::exp(-3.0 * t) * t * t; };
    const double exact = std::exp(-6.0) * (4.0 / 3.0 + 4.0 / 9.0 + 2.0 / 27.0);
    r = quad::integrate_exp_tail(g, 2.0, 3.0);
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-11));
}

TEST_CASE("quadrature failure surfaces as an error") {
    CHECK_THROWS_AS(
        quad::integrate_or_throw([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-10),
        QuadratureError);
}
