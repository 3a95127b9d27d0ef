#include <doctest.h>

#include <cmath>

#include "maxlab/numerics.hpp"
#include "maxlab/piecewise_poly.hpp"

using namespace maxlab;

TEST_CASE("adaptive quadrature hits analytic integrals") {
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI) ==
          doctest::Approx(2.0).epsilon(1e-10));
    CHECK(integrate([](double x) { return 1.0 / x; }, 1.0, std::exp(1.0)) ==
          doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("bisection solves monotone roots") {
    const double r = bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-14);
    CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("exponent fit recovers exact power laws") {
    std::vector<double> t = {1.0, 2.0, 4.0, 8.0, 16.0};
    std::vector<double> v(t.size());
    for (size_t i = 0; i < t.size(); ++i) v[i] = t[i] * t[i];
    const LineFit fit = exponent_fit(t, v);
    CHECK(std::abs(fit.slope - 2.0) <= 1e-12);
    CHECK(fit.r_squared == doctest::Approx(1.0));
}

TEST_CASE("exponent fit rejects degenerate input") {
    std::vector<double> t = {1.0, 2.0, 3.0, 4.0};
    std::vector<double> v = {5.0, 5.0, 5.0, 5.0};
    CHECK_THROWS_AS(exponent_fit(t, v), domain_error);
    std::vector<double> few = {1.0, 2.0};
    CHECK_THROWS_AS(exponent_fit(few, few), domain_error);
}

TEST_CASE("pairwise sum is order-stable and exact on integers") {
    std::vector<double> v(1000);
    for (size_t i = 0; i < v.size(); ++i) v[i] = double(i + 1);
    CHECK(pairwise_sum(v) == 500500.0);
}

TEST_CASE("rng is deterministic per seed") {
    Rng a(42), b(42), c(43);
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x != c.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
}

TEST_CASE("bspline bump is a C2 unit bump with mass 3/4") {
    const PiecewisePoly beta = PiecewisePoly::bspline_bump();
    CHECK(beta(0.0) == doctest::Approx(1.0));
    CHECK(beta(1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(beta(-1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(beta(0.5) == doctest::Approx(0.25));
    // C2 continuity across breakpoints
    const PiecewisePoly d2 = beta.derivative().derivative();
    for (double x : {-0.5, 0.0, 0.5}) {
        CHECK(d2(x - 1e-9) == doctest::Approx(d2(x + 1e-9)).epsilon(1e-5));
    }
    const PiecewisePoly anti = beta.antiderivative();
    CHECK(anti(1.0) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(beta.abs_integral() == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("piecewise sum and scaling compose correctly") {
    const PiecewisePoly beta = PiecewisePoly::bspline_bump();
    const PiecewisePoly two = PiecewisePoly::sum(beta, beta);
    CHECK(two(0.3) == doctest::Approx(2.0 * beta(0.3)).epsilon(1e-12));
    const PiecewisePoly moved = PiecewisePoly::scaled(beta, 3.0, 5.0, 0.5);
    CHECK(moved(5.0) == doctest::Approx(3.0));
    CHECK(moved(5.25) == doctest::Approx(3.0 * beta(0.5)).epsilon(1e-12));
    CHECK(moved(5.6) == doctest::Approx(0.0).epsilon(1e-14));
}
