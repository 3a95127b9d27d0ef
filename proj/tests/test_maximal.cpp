#include <doctest.h>

#include <cmath>

#include "maxlab/discrete.hpp"
#include "maxlab/maximal.hpp"
#include "maxlab/spaces.hpp"
#include "oracles.hpp"

using namespace maxlab;

namespace {

FiniteSpace random_space(int n, Rng& rng) {
    // random points in a disc with Euclidean metric: a genuine metric
    std::vector<double> x(static_cast<size_t>(n)), y(static_cast<size_t>(n)), w(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        x[size_t(i)] = rng.uniform(-3, 3);
        y[size_t(i)] = rng.uniform(-3, 3);
        w[size_t(i)] = rng.uniform(0.2, 2.0);
    }
    std::vector<double> d(size_t(n) * size_t(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            d[size_t(i) * size_t(n) + size_t(j)] =
                std::hypot(x[size_t(i)] - x[size_t(j)],
                           y[size_t(i)] - y[size_t(j)]);
    return FiniteSpace(n, std::move(d), std::move(w), false);
}

SampledField random_field(const MetricSpace& X, Rng& rng) {
    SampledField f;
    for (int64_t i = 0; i < X.size(); ++i)
        f.push(i, rng.uniform(-1, 1), X.weight(i));
    return f;
}

}  // namespace

TEST_CASE("constant fields are fixed points of both operators") {
    Rng rng(11);
    const FiniteSpace X = random_space(40, rng);
    SampledField f;
    for (int64_t i = 0; i < X.size(); ++i) f.push(i, 2.5, X.weight(i));
    for (const auto& rep :
         {centred_maximal(f, X, RadiusWindow::at_infinity()),
          uncentred_maximal(f, X, RadiusWindow::at_infinity()),
          centred_maximal(f, X, RadiusWindow::band(0.0, 1.0))}) {
        for (double v : rep.values.value)
            CHECK(v == doctest::Approx(2.5).epsilon(1e-14));
    }
}

TEST_CASE("single atom with tiny radius window returns the atom value") {
    std::vector<double> d = {0, 1, 2, 1, 0, 1, 2, 1, 0};
    std::vector<double> w = {1, 1, 1};
    const FiniteSpace X(3, std::move(d), std::move(w), true);
    SampledField f;
    f.push(0, 1.0, 1.0);
    f.push(1, 0.0, 1.0);
    f.push(2, 0.0, 1.0);
    const MaximalReport rep =
        centred_maximal(f, X, RadiusWindow::band(0.0, 0.5), {0});
    CHECK(rep.values.value[0] == 1.0);
}

TEST_CASE("optimized operators equal brute-force enumeration exactly") {
    Rng rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 20 + int(rng.uniform_int(60));
        const FiniteSpace X = random_space(n, rng);
        const SampledField f = random_field(X, rng);
        for (RadiusWindow w : {RadiusWindow::at_infinity(),
                               RadiusWindow::band(0.0, 1.0),
                               RadiusWindow::band(0.5, 2.5)}) {
            const MaximalReport c = centred_maximal(f, X, w);
            const MaximalReport u = uncentred_maximal(f, X, w);
            for (int64_t i = 0; i < X.size(); ++i) {
                CHECK(c.values.value[size_t(i)] ==
                      oracle::brute_centred(f, X, w, i));
                CHECK(u.values.value[size_t(i)] ==
                      oracle::brute_uncentred(f, X, w, i));
            }
        }
    }
}

TEST_CASE("parallel kernels equal the serial reference bit for bit") {
    Rng rng(5);
    const FiniteSpace X = random_space(120, rng);
    const SampledField f = random_field(X, rng);
    const RadiusWindow w = RadiusWindow::band(0.3, 4.0);
    const MaximalReport cp = centred_maximal(f, X, w);
    const MaximalReport cs = serial::centred_maximal(f, X, w);
    const MaximalReport up = uncentred_maximal(f, X, w);
    const MaximalReport us = serial::uncentred_maximal(f, X, w);
    for (int64_t i = 0; i < X.size(); ++i) {
        CHECK(cp.values.value[size_t(i)] == cs.values.value[size_t(i)]);
        CHECK(cp.argmax_radius[size_t(i)] == cs.argmax_radius[size_t(i)]);
        CHECK(up.values.value[size_t(i)] == us.values.value[size_t(i)]);
        CHECK(up.argmax_radius[size_t(i)] == us.argmax_radius[size_t(i)]);
    }
}

TEST_CASE("pointwise operator inequalities hold exactly") {
    Rng rng(99);
    const FiniteSpace X = random_space(80, rng);
    const SampledField f = random_field(X, rng);
    SampledField g = f;  // g >= f pointwise in absolute value
    for (auto& v : g.value) v = std::abs(v) + 0.3;
    const RadiusWindow w = RadiusWindow::at_infinity();
    const MaximalReport Mf = centred_maximal(f, X, w);
    const MaximalReport Nf = uncentred_maximal(f, X, w);
    const MaximalReport Mg = centred_maximal(g, X, w);
    const MaximalReport Mcf = centred_maximal(f.scaled(-2.5), X, w);
    SampledField sum = f;
    for (size_t i = 0; i < sum.size(); ++i) sum.value[i] += g.value[i];
    const MaximalReport Msum = centred_maximal(sum, X, w);
    for (size_t i = 0; i < size_t(X.size()); ++i) {
        CHECK(Nf.values.value[i] >= Mf.values.value[i]);          // N >= M
        CHECK(Mcf.values.value[i] ==
              doctest::Approx(2.5 * Mf.values.value[i]).epsilon(1e-14));
        CHECK(Mg.values.value[i] >= Mf.values.value[i]);          // monotone
        CHECK(Msum.values.value[i] <=
              (Mf.values.value[i] + Mg.values.value[i]) * (1 + 1e-12));
    }
}

TEST_CASE("window split: sup over (0,inf) is the max of the two halves") {
    Rng rng(123);
    const FiniteSpace X = random_space(70, rng);
    const SampledField f = random_field(X, rng);
    const MaximalReport whole =
        centred_maximal(f, X, RadiusWindow::band(0.0, INFINITY));
    const MaximalReport local = centred_maximal(f, X, RadiusWindow::local());
    const MaximalReport infty = centred_maximal(f, X, RadiusWindow::at_infinity());
    for (size_t i = 0; i < size_t(X.size()); ++i)
        CHECK(whole.values.value[i] ==
              std::max(local.values.value[i], infty.values.value[i]));
}

TEST_CASE("omega variant: zero field, homogeneity, window") {
    Rng rng(4);
    const FiniteSpace X = random_space(50, rng);
    SampledField zero;
    for (int64_t i = 0; i < X.size(); ++i) zero.push(i, 0.0, X.weight(i));
    const MaximalReport z = omega_maximal(zero, X, 1.5);
    for (double v : z.values.value) CHECK(v == 0.0);
    const SampledField f = random_field(X, rng);
    const MaximalReport a = omega_maximal(f, X, 1.5);
    const MaximalReport b = omega_maximal(f.scaled(3.0), X, 1.5);
    for (size_t i = 0; i < f.size(); ++i)
        CHECK(b.values.value[i] ==
              doctest::Approx(3.0 * a.values.value[i]).epsilon(1e-13));
    CHECK_THROWS_AS(omega_maximal(f, X, 1.0), domain_error);
}

TEST_CASE("weak type ratio: degenerate window average of an indicator") {
    // identity-like operator: a window so small every ball is the atom
    std::vector<double> d = {0, 5, 5, 0};
    std::vector<double> w = {1.0, 2.0};
    const FiniteSpace X(2, std::move(d), std::move(w), false);
    SampledField f;
    f.push(0, 1.0, 1.0);
    f.push(1, 0.0, 2.0);
    const MaximalReport rep = centred_maximal(f, X, RadiusWindow::band(0.0, 1.0));
    CHECK(weak_type_ratio(rep, f, 1.0) <= 1.0 + 1e-12);
    CHECK(weak_type_ratio(rep, f, 2.0) <= 1.0 + 1e-12);
    SampledField zero = f.scaled(0.0);
    CHECK_THROWS_AS(weak_type_ratio(rep, zero, 1.0), domain_error);
}

TEST_CASE("achieved-sup radius reports the smallest attaining radius") {
    // three collinear atoms; f concentrated at the end
    std::vector<double> d = {0, 1, 2, 1, 0, 1, 2, 1, 0};
    std::vector<double> w = {1, 1, 1};
    const FiniteSpace X(3, std::move(d), std::move(w), true);
    SampledField f;
    f.push(0, 0.0, 1.0);
    f.push(1, 0.0, 1.0);
    f.push(2, 3.0, 1.0);
    const MaximalReport rep =
        centred_maximal(f, X, RadiusWindow::band(0.0, INFINITY), {2});
    CHECK(rep.values.value[0] == 3.0);
    CHECK(rep.argmax_radius[0] == 0.0);  // infimum radius of the atom ball
}
