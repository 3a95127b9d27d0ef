#include <doctest.h>

#include <cmath>

#include "maxlab/field.hpp"
#include "maxlab/halfplane.hpp"
#include "maxlab/profiles.hpp"

using namespace maxlab;

TEST_CASE("level set measures: atoms and monotonicity") {
    SampledField zero;
    for (int i = 0; i < 5; ++i) zero.push(i, 0.0, 1.0);
    CHECK(level_set_measure(zero, 0.5) == 0.0);

    SampledField atoms;
    atoms.push(0, 1.0, 1.0);
    atoms.push(1, 2.0, 2.0);
    atoms.push(2, 3.0, 3.0);
    CHECK(level_set_measure(atoms, 1.5) == 5.0);  // enumerate: w2 + w3
    CHECK(level_set_measure(atoms, 0.5) == 6.0);
    CHECK(level_set_measure(atoms, 3.5) == 0.0);
    // non-increasing in alpha
    double prev = 1e300;
    for (double al = 0.1; al < 4.0; al += 0.1) {
        const double e = level_set_measure(atoms, al);
        CHECK(e <= prev);
        prev = e;
    }
}

TEST_CASE("lorentz norms: indicators, scaling, and the p-infinity bound") {
    // indicator of a set of measure |A|: both norms equal |A|^{1/p}
    SampledField ind;
    ind.push(0, 1.0, 2.0);
    ind.push(1, 1.0, 1.5);
    ind.push(2, 0.0, 9.0);
    const double A = 3.5;
    for (double p : {1.0, 1.5, 2.0}) {
        CHECK(lorentz_norm(ind, p, INFINITY).value ==
              doctest::Approx(std::pow(A, 1.0 / p)).epsilon(1e-14));
        CHECK(lorentz_norm(ind, p, 1.0).value ==
              doctest::Approx(std::pow(A, 1.0 / p)).epsilon(1e-14));
    }
    // homogeneity and the L^{p,inf} <= L^{p,1} comparison on random fields
    Rng rng(7);
    SampledField f;
    for (int i = 0; i < 60; ++i) f.push(i, rng.uniform(-2, 2), rng.uniform(0.1, 2));
    for (double p : {1.0, 1.3, 2.0}) {
        const double n1 = lorentz_norm(f, p, 1.0).value;
        const double ninf = lorentz_norm(f, p, INFINITY).value;
        CHECK(ninf <= n1 * (1.0 + 1e-12));
        CHECK(lorentz_norm(f.scaled(3.0), p, 1.0).value ==
              doctest::Approx(3.0 * n1).epsilon(1e-12));
        CHECK(lorentz_norm(f.scaled(3.0), p, INFINITY).value ==
              doctest::Approx(3.0 * ninf).epsilon(1e-12));
    }
    // psi_R normalisation: c 1_A with c = |A|^{-1/omega} has L^{omega,1} = 1
    const double omega = 1.4;
    SampledField psiR;
    psiR.push(0, std::pow(A, -1.0 / omega), 2.0);
    psiR.push(1, std::pow(A, -1.0 / omega), 1.5);
    CHECK(lorentz_norm(psiR, omega, 1.0).value == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("rectangle measures are exact and monotone") {
    const ConformalProfile p = stromberg_profile(1.0, 2.0);
    // E_t = (-t,t) x (1,2): at least t/b^2
    for (double t : {10.0, 100.0, 1000.0}) {
        const double Et = rect_measure(p, -t, t, 1.0, 2.0);
        CHECK(Et >= t / 4.0);
        CHECK(Et <= t);  // also below t/a^2
    }
    // F_t with tau = b/a = 2: at least t^{2-2/tau}/b^2 = t/4
    const double t = 100.0;
    const double pt = std::pow(t, 2.0 / 2.0 - 1.0);  // = 1
    const double Ft = rect_measure(p, -t, t, pt, 2.0 * pt);
    CHECK(Ft >= std::pow(t, 2.0 - 2.0 / 2.0) / 4.0);
    // monotone under region inclusion
    CHECK(rect_measure(p, -1, 1, 1, 2) <= rect_measure(p, -2, 2, 1, 2));
    CHECK(rect_measure(p, -1, 1, 1, 2) <= rect_measure(p, -1, 1, 0.5, 2));
    // quadrature cross-check
    const double quad = integrate([&](double y) { return p.psi2(y); }, 0.7, 3.1,
                                  1e-12) * 2.0;
    CHECK(rect_measure(p, -1, 1, 0.7, 3.1) == doctest::Approx(quad).epsilon(1e-10));
}

TEST_CASE("csv round trip for fields") {
    SampledField f;
    f.push(3, 0.125, 2.5);
    f.push(9, -1.75, 0.25);
    const std::string path = "field_roundtrip_test.csv";
    field_to_csv(f, path);
    const SampledField g = field_from_csv(path);
    REQUIRE(g.size() == f.size());
    CHECK(g.id[0] == 3);
    CHECK(g.value[1] == -1.75);
    CHECK(g.weight[0] == 2.5);
    std::remove(path.c_str());
}
