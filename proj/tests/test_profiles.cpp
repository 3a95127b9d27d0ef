#include <doctest.h>

#include <cmath>

#include "maxlab/profiles.hpp"
#include "oracles.hpp"

using namespace maxlab;

TEST_CASE("stromberg psi: limits and the frozen y=1 value") {
    // y -> infinity: y Psi(y) -> 1/b
    CHECK(1e6 * eval_stromberg_psi(1e6, 1.0, 2.0) ==
          doctest::Approx(0.5).epsilon(1e-6));
    // y -> 0+: y Psi(y) -> 1/a
    CHECK(1e-9 * eval_stromberg_psi(1e-9, 1.0, 2.0) ==
          doctest::Approx(1.0).epsilon(1e-6));
    // Psi(1)^2 = 1/4 + (3/4)/2 = 5/8, cross-checked by independent arithmetic
    CHECK(eval_stromberg_psi(1.0, 1.0, 2.0) ==
          doctest::Approx(0.790569415042094833).epsilon(1e-12));
    CHECK_THROWS_AS(eval_stromberg_psi(-1.0, 1.0, 2.0), domain_error);
    CHECK_THROWS_AS(eval_stromberg_psi(1.0, 2.0, 1.0), domain_error);
}

TEST_CASE("psi sandwich and the L1-remainder bounds") {
    const double a = 1.0, b = 2.0;
    const ConformalProfile p = stromberg_profile(a, b);
    const double c = 1.0 / (a * a) - 1.0 / (b * b);
    for (int i = 0; i <= 200; ++i) {
        const double y = std::exp(-6.0 + 12.0 * i / 200.0);
        const double psi = p.psi(y);
        CHECK(psi >= 1.0 / (b * y) * (1.0 - 1e-12));
        CHECK(psi <= 1.0 / (a * y) * (1.0 + 1e-12));
        if (y < 1.0)
            CHECK(1.0 / (a * y) - psi <= 0.5 * a * c * (1.0 + 1e-12));
        if (y > 1.0)
            CHECK(psi - 1.0 / (b * y) <=
                  0.5 * b * c / (y * (y + 1.0)) * (1.0 + 1e-12));
    }
    // the L1 tail integral converges: int_1^inf (Psi - Psi_b) <= (b c/2) ln 2
    const double tail = integrate(
        [&](double y) { return p.psi(y) - 1.0 / (b * y); }, 1.0, 2e5, 1e-10);
    CHECK(tail <= 0.5 * b * c * std::log(2.0) * 1.01);
    CHECK(tail > 0.0);
}

TEST_CASE("gaussian curvature: hyperbolic identity and stromberg pinching") {
    for (double kappa : {1.0, 3.0}) {
        const ConformalProfile p = hyperbolic_profile(kappa);
        for (double y : {0.01, 0.7, 1.0, 12.0, 900.0}) {
            const CurvatureValue K = gaussian_curvature_halfplane(p, y);
            CHECK(K.converged);
            CHECK(K.value == doctest::Approx(-kappa * kappa).epsilon(1e-6));
        }
    }
    for (auto [a, b] : {std::pair{1.0, 1.5}, std::pair{1.0, 3.0}}) {
        const ConformalProfile p = stromberg_profile(a, b);
        for (int i = 0; i <= 300; ++i) {
            const double y = std::exp(-3.0 * std::log(10.0) +
                                      6.0 * std::log(10.0) * i / 300.0);
            const CurvatureValue K = gaussian_curvature_halfplane(p, y);
            CHECK(K.value >= -b * b - 1e-3);
            CHECK(K.value <= -a * a + 1e-3);
        }
    }
}

TEST_CASE("finite-difference curvature matches the symbolic oracle") {
    const ConformalProfile p = stromberg_profile(1.0, 2.0);
    for (double y : {0.05, 0.3, 1.0, 4.0, 50.0}) {
        const double exact = oracle::stromberg_curvature_symbolic(y, 1.0, 2.0);
        const CurvatureValue K = gaussian_curvature_halfplane(p, y);
        CHECK(K.value == doctest::Approx(exact).epsilon(1e-5));
    }
}

TEST_CASE("model curvatures: constant-curvature and flat identities") {
    const WarpingProfile hyp = sinh_warping(1.0, 3);
    const ModelCurvatures c = model_curvatures(hyp, 2.0);
    CHECK(c.radial == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(c.tangential == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(c.scalar == doctest::Approx(-6.0).epsilon(1e-12));

    WarpingProfile flat;
    flat.m = 3;
    flat.j = [](double t) { return t; };
    flat.dj = [](double) { return 1.0; };
    flat.d2j = [](double) { return 0.0; };
    const ModelCurvatures f = model_curvatures(flat, 1.0);
    CHECK(f.radial == 0.0);
    CHECK(f.tangential == 0.0);
    CHECK(f.scalar == 0.0);

    // j = sinh(a t)/a: (-a^2, -a^2, -m(m-1) a^2)
    const WarpingProfile h2 = sinh_warping(1.7, 4);
    const ModelCurvatures c2 = model_curvatures(h2, 0.9);
    CHECK(c2.radial == doctest::Approx(-1.7 * 1.7).epsilon(1e-12));
    CHECK(c2.tangential == doctest::Approx(-1.7 * 1.7).epsilon(1e-10));
    CHECK(c2.scalar == doctest::Approx(-12.0 * 1.7 * 1.7).epsilon(1e-10));
}

TEST_CASE("psi_tau bump: the six properties and the T identity") {
    const double tau = 8.0, nu = 0.25, delta = 0.1, c_m = 1.05;
    const WarpingProfile w = build_psi_tau(tau, nu, delta, c_m, 3);
    REQUIRE(w.perturbation.has_value());
    const auto& rec = *w.perturbation;
    const double T_expected = c_m * std::exp(-nu) * std::sinh(tau + nu);
    CHECK(rec.T == doctest::Approx(T_expected).epsilon(1e-12));

    // support: psi vanishes off [tau - nu, tau + nu]
    for (double t : {0.0, 1.0, tau - nu - 1e-3, tau + nu + 1e-3, tau + 3.0}) {
        CHECK(std::abs(w.j(t) - std::sinh(t)) <= 1e-9 * (1.0 + std::sinh(t)));
    }
    // |psi| and |psi'| below delta
    for (int i = 0; i <= 400; ++i) {
        const double t = tau - nu + 2.0 * nu * i / 400.0;
        CHECK(std::abs(rec.psi(t)) <= delta * (1.0 + 1e-9));
        CHECK(std::abs(rec.psi_d(t)) <= delta * (1.0 + 1e-9));
    }
    // min psi'' = -T within 0.1%, found by dense sampling across pieces
    double mn = 1e300;
    const auto& br = rec.phi.breaks();
    for (size_t i = 0; i + 1 < br.size(); ++i)
        for (int k = 0; k <= 128; ++k)
            mn = std::min(mn, rec.phi(br[i] + (br[i + 1] - br[i]) * k / 128.0));
    CHECK(std::abs(mn + T_expected) <= 1e-3 * T_expected);
    // radial curvature attains positive values inside the bump
    double rad_max = -1e300;
    for (int k = 0; k <= 2000; ++k) {
        const double t = tau - nu + 2.0 * nu * k / 2000.0;
        rad_max = std::max(rad_max, model_curvatures(w, t).radial);
    }
    CHECK(model_curvatures(w, tau).radial > 0.0);
    CHECK(rad_max > 0.0);

    CHECK_THROWS_AS(build_psi_tau(1.0, nu, delta, c_m, 3), domain_error);
    CHECK_THROWS_AS(build_psi_tau(tau, nu, delta, 0.9, 3), domain_error);
}

TEST_CASE("connected sum profile: branches, seam jets, positivity") {
    const ConnectedSumProfile p = build_connected_sum_profile(1.0, 2.0, 2);
    CHECK(p.sigma(2.0) == doctest::Approx(std::sinh(2.0)).epsilon(1e-14));
    CHECK(p.sigma(-2.0) == doctest::Approx(std::sinh(4.0) / 2.0).epsilon(1e-14));
    CHECK(p.min_sigma() > 0.0);
    // one-sided jets agree at both seams to 1e-8 (finite differences)
    auto fd2 = [&](double t, double h) {
        return (p.sigma(t - h) - 2.0 * p.sigma(t) + p.sigma(t + h)) / (h * h);
    };
    const double h = 1e-4;
    CHECK(p.sigma(1.0 - 1e-12) == doctest::Approx(std::sinh(1.0)).epsilon(1e-9));
    CHECK(p.dsigma(1.0 - 1e-9) == doctest::Approx(std::cosh(1.0)).epsilon(1e-6));
    CHECK(fd2(1.0, h) == doctest::Approx(std::sinh(1.0)).epsilon(1e-4));
    CHECK(p.sigma(-1.0 + 1e-12) ==
          doctest::Approx(std::sinh(2.0) / 2.0).epsilon(1e-9));
    CHECK(p.dsigma(-1.0 + 1e-9) == doctest::Approx(-std::cosh(2.0)).epsilon(1e-6));
    CHECK(fd2(-1.0, h) == doctest::Approx(2.0 * std::sinh(2.0)).epsilon(1e-4));
    // exact band integral vs quadrature across the seam
    const double exact = p.sigma_integral(-2.5, 3.0);
    const double quad =
        integrate([&](double t) { return p.sigma(t); }, -2.5, 3.0, 1e-11);
    CHECK(exact == doctest::Approx(quad).epsilon(1e-9));
}

TEST_CASE("conformal factor: hyperbolic closed form and the sandwich") {
    // j = sinh(b t)/b: psi(t) = tanh(b t / 2), lambda = lambda_b exactly
    const double b = 1.5;
    const WarpingProfile w = sinh_warping(b, 3);
    const ConformalFactorReport rep = conformal_factor_from_warping(w, b);
    for (size_t i = 0; i < rep.rho_grid.size(); ++i) {
        CHECK(rep.lambda[i] ==
              doctest::Approx(rep.lambda_b[i]).epsilon(1e-6));
    }
    CHECK(rep.ratio_min >= 1.0 - 1e-6);
    CHECK(rep.ratio_max <= 1.0 + 1e-6);
    // psi itself matches tanh(bt/2)
    for (double t : {0.3, 1.0, 2.5}) {
        CHECK(rep.psi_of_t(t) ==
              doctest::Approx(std::tanh(0.5 * b * t)).epsilon(1e-8));
    }

    // pinched ramp warping: 1 <= lambda/lambda_b <= b/a
    const double a2 = 1.0, b2 = 1.4;
    const WarpingProfile ramp = ramp_warping(a2, b2, 3);
    for (double t : {0.5, 2.0, 3.5, 10.0, 30.0}) {
        const ModelCurvatures c = model_curvatures(ramp, t);
        CHECK(c.scalar <= -3.0 * 2.0 * a2 * a2 * (1.0 - 1e-9));
        CHECK(c.scalar >= -3.0 * 2.0 * b2 * b2 * (1.0 + 1e-9));
    }
    const ConformalFactorReport r2 = conformal_factor_from_warping(ramp, b2);
    CHECK(r2.ratio_min >= 1.0 - 1e-3);
    CHECK(r2.ratio_max <= b2 / a2 + 1e-3);

    // 1/j nonintegrable at infinity must be flagged
    WarpingProfile lin;
    lin.m = 3;
    lin.j = [](double t) { return t; };
    lin.dj = [](double) { return 1.0; };
    lin.d2j = [](double) { return 0.0; };
    CHECK_THROWS_AS(conformal_factor_from_warping(lin, 1.0), domain_error);
}

TEST_CASE("space form volumes and the eta window") {
    const SpaceFormParams p2 = make_space_form(1.0, 2);
    CHECK(space_form_ball_volume(p2, 0.0) == 0.0);
    CHECK(space_form_ball_volume(p2, 1.0) ==
          doctest::Approx(2.0 * M_PI * (std::cosh(1.0) - 1.0)).epsilon(1e-14));
    // m = 3 closed form vs quadrature
    const SpaceFormParams p3 = make_space_form(1.3, 3);
    const double R = 2.2;
    const double quad =
        sphere_surface_area(3) *
        integrate([&](double t) { return sqr(std::sinh(1.3 * t) / 1.3); }, 0.0,
                  R, 1e-12);
    CHECK(space_form_ball_volume(p3, R) == doctest::Approx(quad).epsilon(1e-8));
    // m = 5 via quadrature path
    const SpaceFormParams p5 = make_space_form(1.0, 5);
    CHECK(space_form_ball_volume(p5, 1.0) > 0.0);
    // volume sits inside [eta1 q^{kR}, eta2 q^{kR}] for R >= 1
    for (double RR : {1.0, 3.0, 10.0, 40.0}) {
        const double v = space_form_ball_volume(p2, RR);
        const double q = std::exp(p2.kappa * RR * (p2.m - 1));
        CHECK(v >= p2.eta1 * q);
        CHECK(v <= p2.eta2 * q);
    }
    // kappa = 2, m = 2: vol q^{-2R} converges to eta2 from below
    const SpaceFormParams pk = make_space_form(2.0, 2);
    const double r1 = space_form_ball_volume(pk, 20.0) * std::exp(-2.0 * 20.0);
    const double r2 = space_form_ball_volume(pk, 40.0) * std::exp(-2.0 * 40.0);
    CHECK(std::abs(r2 - r1) <= 1e-8 * r1);
    CHECK(r2 <= pk.eta2);
    CHECK(r2 >= pk.eta2 * (1.0 - 1e-6));
}

TEST_CASE("profile key=value descriptors round trip") {
    const ConformalProfile p = stromberg_profile(1.0, 2.5);
    const ConformalProfile q = conformal_profile_from_kv(profile_to_kv(p));
    CHECK(q.a == p.a);
    CHECK(q.b == p.b);
    CHECK(q.kind == p.kind);
    const ConnectedSumProfile cs = build_connected_sum_profile(1.0, 2.0, 2);
    const ConnectedSumProfile cs2 = connected_sum_profile_from_kv(profile_to_kv(cs));
    CHECK(cs2.sigma(0.37) == doctest::Approx(cs.sigma(0.37)).epsilon(1e-15));
}
