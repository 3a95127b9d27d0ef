#include "maxlab/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace maxlab {

// ---------------------------------------------------------------------------
// Space forms

double sphere_surface_area(int m) {
    // vol(S^{m-1}) = 2 pi^{m/2} / Gamma(m/2)
    return 2.0 * std::pow(M_PI, 0.5 * m) / std::tgamma(0.5 * m);
}

double space_form_ball_volume(const SpaceFormParams& p, double R) {
    if (R < 0.0) throw domain_error("ball volume: R < 0");
    if (R == 0.0) return 0.0;
    const double k = p.kappa;
    if (p.m == 2) return 2.0 * M_PI * (std::cosh(k * R) - 1.0) / (k * k);
    if (p.m == 3)
        return M_PI * std::sinh(2.0 * k * R) / (k * k * k) -
               2.0 * M_PI * R / (k * k);
    const double area = sphere_surface_area(p.m);
    return area * integrate(
                      [&](double t) {
                          return std::pow(std::sinh(k * t) / k, p.m - 1);
                      },
                      0.0, R, 1e-11);
}

SpaceFormParams make_space_form(double kappa, int m) {
    if (!(kappa > 0.0) || m < 2) throw domain_error("space form: kappa > 0, m >= 2");
    SpaceFormParams p;
    p.kappa = kappa;
    p.m = m;
    // eta1/eta2: extremise vol(B_R) q^{-kappa R} over R in [1, 60].  The paper
    // asserts the constants exist; here they are fitted numerically.
    const double lq = double(m - 1) * kappa;  // log of q^kappa
    double lo = 1e300, hi = 0.0;
    for (int i = 0; i <= 600; ++i) {
        const double R = 1.0 + 59.0 * i / 600.0;
        const double f = space_form_ball_volume(p, R) * std::exp(-lq * R);
        lo = std::min(lo, f);
        hi = std::max(hi, f);
    }
    p.eta1 = lo * (1.0 - 1e-9);
    p.eta2 = hi * (1.0 + 1e-9);
    return p;
}

// ---------------------------------------------------------------------------
// Conformal half-plane profiles

ConformalProfile stromberg_profile(double a, double b) {
    if (!(0.0 < a && a < b)) throw domain_error("stromberg: need 0 < a < b");
    ConformalProfile p;
    p.kind = ConformalProfile::Kind::stromberg;
    p.a = a;
    p.b = b;
    return p;
}

ConformalProfile hyperbolic_profile(double kappa) {
    if (!(kappa > 0.0)) throw domain_error("hyperbolic: need kappa > 0");
    ConformalProfile p;
    p.kind = ConformalProfile::Kind::hyperbolic;
    p.a = kappa;
    p.b = kappa;
    return p;
}

double ConformalProfile::psi2(double y) const {
    if (!(y > 0.0)) throw domain_error("psi: y must be positive");
    if (kind == Kind::hyperbolic) return 1.0 / (a * a * y * y);
    const double c = 1.0 / (a * a) - 1.0 / (b * b);
    return (1.0 / (b * b) + c / (y + 1.0)) / (y * y);
}

double ConformalProfile::psi(double y) const { return std::sqrt(psi2(y)); }

double ConformalProfile::dpsi(double y) const {
    if (kind == Kind::hyperbolic) return -1.0 / (a * y * y);
    const double c = 1.0 / (a * a) - 1.0 / (b * b);
    const double P = 1.0 / (b * b) + c / (y + 1.0);
    const double dP = -c / ((y + 1.0) * (y + 1.0));
    return psi(y) * (dP / (2.0 * P) - 1.0 / y);
}

double ConformalProfile::psi2_integral(double y) const {
    if (kind == Kind::hyperbolic) return -1.0 / (a * a * y);
    const double c = 1.0 / (a * a) - 1.0 / (b * b);
    return -1.0 / (b * b * y) + c * (-std::log(y) - 1.0 / y + std::log1p(y));
}

double eval_stromberg_psi(double y, double a, double b) {
    return stromberg_profile(a, b).psi(y);
}

CurvatureValue gaussian_curvature_halfplane(const ConformalProfile& p, double y) {
    auto g = [&](double t) { return std::log(p.psi2(t)); };
    auto second = [&](double h) {
        return (-g(y - 2 * h) + 16 * g(y - h) - 30 * g(y) + 16 * g(y + h) -
                g(y + 2 * h)) /
               (12.0 * h * h);
    };
    // step ~ 3e-3 * y: small enough for the O(h^4) truncation, large enough
    // to keep the log Psi^2 roundoff below the 1e-6 curvature tolerance
    const double h = std::min(std::max(1e-5, 3e-3 * y), y / 8.0);
    const double d1 = second(h), d2 = second(0.5 * h);
    const double d = (16.0 * d2 - d1) / 15.0;
    const double noise = 60.0 * 1e-16 * std::abs(g(y)) / (h * h * 0.25 * 12.0);
    const double err_d = std::abs(d2 - d1) / 15.0 + noise;
    CurvatureValue out;
    const double denom = 2.0 * p.psi2(y);
    out.value = -d / denom;
    out.error_estimate = err_d / denom;
    out.converged = out.error_estimate <= std::max(1e-5, 1e-4 * std::abs(out.value));
    return out;
}

// ---------------------------------------------------------------------------
// Model manifolds

WarpingProfile sinh_warping(double kappa, int m) {
    WarpingProfile p;
    p.m = m;
    p.j = [kappa](double t) { return std::sinh(kappa * t) / kappa; };
    p.dj = [kappa](double t) { return std::cosh(kappa * t); };
    p.d2j = [kappa](double t) { return kappa * std::sinh(kappa * t); };
    return p;
}

ModelCurvatures model_curvatures(const WarpingProfile& p, double t) {
    const double j = p.j(t);
    if (!(j > 0.0)) throw domain_error("model_curvatures: j(t) <= 0");
    const double dj = p.dj(t), d2j = p.d2j(t);
    ModelCurvatures c;
    c.radial = -d2j / j;
    c.tangential = (1.0 - dj * dj) / (j * j);
    c.scalar = double(p.m - 1) * double(p.m - 2) * c.tangential -
               2.0 * double(p.m - 1) * d2j / j;
    return c;
}

WarpingProfile build_psi_tau(double tau, double nu, double delta, double c_m,
                             int m) {
    if (!(tau > 2.0)) throw domain_error("psi_tau: tau must exceed 2");
    if (!(nu > 0.0 && nu < 0.5)) throw domain_error("psi_tau: nu in (0,1/2)");
    if (!(delta > 0.0 && delta < 1.0)) throw domain_error("psi_tau: delta in (0,1)");
    if (!(c_m > 1.0 && c_m < 3.0 * m / 8.0))
        throw domain_error("psi_tau: c_m in (1, 3m/8)");
    if (m < 3) throw domain_error("psi_tau: m >= 3");

    const double T = c_m * std::exp(-nu) * std::sinh(tau + nu);

    // phi_tau(tau + s) = A w(s/nu) - T v(s/nu), where w is a pair of side
    // bumps supported on [1/2,1] in |s/nu| and v is a central spike of
    // relative width eps.  The spike width is the free parameter: it is
    // chosen so the amplitude A solved from the zero-mean constraint stays
    // below delta and the L^1 mass stays below delta.
    const PiecewisePoly beta = PiecewisePoly::bspline_bump();
    const double I_beta = 0.75;  // integral of beta over [-1,1]
    const double eps =
        0.95 * std::min({delta / (2.0 * T), 2.0 * delta / (3.0 * T * nu), 0.125});
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw construction_error("psi_tau: no admissible spike width");

    PiecewisePoly side_r = PiecewisePoly::scaled(beta, 1.0, tau + 0.75 * nu, 0.25 * nu);
    PiecewisePoly side_l = PiecewisePoly::scaled(beta, 1.0, tau - 0.75 * nu, 0.25 * nu);
    PiecewisePoly sides = PiecewisePoly::sum(side_l, side_r);
    PiecewisePoly spike = PiecewisePoly::scaled(beta, 1.0, tau, eps * nu);

    // Solve A from the half-interval zero-mean constraint by bisection;
    // the mean is monotone in A, so the bracket below always works.
    const double spike_mass = 0.5 * eps * nu * I_beta;
    auto half_mean = [&](double A) {
        PiecewisePoly phi = PiecewisePoly::sum(
            PiecewisePoly::scaled(sides, A, 0.0, 1.0),
            PiecewisePoly::scaled(spike, -T, 0.0, 1.0));
        const PiecewisePoly Phi = phi.antiderivative();
        return Phi(tau + nu) - Phi(tau);
    };
    const double A = bisect(half_mean, 0.0, 8.0 * T * spike_mass / (0.25 * nu * I_beta),
                            1e-14 * T * eps);
    if (A > delta)
        throw construction_error("psi_tau: amplitude exceeds delta; bump family infeasible");

    PiecewisePoly phi = PiecewisePoly::sum(
        PiecewisePoly::scaled(sides, A, 0.0, 1.0),
        PiecewisePoly::scaled(spike, -T, 0.0, 1.0));

    // Validate properties (a)-(c) of the bump and the derived estimates.
    const PiecewisePoly Phi = phi.antiderivative();
    const double tolm = 1e-9 * T * eps * nu + 1e-12;
    if (std::abs(Phi(tau + nu) - Phi(tau - nu)) > tolm ||
        std::abs(Phi(tau + nu) - Phi(tau)) > tolm)
        throw construction_error("psi_tau: zero-mean constraints violated");
    for (int i = 0; i <= 32; ++i) {
        const double s = nu * i / 32.0;
        if (std::abs(phi(tau + s) - phi(tau - s)) > 1e-9 * (T + 1.0))
            throw construction_error("psi_tau: bump not even about tau");
    }
    if (phi.max_on_support() > delta * (1.0 + 1e-9))
        throw construction_error("psi_tau: max phi exceeds delta");
    if (std::abs(phi.min_on_support(256) + T) > 1e-3 * T)
        throw construction_error("psi_tau: min phi misses -T");
    if (phi.abs_integral() > delta * (1.0 + 1e-6))
        throw construction_error("psi_tau: L1 mass exceeds delta");

    PsiTauRecord rec;
    rec.tau = tau;
    rec.nu = nu;
    rec.delta = delta;
    rec.c_m = c_m;
    rec.T = T;
    rec.phi = phi;
    rec.psi_d = Phi;
    rec.psi = Phi.antiderivative();

    if (std::abs(rec.psi_d(tau + nu)) > 1e-7 * delta + 1e-13 ||
        std::abs(rec.psi(tau + nu)) > 1e-7 * delta + 1e-13)
        throw construction_error("psi_tau: psi does not vanish at tau + nu");
    if (rec.psi.max_on_support() > delta || -rec.psi.min_on_support() > delta)
        throw construction_error("psi_tau: |psi| exceeds delta");
    if (rec.psi_d.max_on_support() > delta || -rec.psi_d.min_on_support() > delta)
        throw construction_error("psi_tau: |psi'| exceeds delta");

    WarpingProfile p;
    p.m = m;
    auto psi = rec.psi;
    auto psi_d = rec.psi_d;
    auto phi_c = rec.phi;
    p.j = [psi](double t) { return std::sinh(t) + psi(t); };
    p.dj = [psi_d](double t) { return std::cosh(t) + psi_d(t); };
    p.d2j = [phi_c](double t) { return std::sinh(t) + phi_c(t); };
    p.perturbation = std::move(rec);
    return p;
}

namespace {

struct RampTable {
    double a, b, t0, width, t_start, dt, t_max;
    std::vector<double> j, jp;

    double k2(double t) const {
        double x = (t - t0) / width;
        x = std::clamp(x, 0.0, 1.0);
        const double s = x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
        return a * a + (b * b - a * a) * s;
    }
    // cubic Hermite on the stored (j, j') samples
    void eval(double t, double& jv, double& jpv) const {
        if (t >= t_max) {
            const size_t n = j.size() - 1;
            const double c = std::cosh(b * (t - t_max)), s = std::sinh(b * (t - t_max));
            jv = j[n] * c + jp[n] / b * s;
            jpv = j[n] * b * s + jp[n] * c;
            return;
        }
        if (t <= t_start) {
            const double kk = k2(0.0);
            jv = t + kk * t * t * t / 6.0;
            jpv = 1.0 + kk * t * t / 2.0;
            return;
        }
        const double u = (t - t_start) / dt;
        size_t i = size_t(u);
        if (i >= j.size() - 1) i = j.size() - 2;
        const double x = u - double(i);
        const double t_i = t_start + dt * double(i);
        const double f0 = j[i], f1 = j[i + 1];
        const double d0 = jp[i] * dt, d1 = jp[i + 1] * dt;
        const double h00 = (1 + 2 * x) * (1 - x) * (1 - x);
        const double h10 = x * (1 - x) * (1 - x);
        const double h01 = x * x * (3 - 2 * x);
        const double h11 = x * x * (x - 1);
        jv = h00 * f0 + h10 * d0 + h01 * f1 + h11 * d1;
        // derivative: Hermite on j' with endpoint slopes j'' = k^2 j
        const double g0 = jp[i], g1 = jp[i + 1];
        const double e0 = k2(t_i) * f0 * dt, e1 = k2(t_i + dt) * f1 * dt;
        jpv = h00 * g0 + h10 * e0 + h01 * g1 + h11 * e1;
    }
};

}  // namespace

WarpingProfile ramp_warping(double a, double b, int m, double t0, double width,
                            double t_max) {
    if (!(0.0 < a && a <= b)) throw domain_error("ramp_warping: need 0 < a <= b");
    auto tab = std::make_shared<RampTable>();
    tab->a = a;
    tab->b = b;
    tab->t0 = t0;
    tab->width = width;
    tab->t_start = 1e-8;
    tab->dt = 1e-3;
    tab->t_max = t_max;
    const size_t n = size_t((t_max - tab->t_start) / tab->dt) + 1;
    tab->j.resize(n + 1);
    tab->jp.resize(n + 1);
    double t = tab->t_start;
    double jv = t + tab->k2(0.0) * t * t * t / 6.0;
    double jp = 1.0 + tab->k2(0.0) * t * t / 2.0;
    tab->j[0] = jv;
    tab->jp[0] = jp;
    const double h = tab->dt;
    for (size_t i = 1; i <= n; ++i) {
        auto f = [&](double tt, double y0, double y1, double& d0, double& d1) {
            d0 = y1;
            d1 = tab->k2(tt) * y0;
        };
        double k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
        f(t, jv, jp, k1a, k1b);
        f(t + h / 2, jv + h / 2 * k1a, jp + h / 2 * k1b, k2a, k2b);
        f(t + h / 2, jv + h / 2 * k2a, jp + h / 2 * k2b, k3a, k3b);
        f(t + h, jv + h * k3a, jp + h * k3b, k4a, k4b);
        jv += h / 6.0 * (k1a + 2 * k2a + 2 * k3a + k4a);
        jp += h / 6.0 * (k1b + 2 * k2b + 2 * k3b + k4b);
        t += h;
        tab->j[i] = jv;
        tab->jp[i] = jp;
    }
    tab->t_max = tab->t_start + h * double(n);

    WarpingProfile p;
    p.m = m;
    p.j = [tab](double tt) {
        double jj, jj1;
        tab->eval(tt, jj, jj1);
        return jj;
    };
    p.dj = [tab](double tt) {
        double jj, jj1;
        tab->eval(tt, jj, jj1);
        return jj1;
    };
    p.d2j = [tab](double tt) {
        double jj, jj1;
        tab->eval(tt, jj, jj1);
        return tab->k2(tt) * jj;
    };
    return p;
}

// ---------------------------------------------------------------------------
// Connected sum profile

namespace {

PiecewisePoly quintic_bridge(double a, double b) {
    // Quintic Hermite on [-1,1] matching the 2-jets of the two branches:
    //   left  (t = -1):  sinh(b)/b, -cosh(b), b sinh(b)
    //   right (t = +1):  sinh(a)/a,  cosh(a), a sinh(a)
    const double y0 = std::sinh(b) / b, d0 = -std::cosh(b), s0 = b * std::sinh(b);
    const double y1 = std::sinh(a) / a, d1 = std::cosh(a), s1 = a * std::sinh(a);
    const double h = 2.0;
    // quintic Hermite basis on [0,1], ascending coefficients
    const double H0[6] = {1, 0, 0, -10, 15, -6};
    const double H1[6] = {0, 1, 0, -6, 8, -3};
    const double H2[6] = {0, 0, 0.5, -1.5, 1.5, -0.5};
    const double H3[6] = {0, 0, 0, 0.5, -1, 0.5};
    const double H4[6] = {0, 0, 0, -4, 7, -3};
    const double H5[6] = {0, 0, 0, 10, -15, 6};
    std::vector<double> c(6, 0.0);
    for (int j = 0; j < 6; ++j)
        c[j] = y0 * H0[j] + h * d0 * H1[j] + h * h * s0 * H2[j] +
               h * h * s1 * H3[j] + h * d1 * H4[j] + y1 * H5[j];
    PiecewisePoly unit({0.0, 1.0}, {c});
    return PiecewisePoly::scaled(unit, 1.0, -1.0, 2.0);
}

}  // namespace

ConnectedSumProfile build_connected_sum_profile(double a, double b, int m) {
    if (!(0.0 < a && a < b)) throw domain_error("connected sum: need 0 < a < b");
    ConnectedSumProfile p;
    p.a = a;
    p.b = b;
    p.m = m;
    p.bridge = quintic_bridge(a, b);
    // positivity: if the quintic dips, add a positive C^2 bump (zero 2-jet at
    // the seams, so the matching is preserved)
    double mn = p.bridge.min_on_support(512);
    if (mn <= 0.0) {
        const double lift = -mn + 0.05 * std::min(std::sinh(a) / a, std::sinh(b) / b);
        p.bridge = PiecewisePoly::sum(
            p.bridge, PiecewisePoly::scaled(PiecewisePoly::bspline_bump(), lift,
                                            0.0, 1.0));
        mn = p.bridge.min_on_support(512);
        if (mn <= 0.0) throw construction_error("connected sum: bridge not positive");
    }
    p.bridge_d = p.bridge.derivative();
    return p;
}

double ConnectedSumProfile::sigma(double t) const {
    if (t > 1.0) return std::sinh(a * t) / a;
    if (t < -1.0) return std::sinh(-b * t) / b;
    return bridge(t);
}

double ConnectedSumProfile::dsigma(double t) const {
    if (t > 1.0) return std::cosh(a * t);
    if (t < -1.0) return -std::cosh(b * t);
    return bridge_d(t);
}

double ConnectedSumProfile::sigma_integral(double t1, double t2) const {
    if (t1 > t2) return -sigma_integral(t2, t1);
    auto branch_int = [&](double lo, double hi) {
        // both in the same branch region
        if (lo >= 1.0) return (std::cosh(a * hi) - std::cosh(a * lo)) / (a * a);
        if (hi <= -1.0) return -(std::cosh(b * hi) - std::cosh(b * lo)) / (b * b);
        const PiecewisePoly anti = bridge.antiderivative();
        return anti(hi) - anti(lo);
    };
    double total = 0.0, lo = t1;
    const double cuts[2] = {-1.0, 1.0};
    for (double c : cuts)
        if (lo < c && t2 > c) {
            total += branch_int(lo, c);
            lo = c;
        }
    total += branch_int(lo, t2);
    return total;
}

double ConnectedSumProfile::min_sigma() const {
    return std::min({bridge.min_on_support(512), std::sinh(a) / a, std::sinh(b) / b});
}

// ---------------------------------------------------------------------------
// Conformal factor

ConformalFactorReport conformal_factor_from_warping(const WarpingProfile& p,
                                                    double b, int grid_points) {
    if (!(b > 0.0)) throw domain_error("conformal factor: b > 0");
    const auto& j = p.j;
    if (std::abs(j(1e-6) / 1e-6 - 1.0) > 1e-2)
        throw domain_error("conformal factor: j(t)/t must tend to 1 at 0");

    // integrability of 1/j at +infinity: tail integrals over doubling
    // intervals must decay geometrically over 4 consecutive doublings
    double prev = 0.0;
    int decays = 0;
    bool integrable = false;
    for (int k = 1; k <= 9; ++k) {
        const double T = std::pow(2.0, k);
        const double tail =
            integrate([&](double t) { return 1.0 / j(t); }, T, 2.0 * T, 1e-10);
        if (k > 1) {
            if (tail < 0.75 * prev)
                ++decays;
            else
                decays = 0;
            if (decays >= 4) {
                integrable = true;
                break;
            }
        }
        prev = tail;
    }
    if (!integrable)
        throw domain_error("conformal factor: 1/j not integrable at infinity "
                           "(tail integrals do not decay)");

    const double T_tail = 96.0;
    const std::function<double(double)> jf = p.j;  // owned copy: the report's
                                                   // closures outlive p
    auto I = [jf, T_tail](double t) {
        // int_t^inf dq/j(q), exponential tail beyond T_tail
        const double rate = jf(T_tail + 0.5) / jf(T_tail) - 1.0;  // e^{b dt} - 1
        const double growth = 2.0 * std::log1p(rate);             // log-slope
        const double tail = 1.0 / (growth * jf(T_tail));
        if (t >= T_tail) return 1.0 / (growth * jf(t));
        return integrate([&](double q) { return 1.0 / jf(q); }, t, T_tail,
                         1e-11) +
               tail;
    };
    auto psi = [I](double t) { return std::exp(-I(t)); };

    ConformalFactorReport rep;
    rep.psi_of_t = psi;
    rep.t_of_rho = [psi](double rho) {
        if (!(rho > 0.0 && rho < 1.0))
            throw domain_error("t_of_rho: rho must lie in (0,1)");
        return bisect([&](double t) { return psi(t) - rho; }, 1e-9, 95.0,
                      1e-11 * (1.0 + std::abs(std::log(rho))));
    };

    rep.rho_grid.resize(grid_points);
    rep.lambda.resize(grid_points);
    rep.lambda_b.resize(grid_points);
    rep.ratio_min = 1e300;
    rep.ratio_max = -1e300;
    for (int i = 0; i < grid_points; ++i) {
        const double rho = 0.01 + (0.99 - 0.01) * double(i) / double(grid_points - 1);
        const double t = rep.t_of_rho(rho);
        const double lam = j(t) / rho;
        const double lam_b = 2.0 / (b * (1.0 - rho * rho));
        rep.rho_grid[i] = rho;
        rep.lambda[i] = lam;
        rep.lambda_b[i] = lam_b;
        rep.ratio_min = std::min(rep.ratio_min, lam / lam_b);
        rep.ratio_max = std::max(rep.ratio_max, lam / lam_b);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// key=value descriptors

namespace {
std::string fmt17(double v) {
    char buf[64];
    snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace

std::map<std::string, std::string> profile_to_kv(const ConformalProfile& p) {
    std::map<std::string, std::string> kv;
    kv["variant"] = p.kind == ConformalProfile::Kind::stromberg ? "stromberg"
                                                                : "hyperbolic";
    kv["a"] = fmt17(p.a);
    kv["b"] = fmt17(p.b);
    return kv;
}

std::map<std::string, std::string> profile_to_kv(const ConnectedSumProfile& p) {
    std::map<std::string, std::string> kv;
    kv["variant"] = "connected_sum";
    kv["a"] = fmt17(p.a);
    kv["b"] = fmt17(p.b);
    kv["m"] = std::to_string(p.m);
    const auto& br = p.bridge.breaks();
    for (size_t i = 0; i < br.size(); ++i)
        kv["bridge_break_" + std::to_string(i)] = fmt17(br[i]);
    return kv;
}

ConformalProfile conformal_profile_from_kv(
    const std::map<std::string, std::string>& kv) {
    const double a = std::stod(kv.at("a")), b = std::stod(kv.at("b"));
    if (kv.at("variant") == "stromberg") return stromberg_profile(a, b);
    return hyperbolic_profile(a);
}

ConnectedSumProfile connected_sum_profile_from_kv(
    const std::map<std::string, std::string>& kv) {
    return build_connected_sum_profile(std::stod(kv.at("a")),
                                       std::stod(kv.at("b")),
                                       std::stoi(kv.at("m")));
}

}  // namespace maxlab
