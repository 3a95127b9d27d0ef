#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "maxlab/numerics.hpp"
#include "maxlab/piecewise_poly.hpp"

namespace maxlab {

// ---------------------------------------------------------------------------
// Space forms M_kappa: constant curvature -kappa^2, dimension m, q = e^{m-1}.

struct SpaceFormParams {
    double kappa = 1.0;
    int m = 2;
    double eta1 = 0.0, eta2 = 0.0;  // ball-volume growth constants

    double q() const { return std::exp(double(m - 1)); }
    double rho_vol() const { return 0.5 * (m - 1) * kappa; }
};

SpaceFormParams make_space_form(double kappa, int m);

// vol(B_R) in M_kappa; closed form for m in {2,3}, quadrature otherwise.
double space_form_ball_volume(const SpaceFormParams& p, double R);
double sphere_surface_area(int m);  // vol(S^{m-1})

// ---------------------------------------------------------------------------
// Conformal half-plane profiles: metric Psi(y)^2 (dx^2 + dy^2) on Im z > 0.

struct ConformalProfile {
    enum class Kind { stromberg, hyperbolic };
    Kind kind = Kind::hyperbolic;
    double a = 1.0, b = 1.0;  // stromberg pinching constants; a = b = kappa
                              // for the hyperbolic variant

    double psi(double y) const;
    double psi2(double y) const;
    double dpsi(double y) const;       // dPsi/dy
    double psi2_integral(double y) const;  // antiderivative of Psi^2
};

ConformalProfile stromberg_profile(double a, double b);
ConformalProfile hyperbolic_profile(double kappa);

double eval_stromberg_psi(double y, double a, double b);

struct CurvatureValue {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = true;
};
// Gaussian curvature K = -(1/(2 Psi^2)) d^2/dy^2 log(Psi^2) via 5-point
// central differences with one Richardson level.
CurvatureValue gaussian_curvature_halfplane(const ConformalProfile& p, double y);

// ---------------------------------------------------------------------------
// Rotationally symmetric model manifolds: dt^2 + j(t)^2 g_{S^{m-1}}.

struct PsiTauRecord {
    double tau = 0.0, nu = 0.0, delta = 0.0, c_m = 0.0, T = 0.0;
    PiecewisePoly phi;       // psi_tau'' (the bump phi_tau)
    PiecewisePoly psi_d;     // psi_tau'
    PiecewisePoly psi;       // psi_tau
};

struct WarpingProfile {
    int m = 3;
    std::function<double(double)> j, dj, d2j;
    std::optional<PsiTauRecord> perturbation;
};

WarpingProfile sinh_warping(double kappa, int m);  // j = sinh(kappa t)/kappa

struct ModelCurvatures {
    double radial = 0.0;      // -j''/j
    double tangential = 0.0;  // (1 - j'^2)/j^2
    double scalar = 0.0;      // (m-1)(m-2) tangential - 2(m-1) j''/j
};
ModelCurvatures model_curvatures(const WarpingProfile& p, double t);

// j_tau = sinh + psi_tau with psi_tau supported in [tau-nu, tau+nu];
// validates the six bump properties as part of construction.
WarpingProfile build_psi_tau(double tau, double nu, double delta, double c_m,
                             int m);

// Warping with radial curvature -k(t)^2, where k ramps smoothly from a to b
// (C^2 smoothstep over [t0, t0+width]); j solved from j'' = k^2 j by RK4.
// The scalar curvature of the result is pinched in [-m(m-1)b^2, -m(m-1)a^2].
WarpingProfile ramp_warping(double a, double b, int m, double t0 = 2.0,
                            double width = 3.0, double t_max = 60.0);

// ---------------------------------------------------------------------------
// Connected sum of two space forms, rotationally symmetric gluing:
// metric dt^2 + sigma(t)^2 g_{S^{m-1}} on R x S^{m-1}.

struct ConnectedSumProfile {
    double a = 1.0, b = 2.0;
    int m = 2;
    PiecewisePoly bridge;    // sigma on [-1,1]
    PiecewisePoly bridge_d;  // its derivative

    double sigma(double t) const;
    double dsigma(double t) const;
    double sigma_integral(double t1, double t2) const;  // exact
    double min_sigma() const;
};

ConnectedSumProfile build_connected_sum_profile(double a, double b, int m);

// ---------------------------------------------------------------------------
// Conformal factor of a warped model: psi = A*phi with phi' = phi / j,
// lambda(rho) = 1/psi'(psi^{-1}(rho)) = j(psi^{-1}(rho)) / rho on (0,1).

struct ConformalFactorReport {
    std::vector<double> rho_grid;
    std::vector<double> lambda;
    std::vector<double> lambda_b;
    double ratio_min = 0.0, ratio_max = 0.0;  // extrema of lambda/lambda_b
    std::function<double(double)> psi_of_t;   // the diffeomorphism (0,inf)->(0,1)
    std::function<double(double)> t_of_rho;   // its inverse (bisection)
};

ConformalFactorReport conformal_factor_from_warping(const WarpingProfile& p,
                                                    double b,
                                                    int grid_points = 99);

// ---------------------------------------------------------------------------
// Plain-text key=value round trip so runs are reproducible from config.

std::map<std::string, std::string> profile_to_kv(const ConformalProfile& p);
std::map<std::string, std::string> profile_to_kv(const ConnectedSumProfile& p);
ConformalProfile conformal_profile_from_kv(
    const std::map<std::string, std::string>& kv);
ConnectedSumProfile connected_sum_profile_from_kv(
    const std::map<std::string, std::string>& kv);

}  // namespace maxlab
