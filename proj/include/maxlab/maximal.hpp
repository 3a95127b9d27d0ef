#pragma once

#include <cmath>
#include <vector>

#include "maxlab/field.hpp"
#include "maxlab/spaces.hpp"

namespace maxlab {

// Radius window; r_min exclusive, r_max inclusive, so the truncations are
// M_0 = (0,1], M_inf = (1,inf), M^sigma = (1,sigma], M_sigma = (sigma,inf).
struct RadiusWindow {
    double r_min = 0.0;
    double r_max = std::numeric_limits<double>::infinity();
    double grid_ratio = 1.05;  // used by mesh-grid paths; the exact finite
                               // path attains the true sup and ignores it

    static RadiusWindow local() { return {0.0, 1.0}; }
    static RadiusWindow at_infinity() { return {1.0, INFINITY}; }
    static RadiusWindow band(double lo, double hi) { return {lo, hi}; }
};

enum class MaximalOperator { centred, uncentred, omega };

struct MaximalReport {
    MaximalOperator op = MaximalOperator::centred;
    double omega = 0.0;  // only for the omega variant
    RadiusWindow window;
    std::vector<int64_t> eval_points;   // atom indices
    SampledField values;                // maximal value per evaluation point
    std::vector<double> argmax_radius;  // infimum radius attaining the sup
    bool center_restricted = true;      // candidate centres are atoms
    double grid_correction = 1.0;       // exact path: 1
};

// Exact centred Hardy-Littlewood maximal function on a finite space: the
// sup over continuum radii is attained on the finitely many distinct ball
// compositions, enumerated through sorted distances with prefix sums.
MaximalReport centred_maximal(const SampledField& f, const MetricSpace& X,
                              RadiusWindow w,
                              const std::vector<int64_t>& eval_points = {});

// Uncentred variant: sup over balls (centred at atoms) containing the point.
MaximalReport uncentred_maximal(const SampledField& f, const MetricSpace& X,
                                RadiusWindow w,
                                const std::vector<int64_t>& eval_points = {});

// M_inf^omega: denominator |B_R|^{1/omega}, radii R > 1.
MaximalReport omega_maximal(const SampledField& f, const MetricSpace& X,
                            double omega,
                            const std::vector<int64_t>& eval_points = {});

enum class WeakTypeMode { weak, restricted_weak };

// sup_alpha alpha E_{Mf}(alpha)^{1/p} divided by ||f||_p (weak) or by the
// Lorentz L^{p,1} norm (restricted weak).
double weak_type_ratio(const MaximalReport& rep, const SampledField& f,
                       double p, WeakTypeMode mode = WeakTypeMode::weak);

// Simple serial reference implementations, kept for testing the parallel
// kernels and for the benchmark target.
namespace serial {
MaximalReport centred_maximal(const SampledField& f, const MetricSpace& X,
                              RadiusWindow w,
                              const std::vector<int64_t>& eval_points = {});
MaximalReport uncentred_maximal(const SampledField& f, const MetricSpace& X,
                                RadiusWindow w,
                                const std::vector<int64_t>& eval_points = {});
}  // namespace serial

}  // namespace maxlab
