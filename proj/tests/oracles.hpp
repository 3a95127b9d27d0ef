#pragma once

// Test-only oracles, deliberately independent of the library's optimized
// code paths.

#include <algorithm>
#include <cmath>
#include <vector>

#include "maxlab/field.hpp"
#include "maxlab/maximal.hpp"
#include "maxlab/profiles.hpp"
#include "maxlab/spaces.hpp"

namespace oracle {

using maxlab::MetricSpace;
using maxlab::RadiusWindow;
using maxlab::SampledField;

// Exhaustive enumeration of all distinct ball compositions. Sums run in
// sorted-by-distance order (ties by index) so values agree bit for bit
// with the prefix-scan implementation.
inline double brute_centred(const SampledField& f, const MetricSpace& X,
                            RadiusWindow w, int64_t x) {
    const int64_t n = X.size();
    std::vector<double> d(static_cast<size_t>(n));
    for (int64_t y = 0; y < n; ++y) d[size_t(y)] = X.distance(x, y);
    std::vector<double> levels = d;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    double best = -1.0;
    for (size_t j = 0; j < levels.size(); ++j) {
        const double next = j + 1 < levels.size()
                                ? levels[j + 1]
                                : std::numeric_limits<double>::infinity();
        if (!(levels[j] < w.r_max && next > w.r_min)) continue;
        // ball realized for r in (levels[j], next]: {y : d(y) <= levels[j]}
        std::vector<std::pair<double, int64_t>> members;
        for (int64_t y = 0; y < n; ++y)
            if (d[size_t(y)] <= levels[j]) members.push_back({d[size_t(y)], y});
        std::sort(members.begin(), members.end());
        double S = 0.0, W = 0.0;
        for (auto& [dist, y] : members) {
            S += f.weight[size_t(y)] * std::abs(f.value[size_t(y)]);
            W += f.weight[size_t(y)];
        }
        if (W > 0.0) best = std::max(best, S / W);
    }
    return best;
}

inline double brute_uncentred(const SampledField& f, const MetricSpace& X,
                              RadiusWindow w, int64_t x) {
    const int64_t n = X.size();
    double best = -1.0;
    for (int64_t c = 0; c < n; ++c) {
        std::vector<double> d(static_cast<size_t>(n));
        for (int64_t y = 0; y < n; ++y) d[size_t(y)] = X.distance(c, y);
        std::vector<double> levels = d;
        std::sort(levels.begin(), levels.end());
        levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
        for (size_t j = 0; j < levels.size(); ++j) {
            const double next = j + 1 < levels.size()
                                    ? levels[j + 1]
                                    : std::numeric_limits<double>::infinity();
            if (!(levels[j] < w.r_max && next > w.r_min)) continue;
            if (d[size_t(x)] > levels[j]) continue;  // ball must contain x
            std::vector<std::pair<double, int64_t>> members;
            for (int64_t y = 0; y < n; ++y)
                if (d[size_t(y)] <= levels[j])
                    members.push_back({d[size_t(y)], y});
            std::sort(members.begin(), members.end());
            double S = 0.0, W = 0.0;
            for (auto& [dist, y] : members) {
                S += f.weight[size_t(y)] * std::abs(f.value[size_t(y)]);
                W += f.weight[size_t(y)];
            }
            if (W > 0.0) best = std::max(best, S / W);
        }
    }
    return best;
}

// Closed-form second derivative of log Psi^2 for the Stromberg profile:
// log Psi^2 = -2 log y + log(1/b^2 + c/(y+1)), c = 1/a^2 - 1/b^2.
inline double stromberg_curvature_symbolic(double y, double a, double b) {
    const double c = 1.0 / (a * a) - 1.0 / (b * b);
    const double u = 1.0 / (b * b) + c / (y + 1.0);
    const double du = -c / ((y + 1.0) * (y + 1.0));
    const double ddu = 2.0 * c / ((y + 1.0) * (y + 1.0) * (y + 1.0));
    const double glogpp = 2.0 / (y * y) + ddu / u - (du / u) * (du / u);
    const double psi2 = u / (y * y);
    return -glogpp / (2.0 * psi2);
}

// 1-D Clairaut shooting on a surface of revolution dt^2 + sigma^2 dtheta^2.
// Same-side geodesics with one turning point t* where sigma(t*) = clairaut
// constant; integrals regularized by the substitution t = t* + x^2.
struct ClairautOracle {
    std::function<double(double)> sigma;

    // theta swing and length for the dip from t_hi down to the turning
    // point t_star and back up to t_hi (one side only)
    void dip_side(double c, double t_star, double t_hi, double& dth,
                  double& len) const {
        const int N = 4000;
        dth = 0.0;
        len = 0.0;
        const double w = std::sqrt(t_hi - t_star);
        for (int i = 0; i < N; ++i) {
            const double x = w * (i + 0.5) / N;
            const double t = t_star + x * x;
            const double s = sigma(t);
            const double q = std::sqrt(std::max(1e-300, 1.0 - c * c / (s * s)));
            const double jac = 2.0 * x * (w / N);
            dth += jac * c / (s * s * q);
            len += jac / q;
        }
    }

    // distance between (t0, 0) and (t0, dtheta): scan the symmetric-dip
    // family, interpolate the length at the requested swing, and compare
    // with the circle-arc fallback
    double same_latitude_distance(double t0, double dtheta, double t_waist) const {
        double best = sigma(t0) * dtheta;
        std::vector<std::pair<double, double>> samples;  // (swing, length)
        const int M = 1200;
        for (int i = 1; i < M; ++i) {
            const double t_star = t_waist + (t0 - t_waist) * i / M;
            const double c = sigma(t_star);
            if (c >= sigma(t0) * (1.0 - 1e-9)) continue;
            double dth, len;
            dip_side(c, t_star, t0, dth, len);
            samples.push_back({2.0 * dth, 2.0 * len});
        }
        std::sort(samples.begin(), samples.end());
        for (size_t i = 0; i + 1 < samples.size(); ++i) {
            const auto& [s0, l0] = samples[i];
            const auto& [s1, l1] = samples[i + 1];
            if (s0 <= dtheta && dtheta <= s1 && s1 > s0) {
                const double f = (dtheta - s0) / (s1 - s0);
                best = std::min(best, l0 + f * (l1 - l0));
            }
        }
        return best;
    }
};

}  // namespace oracle
