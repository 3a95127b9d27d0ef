#pragma once

#include <functional>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "maxlab/dijkstra.hpp"
#include "maxlab/profiles.hpp"

namespace maxlab {

struct RevolutionPoint {
    double t = 0.0;
    double theta = 0.0;  // wrapped to [0, 2pi)
};

// Surface of revolution dt^2 + sigma(t)^2 dtheta^2 (m = 2 everywhere).
struct RevolutionMetric {
    std::function<double(double)> sigma, dsigma;
    std::function<double(double, double)> sigma_int;  // exact band integral
    double t_min = -1e300;  // domain floor (0 for polar charts)

    double measure_band(double t1, double t2) const {
        return 2.0 * M_PI * sigma_int(t1, t2);
    }
};

RevolutionMetric metric_of(const ConnectedSumProfile& p);
RevolutionMetric polar_metric(double kappa);  // hyperbolic plane, sigma = sinh(kt)/k

class RevolutionMesh {
public:
    RevolutionMesh(const RevolutionMetric& g, double t_lo, double t_hi,
                   double h, int max_row_nodes = 1024);

    struct Row {
        double t, sigma;
        int n;  // theta_j = (j + 1/2) * 2pi / n
    };

    int64_t nnodes() const { return off_.back(); }
    int rows() const { return int(rows_.size()); }
    const Row& row(int k) const { return rows_[size_t(k)]; }
    double resolution() const { return h_; }
    const RevolutionMetric& metric() const { return *g_; }

    int64_t node_id(int k, int j) const { return off_[size_t(k)] + j; }
    int node_row(int64_t id) const;
    RevolutionPoint node_point(int64_t id) const;
    int64_t nearest_node(RevolutionPoint p) const;

    template <class F>
    void for_each_neighbor(int64_t id, F&& fn) const;

private:
    const RevolutionMetric* g_;
    double h_, t0_, dt_;
    std::vector<Row> rows_;
    std::vector<int64_t> off_;
};

// Path vertices carry unwrapped theta so winding is preserved.
double straighten_revolution_path(const RevolutionMetric& g,
                                  std::vector<RevolutionPoint>& path,
                                  double seg_len, int max_sweeps = 400,
                                  double rel_tol = 1e-9,
                                  bool coarse_start = true,
                                  double* last_gain = nullptr);

double smoothed_distance(const RevolutionMesh& mesh, const DijkstraTree& tree,
                         RevolutionPoint source, RevolutionPoint target,
                         double seg_len = 0.05);

struct RevDistanceResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int mesh_levels_used = 0;
};

// Distance depends only on (t1, t2, |dtheta|); results are cached under a
// quantised key and the cache is mutex-guarded for concurrent queries.
class RevolutionDistanceCache {
public:
    explicit RevolutionDistanceCache(const RevolutionMetric& g,
                                     double resolution = 0.1)
        : g_(&g), res_(resolution) {}
    RevDistanceResult distance(RevolutionPoint p1, RevolutionPoint p2);

private:
    const RevolutionMetric* g_;
    double res_;
    std::mutex mu_;
    std::unordered_map<uint64_t, RevDistanceResult> cache_;
};

RevDistanceResult numeric_distance_revolution(const RevolutionMetric& g,
                                              RevolutionPoint p1,
                                              RevolutionPoint p2,
                                              double resolution = 0.1);

// Per-row arc half-angle of a metric ball: for each mesh row and radius,
// theta_max in [0, pi] (pi = full wrap, <0 = empty).
class BallArcProfile {
public:
    BallArcProfile(const RevolutionMesh& mesh, const DijkstraTree& tree,
                   RevolutionPoint center, std::vector<double> radii,
                   DistanceQuality q);

    const std::vector<double>& radii() const { return radii_; }
    double theta_max(int k, size_t radius_idx) const {
        return arc_[radius_idx][size_t(k)];
    }
    double volume(size_t radius_idx) const;
    double volume_band(size_t radius_idx, double t_lo, double t_hi) const;
    double cap_lo(size_t ri) const { return caps_lo_[ri]; }
    double cap_hi(size_t ri) const { return caps_hi_[ri]; }

private:
    const RevolutionMesh* mesh_;
    RevolutionPoint center_;
    std::vector<double> radii_;
    std::vector<std::vector<double>> arc_;
    std::vector<double> caps_lo_, caps_hi_;
    bool pole_full_ = false;  // polar chart: ball swallows the pole
};

}  // namespace maxlab

#include "maxlab/revolution_inl.hpp"
