#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maxlab/dijkstra.hpp"
#include "maxlab/profiles.hpp"

namespace maxlab {

struct HalfPlanePoint {
    double x = 0.0;
    double y = 1.0;
};

double hyperbolic_distance(HalfPlanePoint z1, HalfPlanePoint z2, double kappa);
// horizontal-segment closed form d_1(x1+iy, x2+iy) = 2 asinh(|x1-x2|/2y)
double hyperbolic_distance_horizontal(double x1, double x2, double y,
                                      double kappa);

struct DistanceResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int mesh_levels_used = 0;
};

// Euclidean window the mesh must cover: the union of d_b-ball envelopes
// around the listed anchors (d >= d_b, so every d-ball lies inside them).
struct HalfPlaneWindow {
    struct Disc {  // Euclidean disc: the d_b ball of radius R at (x, y)
        double cx, cy, r;
    };
    std::vector<Disc> discs;
    void add_ball(const ConformalProfile& p, HalfPlanePoint z, double R);
    double y_min() const, y_max() const;
    // horizontal extent at height y, empty if the row misses every disc
    bool row_range(double y, double& lo, double& hi) const;
};

// Row-structured mesh: rows at y = exp(v0 + k dv); x-spacing per row keeps
// the metric edge length near the resolution h, capped at max_row_nodes
// nodes per row (lateral moves far from a geodesic's natural height are
// never competitive, so capped rows do not disturb shortest paths).
class HalfPlaneMesh {
public:
    HalfPlaneMesh(const ConformalProfile& prof, const HalfPlaneWindow& win,
                  double h, int max_row_nodes = 2048);

    struct Row {
        double y, x0, dx;
        int n;
    };

    int64_t nnodes() const { return off_.back(); }
    int rows() const { return int(rows_.size()); }
    const Row& row(int k) const { return rows_[size_t(k)]; }
    double resolution() const { return h_; }
    const ConformalProfile& profile() const { return *prof_; }

    int64_t node_id(int k, int j) const { return off_[size_t(k)] + j; }
    int node_row(int64_t id) const;
    HalfPlanePoint node_point(int64_t id) const;
    int64_t nearest_node(HalfPlanePoint z) const;

    template <class F>
    void for_each_neighbor(int64_t id, F&& fn) const;  // fn(other, weight)

    void dump_csv(const std::string& node_path,
                  const std::string& edge_path) const;

private:
    const ConformalProfile* prof_;
    double h_, v0_, dv_;
    std::vector<Row> rows_;
    std::vector<int64_t> off_;
    double edge_weight(HalfPlanePoint a, HalfPlanePoint b) const;
};

DijkstraTree dijkstra(const HalfPlaneMesh& mesh, int64_t source);

// Continuous polyline straightening of a mesh path: Gauss-Seidel sweeps of
// local vertex moves against exact segment quadrature. Returns the length.
double straighten_halfplane_path(const ConformalProfile& prof,
                                 std::vector<HalfPlanePoint>& path,
                                 double seg_len, int max_sweeps = 400,
                                 double rel_tol = 1e-9,
                                 bool coarse_start = true,
                                 double* last_gain = nullptr);

// Polished distance from source (the point the tree was grown from) to an
// arbitrary target.
double smoothed_distance(const HalfPlaneMesh& mesh, const DijkstraTree& tree,
                         HalfPlanePoint source, HalfPlanePoint target,
                         double seg_len = 0.05);

// Dijkstra + straightening at two mesh levels with a Richardson-style
// error estimate; errors if the window cannot certify the value.
DistanceResult numeric_distance_halfplane(const ConformalProfile& prof,
                                          HalfPlanePoint z1, HalfPlanePoint z2,
                                          double resolution = 0.2);

// L-path spec: alternating vertical/horizontal segments through corners.
struct LPath {
    std::vector<HalfPlanePoint> corners;
};
double explicit_path_length(const ConformalProfile& prof, const LPath& path);

// Per-row horizontal extent of a metric ball: rows of the mesh, for each
// radius of the grid the half-width X such that d(center, (cx +- X, y)) = R.
// Quality 'polished' bisects on straightened path lengths; 'graph' solves on
// Dijkstra distances after one straightening calibration per row/radius.
class BallRowProfile {
public:
    BallRowProfile(const HalfPlaneMesh& mesh, const DijkstraTree& tree,
                   HalfPlanePoint center, std::vector<double> radii,
                   DistanceQuality q);

    const std::vector<double>& radii() const { return radii_; }
    // interval [lo, hi] of the ball slice at mesh row k, false if empty
    bool row_interval(int k, size_t radius_idx, double& lo, double& hi) const;
    double volume(size_t radius_idx) const;          // full ball measure
    double volume_above(size_t radius_idx, double y_min) const;
    double volume_band(size_t radius_idx, double y_lo, double y_hi) const;

    double cap_bottom(size_t radius_idx) const { return caps_bot_[radius_idx]; }
    double cap_top(size_t radius_idx) const { return caps_top_[radius_idx]; }

private:
    const HalfPlaneMesh* mesh_;
    HalfPlanePoint center_;
    std::vector<double> radii_;
    std::vector<std::vector<double>> halfwidth_;  // [radius][row], <0 empty
    std::vector<double> caps_bot_, caps_top_;     // exact vertical extents
    double integrate_rows(size_t ri, double y_lo, double y_hi) const;
};

// Measure of an axis-aligned rectangle (x1,x2) x (y1,y2): exact.
double rect_measure(const ConformalProfile& prof, double x1, double x2,
                    double y1, double y2);

}  // namespace maxlab

#include "maxlab/halfplane_inl.hpp"
