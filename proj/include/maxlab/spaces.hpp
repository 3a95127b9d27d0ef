#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "maxlab/numerics.hpp"

namespace maxlab {

// Minimal metric-measure interface the maximal operators need. Distances
// are served on demand so that spaces with closed-form metrics can stay
// matrix-free.
class MetricSpace {
public:
    virtual ~MetricSpace() = default;
    virtual int64_t size() const = 0;
    virtual double weight(int64_t i) const = 0;
    virtual double distance(int64_t i, int64_t j) const = 0;
    virtual void distances_from(int64_t i, std::vector<double>& out) const {
        out.resize(size_t(size()));
        for (int64_t j = 0; j < size(); ++j) out[size_t(j)] = distance(i, j);
    }
    double total_weight() const;
};

// Finite metric measure space backed by an explicit symmetric distance
// matrix. The section-5 object.
class FiniteSpace : public MetricSpace {
public:
    FiniteSpace(int n, std::vector<double> dist, std::vector<double> weights,
                bool geodesic);

    int64_t size() const override { return n_; }
    double weight(int64_t i) const override { return w_[size_t(i)]; }
    double distance(int64_t i, int64_t j) const override {
        return d_[size_t(i) * size_t(n_) + size_t(j)];
    }
    void distances_from(int64_t i, std::vector<double>& out) const override;

    bool geodesic() const { return geodesic_; }
    double& mutable_weight(int64_t i) { return w_[size_t(i)]; }

    // Verifies the triangle inequality: exhaustive for n <= 500, random
    // triples otherwise.
    void validate(Rng& rng) const;

private:
    int n_;
    std::vector<double> d_;
    std::vector<double> w_;
    bool geodesic_;
};

// --- builders ---------------------------------------------------------------

struct EdgeListGraph {
    int n = 0;
    std::vector<std::vector<std::pair<int, double>>> adj;
    void add_edge(int u, int v, double len);
};

// Graph metric (Dijkstra all pairs) with the given node weights.
FiniteSpace finite_space_from_graph(const EdgeListGraph& g,
                                    std::vector<double> weights);

FiniteSpace path_space(int n, double step);
FiniteSpace cycle_space(int n, double step);
// Rectangular strip with 8-neighbour connectivity; bounded geometry with
// linear volume growth, so large R_0 windows fit.
FiniteSpace strip_space(int length, int width, double spacing);
// Random sample of a hyperbolic disc with closed-form distances.
FiniteSpace hyperbolic_disc_sample(int n, double radius, double kappa, Rng& rng);

// CSV import: edges "u,v,length" (header row) plus optional weights file
// "node,weight"; missing weights default to 1.
FiniteSpace finite_space_from_csv(const std::string& edge_csv,
                                  const std::string& weight_csv = "");

// --- section-2 test bed ------------------------------------------------------

// Polar-grid atomisation of the m=2 hyperbolic plane (curvature -kappa^2):
// ring bands of height dt, each split into equal arcs; weights are exact
// band measures and distances come from the hyperbolic law of cosines.
class HyperbolicPolarSpace : public MetricSpace {
public:
    HyperbolicPolarSpace(double kappa, double radius, double cell_size);

    int64_t size() const override { return int64_t(t_.size()); }
    double weight(int64_t i) const override { return w_[size_t(i)]; }
    double distance(int64_t i, int64_t j) const override;
    void distances_from(int64_t i, std::vector<double>& out) const override;

    double radial(int64_t i) const { return t_[size_t(i)]; }
    double theta(int64_t i) const { return th_[size_t(i)]; }
    double kappa() const { return kappa_; }
    double radius() const { return radius_; }
    // index of the atom closest to (t, theta)
    int64_t nearest(double t, double theta) const;

private:
    double kappa_, radius_;
    std::vector<double> t_, th_, w_;
    std::vector<int64_t> ring_start_;
    std::vector<int> ring_count_;
    std::vector<double> ring_t_;
};

}  // namespace maxlab
