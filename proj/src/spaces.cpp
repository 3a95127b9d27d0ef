#include "maxlab/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>

namespace maxlab {

double MetricSpace::total_weight() const {
    std::vector<double> w(static_cast<size_t>(size()), 0.0);
    for (int64_t i = 0; i < size(); ++i) w[size_t(i)] = weight(i);
    return pairwise_sum(w);
}

FiniteSpace::FiniteSpace(int n, std::vector<double> dist,
                         std::vector<double> weights, bool geodesic)
    : n_(n), d_(std::move(dist)), w_(std::move(weights)), geodesic_(geodesic) {
    if (d_.size() != size_t(n) * size_t(n) || w_.size() != size_t(n))
        throw domain_error("FiniteSpace: inconsistent sizes");
    for (double w : w_)
        if (!(w > 0.0)) throw domain_error("FiniteSpace: weights must be positive");
}

void FiniteSpace::distances_from(int64_t i, std::vector<double>& out) const {
    out.assign(d_.begin() + size_t(i) * size_t(n_),
               d_.begin() + (size_t(i) + 1) * size_t(n_));
}

void FiniteSpace::validate(Rng& rng) const {
    auto check = [&](int i, int j, int k) {
        const double dij = distance(i, j), djk = distance(j, k), dik = distance(i, k);
        if (dik > dij + djk + 1e-9 * (1.0 + dik))
            throw domain_error("FiniteSpace: triangle inequality violated");
    };
    for (int i = 0; i < n_; ++i) {
        if (std::abs(distance(i, i)) > 1e-12)
            throw domain_error("FiniteSpace: nonzero diagonal");
        for (int j = 0; j < i; ++j)
            if (std::abs(distance(i, j) - distance(j, i)) > 1e-12)
                throw domain_error("FiniteSpace: asymmetric distances");
    }
    if (n_ <= 500) {
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                for (int k = 0; k < n_; ++k) check(i, j, k);
    } else {
        for (int s = 0; s < 200000; ++s)
            check(int(rng.uniform_int(n_)), int(rng.uniform_int(n_)),
                  int(rng.uniform_int(n_)));
    }
}

void EdgeListGraph::add_edge(int u, int v, double len) {
    const int need = std::max(u, v) + 1;
    if (need > n) {
        n = need;
        adj.resize(static_cast<size_t>(n));
    }
    adj[size_t(u)].push_back({v, len});
    adj[size_t(v)].push_back({u, len});
}

FiniteSpace finite_space_from_graph(const EdgeListGraph& g,
                                    std::vector<double> weights) {
    const int n = g.n;
    std::vector<double> dist(size_t(n) * size_t(n),
                             std::numeric_limits<double>::infinity());
    using QE = std::pair<double, int>;
    for (int s = 0; s < n; ++s) {
        std::vector<double>& row = dist;
        std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
        const size_t base = size_t(s) * size_t(n);
        row[base + size_t(s)] = 0.0;
        pq.push({0.0, s});
        while (!pq.empty()) {
            auto [d, u] = pq.top();
            pq.pop();
            if (d > row[base + size_t(u)]) continue;
            for (auto [v, len] : g.adj[size_t(u)]) {
                const double nd = d + len;
                if (nd < row[base + size_t(v)]) {
                    row[base + size_t(v)] = nd;
                    pq.push({nd, v});
                }
            }
        }
    }
    for (double d : dist)
        if (std::isinf(d)) throw domain_error("graph space: disconnected graph");
    if (weights.empty()) weights.assign(size_t(n), 1.0);
    return FiniteSpace(n, std::move(dist), std::move(weights), true);
}

FiniteSpace path_space(int n, double step) {
    EdgeListGraph g;
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1, step);
    return finite_space_from_graph(g, {});
}

FiniteSpace cycle_space(int n, double step) {
    EdgeListGraph g;
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n, step);
    return finite_space_from_graph(g, {});
}

FiniteSpace strip_space(int length, int width, double spacing) {
    EdgeListGraph g;
    auto id = [&](int i, int j) { return i * width + j; };
    for (int i = 0; i < length; ++i)
        for (int j = 0; j < width; ++j) {
            if (i + 1 < length) g.add_edge(id(i, j), id(i + 1, j), spacing);
            if (j + 1 < width) g.add_edge(id(i, j), id(i, j + 1), spacing);
            if (i + 1 < length && j + 1 < width)
                g.add_edge(id(i, j), id(i + 1, j + 1), spacing * std::sqrt(2.0));
            if (i + 1 < length && j > 0)
                g.add_edge(id(i, j), id(i + 1, j - 1), spacing * std::sqrt(2.0));
        }
    return finite_space_from_graph(g, {});
}

FiniteSpace hyperbolic_disc_sample(int n, double radius, double kappa, Rng& rng) {
    // radii sampled from the hyperbolic area element, angles uniform
    std::vector<double> t(static_cast<size_t>(n), 0.0);
    std::vector<double> th(static_cast<size_t>(n), 0.0);
    const double cmax = std::cosh(kappa * radius) - 1.0;
    for (int i = 0; i < n; ++i) {
        t[size_t(i)] = std::acosh(1.0 + rng.uniform() * cmax) / kappa;
        th[size_t(i)] = rng.uniform() * 2.0 * M_PI;
    }
    std::vector<double> dist(size_t(n) * size_t(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) {
            const double arg =
                std::cosh(kappa * t[size_t(i)]) * std::cosh(kappa * t[size_t(j)]) -
                std::sinh(kappa * t[size_t(i)]) * std::sinh(kappa * t[size_t(j)]) *
                    std::cos(th[size_t(i)] - th[size_t(j)]);
            const double d = std::acosh(std::max(1.0, arg)) / kappa;
            dist[size_t(i) * size_t(n) + size_t(j)] = d;
            dist[size_t(j) * size_t(n) + size_t(i)] = d;
        }
    std::vector<double> w(size_t(n),
                          2.0 * M_PI * cmax / (kappa * kappa * double(n)));
    return FiniteSpace(n, std::move(dist), std::move(w), false);
}

FiniteSpace finite_space_from_csv(const std::string& edge_csv,
                                  const std::string& weight_csv) {
    std::ifstream in(edge_csv);
    if (!in) throw std::runtime_error("cannot read " + edge_csv);
    EdgeListGraph g;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        int u, v;
        double len;
        if (sscanf(line.c_str(), "%d,%d,%lf", &u, &v, &len) != 3)
            throw std::runtime_error("bad edge row: " + line);
        g.add_edge(u, v, len);
    }
    std::vector<double> w;
    if (!weight_csv.empty()) {
        std::ifstream win(weight_csv);
        if (!win) throw std::runtime_error("cannot read " + weight_csv);
        w.assign(size_t(g.n), 1.0);
        std::getline(win, line);
        while (std::getline(win, line)) {
            if (line.empty()) continue;
            int u;
            double x;
            if (sscanf(line.c_str(), "%d,%lf", &u, &x) != 2)
                throw std::runtime_error("bad weight row: " + line);
            w[size_t(u)] = x;
        }
    }
    return finite_space_from_graph(g, std::move(w));
}

// ---------------------------------------------------------------------------

HyperbolicPolarSpace::HyperbolicPolarSpace(double kappa, double radius,
                                           double cell_size)
    : kappa_(kappa), radius_(radius) {
    if (!(kappa > 0.0 && radius > 0.0 && cell_size > 0.0))
        throw domain_error("HyperbolicPolarSpace: bad parameters");
    const int nrings = std::max(2, int(std::ceil(radius / cell_size)));
    const double dt = radius / nrings;
    for (int r = 0; r < nrings; ++r) {
        const double t0 = r * dt, t1 = t0 + dt, tc = 0.5 * (t0 + t1);
        const double circ = 2.0 * M_PI * std::sinh(kappa * tc) / kappa;
        const int K = std::max(1, int(std::ceil(circ / cell_size)));
        const double band =
            2.0 * M_PI * (std::cosh(kappa * t1) - std::cosh(kappa * t0)) /
            (kappa * kappa);
        ring_start_.push_back(int64_t(t_.size()));
        ring_count_.push_back(K);
        ring_t_.push_back(tc);
        for (int k = 0; k < K; ++k) {
            t_.push_back(tc);
            th_.push_back((k + 0.5) * 2.0 * M_PI / K);
            w_.push_back(band / K);
        }
    }
}

double HyperbolicPolarSpace::distance(int64_t i, int64_t j) const {
    const double ti = t_[size_t(i)], tj = t_[size_t(j)];
    const double arg = std::cosh(kappa_ * ti) * std::cosh(kappa_ * tj) -
                       std::sinh(kappa_ * ti) * std::sinh(kappa_ * tj) *
                           std::cos(th_[size_t(i)] - th_[size_t(j)]);
    return std::acosh(std::max(1.0, arg)) / kappa_;
}

void HyperbolicPolarSpace::distances_from(int64_t i,
                                          std::vector<double>& out) const {
    out.resize(t_.size());
    const double ci = std::cosh(kappa_ * t_[size_t(i)]);
    const double si = std::sinh(kappa_ * t_[size_t(i)]);
    const double thi = th_[size_t(i)];
#pragma omp parallel for schedule(static)
    for (int64_t j = 0; j < int64_t(t_.size()); ++j) {
        const double arg = ci * std::cosh(kappa_ * t_[size_t(j)]) -
                           si * std::sinh(kappa_ * t_[size_t(j)]) *
                               std::cos(thi - th_[size_t(j)]);
        out[size_t(j)] = std::acosh(std::max(1.0, arg)) / kappa_;
    }
}

int64_t HyperbolicPolarSpace::nearest(double t, double theta) const {
    t = std::clamp(t, 0.0, radius_ * (1.0 - 1e-12));
    int best_ring = 0;
    double best = 1e300;
    for (size_t r = 0; r < ring_t_.size(); ++r) {
        const double d = std::abs(ring_t_[r] - t);
        if (d < best) {
            best = d;
            best_ring = int(r);
        }
    }
    const int K = ring_count_[size_t(best_ring)];
    double u = std::fmod(theta, 2.0 * M_PI);
    if (u < 0) u += 2.0 * M_PI;
    int k = int(std::floor(u / (2.0 * M_PI / K) - 0.5 + 0.5));
    k = std::clamp(k, 0, K - 1);
    return ring_start_[size_t(best_ring)] + k;
}

}  // namespace maxlab
