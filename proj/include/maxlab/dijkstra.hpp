#pragma once

#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

namespace maxlab {

enum class DistanceQuality { graph, polished };

struct DijkstraTree {
    std::vector<float> dist;
    std::vector<int32_t> pred;
    int64_t source = -1;
    double reached_radius = 0.0;
};

// Mesh needs nnodes() and for_each_neighbor(id, fn(other, weight)).
template <class Mesh>
DijkstraTree run_dijkstra(const Mesh& mesh, int64_t source) {
    const int64_t n = mesh.nnodes();
    DijkstraTree t;
    t.dist.assign(size_t(n), std::numeric_limits<float>::infinity());
    t.pred.assign(size_t(n), -1);
    t.source = source;
    using QE = std::pair<float, uint32_t>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
    t.dist[size_t(source)] = 0.0f;
    pq.push({0.0f, uint32_t(source)});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > t.dist[u]) continue;
        t.reached_radius = double(d);
        mesh.for_each_neighbor(int64_t(u), [&](int64_t v, double w) {
            const float nd = d + float(w);
            if (nd < t.dist[size_t(v)]) {
                t.dist[size_t(v)] = nd;
                t.pred[size_t(v)] = int32_t(u);
                pq.push({nd, uint32_t(v)});
            }
        });
    }
    return t;
}

// Stops expanding once the settled distance exceeds the limit; nodes
// beyond it keep an infinite distance.
template <class Mesh>
DijkstraTree run_dijkstra_limited(const Mesh& mesh, int64_t source,
                                  double limit) {
    const int64_t n = mesh.nnodes();
    DijkstraTree t;
    t.dist.assign(size_t(n), std::numeric_limits<float>::infinity());
    t.pred.assign(size_t(n), -1);
    t.source = source;
    using QE = std::pair<float, uint32_t>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
    t.dist[size_t(source)] = 0.0f;
    pq.push({0.0f, uint32_t(source)});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > t.dist[u]) continue;
        if (double(d) > limit) break;
        t.reached_radius = double(d);
        mesh.for_each_neighbor(int64_t(u), [&](int64_t v, double w) {
            const float nd = d + float(w);
            if (nd < t.dist[size_t(v)]) {
                t.dist[size_t(v)] = nd;
                t.pred[size_t(v)] = int32_t(u);
                pq.push({nd, uint32_t(v)});
            }
        });
    }
    return t;
}

}  // namespace maxlab
