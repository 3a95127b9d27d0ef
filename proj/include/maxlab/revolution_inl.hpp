#pragma once

#include <algorithm>
#include <cmath>

namespace maxlab {

inline int RevolutionMesh::node_row(int64_t id) const {
    const auto it = std::upper_bound(off_.begin(), off_.end(), id);
    return int(it - off_.begin()) - 1;
}

inline RevolutionPoint RevolutionMesh::node_point(int64_t id) const {
    const int k = node_row(id);
    const Row& r = rows_[size_t(k)];
    const int j = int(id - off_[size_t(k)]);
    return {r.t, (j + 0.5) * 2.0 * M_PI / r.n};
}

inline int64_t RevolutionMesh::nearest_node(RevolutionPoint p) const {
    int k = int(std::lround((p.t - t0_) / dt_));
    k = std::clamp(k, 0, int(rows_.size()) - 1);
    const Row& r = rows_[size_t(k)];
    double u = std::fmod(p.theta, 2.0 * M_PI);
    if (u < 0) u += 2.0 * M_PI;
    int j = int(std::floor(u * r.n / (2.0 * M_PI)));
    j = std::clamp(j, 0, r.n - 1);
    return node_id(k, j);
}

template <class F>
void RevolutionMesh::for_each_neighbor(int64_t id, F&& fn) const {
    const int k = node_row(id);
    const Row& r = rows_[size_t(k)];
    const int j = int(id - off_[size_t(k)]);
    const double th = (j + 0.5) * 2.0 * M_PI / r.n;
    auto wrap = [](double a) {
        a = std::fmod(a + M_PI, 2.0 * M_PI);
        if (a < 0) a += 2.0 * M_PI;
        return a - M_PI;
    };
    auto visit_row = [&](int kk, int lo_off, int hi_off) {
        if (kk < 0 || kk >= int(rows_.size())) return;
        const Row& rr = rows_[size_t(kk)];
        const int jc = int(std::floor(th * rr.n / (2.0 * M_PI) - 0.5 + 0.5));
        for (int dj = lo_off; dj <= hi_off; ++dj) {
            int jj = jc + dj;
            jj = ((jj % rr.n) + rr.n) % rr.n;
            if (kk == k && jj == j) continue;
            const double th2 = (jj + 0.5) * 2.0 * M_PI / rr.n;
            const double dth = wrap(th2 - th);
            const double smid = g_->sigma(0.5 * (r.t + rr.t));
            fn(off_[size_t(kk)] + jj,
               std::hypot(rr.t - r.t, smid * dth));
        }
    };
    visit_row(k, -2, 2);
    visit_row(k - 1, -2, 2);
    visit_row(k + 1, -2, 2);
    visit_row(k - 2, -1, 1);
    visit_row(k + 2, -1, 1);
}

}  // namespace maxlab
