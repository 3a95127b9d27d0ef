#pragma once

#include <algorithm>
#include <cmath>

namespace maxlab {

inline int HalfPlaneMesh::node_row(int64_t id) const {
    const auto it = std::upper_bound(off_.begin(), off_.end(), id);
    return int(it - off_.begin()) - 1;
}

inline HalfPlanePoint HalfPlaneMesh::node_point(int64_t id) const {
    const int k = node_row(id);
    const Row& r = rows_[size_t(k)];
    const int j = int(id - off_[size_t(k)]);
    return {r.x0 + r.dx * j, r.y};
}

inline double HalfPlaneMesh::edge_weight(HalfPlanePoint a,
                                         HalfPlanePoint b) const {
    const double mid_y = 0.5 * (a.y + b.y);
    return prof_->psi(mid_y) * std::hypot(b.x - a.x, b.y - a.y);
}

template <class F>
void HalfPlaneMesh::for_each_neighbor(int64_t id, F&& fn) const {
    const int k = node_row(id);
    const Row& r = rows_[size_t(k)];
    const int j = int(id - off_[size_t(k)]);
    const HalfPlanePoint p{r.x0 + r.dx * j, r.y};
    auto visit_row = [&](int kk, int lo_off, int hi_off) {
        if (kk < 0 || kk >= int(rows_.size())) return;
        const Row& rr = rows_[size_t(kk)];
        const int jc = int(std::lround((p.x - rr.x0) / rr.dx));
        for (int dj = lo_off; dj <= hi_off; ++dj) {
            const int jj = jc + dj;
            if (jj < 0 || jj >= rr.n) continue;
            if (kk == k && jj == j) continue;
            const HalfPlanePoint q{rr.x0 + rr.dx * jj, rr.y};
            fn(off_[size_t(kk)] + jj, edge_weight(p, q));
        }
    };
    visit_row(k, -2, 2);
    visit_row(k - 1, -2, 2);
    visit_row(k + 1, -2, 2);
    visit_row(k - 2, -1, 1);
    visit_row(k + 2, -1, 1);
}

}  // namespace maxlab
