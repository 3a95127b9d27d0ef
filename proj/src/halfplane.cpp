#include "maxlab/halfplane.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>

namespace maxlab {

double hyperbolic_distance(HalfPlanePoint z1, HalfPlanePoint z2, double kappa) {
    if (!(z1.y > 0.0 && z2.y > 0.0 && kappa > 0.0))
        throw domain_error("hyperbolic_distance: need y > 0, kappa > 0");
    const double q = (sqr(z1.x - z2.x) + sqr(z1.y - z2.y)) / (2.0 * z1.y * z2.y);
    return std::acosh(1.0 + std::max(0.0, q)) / kappa;
}

double hyperbolic_distance_horizontal(double x1, double x2, double y,
                                      double kappa) {
    return 2.0 * std::asinh(std::abs(x1 - x2) / (2.0 * y)) / kappa;
}

// ---------------------------------------------------------------------------
// Window

void HalfPlaneWindow::add_ball(const ConformalProfile& p, HalfPlanePoint z,
                               double R) {
    // d >= d_b, so the d-ball of radius R lies in the d_b ball, which is the
    // Euclidean disc centre (x, y cosh(bR)), radius y sinh(bR)
    const double bR = p.b * R;
    discs.push_back({z.x, z.y * std::cosh(bR), z.y * std::sinh(bR)});
}

double HalfPlaneWindow::y_min() const {
    double m = 1e300;
    for (const auto& d : discs) m = std::min(m, d.cy - d.r);
    return m;
}

double HalfPlaneWindow::y_max() const {
    double m = 0.0;
    for (const auto& d : discs) m = std::max(m, d.cy + d.r);
    return m;
}

bool HalfPlaneWindow::row_range(double y, double& lo, double& hi) const {
    bool any = false;
    for (const auto& d : discs) {
        const double dy = y - d.cy;
        if (std::abs(dy) > d.r) continue;
        const double w = std::sqrt(std::max(0.0, d.r * d.r - dy * dy));
        if (!any) {
            lo = d.cx - w;
            hi = d.cx + w;
            any = true;
        } else {
            lo = std::min(lo, d.cx - w);
            hi = std::max(hi, d.cx + w);
        }
    }
    return any;
}

// ---------------------------------------------------------------------------
// Mesh

HalfPlaneMesh::HalfPlaneMesh(const ConformalProfile& prof,
                             const HalfPlaneWindow& win, double h,
                             int max_row_nodes)
    : prof_(&prof), h_(h) {
    const double ymin = win.y_min(), ymax = win.y_max();
    if (!(ymin > 0.0 && ymax > ymin)) throw domain_error("mesh: empty window");
    const double kbar = std::sqrt(prof.a * prof.b);
    v0_ = std::log(ymin) - 1e-9;
    dv_ = h * kbar;
    const int nrows = int(std::ceil((std::log(ymax) - v0_) / dv_)) + 1;
    rows_.reserve(static_cast<size_t>(nrows));
    off_.reserve(size_t(nrows) + 1);
    off_.push_back(0);
    for (int k = 0; k < nrows; ++k) {
        const double y = std::exp(v0_ + dv_ * k);
        double lo, hi;
        if (!win.row_range(y, lo, hi)) {
            // keep the row structure contiguous with a minimal placeholder
            lo = hi = win.discs.empty() ? 0.0 : win.discs.front().cx;
        }
        Row r;
        r.y = y;
        double dx = h / prof.psi(y);
        const double range = hi - lo;
        int n = range > 0.0 ? int(range / dx) + 2 : 1;
        if (n > max_row_nodes) {
            n = max_row_nodes;
            dx = range / (n - 1);
        }
        r.dx = dx;
        r.n = n;
        r.x0 = 0.5 * (lo + hi) - 0.5 * dx * (n - 1);
        rows_.push_back(r);
        off_.push_back(off_.back() + n);
    }
}

int64_t HalfPlaneMesh::nearest_node(HalfPlanePoint z) const {
    int k = int(std::lround((std::log(std::max(z.y, 1e-300)) - v0_) / dv_));
    k = std::clamp(k, 0, int(rows_.size()) - 1);
    const Row& r = rows_[size_t(k)];
    int j = int(std::lround((z.x - r.x0) / r.dx));
    j = std::clamp(j, 0, r.n - 1);
    return node_id(k, j);
}

void HalfPlaneMesh::dump_csv(const std::string& node_path,
                             const std::string& edge_path) const {
    std::FILE* fn = std::fopen(node_path.c_str(), "w");
    if (!fn) throw std::runtime_error("cannot write " + node_path);
    std::fprintf(fn, "node,x,y\n");
    for (int64_t i = 0; i < nnodes(); ++i) {
        const auto p = node_point(i);
        std::fprintf(fn, "%lld,%.17g,%.17g\n", (long long)i, p.x, p.y);
    }
    std::fclose(fn);
    std::FILE* fe = std::fopen(edge_path.c_str(), "w");
    if (!fe) throw std::runtime_error("cannot write " + edge_path);
    std::fprintf(fe, "node_from,node_to,weight\n");
    for (int64_t i = 0; i < nnodes(); ++i)
        for_each_neighbor(i, [&](int64_t j, double w) {
            if (j > i) std::fprintf(fe, "%lld,%lld,%.17g\n", (long long)i,
                                    (long long)j, w);
        });
    std::fclose(fe);
}

// ---------------------------------------------------------------------------
// Dijkstra

DijkstraTree dijkstra(const HalfPlaneMesh& mesh, int64_t source) {
    return run_dijkstra(mesh, source);
}

// ---------------------------------------------------------------------------
// Path straightening

namespace {

double seg_length_hp(const ConformalProfile& p, HalfPlanePoint a,
                     HalfPlanePoint b, int depth = 0) {
    const double L = std::hypot(b.x - a.x, b.y - a.y);
    if (L == 0.0) return 0.0;
    // split until Psi varies little across the chord: coarse polylines can
    // span decades of y, where a fixed-order rule misintegrates 1/y badly
    const double ymax = std::max(a.y, b.y), ymin = std::min(a.y, b.y);
    if (ymax > 1.3 * ymin && depth < 48) {
        const HalfPlanePoint m{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
        return seg_length_hp(p, a, m, depth + 1) +
               seg_length_hp(p, m, b, depth + 1);
    }
    double s = 0.0;
    for (int g = 0; g < 4; ++g)
        s += kGauss4Weight[g] * p.psi(a.y + (b.y - a.y) * kGauss4Node[g]);
    return L * s;
}

double path_length_hp(const ConformalProfile& p,
                      const std::vector<HalfPlanePoint>& path) {
    double L = 0.0;
    for (size_t i = 0; i + 1 < path.size(); ++i)
        L += seg_length_hp(p, path[i], path[i + 1]);
    return L;
}

// resample to m segments by (approximate) arc length
std::vector<HalfPlanePoint> resample_hp(const ConformalProfile& p,
                                        const std::vector<HalfPlanePoint>& path,
                                        int m) {
    std::vector<double> cum(path.size(), 0.0);
    for (size_t i = 1; i < path.size(); ++i)
        cum[i] = cum[i - 1] + seg_length_hp(p, path[i - 1], path[i]);
    const double total = cum.back();
    std::vector<HalfPlanePoint> out;
    out.reserve(size_t(m) + 1);
    out.push_back(path.front());
    size_t j = 0;
    for (int i = 1; i < m; ++i) {
        const double target = total * double(i) / double(m);
        while (j + 1 < cum.size() && cum[j + 1] < target) ++j;
        const double seg = cum[j + 1] - cum[j];
        const double f = seg > 0.0 ? (target - cum[j]) / seg : 0.0;
        out.push_back({path[j].x + f * (path[j + 1].x - path[j].x),
                       path[j].y + f * (path[j + 1].y - path[j].y)});
    }
    out.push_back(path.back());
    return out;
}

// one Gauss-Seidel sweep of normal-direction parabolic vertex moves;
// direction alternates so endpoint changes propagate both ways
double sweep_hp(const ConformalProfile& prof, std::vector<HalfPlanePoint>& path,
                bool reverse) {
    const size_t n = path.size();
    double total = 0.0;
    for (size_t step = 1; step + 1 < n; ++step) {
        const size_t i = reverse ? n - 1 - step : step;
        const HalfPlanePoint a = path[i - 1], b = path[i + 1];
        HalfPlanePoint p = path[i];
        double nx = -(b.y - a.y), ny = b.x - a.x;
        const double nn = std::hypot(nx, ny);
        if (nn > 0.0) {
            nx /= nn;
            ny /= nn;
            const double step0 =
                0.25 * std::min({p.y, std::hypot(p.x - a.x, p.y - a.y) + 1e-12,
                                 std::hypot(b.x - p.x, b.y - p.y) + 1e-12});
            double sigma = step0;
            auto phi = [&](double s) {
                HalfPlanePoint q{p.x + s * nx, p.y + s * ny};
                if (q.y <= 0.0) return 1e300;
                return seg_length_hp(prof, a, q) + seg_length_hp(prof, q, b);
            };
            double f0 = phi(0.0);
            for (int it = 0; it < 2; ++it) {
                const double fm = phi(-sigma), fp = phi(sigma);
                const double denom = fm - 2.0 * f0 + fp;
                double s;
                if (denom > 0.0) {
                    s = 0.5 * sigma * (fm - fp) / denom;
                    s = std::clamp(s, -2.0 * sigma, 2.0 * sigma);
                } else {
                    s = fm < fp ? -sigma : sigma;
                }
                const double fs = phi(s);
                if (fs < f0) {
                    p = {p.x + s * nx, p.y + s * ny};
                    f0 = fs;
                }
                sigma *= 0.35;
            }
            path[i] = p;
        }
    }
    for (size_t i = 0; i + 1 < n; ++i)
        total += seg_length_hp(prof, path[i], path[i + 1]);
    return total;
}

}  // namespace

double straighten_halfplane_path(const ConformalProfile& prof,
                                 std::vector<HalfPlanePoint>& path,
                                 double seg_len, int max_sweeps,
                                 double rel_tol, bool coarse_start,
                                 double* last_gain) {
    if (path.size() < 2) return 0.0;
    double total = path_length_hp(prof, path);
    if (total == 0.0) return 0.0;
    const int target_m =
        std::min(2048, std::max(4, int(std::ceil(total / seg_len))));
    // coarse-to-fine: low modes settle on the coarse polylines
    int m = int(path.size()) - 1;
    const bool warm = !coarse_start;
    if (!warm) {
        m = std::min(8, target_m);
        path = resample_hp(prof, path, m);
    }
    int sweeps_left = max_sweeps;
    double gain = 0.0;
    while (true) {
        double prev = total;
        int stall = 0;
        const int cap = warm ? std::min(sweeps_left, 60) : sweeps_left;
        for (int s = 0; s < cap; ++s) {
            total = sweep_hp(prof, path, s % 2 == 1);
            --sweeps_left;
            // equal-arc resampling redistributes vertices tangentially,
            // which normal-direction moves cannot; new vertices lie on the
            // old polyline so the length never increases
            if ((s + 1) % 12 == 0) path = resample_hp(prof, path, int(path.size()) - 1);
            gain = prev - total;
            if (gain < rel_tol * total) {
                if (++stall >= 2) break;
            } else {
                stall = 0;
            }
            prev = total;
        }
        if (int(path.size()) - 1 >= target_m || sweeps_left <= 0) break;
        m = std::min(target_m, 2 * (int(path.size()) - 1));
        path = resample_hp(prof, path, m);
        total = path_length_hp(prof, path);
    }
    if (last_gain) *last_gain = gain;
    return total;
}

double smoothed_distance(const HalfPlaneMesh& mesh, const DijkstraTree& tree,
                         HalfPlanePoint source, HalfPlanePoint target,
                         double seg_len) {
    const int64_t tn = mesh.nearest_node(target);
    std::vector<HalfPlanePoint> path;
    if (std::isinf(tree.dist[size_t(tn)]))
        throw window_error("smoothed_distance: target not reached");
    for (int64_t u = tn; u >= 0; u = tree.pred[size_t(u)]) {
        path.push_back(mesh.node_point(u));
        if (u == tree.source) break;
    }
    std::reverse(path.begin(), path.end());
    path.insert(path.begin(), source);
    path.push_back(target);
    return straighten_halfplane_path(mesh.profile(), path, seg_len);
}

DistanceResult numeric_distance_halfplane(const ConformalProfile& prof,
                                          HalfPlanePoint z1, HalfPlanePoint z2,
                                          double resolution) {
    DistanceResult res;
    if (z1.x == z2.x && z1.y == z2.y) return res;
    const double da = hyperbolic_distance(z1, z2, prof.a);
    const double R_env = da * 1.02 + 0.5;
    HalfPlaneWindow win;
    win.add_ball(prof, z1, R_env);
    win.add_ball(prof, z2, R_env);
    double values[2];
    const double levels[2] = {resolution, resolution / 2.0};
    for (int lev = 0; lev < 2; ++lev) {
        HalfPlaneMesh mesh(prof, win, levels[lev]);
        DijkstraTree tree = dijkstra(mesh, mesh.nearest_node(z1));
        std::vector<HalfPlanePoint> path;
        int64_t tn = mesh.nearest_node(z2);
        if (std::isinf(tree.dist[size_t(tn)]))
            throw window_error("numeric_distance: window too small");
        for (int64_t u = tn; u >= 0; u = tree.pred[size_t(u)]) {
            path.push_back(mesh.node_point(u));
            if (u == tree.source) break;
        }
        std::reverse(path.begin(), path.end());
        path.insert(path.begin(), z1);
        path.push_back(z2);
        values[lev] = straighten_halfplane_path(prof, path, levels[lev] / 3.0);
    }
    res.value = std::min(values[0], values[1]);
    res.error_estimate =
        std::abs(values[0] - values[1]) + 2e-5 * res.value + 1e-9;
    res.mesh_levels_used = 2;
    if (res.value > R_env - 1e-6)
        throw window_error("numeric_distance: value not certified by window");
    return res;
}

double explicit_path_length(const ConformalProfile& prof, const LPath& path) {
    double total = 0.0;
    for (size_t i = 0; i + 1 < path.corners.size(); ++i) {
        const HalfPlanePoint a = path.corners[i], b = path.corners[i + 1];
        if (!(a.y > 0.0 && b.y > 0.0))
            throw domain_error("explicit_path_length: segment leaves half-plane");
        if (a.x == b.x) {
            const double lo = std::min(a.y, b.y), hi = std::max(a.y, b.y);
            if (lo < hi)
                total += integrate([&](double y) { return prof.psi(y); }, lo, hi,
                                   1e-11);
        } else if (a.y == b.y) {
            total += prof.psi(a.y) * std::abs(b.x - a.x);
        } else {
            throw domain_error("explicit_path_length: segment is neither "
                               "vertical nor horizontal");
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Ball row profiles

namespace {

// vertical distance from (cx, cy) to (cx, y): the vertical line is a
// geodesic (x-translation symmetry), so this is exact; integrated in
// v = log y where the integrand y Psi(y) is smooth and bounded
double vertical_distance(const ConformalProfile& p, double cy, double y) {
    const double lo = std::min(cy, y), hi = std::max(cy, y);
    if (lo == hi) return 0.0;
    return integrate(
        [&](double v) {
            const double t = std::exp(v);
            return p.psi(t) * t;
        },
        std::log(lo), std::log(hi), 1e-11);
}

// solves vertical_distance(cy, Y) = R upward or downward
double vertical_cap(const ConformalProfile& p, double cy, double R, bool up) {
    auto f = [&](double y) { return vertical_distance(p, cy, y) - R; };
    if (up) {
        double hi = cy, step = std::max(cy, 1.0);
        while (f(hi + step) < 0.0) {
            hi += step;
            step *= 2.0;
        }
        return bisect(f, hi, hi + step, 1e-9 * (hi + step));
    }
    double lo = cy, step = 0.5 * cy;
    while (f(lo - step) < 0.0) {
        lo -= step;
        step = std::min(step * 2.0, 0.5 * lo);
    }
    return bisect(f, lo - step, lo, 1e-9 * (lo - step) + 1e-300);
}

}  // namespace

BallRowProfile::BallRowProfile(const HalfPlaneMesh& mesh,
                               const DijkstraTree& tree, HalfPlanePoint center,
                               std::vector<double> radii, DistanceQuality q)
    : mesh_(&mesh), center_(center), radii_(std::move(radii)) {
    std::sort(radii_.begin(), radii_.end());
    const size_t nr = radii_.size();
    halfwidth_.assign(nr, std::vector<double>(size_t(mesh.rows()), -1.0));

    // exact vertical caps per radius
    std::vector<double> ybot(nr), ytop(nr);
    for (size_t ri = 0; ri < nr; ++ri) {
        ytop[ri] = vertical_cap(mesh.profile(), center.y, radii_[ri], true);
        ybot[ri] = vertical_cap(mesh.profile(), center.y, radii_[ri], false);
    }
    caps_bot_ = ybot;
    caps_top_ = ytop;

    const double seg = std::max(0.02, mesh.resolution() / 4.0);

#pragma omp parallel for schedule(dynamic, 8)
    for (int k = 0; k < mesh.rows(); ++k) {
        const auto& row = mesh.row(k);
        std::vector<HalfPlanePoint> warm;
        const bool all_cold = q == DistanceQuality::polished;
        auto dist_at = [&](double x, bool force_cold = false) {
            HalfPlanePoint tgt{x, row.y};
            std::vector<HalfPlanePoint> path;
            bool cold = true;
            if (!(force_cold || all_cold) && warm.size() >= 2) {
                // warm restart only for small endpoint nudges; a large move
                // leaves a stale tail the local sweeps cannot swing around
                const double moved =
                    mesh.profile().psi(row.y) * std::abs(warm.back().x - x);
                if (moved <= 6.0 * seg) {
                    path = warm;
                    path.back() = tgt;
                    cold = false;
                }
            }
            if (cold) {
                int64_t tn = mesh.nearest_node(tgt);
                if (std::isinf(tree.dist[size_t(tn)])) return 1e30;
                for (int64_t u = tn; u >= 0; u = tree.pred[size_t(u)]) {
                    path.push_back(mesh.node_point(u));
                    if (u == tree.source) break;
                }
                std::reverse(path.begin(), path.end());
                path.insert(path.begin(), center_);
                path.push_back(tgt);
            }
            double gain = 0.0;
            double L = straighten_halfplane_path(
                mesh.profile(), path, seg, cold ? 600 : 120, 1e-10, cold, &gain);
            if (!cold && gain > 3e-7 * (1.0 + L)) {
                // warm refinement did not settle: rebuild from the tree
                path.clear();
                int64_t tn = mesh.nearest_node(tgt);
                if (std::isinf(tree.dist[size_t(tn)])) return 1e30;
                for (int64_t u = tn; u >= 0; u = tree.pred[size_t(u)]) {
                    path.push_back(mesh.node_point(u));
                    if (u == tree.source) break;
                }
                std::reverse(path.begin(), path.end());
                path.insert(path.begin(), center_);
                path.push_back(tgt);
                L = straighten_halfplane_path(mesh.profile(), path, seg, 600,
                                              1e-10, true);
            }
            warm = path;
            return L;
        };
        for (size_t rj = nr; rj-- > 0;) {
            const double R = radii_[rj];
            if (row.y <= ybot[rj] || row.y >= ytop[rj]) continue;
            // certainly-inside seed from the graph scan (d_G >= d)
            const int jc = std::clamp(
                int(std::lround((center_.x - row.x0) / row.dx)), 0, row.n - 1);
            double x_seed = center_.x;
            for (int j = jc, misses = 0; j < row.n; ++j) {
                const double d = double(tree.dist[size_t(mesh.node_id(k, j))]);
                if (d <= R) {
                    x_seed = std::max(x_seed, row.x0 + row.dx * j);
                    misses = 0;
                } else if (++misses >= 3) {
                    break;
                }
            }
            double lo = x_seed;
            if (lo > center_.x && dist_at(lo) > R) lo = center_.x;
            if (lo == center_.x && dist_at(lo) > R) continue;
            // exponential bracket on straightened distances
            double hi = lo + std::max({row.dx, 0.05 * (lo - center_.x)});
            int guard = 0;
            while (dist_at(hi) <= R && guard++ < 60) {
                lo = hi;
                hi = center_.x + 2.0 * (hi - center_.x) + row.dx;
            }
            if (guard > 60) continue;
            const double xtol =
                (q == DistanceQuality::polished ? 2e-4 : 2e-2) *
                std::max(hi - center_.x, row.dx);
            while (hi - lo > xtol) {
                const double mid = 0.5 * (lo + hi);
                // warm evaluations shrink the bracket; the last steps run
                // cold so the root placement carries full accuracy
                const bool fc = q == DistanceQuality::polished &&
                                hi - lo < 16.0 * xtol;
                (dist_at(mid, fc) <= R ? lo : hi) = mid;
            }
            halfwidth_[rj][size_t(k)] = 0.5 * (lo + hi) - center_.x;
        }
    }
}

bool BallRowProfile::row_interval(int k, size_t ri, double& lo,
                                  double& hi) const {
    const double X = halfwidth_[ri][size_t(k)];
    if (X < 0.0) return false;
    lo = center_.x - X;
    hi = center_.x + X;
    return true;
}

double BallRowProfile::integrate_rows(size_t ri, double y_lo,
                                      double y_hi) const {
    const auto& prof = mesh_->profile();
    y_lo = std::max(y_lo, caps_bot_[ri]);
    y_hi = std::min(y_hi, caps_top_[ri]);
    if (!(y_hi > y_lo)) return 0.0;
    // samples (v, X^2): X^2 is smooth across the ball and exactly linear at
    // the sqrt-shaped caps, so a piecewise-linear interpolant of X^2 under
    // Gauss quadrature integrates the caps without special casing
    std::vector<std::pair<double, double>> samples;
    const double vb = std::log(caps_bot_[ri]), vt = std::log(caps_top_[ri]);
    if (y_lo == caps_bot_[ri]) samples.push_back({vb, 0.0});
    for (int k = 0; k < mesh_->rows(); ++k) {
        const double y = mesh_->row(k).y;
        if (y <= y_lo || y >= y_hi) continue;
        const double X = halfwidth_[ri][size_t(k)];
        if (X >= 0.0) samples.push_back({std::log(y), X * X});
    }
    if (y_hi == caps_top_[ri]) samples.push_back({vt, 0.0});
    if (samples.size() < 2) return 0.0;
    // clipped boundaries get interpolated values
    auto interp_sq = [&](double v) {
        for (size_t i = 0; i + 1 < samples.size(); ++i) {
            if (v >= samples[i].first && v <= samples[i + 1].first) {
                const double f = (v - samples[i].first) /
                                 (samples[i + 1].first - samples[i].first);
                return samples[i].second +
                       f * (samples[i + 1].second - samples[i].second);
            }
        }
        return samples.back().second;
    };
    if (y_lo != caps_bot_[ri])
        samples.insert(samples.begin(), {std::log(y_lo), interp_sq(std::log(y_lo))});
    if (y_hi != caps_top_[ri])
        samples.push_back({std::log(y_hi), interp_sq(std::log(y_hi))});

    double total = 0.0;
    for (size_t i = 0; i + 1 < samples.size(); ++i) {
        const double va = samples[i].first, vb2 = samples[i + 1].first;
        if (!(vb2 > va)) continue;
        const double Xa = samples[i].second, Xb = samples[i + 1].second;
        double piece = 0.0;
        for (int g = 0; g < 4; ++g) {
            const double v = va + (vb2 - va) * kGauss4Node[g];
            const double Xsq = Xa + (Xb - Xa) * kGauss4Node[g];
            const double y = std::exp(v);
            piece += kGauss4Weight[g] * 2.0 * std::sqrt(std::max(0.0, Xsq)) *
                     prof.psi2(y) * y;
        }
        total += piece * (vb2 - va);
    }
    return total;
}

double BallRowProfile::volume(size_t ri) const {
    return integrate_rows(ri, caps_bot_[ri], caps_top_[ri]);
}

double BallRowProfile::volume_above(size_t ri, double y_min) const {
    return integrate_rows(ri, y_min, caps_top_[ri]);
}

double BallRowProfile::volume_band(size_t ri, double y_lo, double y_hi) const {
    return integrate_rows(ri, y_lo, y_hi);
}

double rect_measure(const ConformalProfile& prof, double x1, double x2,
                    double y1, double y2) {
    if (!(y1 > 0.0 && y2 > y1 && x2 > x1))
        throw domain_error("rect_measure: bad rectangle");
    return (x2 - x1) * (prof.psi2_integral(y2) - prof.psi2_integral(y1));
}

}  // namespace maxlab
