#include "maxlab/revolution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>

namespace maxlab {

RevolutionMetric metric_of(const ConnectedSumProfile& p) {
    auto sp = std::make_shared<ConnectedSumProfile>(p);
    RevolutionMetric g;
    g.sigma = [sp](double t) { return sp->sigma(t); };
    g.dsigma = [sp](double t) { return sp->dsigma(t); };
    g.sigma_int = [sp](double a, double b) { return sp->sigma_integral(a, b); };
    g.t_min = -1e300;
    return g;
}

RevolutionMetric polar_metric(double kappa) {
    if (!(kappa > 0.0)) throw domain_error("polar_metric: kappa > 0");
    RevolutionMetric g;
    g.sigma = [kappa](double t) { return std::sinh(kappa * t) / kappa; };
    g.dsigma = [kappa](double t) { return std::cosh(kappa * t); };
    g.sigma_int = [kappa](double a, double b) {
        return (std::cosh(kappa * b) - std::cosh(kappa * a)) / (kappa * kappa);
    };
    g.t_min = 0.0;
    return g;
}

RevolutionMesh::RevolutionMesh(const RevolutionMetric& g, double t_lo,
                               double t_hi, double h, int max_row_nodes)
    : g_(&g), h_(h) {
    t_lo = std::max(t_lo, g.t_min);
    if (!(t_hi > t_lo)) throw domain_error("revolution mesh: empty window");
    t0_ = t_lo;
    dt_ = h;
    const int nrows = int(std::ceil((t_hi - t_lo) / h)) + 1;
    rows_.reserve(static_cast<size_t>(nrows));
    off_.push_back(0);
    for (int k = 0; k < nrows; ++k) {
        Row r;
        r.t = t0_ + dt_ * k;
        r.sigma = g.sigma(r.t);
        const double circ = 2.0 * M_PI * r.sigma;
        r.n = std::clamp(int(std::ceil(circ / h)), 6, max_row_nodes);
        rows_.push_back(r);
        off_.push_back(off_.back() + r.n);
    }
}

// ---------------------------------------------------------------------------
// Straightening (unwrapped theta coordinates)

namespace {

double seg_length_rev(const RevolutionMetric& g, RevolutionPoint a,
                      RevolutionPoint b, int depth = 0) {
    const double dt = b.t - a.t, dth = b.theta - a.theta;
    if (dt == 0.0 && dth == 0.0) return 0.0;
    // sigma varies exponentially in t: split until it is nearly constant
    // across the chord so the fixed-order rule stays accurate
    if (std::abs(dt) > 0.26 && depth < 48) {
        const RevolutionPoint m{0.5 * (a.t + b.t), 0.5 * (a.theta + b.theta)};
        return seg_length_rev(g, a, m, depth + 1) +
               seg_length_rev(g, m, b, depth + 1);
    }
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double t = a.t + dt * kGauss4Node[i];
        s += kGauss4Weight[i] * std::hypot(dt, g.sigma(t) * dth);
    }
    return s;
}

double path_length_rev(const RevolutionMetric& g,
                       const std::vector<RevolutionPoint>& path) {
    double L = 0.0;
    for (size_t i = 0; i + 1 < path.size(); ++i)
        L += seg_length_rev(g, path[i], path[i + 1]);
    return L;
}

std::vector<RevolutionPoint> resample_rev(const RevolutionMetric& g,
                                          const std::vector<RevolutionPoint>& path,
                                          int m) {
    std::vector<double> cum(path.size(), 0.0);
    for (size_t i = 1; i < path.size(); ++i)
        cum[i] = cum[i - 1] + seg_length_rev(g, path[i - 1], path[i]);
    const double total = cum.back();
    std::vector<RevolutionPoint> out;
    out.reserve(size_t(m) + 1);
    out.push_back(path.front());
    size_t j = 0;
    for (int i = 1; i < m; ++i) {
        const double target = total * double(i) / double(m);
        while (j + 1 < cum.size() && cum[j + 1] < target) ++j;
        const double seg = cum[j + 1] - cum[j];
        const double f = seg > 0.0 ? (target - cum[j]) / seg : 0.0;
        out.push_back({path[j].t + f * (path[j + 1].t - path[j].t),
                       path[j].theta + f * (path[j + 1].theta - path[j].theta)});
    }
    out.push_back(path.back());
    return out;
}

double sweep_rev(const RevolutionMetric& g, std::vector<RevolutionPoint>& path,
                 bool reverse) {
    const size_t n = path.size();
    double total = 0.0;
    for (size_t step = 1; step + 1 < n; ++step) {
        const size_t i = reverse ? n - 1 - step : step;
        const RevolutionPoint a = path[i - 1], b = path[i + 1];
        RevolutionPoint p = path[i];
        const double sig = std::max(g.sigma(std::max(p.t, g.t_min)), 1e-9);
        // metric-orthonormal normal of the chord a->b at p
        const double ct = b.t - a.t, cth = b.theta - a.theta;
        const double cnorm = std::hypot(ct, sig * cth);
        if (cnorm > 0.0) {
            double nt = -sig * cth, nth = ct / sig;  // |(nt, nth)|_G = cnorm
            nt /= cnorm;
            nth /= cnorm;
            const double la = seg_length_rev(g, a, p),
                         lb = seg_length_rev(g, p, b);
            double sigma_step = 0.25 * std::min(la + 1e-12, lb + 1e-12);
            auto phi = [&](double s) {
                RevolutionPoint q{p.t + s * nt, p.theta + s * nth};
                if (q.t < g.t_min) return 1e300;
                return seg_length_rev(g, a, q) + seg_length_rev(g, q, b);
            };
            double f0 = phi(0.0);
            for (int it = 0; it < 2; ++it) {
                const double fm = phi(-sigma_step), fp = phi(sigma_step);
                const double denom = fm - 2.0 * f0 + fp;
                double s;
                if (denom > 0.0) {
                    s = 0.5 * sigma_step * (fm - fp) / denom;
                    s = std::clamp(s, -2.0 * sigma_step, 2.0 * sigma_step);
                } else {
                    s = fm < fp ? -sigma_step : sigma_step;
                }
                const double fs = phi(s);
                if (fs < f0) {
                    p = {p.t + s * nt, p.theta + s * nth};
                    f0 = fs;
                }
                sigma_step *= 0.35;
            }
            path[i] = p;
        }
    }
    for (size_t i = 0; i + 1 < n; ++i)
        total += seg_length_rev(g, path[i], path[i + 1]);
    return total;
}

}  // namespace

double straighten_revolution_path(const RevolutionMetric& g,
                                  std::vector<RevolutionPoint>& path,
                                  double seg_len, int max_sweeps,
                                  double rel_tol, bool coarse_start,
                                  double* last_gain) {
    if (path.size() < 2) return 0.0;
    double total = path_length_rev(g, path);
    if (total == 0.0) return 0.0;
    const int target_m =
        std::min(2048, std::max(4, int(std::ceil(total / seg_len))));
    int m = int(path.size()) - 1;
    const bool warm = !coarse_start;
    if (!warm) {
        m = std::min(8, target_m);
        path = resample_rev(g, path, m);
    }
    int sweeps_left = max_sweeps;
    double gain = 0.0;
    while (true) {
        double prev = total;
        int stall = 0;
        const int cap = warm ? std::min(sweeps_left, 60) : sweeps_left;
        for (int s = 0; s < cap; ++s) {
            total = sweep_rev(g, path, s % 2 == 1);
            --sweeps_left;
            // equal-arc resampling redistributes vertices tangentially,
            // which normal-direction moves cannot; new vertices lie on the
            // old polyline so the length never increases
            if ((s + 1) % 12 == 0) path = resample_rev(g, path, int(path.size()) - 1);
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
        path = resample_rev(g, path, m);
        total = path_length_rev(g, path);
    }
    if (last_gain) *last_gain = gain;
    return total;
}

namespace {

// pred-chain path with theta unwrapped along the walk
std::vector<RevolutionPoint> tree_path(const RevolutionMesh& mesh,
                                       const DijkstraTree& tree, int64_t tn) {
    std::vector<RevolutionPoint> path;
    for (int64_t u = tn; u >= 0; u = tree.pred[size_t(u)]) {
        path.push_back(mesh.node_point(u));
        if (u == tree.source) break;
    }
    std::reverse(path.begin(), path.end());
    for (size_t i = 1; i < path.size(); ++i) {
        double d = path[i].theta - path[i - 1].theta;
        d = std::remainder(d, 2.0 * M_PI);
        path[i].theta = path[i - 1].theta + d;
    }
    return path;
}

}  // namespace

double smoothed_distance(const RevolutionMesh& mesh, const DijkstraTree& tree,
                         RevolutionPoint source, RevolutionPoint target,
                         double seg_len) {
    const int64_t tn = mesh.nearest_node(target);
    if (std::isinf(tree.dist[size_t(tn)]))
        throw window_error("smoothed_distance: target not reached");
    std::vector<RevolutionPoint> path = tree_path(mesh, tree, tn);
    RevolutionPoint s = source, t = target;
    s.theta = path.front().theta +
              std::remainder(s.theta - path.front().theta, 2.0 * M_PI);
    t.theta = path.back().theta +
              std::remainder(t.theta - path.back().theta, 2.0 * M_PI);
    path.insert(path.begin(), s);
    path.push_back(t);
    return straighten_revolution_path(mesh.metric(), path, seg_len);
}

RevDistanceResult numeric_distance_revolution(const RevolutionMetric& g,
                                              RevolutionPoint p1,
                                              RevolutionPoint p2,
                                              double resolution) {
    RevDistanceResult res;
    double dth = std::abs(std::remainder(p2.theta - p1.theta, 2.0 * M_PI));
    if (p1.t == p2.t && dth == 0.0) return res;
    // cheap upper bound: meridian + circle arc through the best latitude
    const double lo_t = std::min(p1.t, p2.t), hi_t = std::max(p1.t, p2.t);
    double U = 1e300;
    const double scan_lo = std::max(g.t_min, lo_t - 64.0);
    for (int i = 0; i <= 256; ++i) {
        const double ts = scan_lo + (hi_t - scan_lo) * i / 256.0;
        U = std::min(U, std::abs(p1.t - ts) + std::abs(p2.t - ts) +
                            g.sigma(ts) * dth);
    }
    const double t_lo = std::max(g.t_min, lo_t - U - 1.0);
    const double t_hi = hi_t + U * 0.51 + 1.0;
    double values[2];
    const double levels[2] = {resolution, resolution / 2.0};
    for (int lev = 0; lev < 2; ++lev) {
        RevolutionMesh mesh(g, t_lo, t_hi, levels[lev]);
        RevolutionPoint q1{p1.t, 0.0}, q2{p2.t, dth};
        DijkstraTree tree = run_dijkstra(mesh, mesh.nearest_node(q1));
        values[lev] = smoothed_distance(mesh, tree, q1, q2, levels[lev] / 3.0);
    }
    res.value = std::min(values[0], values[1]);
    res.error_estimate =
        std::abs(values[0] - values[1]) + 2e-5 * res.value + 1e-9;
    res.mesh_levels_used = 2;
    return res;
}

RevDistanceResult RevolutionDistanceCache::distance(RevolutionPoint p1,
                                                    RevolutionPoint p2) {
    const double dth = std::abs(std::remainder(p2.theta - p1.theta, 2.0 * M_PI));
    std::array<int64_t, 3> key = {llround(p1.t * 1e9), llround(p2.t * 1e9),
                                  llround(dth * 1e9)};
    if (key[0] > key[1]) std::swap(key[0], key[1]);
    static_assert(sizeof(uint64_t) == 8);
    const uint64_t hk = uint64_t(key[0]) * 0x9e3779b97f4a7c15ull ^
                        uint64_t(key[1]) * 0xbf58476d1ce4e5b9ull ^
                        uint64_t(key[2]);
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = cache_.find(hk);
        if (it != cache_.end()) return it->second;
    }
    RevDistanceResult r = numeric_distance_revolution(*g_, p1, p2, res_);
    std::lock_guard<std::mutex> lk(mu_);
    cache_.emplace(hk, r);
    return r;
}

// ---------------------------------------------------------------------------
// Ball arc profiles

BallArcProfile::BallArcProfile(const RevolutionMesh& mesh,
                               const DijkstraTree& tree, RevolutionPoint center,
                               std::vector<double> radii, DistanceQuality q)
    : mesh_(&mesh), center_(center), radii_(std::move(radii)) {
    std::sort(radii_.begin(), radii_.end());
    const size_t nr = radii_.size();
    arc_.assign(nr, std::vector<double>(size_t(mesh.rows()), -1.0));
    caps_lo_.resize(nr);
    caps_hi_.resize(nr);
    const RevolutionMetric& g = mesh.metric();
    for (size_t ri = 0; ri < nr; ++ri) {
        caps_hi_[ri] = center.t + radii_[ri];  // meridians are geodesics
        caps_lo_[ri] = center.t - radii_[ri];
        if (caps_lo_[ri] < g.t_min) {
            caps_lo_[ri] = g.t_min;
            pole_full_ = true;
        }
    }
    const double seg = std::max(0.02, mesh.resolution() / 4.0);

#pragma omp parallel for schedule(dynamic, 8)
    for (int k = 0; k < mesh.rows(); ++k) {
        const auto& row = mesh.row(k);
        std::vector<RevolutionPoint> warm;
        const bool all_cold = q == DistanceQuality::polished;
        auto dist_at = [&](double th, bool force_cold = false) {
            RevolutionPoint tgt{row.t, center_.theta + th};
            std::vector<RevolutionPoint> path;
            bool cold = true;
            if (!(force_cold || all_cold) && warm.size() >= 2) {
                RevolutionPoint cand = tgt;
                cand.theta = warm[warm.size() - 2].theta +
                             std::remainder(cand.theta - warm[warm.size() - 2].theta,
                                            2.0 * M_PI);
                const double moved =
                    row.sigma * std::abs(warm.back().theta - cand.theta);
                if (moved <= 6.0 * seg) {
                    path = warm;
                    path.back() = cand;
                    cold = false;
                }
            }
            if (cold) {
                const int64_t tn = mesh.nearest_node(tgt);
                if (std::isinf(tree.dist[size_t(tn)])) return 1e30;
                path = tree_path(mesh, tree, tn);
                RevolutionPoint c = center_;
                c.theta = path.front().theta +
                          std::remainder(c.theta - path.front().theta, 2.0 * M_PI);
                path.insert(path.begin(), c);
                RevolutionPoint t2 = tgt;
                t2.theta = path.back().theta +
                           std::remainder(t2.theta - path.back().theta,
                                          2.0 * M_PI);
                path.push_back(t2);
            }
            double gain = 0.0;
            double L = straighten_revolution_path(
                mesh.metric(), path, seg, cold ? 600 : 120, 1e-10, cold, &gain);
            if (!cold && gain > 3e-7 * (1.0 + L)) {
                const int64_t tn = mesh.nearest_node(tgt);
                if (std::isinf(tree.dist[size_t(tn)])) return 1e30;
                path = tree_path(mesh, tree, tn);
                RevolutionPoint c = center_;
                c.theta = path.front().theta +
                          std::remainder(c.theta - path.front().theta, 2.0 * M_PI);
                path.insert(path.begin(), c);
                RevolutionPoint t2 = tgt;
                t2.theta = path.back().theta +
                           std::remainder(t2.theta - path.back().theta,
                                          2.0 * M_PI);
                path.push_back(t2);
                L = straighten_revolution_path(mesh.metric(), path, seg, 600,
                                               1e-10, true);
            }
            warm = path;
            return L;
        };
        auto node_dist = [&](int off) {
            // node nearest to theta_c + off * (2pi/n)
            const double th = center_.theta + off * 2.0 * M_PI / row.n;
            double u = std::fmod(th, 2.0 * M_PI);
            if (u < 0) u += 2.0 * M_PI;
            int j = int(std::floor(u * row.n / (2.0 * M_PI)));
            j = std::clamp(j, 0, row.n - 1);
            return double(tree.dist[size_t(mesh.node_id(k, j))]);
        };
        for (size_t rj = nr; rj-- > 0;) {
            const double R = radii_[rj];
            if (row.t >= caps_hi_[rj]) continue;
            if (row.t <= caps_lo_[rj] && !(pole_full_ && caps_lo_[rj] == g.t_min))
                continue;
            // full through the pole: d <= t_center + t on polar charts
            if (g.t_min == 0.0 && center_.t + row.t <= R) {
                arc_[rj][size_t(k)] = M_PI;
                continue;
            }
            const double unit = 2.0 * M_PI / row.n;
            // certainly-inside seed from the graph scan (d_G >= d)
            double th_seed = 0.0;
            for (int off = 0, misses = 0; off <= row.n / 2; ++off) {
                if (node_dist(off) <= R) {
                    th_seed = std::min(M_PI, off * unit);
                    misses = 0;
                } else if (++misses >= 3) {
                    break;
                }
            }
            double lo = th_seed;
            if (lo > 0.0 && dist_at(lo) > R) lo = 0.0;
            if (lo == 0.0 && dist_at(lo) > R) continue;
            if (lo >= M_PI) {
                arc_[rj][size_t(k)] = M_PI;
                continue;
            }
            double hi = std::min(M_PI, lo + std::max(unit, 0.05 * lo));
            int guard = 0;
            bool full = false;
            while (dist_at(hi) <= R && guard++ < 60) {
                lo = hi;
                if (hi >= M_PI) {
                    full = true;
                    break;
                }
                hi = std::min(M_PI, 2.0 * hi + unit);
            }
            if (full) {
                arc_[rj][size_t(k)] = M_PI;
                continue;
            }
            if (guard > 60) continue;
            const double xtol =
                (q == DistanceQuality::polished ? 2e-4 : 2e-2) *
                std::max(hi, unit);
            while (hi - lo > xtol) {
                const double mid = 0.5 * (lo + hi);
                const bool fc = q == DistanceQuality::polished &&
                                hi - lo < 16.0 * xtol;
                (dist_at(mid, fc) <= R ? lo : hi) = mid;
            }
            arc_[rj][size_t(k)] = 0.5 * (lo + hi);
        }
    }
}

double BallArcProfile::volume_band(size_t ri, double t_lo, double t_hi) const {
    const RevolutionMetric& g = mesh_->metric();
    t_lo = std::max({t_lo, caps_lo_[ri], g.t_min});
    t_hi = std::min(t_hi, caps_hi_[ri]);
    if (!(t_hi > t_lo)) return 0.0;
    // samples (t, theta_max): full rows carry pi, meridian caps are exact
    std::vector<std::pair<double, double>> samples;
    const bool pole_band = pole_full_ && caps_lo_[ri] <= g.t_min + 1e-300;
    if (t_lo == caps_lo_[ri]) samples.push_back({t_lo, pole_band ? M_PI : 0.0});
    for (int k = 0; k < mesh_->rows(); ++k) {
        const double t = mesh_->row(k).t;
        if (t <= t_lo || t >= t_hi) continue;
        const double a = arc_[ri][size_t(k)];
        if (a >= 0.0) samples.push_back({t, a});
    }
    if (t_hi == caps_hi_[ri]) samples.push_back({t_hi, 0.0});
    if (samples.size() < 2) return 0.0;
    auto interp = [&](double t) {
        for (size_t i = 0; i + 1 < samples.size(); ++i)
            if (t >= samples[i].first && t <= samples[i + 1].first) {
                const double f = (t - samples[i].first) /
                                 (samples[i + 1].first - samples[i].first);
                return samples[i].second +
                       f * (samples[i + 1].second - samples[i].second);
            }
        return samples.back().second;
    };
    if (t_lo != caps_lo_[ri])
        samples.insert(samples.begin(), {t_lo, interp(t_lo)});
    if (t_hi != caps_hi_[ri]) samples.push_back({t_hi, interp(t_hi)});

    double total = 0.0;
    for (size_t i = 0; i + 1 < samples.size(); ++i) {
        const auto& [ta, aa] = samples[i];
        const auto& [tb, ab] = samples[i + 1];
        if (!(tb > ta)) continue;
        if (aa >= M_PI - 1e-12 && ab >= M_PI - 1e-12) {
            total += 2.0 * M_PI * g.sigma_int(ta, tb);  // exact on full bands
        } else {
            // interpolate theta^2 so sqrt-shaped caps integrate cleanly
            const double qa = aa * aa, qb = ab * ab;
            double piece = 0.0;
            for (int gg = 0; gg < 4; ++gg) {
                const double t = ta + (tb - ta) * kGauss4Node[gg];
                const double th = std::min(
                    M_PI, std::sqrt(std::max(0.0, qa + (qb - qa) *
                                                      kGauss4Node[gg])));
                piece += kGauss4Weight[gg] * 2.0 * th * g.sigma(t);
            }
            total += piece * (tb - ta);
        }
    }
    return total;
}

double BallArcProfile::volume(size_t ri) const {
    return volume_band(ri, caps_lo_[ri] - 1.0, caps_hi_[ri] + 1.0);
}

}  // namespace maxlab
