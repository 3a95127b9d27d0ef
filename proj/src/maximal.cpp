#include "maxlab/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace maxlab {

namespace {

std::vector<int64_t> all_points(const MetricSpace& X) {
    std::vector<int64_t> pts(static_cast<size_t>(X.size()));
    std::iota(pts.begin(), pts.end(), int64_t(0));
    return pts;
}

struct PrefixScan {
    // distinct sorted distances u_j with cumulative sums over {d <= u_j}
    std::vector<double> u, S, W;
};

// Builds the distinct-radius prefix structure from one distance row.
// sum order is sorted-by-distance, ties by atom index: deterministic.
PrefixScan build_scan(const std::vector<double>& d, const SampledField& f,
                      std::vector<size_t>& order_buf) {
    const size_t n = d.size();
    order_buf.resize(n);
    std::iota(order_buf.begin(), order_buf.end(), size_t(0));
    std::sort(order_buf.begin(), order_buf.end(), [&](size_t a, size_t b) {
        if (d[a] != d[b]) return d[a] < d[b];
        return a < b;
    });
    PrefixScan ps;
    double S = 0.0, W = 0.0;
    size_t i = 0;
    while (i < n) {
        const double u = d[order_buf[i]];
        while (i < n && d[order_buf[i]] == u) {
            const size_t a = order_buf[i++];
            S += f.weight[a] * std::abs(f.value[a]);
            W += f.weight[a];
        }
        ps.u.push_back(u);
        ps.S.push_back(S);
        ps.W.push_back(W);
    }
    return ps;
}

double score(const PrefixScan& ps, size_t j, MaximalOperator op, double omega) {
    if (op == MaximalOperator::omega)
        return ps.S[j] / std::pow(ps.W[j], 1.0 / omega);
    return ps.S[j] / ps.W[j];
}

// prefix j is realised by radii in (u_j, u_{j+1}]; admissible iff that
// interval meets (r_min, r_max]
bool admissible(const PrefixScan& ps, size_t j, const RadiusWindow& w) {
    const double next = j + 1 < ps.u.size()
                            ? ps.u[j + 1]
                            : std::numeric_limits<double>::infinity();
    return ps.u[j] < w.r_max && next > w.r_min;
}

MaximalReport centred_impl(const SampledField& f, const MetricSpace& X,
                           RadiusWindow w, std::vector<int64_t> pts,
                           MaximalOperator op, double omega, bool parallel) {
    if (int64_t(f.size()) != X.size())
        throw domain_error("maximal: field size must match space size");
    MaximalReport rep;
    rep.op = op;
    rep.omega = omega;
    rep.window = w;
    rep.eval_points = std::move(pts);
    const size_t m = rep.eval_points.size();
    rep.values.id.resize(m);
    rep.values.value.resize(m);
    rep.values.weight.resize(m);
    rep.argmax_radius.resize(m);

    bool empty_window = false;
    auto body = [&](size_t i) {
        const int64_t x = rep.eval_points[i];
        std::vector<double> d;
        std::vector<size_t> order;
        X.distances_from(x, d);
        const PrefixScan ps = build_scan(d, f, order);
        double best = -1.0, best_r = 0.0;
        for (size_t j = 0; j < ps.u.size(); ++j) {
            if (!admissible(ps, j, w)) continue;
            const double v = score(ps, j, op, omega);
            if (v > best) {
                best = v;
                best_r = std::max(ps.u[j], w.r_min);
            }
        }
        if (best < 0.0) {
            empty_window = true;  // reported after the loop; no throw in omp
            return;
        }
        rep.values.id[i] = x;
        rep.values.value[i] = best;
        rep.values.weight[i] = f.weight[size_t(x)];
        rep.argmax_radius[i] = best_r;
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (int64_t i = 0; i < int64_t(m); ++i) body(static_cast<size_t>(i));
    } else {
        for (size_t i = 0; i < m; ++i) body(i);
    }
    if (empty_window)
        throw window_error("centred maximal: empty radius window");
    return rep;
}

MaximalReport uncentred_impl(const SampledField& f, const MetricSpace& X,
                             RadiusWindow w, std::vector<int64_t> pts,
                             [[maybe_unused]] bool parallel) {
    if (int64_t(f.size()) != X.size())
        throw domain_error("maximal: field size must match space size");
    const size_t n = size_t(X.size());
    MaximalReport rep;
    rep.op = MaximalOperator::uncentred;
    rep.window = w;
    rep.eval_points = std::move(pts);
    const size_t m = rep.eval_points.size();

    std::vector<double> best(n, -1.0), best_r(n, 0.0);

    auto scan_center = [&](int64_t c, std::vector<double>& loc_best,
                           std::vector<double>& loc_r) {
        std::vector<double> d;
        std::vector<size_t> order;
        X.distances_from(c, d);
        const PrefixScan ps = build_scan(d, f, order);
        const size_t J = ps.u.size();
        // suffix maxima of admissible scores over prefixes; ties keep the
        // smallest attaining radius so all execution orders agree
        std::vector<double> suf(J + 1, -1.0), suf_r(J + 1, 0.0);
        for (size_t j = J; j-- > 0;) {
            suf[j] = suf[j + 1];
            suf_r[j] = suf_r[j + 1];
            if (admissible(ps, j, w)) {
                const double v = ps.S[j] / ps.W[j];
                const double r = std::max(ps.u[j], w.r_min);
                if (v > suf[j] || (v == suf[j] && r < suf_r[j])) {
                    suf[j] = v;
                    suf_r[j] = r;
                }
            }
        }
        // atom at rank j (distance u_j) lies in every ball with prefix >= j
        size_t j = 0;
        for (size_t i = 0; i < n; ++i) {
            const size_t a = order[i];
            while (d[a] > ps.u[j]) ++j;
            if (suf[j] > loc_best[a] ||
                (suf[j] == loc_best[a] && suf_r[j] < loc_r[a])) {
                loc_best[a] = suf[j];
                loc_r[a] = suf_r[j];
            }
        }
    };

#ifndef _OPENMP
    parallel = false;
#endif
    if (parallel) {
#ifdef _OPENMP
        // per-thread partial maxima merged with a commutative max: the
        // result does not depend on the thread count
#pragma omp parallel
        {
            std::vector<double> loc_best(n, -1.0), loc_r(n, 0.0);
#pragma omp for schedule(dynamic, 4)
            for (int64_t c = 0; c < int64_t(n); ++c)
                scan_center(c, loc_best, loc_r);
#pragma omp critical
            {
                for (size_t a = 0; a < n; ++a)
                    if (loc_best[a] > best[a] ||
                        (loc_best[a] == best[a] && loc_r[a] < best_r[a])) {
                        best[a] = loc_best[a];
                        best_r[a] = loc_r[a];
                    }
            }
        }
#endif
    } else {
        for (int64_t c = 0; c < int64_t(n); ++c) scan_center(c, best, best_r);
    }

    rep.values.id.resize(m);
    rep.values.value.resize(m);
    rep.values.weight.resize(m);
    rep.argmax_radius.resize(m);
    for (size_t i = 0; i < m; ++i) {
        const size_t a = size_t(rep.eval_points[i]);
        if (best[a] < 0.0)
            throw window_error("uncentred maximal: empty radius window");
        rep.values.id[i] = int64_t(a);
        rep.values.value[i] = best[a];
        rep.values.weight[i] = f.weight[a];
        rep.argmax_radius[i] = best_r[a];
    }
    return rep;
}

}  // namespace

MaximalReport centred_maximal(const SampledField& f, const MetricSpace& X,
                              RadiusWindow w,
                              const std::vector<int64_t>& eval_points) {
    return centred_impl(f, X, w,
                        eval_points.empty() ? all_points(X) : eval_points,
                        MaximalOperator::centred, 0.0, true);
}

MaximalReport uncentred_maximal(const SampledField& f, const MetricSpace& X,
                                RadiusWindow w,
                                const std::vector<int64_t>& eval_points) {
    return uncentred_impl(f, X, w,
                          eval_points.empty() ? all_points(X) : eval_points,
                          true);
}

MaximalReport omega_maximal(const SampledField& f, const MetricSpace& X,
                            double omega,
                            const std::vector<int64_t>& eval_points) {
    if (!(omega > 1.0)) throw domain_error("omega_maximal: omega > 1 required");
    MaximalReport rep = centred_impl(
        f, X, RadiusWindow::at_infinity(),
        eval_points.empty() ? all_points(X) : eval_points,
        MaximalOperator::omega, omega, true);
    return rep;
}

double weak_type_ratio(const MaximalReport& rep, const SampledField& f,
                       double p, WeakTypeMode mode) {
    if (!(p >= 1.0)) throw domain_error("weak_type_ratio: p >= 1");
    double denom;
    if (mode == WeakTypeMode::restricted_weak) {
        denom = lorentz_norm(f, p, 1.0).value;
    } else {
        std::vector<double> terms(f.size());
        for (size_t i = 0; i < f.size(); ++i)
            terms[i] = f.weight[i] * std::pow(std::abs(f.value[i]), p);
        denom = std::pow(pairwise_sum(terms), 1.0 / p);
    }
    if (!(denom > 0.0)) throw domain_error("weak_type_ratio: zero-norm field");
    const double num = lorentz_norm(rep.values, p, INFINITY).value;
    return num / denom;
}

namespace serial {

MaximalReport centred_maximal(const SampledField& f, const MetricSpace& X,
                              RadiusWindow w,
                              const std::vector<int64_t>& eval_points) {
    return centred_impl(f, X, w,
                        eval_points.empty() ? all_points(X) : eval_points,
                        MaximalOperator::centred, 0.0, false);
}

MaximalReport uncentred_maximal(const SampledField& f, const MetricSpace& X,
                                RadiusWindow w,
                                const std::vector<int64_t>& eval_points) {
    return uncentred_impl(f, X, w,
                          eval_points.empty() ? all_points(X) : eval_points,
                          false);
}

}  // namespace serial

}  // namespace maxlab
