#include "maxlab/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace maxlab {

Discretisation build_discretisation(const MetricSpace& X, double eta,
                                    uint64_t seed) {
    if (!(eta > 0.0)) throw domain_error("discretisation: eta > 0");
    const int64_t n = X.size();
    std::vector<int64_t> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), int64_t(0));
    Rng rng(seed);
    for (int64_t i = n - 1; i > 0; --i)
        std::swap(order[size_t(i)], order[size_t(rng.uniform_int(i + 1))]);

    Discretisation d;
    d.eta = eta;
    for (int64_t x : order) {
        bool far = true;
        for (int64_t z : d.net)
            if (X.distance(x, z) <= eta) {
                far = false;
                break;
            }
        if (far) d.net.push_back(x);
    }
    d.separation = 1e300;
    for (size_t i = 0; i < d.net.size(); ++i)
        for (size_t j = 0; j < i; ++j)
            d.separation = std::min(d.separation, X.distance(d.net[i], d.net[j]));
    if (d.net.size() == 1) d.separation = std::numeric_limits<double>::infinity();
    d.covering_radius = 0.0;
    for (int64_t x = 0; x < n; ++x) {
        double best = 1e300;
        for (int64_t z : d.net) best = std::min(best, X.distance(x, z));
        d.covering_radius = std::max(d.covering_radius, best);
    }
    return d;
}

int overlap_number(const MetricSpace& X, const Discretisation& disc,
                   double radius) {
    int worst = 0;
    for (int64_t x = 0; x < X.size(); ++x) {
        int c = 0;
        for (int64_t z : disc.net)
            if (X.distance(x, z) < radius) ++c;
        worst = std::max(worst, c);
    }
    return worst;
}

int upsilon(const MetricSpace& X, const Discretisation& disc, double R) {
    // z in X_B iff B_{2 eta}(z) meets B, i.e. d(z, c_B) < R + 2 eta
    return overlap_number(X, disc, R + 2.0 * disc.eta);
}

double doubling_constant(const MetricSpace& X, double s) {
    double worst = 0.0;
    std::vector<double> d;
    for (int64_t x = 0; x < X.size(); ++x) {
        X.distances_from(x, d);
        std::vector<double> ds = d;
        std::sort(ds.begin(), ds.end());
        for (double r : ds) {
            if (!(r > 0.0) || r > s) continue;
            double w1 = 0.0, w2 = 0.0;
            for (int64_t y = 0; y < X.size(); ++y) {
                if (d[size_t(y)] < r) w1 += X.weight(y);
                if (d[size_t(y)] < 2.0 * r) w2 += X.weight(y);
            }
            if (w1 > 0.0) worst = std::max(worst, w2 / w1);
        }
    }
    return worst;
}

BallSizeStats ball_size_stats(const MetricSpace& X, double R, uint64_t seed) {
    if (!(R > 0.0)) throw domain_error("ball_size_stats: R > 0");
    BallSizeStats out;
    auto minmax_ball = [&](double rr, double& vmin, double& vmax) {
        vmin = 1e300;
        vmax = 0.0;
        std::vector<double> d;
        for (int64_t x = 0; x < X.size(); ++x) {
            X.distances_from(x, d);
            double w = 0.0;
            for (int64_t y = 0; y < X.size(); ++y)
                if (d[size_t(y)] < rr) w += X.weight(y);
            vmin = std::min(vmin, w);
            vmax = std::max(vmax, w);
        }
    };
    minmax_ball(R, out.v, out.V);
    double v1, V1;
    minmax_ball(1.0, v1, V1);
    out.ubsc = v1 > 0.0 && std::isfinite(V1);
    out.D1 = doubling_constant(X, 1.0);
    const Discretisation net1 = build_discretisation(X, 1.0, seed);
    out.upsilon_1R = upsilon(X, net1, R);
    out.growth_bound_ok = out.V <= out.D1 * V1 * out.upsilon_1R * (1.0 + 1e-12);
    return out;
}

QuasiIsometry fit_quasi_isometry_params(const std::vector<int64_t>& map,
                                        const MetricSpace& X,
                                        const MetricSpace& Xp) {
    if (int64_t(map.size()) != X.size())
        throw domain_error("quasi isometry: map must be total on X");
    QuasiIsometry qi;
    qi.map = map;
    for (int64_t x = 0; x < X.size(); ++x)
        for (int64_t y = 0; y < x; ++y)
            qi.beta = std::max(qi.beta, std::abs(X.distance(x, y) -
                                                 Xp.distance(map[size_t(x)],
                                                             map[size_t(y)])));
    for (int64_t xp = 0; xp < Xp.size(); ++xp) {
        double best = 1e300;
        for (int64_t x = 0; x < X.size(); ++x)
            best = std::min(best, Xp.distance(map[size_t(x)], xp));
        qi.K = std::max(qi.K, best);
    }
    return qi;
}

std::pair<double, double> volume_comparison(const QuasiIsometry& qi,
                                            const MetricSpace& X,
                                            const MetricSpace& Xp, double R) {
    if (R < qi.R0())
        throw window_error("volume_comparison: R below R0 = " +
                           std::to_string(qi.R0()));
    double diam = 0.0;
    for (int64_t x = 0; x < X.size(); ++x)
        for (int64_t y = 0; y < x; ++y) diam = std::max(diam, X.distance(x, y));
    if (R > 1.25 * diam)
        throw window_error(
            "volume_comparison: R-balls exceed the space; need diameter >= " +
            std::to_string(R / 1.25));
    double g0 = 1e300, g1 = 0.0;
    std::vector<double> d, dp;
    for (int64_t x = 0; x < X.size(); ++x) {
        X.distances_from(x, d);
        Xp.distances_from(qi.map[size_t(x)], dp);
        double w = 0.0, wp = 0.0;
        for (int64_t y = 0; y < X.size(); ++y)
            if (d[size_t(y)] < R) w += X.weight(y);
        for (int64_t y = 0; y < Xp.size(); ++y)
            if (dp[size_t(y)] < R) wp += Xp.weight(y);
        const double ratio = wp / w;
        g0 = std::min(g0, ratio);
        g1 = std::max(g1, ratio);
    }
    return {g0, g1};
}

namespace {

// maximal kappa-separated subset of the image phi(X), greedy over a seeded
// shuffle; returns indices into X (preimages) and into X' (net points)
void image_net(const QuasiIsometry& qi, const MetricSpace& Xp, uint64_t seed,
               std::vector<int64_t>& netX, std::vector<int64_t>& netXp) {
    const double kappa = qi.kappa();
    std::vector<int64_t> order(qi.map.size());
    std::iota(order.begin(), order.end(), int64_t(0));
    Rng rng(seed);
    for (int64_t i = int64_t(order.size()) - 1; i > 0; --i)
        std::swap(order[size_t(i)], order[size_t(rng.uniform_int(i + 1))]);
    netX.clear();
    netXp.clear();
    for (int64_t x : order) {
        const int64_t xp = qi.map[size_t(x)];
        bool far = true;
        for (int64_t zp : netXp)
            if (Xp.distance(xp, zp) < kappa) {
                far = false;
                break;
            }
        if (far) {
            netX.push_back(x);
            netXp.push_back(xp);
        }
    }
}

}  // namespace

TransferResult transfer_field(const QuasiIsometry& qi, const MetricSpace& X,
                              const MetricSpace& Xp, const SampledField& f,
                              uint64_t seed) {
    if (int64_t(f.size()) != Xp.size())
        throw domain_error("transfer_field: f lives on X'");
    const double kappa = qi.kappa(), beta = qi.beta;
    TransferResult out;
    image_net(qi, Xp, seed, out.netX, out.netXp);
    const size_t nn = out.netX.size();

    // F(z) = int_{B_{2 kappa}(phi z)} |f| dmu'
    out.F.resize(nn);
    std::vector<double> dp;
    for (size_t i = 0; i < nn; ++i) {
        Xp.distances_from(out.netXp[i], dp);
        double s = 0.0;
        for (int64_t y = 0; y < Xp.size(); ++y)
            if (dp[size_t(y)] < 2.0 * kappa)
                s += Xp.weight(y) * std::abs(f.value[size_t(y)]);
        out.F[i] = s;
    }

    // Psi = sum of covering-ball indicators on X; EF = omega sum F(l) psi_l
    const double rad = 2.0 * kappa + beta;
    const int64_t n = X.size();
    std::vector<double> Psi(size_t(n), 0.0);
    std::vector<double> d;
    std::vector<std::vector<int64_t>> members(nn);
    for (size_t i = 0; i < nn; ++i) {
        X.distances_from(out.netX[i], d);
        for (int64_t x = 0; x < n; ++x)
            if (d[size_t(x)] < rad) {
                Psi[size_t(x)] += 1.0;
                members[i].push_back(x);
            }
    }
    double omega = 0.0;
    for (int64_t x = 0; x < n; ++x) {
        if (Psi[size_t(x)] < 1.0)
            throw construction_error("transfer_field: net balls do not cover X");
        omega = std::max(omega, Psi[size_t(x)]);
    }
    out.overlap_X = int(omega);

    out.EF.id.resize(static_cast<size_t>(n));
    out.EF.value.assign(size_t(n), 0.0);
    out.EF.weight.resize(static_cast<size_t>(n));
    for (int64_t x = 0; x < n; ++x) {
        out.EF.id[size_t(x)] = x;
        out.EF.weight[size_t(x)] = X.weight(x);
    }
    for (size_t i = 0; i < nn; ++i)
        for (int64_t x : members[i])
            out.EF.value[size_t(x)] += omega * out.F[i] / Psi[size_t(x)];

    // EF(z) >= F(z) at net points (since psi_z(z) >= 1/omega)
    for (size_t i = 0; i < nn; ++i)
        if (out.EF.value[size_t(out.netX[i])] < out.F[i] * (1.0 - 1e-12))
            throw construction_error("transfer_field: EF < F at a net point");

    // overlap of {B_{2 kappa}(z')} on X'
    int op = 0;
    for (int64_t y = 0; y < Xp.size(); ++y) {
        int c = 0;
        for (size_t i = 0; i < nn; ++i)
            if (Xp.distance(out.netXp[i], y) < 2.0 * kappa) ++c;
        op = std::max(op, c);
    }
    out.overlap_Xp = op;

    // step-II L1 bound
    std::vector<double> terms(static_cast<size_t>(n));
    for (int64_t x = 0; x < n; ++x)
        terms[size_t(x)] = X.weight(x) * out.EF.value[size_t(x)];
    out.l1_EF = pairwise_sum(terms);
    double VX = 0.0;
    for (int64_t x = 0; x < n; ++x) {
        X.distances_from(x, d);
        double w = 0.0;
        for (int64_t y = 0; y < n; ++y)
            if (d[size_t(y)] < rad) w += X.weight(y);
        VX = std::max(VX, w);
    }
    std::vector<double> fterms(f.size());
    for (size_t i = 0; i < f.size(); ++i)
        fterms[i] = f.weight[i] * std::abs(f.value[i]);
    out.l1_bound = omega * VX * double(op) * pairwise_sum(fterms);
    return out;
}

ComparisonReport verify_maximal_comparison(const QuasiIsometry& qi,
                                           const MetricSpace& X,
                                           const MetricSpace& Xp,
                                           const SampledField& f,
                                           uint64_t seed) {
    const double kappa = qi.kappa(), beta = qi.beta, R0 = qi.R0();
    TransferResult tr = transfer_field(qi, X, Xp, f, seed);

    ComparisonReport rep;
    // gamma_{4 kappa + 2 beta}: dilation constant over balls of radius > 1
    const double delta = 4.0 * kappa + 2.0 * beta;
    double gamma = 0.0;
    std::vector<double> d;
    for (int64_t x = 0; x < X.size(); ++x) {
        X.distances_from(x, d);
        std::vector<double> ds = d;
        std::sort(ds.begin(), ds.end());
        for (double r : ds) {
            if (!(r > 1.0)) continue;
            double w1 = 0.0, w2 = 0.0;
            for (int64_t y = 0; y < X.size(); ++y) {
                if (d[size_t(y)] < r) w1 += X.weight(y);
                if (d[size_t(y)] < r + delta) w2 += X.weight(y);
            }
            gamma = std::max(gamma, w2 / w1);
        }
    }
    rep.gamma_delta = gamma;

    // Gamma0 over the radius range the chain sweeps
    double Gamma0 = 1e300;
    double diam = 0.0;
    for (int64_t x = 0; x < X.size(); ++x)
        for (int64_t y = 0; y < x; ++y) diam = std::max(diam, X.distance(x, y));
    const double r_lo = R0 + 2.0 * kappa;
    if (diam <= r_lo)
        throw window_error("verify_maximal_comparison: space smaller than R0");
    for (int i = 0; i <= 8; ++i) {
        const double R = r_lo + (diam - r_lo) * i / 8.0;
        auto [g0, g1] = volume_comparison(qi, X, Xp, R);
        Gamma0 = std::min(Gamma0, g0);
    }
    rep.Gamma0 = Gamma0;

    // v_X(2 kappa + beta)
    double vX = 1e300;
    for (int64_t x = 0; x < X.size(); ++x) {
        X.distances_from(x, d);
        double w = 0.0;
        for (int64_t y = 0; y < X.size(); ++y)
            if (d[size_t(y)] < 2.0 * kappa + beta) w += X.weight(y);
        vX = std::min(vX, w);
    }

    const double omega = tr.overlap_X;
    rep.sigma_const = gamma / Gamma0 * omega * omega / vX;

    // LHS on X' at phi(x), RHS on X at x
    std::vector<int64_t> evalXp(qi.map.begin(), qi.map.end());
    MaximalReport lhs = centred_maximal(
        f, Xp, RadiusWindow::band(R0 + 2.0 * kappa, INFINITY), evalXp);
    MaximalReport rhs = centred_maximal(
        tr.EF, X, RadiusWindow::band(R0 + 6.0 * kappa + 2.0 * beta, INFINITY));

    rep.worst_slack = 1e300;
    for (size_t i = 0; i < size_t(X.size()); ++i)
        rep.worst_slack =
            std::min(rep.worst_slack, rep.sigma_const * rhs.values.value[i] -
                                          lhs.values.value[i]);
    rep.ok = rep.worst_slack >= -1e-9;
    return rep;
}

}  // namespace maxlab
