#pragma once

#include <cstdint>
#include <vector>

#include "maxlab/field.hpp"
#include "maxlab/maximal.hpp"
#include "maxlab/spaces.hpp"

namespace maxlab {

struct Discretisation {
    double eta = 0.0;
    std::vector<int64_t> net;
    double covering_radius = 0.0;  // <= eta by maximality
    double separation = 0.0;       // > eta by construction
};

// Greedy insertion in seeded-shuffled order; maximality is automatic for a
// greedy pass over all points.
Discretisation build_discretisation(const MetricSpace& X, double eta,
                                    uint64_t seed);

// max over points of #{z in net : d(x, z) < radius}
int overlap_number(const MetricSpace& X, const Discretisation& disc,
                   double radius);

// Upsilon_{eta,R}: sup over balls of radius R of the number of net points
// whose 2 eta-ball meets the ball.
int upsilon(const MetricSpace& X, const Discretisation& disc, double R);

// Local doubling constant D_s = max_{r_B <= s} mu(2B)/mu(B), measured.
double doubling_constant(const MetricSpace& X, double s);

struct BallSizeStats {
    double v = 0.0, V = 0.0;  // inf/sup of mu(B_R(x))
    bool ubsc = false;
    double D1 = 0.0;          // measured doubling constant at scale 1
    double upsilon_1R = 0.0;  // Upsilon for a 1-discretisation
    bool growth_bound_ok = false;  // V(R) <= D1 V(1) Upsilon_{1,R}
};
BallSizeStats ball_size_stats(const MetricSpace& X, double R, uint64_t seed);

struct QuasiIsometry {
    std::vector<int64_t> map;  // X -> X'
    double K = 0.0, beta = 0.0;
    double Gamma0 = 0.0, Gamma1 = 0.0;  // filled by volume_comparison

    double kappa() const { return std::max(K, beta + 2.0); }
    double R0() const { return 6.0 * (2.0 * kappa() + beta) + 1.0; }
};

QuasiIsometry fit_quasi_isometry_params(const std::vector<int64_t>& map,
                                        const MetricSpace& X,
                                        const MetricSpace& Xp);

// Empirical min/max over x of mu'(B_R(phi x)) / mu(B_R(x)).
std::pair<double, double> volume_comparison(const QuasiIsometry& qi,
                                            const MetricSpace& X,
                                            const MetricSpace& Xp, double R);

struct TransferResult {
    std::vector<int64_t> netX;   // kappa-net preimages in X
    std::vector<int64_t> netXp;  // their images (the net in phi(X))
    std::vector<double> F;       // F = (pi_{2 kappa} f) o phi on netX
    SampledField EF;             // the extension E F on X
    int overlap_X = 0;           // omega for {B_{2k+b}(z)}
    int overlap_Xp = 0;          // omega' for {B_{2k}(z')}
    double l1_EF = 0.0, l1_bound = 0.0;  // the step-II L1 estimate
};

TransferResult transfer_field(const QuasiIsometry& qi, const MetricSpace& X,
                              const MetricSpace& Xp, const SampledField& f,
                              uint64_t seed);

struct ComparisonReport {
    double sigma_const = 0.0;
    double worst_slack = 0.0;  // min over points of sigma*RHS - LHS
    bool ok = false;
    double gamma_delta = 0.0, Gamma0 = 0.0;
};

// The section-5 comparison: M_{R0+2k} f (phi x) <= sigma M_{R0+6k+2b}(EF)(x)
// with sigma assembled from measured constants.
ComparisonReport verify_maximal_comparison(const QuasiIsometry& qi,
                                           const MetricSpace& X,
                                           const MetricSpace& Xp,
                                           const SampledField& f,
                                           uint64_t seed);

}  // namespace maxlab
