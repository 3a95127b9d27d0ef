#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxlab {

struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct window_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct construction_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Deterministic RNG. std::uniform_real_distribution is implementation
// defined, so uniforms are built from raw bits.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    uint64_t next_u64() {
        // splitmix64
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int64_t uniform_int(int64_t n) { return int64_t(next_u64() % uint64_t(n)); }

private:
    uint64_t state_;
};

// Fixed-order pairwise summation: bit-stable regardless of thread count,
// provided the input order is fixed.
double pairwise_sum(std::span<const double> v);

// Adaptive Simpson quadrature.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, int max_depth = 48);

// Bisection for monotone root finding; f(lo) and f(hi) must bracket zero.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double x_tol, int max_iter = 200);

// Least-squares line fit y = slope*x + icept; returns r^2 goodness.
struct LineFit {
    double slope = 0.0, intercept = 0.0, r_squared = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Fits value = C * t^slope (log mode) or C * exp(slope*t) (linear mode).
enum class FitMode { log_log, log_linear };
LineFit exponent_fit(std::span<const double> t, std::span<const double> value,
                     FitMode mode = FitMode::log_log);

// Geometric grid lo * ratio^k covering [lo, hi], endpoints included.
std::vector<double> geometric_grid(double lo, double hi, int n);

// 4-point Gauss-Legendre nodes/weights on [0,1].
inline constexpr double kGauss4Node[4] = {
    0.069431844202973712, 0.330009478207571868,
    0.669990521792428132, 0.930568155797026288};
inline constexpr double kGauss4Weight[4] = {
    0.173927422568726929, 0.326072577431273071,
    0.326072577431273071, 0.173927422568726929};

inline double sqr(double x) { return x * x; }

}  // namespace maxlab
