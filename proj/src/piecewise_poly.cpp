#include "maxlab/piecewise_poly.hpp"

#include <algorithm>
#include <cmath>

#include "maxlab/numerics.hpp"

namespace maxlab {

PiecewisePoly::PiecewisePoly(std::vector<double> breaks,
                             std::vector<std::vector<double>> coeffs)
    : breaks_(std::move(breaks)), coeffs_(std::move(coeffs)) {
    if (breaks_.size() != coeffs_.size() + 1 || breaks_.size() < 2)
        throw domain_error("PiecewisePoly: inconsistent sizes");
}

double PiecewisePoly::operator()(double x) const {
    if (x <= breaks_.front() || x >= breaks_.back()) {
        // exact endpoint evaluation still belongs to the support
        if (x != breaks_.front() && x != breaks_.back()) return 0.0;
    }
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    size_t k = size_t(std::max<ptrdiff_t>(0, (it - breaks_.begin()) - 1));
    if (k >= coeffs_.size()) k = coeffs_.size() - 1;
    const double u = x - breaks_[k];
    double v = 0.0;
    const auto& c = coeffs_[k];
    for (size_t j = c.size(); j-- > 0;) v = v * u + c[j];
    return v;
}

PiecewisePoly PiecewisePoly::derivative() const {
    std::vector<std::vector<double>> d(coeffs_.size());
    for (size_t k = 0; k < coeffs_.size(); ++k) {
        const auto& c = coeffs_[k];
        if (c.size() <= 1) {
            d[k] = {0.0};
            continue;
        }
        d[k].resize(c.size() - 1);
        for (size_t j = 1; j < c.size(); ++j) d[k][j - 1] = double(j) * c[j];
    }
    return PiecewisePoly(breaks_, std::move(d));
}

PiecewisePoly PiecewisePoly::antiderivative() const {
    std::vector<std::vector<double>> a(coeffs_.size());
    double acc = 0.0;
    for (size_t k = 0; k < coeffs_.size(); ++k) {
        const auto& c = coeffs_[k];
        auto& out = a[k];
        out.resize(c.size() + 1);
        out[0] = acc;
        for (size_t j = 0; j < c.size(); ++j) out[j + 1] = c[j] / double(j + 1);
        const double w = breaks_[k + 1] - breaks_[k];
        double v = 0.0;
        for (size_t j = out.size(); j-- > 0;) v = v * w + out[j];
        acc = v;
    }
    return PiecewisePoly(breaks_, std::move(a));
}

double PiecewisePoly::min_on_support(int samples_per_piece) const {
    double m = operator()(breaks_.front());
    for (size_t k = 0; k < coeffs_.size(); ++k)
        for (int i = 0; i <= samples_per_piece; ++i) {
            const double x = breaks_[k] + (breaks_[k + 1] - breaks_[k]) *
                                              double(i) / samples_per_piece;
            m = std::min(m, operator()(x));
        }
    return m;
}

double PiecewisePoly::max_on_support(int samples_per_piece) const {
    double m = operator()(breaks_.front());
    for (size_t k = 0; k < coeffs_.size(); ++k)
        for (int i = 0; i <= samples_per_piece; ++i) {
            const double x = breaks_[k] + (breaks_[k + 1] - breaks_[k]) *
                                              double(i) / samples_per_piece;
            m = std::max(m, operator()(x));
        }
    return m;
}

double PiecewisePoly::abs_integral() const {
    double total = 0.0;
    for (size_t k = 0; k < coeffs_.size(); ++k) {
        const double lo = breaks_[k], hi = breaks_[k + 1];
        total += integrate([&](double x) { return std::abs(operator()(x)); },
                           lo, hi, 1e-12);
    }
    return total;
}

PiecewisePoly PiecewisePoly::sum(const PiecewisePoly& p, const PiecewisePoly& q) {
    std::vector<double> br;
    br.reserve(p.breaks_.size() + q.breaks_.size());
    std::merge(p.breaks_.begin(), p.breaks_.end(), q.breaks_.begin(),
               q.breaks_.end(), std::back_inserter(br));
    br.erase(std::unique(br.begin(), br.end()), br.end());

    // Re-expresses the piece of f containing lo in the local variable
    // u = x - lo (binomial shift) and accumulates into acc.
    auto shift_coeffs = [](const PiecewisePoly& f, double lo,
                           std::vector<double>& acc) {
        if (lo < f.breaks_.front() || lo >= f.breaks_.back()) return;
        auto it = std::upper_bound(f.breaks_.begin(), f.breaks_.end(), lo);
        size_t k = size_t((it - f.breaks_.begin()) - 1);
        if (k >= f.coeffs_.size()) k = f.coeffs_.size() - 1;
        const double d = lo - f.breaks_[k];
        const std::vector<double>& c = f.coeffs_[k];
        const size_t n = c.size();
        std::vector<double> out(n, 0.0);
        std::vector<double> dp(n, 0.0);  // coefficients of (u + d)^j
        dp[0] = 1.0;
        for (size_t j = 0; j < n; ++j) {
            for (size_t m = 0; m <= j; ++m) out[m] += c[j] * dp[m];
            if (j + 1 < n) {
                std::vector<double> nxt(n, 0.0);
                for (size_t m = 0; m <= j; ++m) {
                    nxt[m] += dp[m] * d;
                    nxt[m + 1] += dp[m];
                }
                dp = std::move(nxt);
            }
        }
        if (acc.size() < n) acc.resize(n, 0.0);
        for (size_t m = 0; m < n; ++m) acc[m] += out[m];
    };

    std::vector<std::vector<double>> coeffs(br.size() - 1);
    for (size_t k = 0; k + 1 < br.size(); ++k) {
        std::vector<double> acc{0.0};
        shift_coeffs(p, br[k], acc);
        shift_coeffs(q, br[k], acc);
        coeffs[k] = std::move(acc);
    }
    return PiecewisePoly(std::move(br), std::move(coeffs));
}

PiecewisePoly PiecewisePoly::scaled(const PiecewisePoly& p, double c,
                                    double shift, double width) {
    // q(x) = c * p((x - shift)/width), width > 0
    std::vector<double> br(p.breaks_.size());
    for (size_t i = 0; i < br.size(); ++i) br[i] = shift + width * p.breaks_[i];
    std::vector<std::vector<double>> coeffs(p.coeffs_.size());
    for (size_t k = 0; k < coeffs.size(); ++k) {
        const auto& src = p.coeffs_[k];
        coeffs[k].resize(src.size());
        double wpow = 1.0;
        for (size_t j = 0; j < src.size(); ++j) {
            coeffs[k][j] = c * src[j] / wpow;
            wpow *= width;
        }
    }
    return PiecewisePoly(std::move(br), std::move(coeffs));
}

PiecewisePoly PiecewisePoly::bspline_bump() {
    // beta(x) = (3/2) * B3(2x), B3 the cubic cardinal B-spline on [-2,2].
    // Pieces in local coordinates u = x - break.
    // On [1,2]: B3 = (2-u)^3/6; on [0,1]: (4 - 6u^2 + 3u^3)/6, even.
    std::vector<double> br = {-1.0, -0.5, 0.0, 0.5, 1.0};
    // beta(x) on [-1,-0.5]: with s = 2x in [-2,-1]: (2+s)^3/6 * 3/2 = (2+2x)^3/4
    // local u = x+1: (2u)^3/4 = 2u^3
    // on [-0.5,0]: s = 2x in [-1,0]: (4 - 6s^2 - 3s^3)/6 * 3/2 = 1 - 6x^2 - 3x^3...
    // (4 - 6 s^2 + 3|s|^3)/6 with |s| = -s: (4 - 6s^2 - 3 s^3)/6, s=2x:
    // (4 - 24x^2 - 24x^3)/6 * (3/2) = 1 - 6x^2 - 6x^3; local u = x + 0.5:
    // substitute x = u - 0.5: 1 - 6(u-1/2)^2 - 6(u-1/2)^3
    //  = 1 - 6(u^2 - u + 1/4) - 6(u^3 - 1.5u^2 + .75u - .125)
    //  = 1 - 6u^2 + 6u - 1.5 - 6u^3 + 9u^2 - 4.5u + 0.75
    //  = 0.25 + 1.5u + 3u^2 - 6u^3
    // on [0,0.5]: even reflection: 1 - 6x^2 + 6x^3, local u = x:
    //  = 1 + 0u - 6u^2 + 6u^3
    // on [0.5,1]: (2-2x)^3/4 = 2(1-x)^3, local u = x-0.5: 2(0.5-u)^3
    //  = 2(0.125 - 0.75u + 1.5u^2 - u^3) = 0.25 - 1.5u + 3u^2 - 2u^3
    std::vector<std::vector<double>> coeffs = {
        {0.0, 0.0, 0.0, 2.0},
        {0.25, 1.5, 3.0, -6.0},
        {1.0, 0.0, -6.0, 6.0},
        {0.25, -1.5, 3.0, -2.0},
    };
    return PiecewisePoly(std::move(br), std::move(coeffs));
}

}  // namespace maxlab
