#pragma once

#include <vector>

namespace maxlab {

// Piecewise polynomial on [breaks.front(), breaks.back()], zero outside.
// Piece k holds coefficients in the local variable (x - breaks[k]).
class PiecewisePoly {
public:
    PiecewisePoly() = default;
    PiecewisePoly(std::vector<double> breaks,
                  std::vector<std::vector<double>> coeffs);

    double operator()(double x) const;
    PiecewisePoly derivative() const;
    // Antiderivative with F(breaks.front()) = 0; constant continuation
    // outside the support is NOT represented (the callers only integrate
    // functions with zero total mass, so F vanishes off the support too).
    PiecewisePoly antiderivative() const;

    double min_on_support(int samples_per_piece = 64) const;
    double max_on_support(int samples_per_piece = 64) const;
    double abs_integral() const;

    const std::vector<double>& breaks() const { return breaks_; }
    double support_lo() const { return breaks_.front(); }
    double support_hi() const { return breaks_.back(); }

    // Sum of two piecewise polynomials (breakpoints merged).
    static PiecewisePoly sum(const PiecewisePoly& p, const PiecewisePoly& q);
    // p scaled by c and reparametrised x -> (x - shift) / width.
    static PiecewisePoly scaled(const PiecewisePoly& p, double c, double shift,
                                double width);

    // Normalised cubic B-spline bump: support [-1,1], max 1 at 0, C^2.
    static PiecewisePoly bspline_bump();

private:
    std::vector<double> breaks_;
    std::vector<std::vector<double>> coeffs_;  // per piece, ascending degree
};

}  // namespace maxlab
