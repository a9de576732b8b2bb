#pragma once

#include <span>
#include <utility>
#include <vector>

#include "fractalfn/geometry.hpp"

namespace fractalfn {

// Piecewise polynomial on an interval. Each piece is stored in the Bernstein
// basis of its own subinterval, so endpoint values and derivatives are plain
// coefficient reads: value at the left end is b_0, at the right end b_d, and
// the first k derivatives vanish at an end iff the k+1 outermost coefficients
// are zero. That makes the vanishing-endpoint preconditions checkable exactly
// instead of through sampled evaluation.
//
// Evaluation at an interior breakpoint uses the right-hand piece; at the
// domain's upper end, the last piece.
class PiecewisePoly {
public:
    PiecewisePoly(Interval domain, std::vector<double> breakpoints,
                  std::vector<std::vector<double>> bernstein_coeffs);

    static PiecewisePoly constant(Interval domain, double c);
    // affine piece through (domain.lo, value_lo) and (domain.hi, value_hi)
    static PiecewisePoly linear(Interval domain, double value_lo, double value_hi);
    // single piece from monomial coefficients (low to high) in the global variable
    static PiecewisePoly from_monomial(Interval domain, std::span<const double> coeffs);
    // several pieces, each given by monomial coefficients in the global variable
    static PiecewisePoly from_monomial_pieces(Interval domain, std::vector<double> breakpoints,
                                              const std::vector<std::vector<double>>& coeffs);
    // uniform-knot polynomial B-spline of order n >= 3 centered at the domain
    // midpoint, scaled so its sup equals |amplitude|
    static PiecewisePoly bspline(int order, Interval domain, double amplitude);

    const Interval& domain() const { return domain_; }
    const std::vector<double>& breakpoints() const { return breaks_; }
    std::size_t piece_count() const { return coef_.size(); }
    int degree() const;
    const std::vector<double>& piece_coeffs(std::size_t i) const { return coef_[i]; }

    double operator()(double x) const;
    double eval(double x) const { return (*this)(x); }

    // exact coefficient reads of the values at the domain endpoints
    double value_at_lo() const { return coef_.front().front(); }
    double value_at_hi() const { return coef_.back().back(); }

    PiecewisePoly derivative(int k = 1) const;
    // vanishes at domain.lo; continuous across breakpoints
    PiecewisePoly antiderivative() const;

    // certified bracket: lower <= sup|f| <= upper. Lower from dense sampling,
    // upper from the smaller of the Bernstein hull bound and the sampled max
    // plus a Lipschitz half-step pad.
    std::pair<double, double> sup_norm_bracket(int samples_per_piece = 4096) const;
    double sup_upper_bound(int samples_per_piece = 4096) const {
        return sup_norm_bracket(samples_per_piece).second;
    }

    // grid lower bound of sup |f(x)-f(x')| / |x-x'|^s over the domain
    double holder_seminorm_estimate(double s, double grid_h) const;
    // certified upper bound of the same seminorm: Lip(f) * span^(1-s)
    double holder_seminorm_upper(double s) const;

    // certified sup bound of |f'|
    double lipschitz_upper() const;

    // coefficient-level test that D^j vanishes at both domain endpoints for
    // j = 0..upto
    bool endpoint_derivatives_vanish(int upto) const;
    // true when D^j, j = 0..k, is continuous at every interior breakpoint
    bool is_ck(int k, double tol = 1e-9) const;

    // alpha*f + beta*g; domains and breakpoints must agree
    static PiecewisePoly combine(double alpha, const PiecewisePoly& f, double beta,
                                 const PiecewisePoly& g);

    bool operator==(const PiecewisePoly& other) const = default;

private:
    Interval domain_;
    std::vector<double> breaks_;
    std::vector<std::vector<double>> coef_;

    std::size_t piece_index(double x) const;
};

}  // namespace fractalfn
