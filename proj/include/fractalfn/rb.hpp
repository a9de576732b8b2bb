#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fractalfn/geometry.hpp"
#include "fractalfn/piecewise.hpp"

// The operator at the heart of the library:
//
//   (Phi f)(x) = lambda_i(u_i^{-1}(x)) + S_i(u_i^{-1}(x)) * f(u_i^{-1}(x))
//
// on each partition piece u_i(X_i), together with its fixed-point solver and
// the interpolation constructions on binary and general partitions.

namespace fractalfn {

// Partition of a base interval X: subsets X_i with affine bijections
// u_i : X_i -> [x_{i-1}, x_i). Pieces are half-open to the right except the
// last, which is closed, so every x in X belongs to exactly one piece.
struct PartitionSpec {
    int N = 0;
    Interval base;
    std::vector<double> knots;      // x_0 < ... < x_N spanning base
    std::vector<Interval> subsets;  // X_i
    std::vector<AffineMap1D> maps;  // u_i

    static PartitionSpec general(std::vector<double> knots, std::vector<Interval> subsets);

    double lipschitz(int i) const { return maps[static_cast<std::size_t>(i)].lipschitz(); }
    double max_lipschitz() const;
    // 0-based index of the piece whose image contains x
    int piece_index(double x) const;
    bool is_binary(double tol = 1e-12) const;

    void validate() const;

    bool operator==(const PartitionSpec&) const = default;
};

// the subsets/maps of the binary construction: X_{2j-1} = X_{2j} paired,
// u_i half-scaling onto [(i-1)/N, i/N]
PartitionSpec make_binary_partition(int N);

struct RBSystem {
    RBSystem(PartitionSpec partition, std::vector<PiecewisePoly> lambda,
             std::vector<PiecewisePoly> scale);

    PartitionSpec partition;
    std::vector<PiecewisePoly> lambda;  // lambda_i on X_i
    std::vector<PiecewisePoly> scale;   // S_i on X_i
    bool property_s_verified = false;

    // certified upper bound of max_i sup |S_i| (the contraction factor s)
    double scale_sup() const { return scale_sup_; }
    double lambda_sup() const { return lambda_sup_; }
    // sup bound of the fixed point: lambda_sup / (1 - s)
    double fixed_point_bound() const;

private:
    double scale_sup_ = 0.0;
    double lambda_sup_ = 0.0;
};

// Real function sampled on a uniform grid over [lo, hi]. Off-grid reads are
// linear interpolation; reads within 1e-9 of a grid point snap to it, so
// partitions whose u_i^{-1} map the grid into itself are read exactly.
struct SampledFunction {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> values;

    static SampledFunction zeros(double lo, double hi, int intervals);

    int intervals() const { return static_cast<int>(values.size()) - 1; }
    double spacing() const { return (hi - lo) / intervals(); }
    double x(int j) const { return lo + (hi - lo) * j / intervals(); }
    double value_at(double x) const;
    double sup_abs() const;
    double sup_diff(const SampledFunction& other) const;

    bool operator==(const SampledFunction&) const = default;
};

// Interpolation sites with one value per site, or n+1 values per site
// (function value followed by derivatives) for the C^n constructions.
struct InterpolationData {
    std::vector<double> sites;
    std::vector<std::vector<double>> values;

    static InterpolationData simple(std::vector<double> x, std::vector<double> y);

    std::size_t size() const { return sites.size(); }
    int derivative_order() const { return static_cast<int>(values.at(0).size()) - 1; }
    double y(std::size_t j, int k = 0) const { return values[j][static_cast<std::size_t>(k)]; }

    void validate() const;

    bool operator==(const InterpolationData&) const = default;
};

struct SolveOptions {
    double tol = 1e-10;
    int max_iter = 200;
    // proceed even when the sup-norm contraction bound is >= 1
    bool force = false;
};

struct SolveResult {
    SampledFunction fixed_point;
    std::vector<double> residuals;  // sup |f_k - f_{k-1}| per iteration
};

class SolveError : public std::runtime_error {
public:
    SolveError(const std::string& what, std::vector<double> residuals)
        : std::runtime_error(what), residuals(std::move(residuals)) {}
    std::vector<double> residuals;
};

// one application of the operator on the grid
SampledFunction apply_rb(const RBSystem& sys, const SampledFunction& f);

SolveResult solve_fixed_point(const RBSystem& sys, SampledFunction f0, SolveOptions opts = {});

// piecewise-affine interpolant of the data (the preferred starting iterate),
// or zeros when data is empty
SampledFunction initial_iterate(const InterpolationData& data, double lo, double hi,
                                int intervals);

struct RecursiveEval {
    double value = 0.0;
    double error_bound = 0.0;
};

// unrolls the self-referential equation depth levels with base value 0;
// error_bound = s^depth * fixed_point_bound
RecursiveEval eval_recursive(const RBSystem& sys, double x, int depth);

struct PropertyJReport {
    double max_residual = 0.0;
    bool pass = false;
};

// endpoint and join-up residuals of the binary interpolation construction
PropertyJReport check_property_J(const RBSystem& sys, const InterpolationData& data,
                                 double tol = 1e-12);

// Binary-partition interpolant with constant scalings: affine lambda_i chosen
// so the fixed point passes through the data, with the free value at each odd
// knot exposed as midpoints (default: average of the neighbouring data).
RBSystem build_affine_fif(const InterpolationData& data, std::span<const double> s_values,
                          std::span<const double> midpoints = {});

// General-partition system whose scalings vanish at the subset endpoints
// (checked at the coefficient level) and whose lambda match the data at the
// knots; the fixed point then interpolates the data.
RBSystem build_property_S_system(std::vector<double> knots, std::vector<Interval> subsets,
                                 const InterpolationData& data,
                                 std::vector<PiecewisePoly> scale,
                                 std::vector<PiecewisePoly> lambda);

struct CnReport {
    int n = 0;
    double max_residual = 0.0;
    bool pass = false;
};

// C^n endpoint and join-up residuals on the binary partition, evaluated
// through the Leibniz expansion of D^k (Phi f) with the prescribed derivative
// data substituted for f
CnReport check_Cn_conditions(const RBSystem& sys, const InterpolationData& data, int n,
                             double tol = 1e-9);

// sup over the grid of |f - Phi f|
double verify_self_referential(const RBSystem& sys, const SampledFunction& f);

// per-piece samples of lambda_i = f(u_i(x)) - S_i(x) f(x); round-trips the
// lambda tuple when f is the fixed point
std::vector<SampledFunction> recover_lambda(const PartitionSpec& partition,
                                            const std::vector<PiecewisePoly>& scale,
                                            const SampledFunction& f);

}  // namespace fractalfn
