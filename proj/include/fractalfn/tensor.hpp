#pragma once

#include <vector>

#include "fractalfn/rb.hpp"

// Tensor products of two one-dimensional systems. The product operator acts
// on factor pairs, (f, g) |-> (Phi_A f, Phi_B g), and the surface is the
// derived artifact values[i][j] = f(x_i) * g(y_j); every surface produced
// here is rank one by construction.

namespace fractalfn {

struct TensorSurface {
    std::vector<double> grid_x;
    std::vector<double> grid_y;
    std::vector<std::vector<double>> values;  // values[i][j] over (grid_x[i], grid_y[j])
};

// outer product of one application of each operator
TensorSurface tensor_apply(const RBSystem& sys_a, const RBSystem& sys_b,
                           const SampledFunction& f, const SampledFunction& g);

struct TensorOptions {
    int grid = 256;
    double tol = 1e-10;
    int max_iter = 200;
};

struct TensorResult {
    TensorSurface surface;
    // pair metric sup|df| + sup|dg| between successive iterate pairs
    std::vector<double> residuals;
};

// iterates the factor pair from zero until the pair metric drops below tol
TensorResult tensor_fixed_point(const RBSystem& sys_a, const RBSystem& sys_b,
                                TensorOptions opts = {});

TensorSurface outer_product(const SampledFunction& f, const SampledFunction& g);

}  // namespace fractalfn
