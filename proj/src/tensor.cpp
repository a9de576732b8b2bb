#include "fractalfn/tensor.hpp"

#include <sstream>
#include <stdexcept>

namespace fractalfn {

TensorSurface outer_product(const SampledFunction& f, const SampledFunction& g) {
    TensorSurface s;
    s.grid_x.reserve(f.values.size());
    s.grid_y.reserve(g.values.size());
    for (int i = 0; i <= f.intervals(); ++i) s.grid_x.push_back(f.x(i));
    for (int j = 0; j <= g.intervals(); ++j) s.grid_y.push_back(g.x(j));
    s.values.assign(f.values.size(), std::vector<double>(g.values.size()));
    for (std::size_t i = 0; i < f.values.size(); ++i)
        for (std::size_t j = 0; j < g.values.size(); ++j)
            s.values[i][j] = f.values[i] * g.values[j];
    return s;
}

TensorSurface tensor_apply(const RBSystem& sys_a, const RBSystem& sys_b,
                           const SampledFunction& f, const SampledFunction& g) {
    return outer_product(apply_rb(sys_a, f), apply_rb(sys_b, g));
}

TensorResult tensor_fixed_point(const RBSystem& sys_a, const RBSystem& sys_b,
                                TensorOptions opts) {
    if (sys_a.scale_sup() >= 1.0 || sys_b.scale_sup() >= 1.0)
        throw std::runtime_error("operator not sup-norm contractive");
    SampledFunction f =
        SampledFunction::zeros(sys_a.partition.base.lo, sys_a.partition.base.hi, opts.grid);
    SampledFunction g =
        SampledFunction::zeros(sys_b.partition.base.lo, sys_b.partition.base.hi, opts.grid);
    TensorResult result;
    for (int k = 0; k < opts.max_iter; ++k) {
        SampledFunction fn = apply_rb(sys_a, f);
        SampledFunction gn = apply_rb(sys_b, g);
        const double r = fn.sup_diff(f) + gn.sup_diff(g);
        result.residuals.push_back(r);
        f = std::move(fn);
        g = std::move(gn);
        if (r <= opts.tol) {
            result.surface = outer_product(f, g);
            return result;
        }
    }
    std::ostringstream msg;
    msg << "tensor iteration did not converge in " << opts.max_iter << " iterations";
    throw SolveError(msg.str(), std::move(result.residuals));
}

}  // namespace fractalfn
