#pragma once

#include <span>
#include <vector>

#include "fractalfn/geometry.hpp"
#include "fractalfn/rb.hpp"

// Local iterated function systems: affine maps restricted to rectangular
// pieces of the plane, the set-valued operator S |-> union f_i(S /\ X_i),
// deterministic attractor iteration, the code space, and the planar system
// whose invariant set is the graph of a fixed point.

namespace fractalfn {

struct LocalIFSPiece {
    Rect domain;      // X_i
    AffineMap2D map;  // f_i : X_i -> bounds
};

struct LocalIFS {
    Rect bounds;  // the space X
    std::vector<LocalIFSPiece> pieces;

    void validate() const;
    std::vector<AffineMap2D> maps() const;
};

struct IterationRecord {
    int iteration = 0;
    std::size_t cell_count = 0;
    double dh_prev = 0.0;  // Hausdorff distance to the previous iterate
};

struct ConvergenceTrace {
    std::vector<IterationRecord> records;
};

struct IterateOptions {
    int max_iter = 256;
    double tol = -1.0;  // <= 0 means one pixel (the grid resolution)
};

// union over pieces of the image of S restricted to the piece domain; an
// empty result is a legal outcome, not an error
GridSet apply_local_operator(const LocalIFS& ifs, const GridSet& s);

struct LocalAttractorResult {
    GridSet attractor;
    ConvergenceTrace trace;
    bool became_empty = false;
    bool converged = false;
};

LocalAttractorResult iterate_local_attractor(const LocalIFS& ifs, GridSet k0,
                                             IterateOptions opts = {});

struct GlobalAttractorResult {
    GridSet attractor;
    ConvergenceTrace trace;
    bool converged = false;
};

// plain Hutchinson iteration, no domain restriction; requires every map to be
// a contraction
GlobalAttractorResult iterate_global_attractor(std::span<const AffineMap2D> maps, GridSet k0,
                                               IterateOptions opts = {});

struct SubsetCheck {
    double directed = 0.0;
    bool holds = false;
    bool local_empty = false;
};

// directed Hausdorff distance from the local attractor to the global one,
// both iterated from the full bounds at resolution h; holds iff <= 2h
SubsetCheck check_local_subset_global(const LocalIFS& ifs, double h, IterateOptions opts = {});

struct CodeWord {
    std::vector<int> symbols;  // 1-based piece indices
};

// partial sum of sum_n |sigma_n - tau_n| / (N+1)^n over the common length
double code_metric(const CodeWord& sigma, const CodeWord& tau, int N);

struct CodePoint {
    Vec2 point;
    double diameter_bound = 0.0;
};

// center of f_{s1} o ... o f_{sn}(X) with diameter bound diam(X) * prod of
// the contraction factors; throws "code not admissible" when a composition
// step misses the next domain
CodePoint code_point(const LocalIFS& ifs, const CodeWord& code);

struct GraphSystem {
    LocalIFS ifs;                 // pieces w_i(x,y) = (u_i(x), lambda_i(x) + S_i(x) y)
    double theta = 1.0;           // product-metric weight
    double q = 0.0;               // contraction factor in d_theta
    SampledFunction fixed_point;  // solved fixed point used for the y-range
};

struct GraphOptions {
    int grid = 4096;
    SolveOptions solve;
};

// Planar local IFS whose invariant set is the graph of the system's fixed
// point. Requires contractive u_i, affine lambda and constant scale on each
// polynomial piece; the vertical extent is [min f - 1, max f + 1].
GraphSystem graph_ifs_from_rb(const RBSystem& sys, GraphOptions opts = {});

// one cell per grid column: the cell containing (x_c, f(x_c)) at each column
// center x_c inside the sampled range
GridSet rasterize_graph(const SampledFunction& f, Rect bounds, double h);

}  // namespace fractalfn
