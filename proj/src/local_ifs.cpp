#include "fractalfn/local_ifs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fractalfn {

void LocalIFS::validate() const {
    if (pieces.empty()) throw std::invalid_argument("local IFS needs at least one piece");
    for (const auto& p : pieces)
        if (!bounds.contains_rect(p.domain))
            throw std::invalid_argument("piece domain outside the bounds");
}

std::vector<AffineMap2D> LocalIFS::maps() const {
    std::vector<AffineMap2D> out;
    out.reserve(pieces.size());
    for (const auto& p : pieces) out.push_back(p.map);
    return out;
}

GridSet apply_local_operator(const LocalIFS& ifs, const GridSet& s) {
    GridSet out(s.bounds(), s.resolution());
    for (const auto& piece : ifs.pieces) {
        const GridSet inside = intersect_grid_set(s, piece.domain);
        if (inside.is_empty()) continue;
        out = union_grid_sets(out, map_grid_set(piece.map, inside));
    }
    return out;
}

namespace {

double effective_tol(const IterateOptions& opts, const GridSet& k0) {
    return opts.tol > 0.0 ? opts.tol : k0.resolution();
}

}  // namespace

LocalAttractorResult iterate_local_attractor(const LocalIFS& ifs, GridSet k0,
                                             IterateOptions opts) {
    ifs.validate();
    const double tol = effective_tol(opts, k0);
    LocalAttractorResult result;
    GridSet current = std::move(k0);
    for (int n = 1; n <= opts.max_iter; ++n) {
        GridSet next = apply_local_operator(ifs, current);
        if (next.is_empty()) {
            result.trace.records.push_back({n, 0, std::numeric_limits<double>::quiet_NaN()});
            result.attractor = std::move(next);
            result.became_empty = true;
            return result;
        }
        const double dh = next == current ? 0.0 : hausdorff_distance(next, current);
        result.trace.records.push_back({n, next.size(), dh});
        current = std::move(next);
        if (dh <= tol) {
            result.converged = true;
            break;
        }
    }
    result.attractor = std::move(current);
    return result;
}

GlobalAttractorResult iterate_global_attractor(std::span<const AffineMap2D> maps, GridSet k0,
                                               IterateOptions opts) {
    if (maps.empty()) throw std::invalid_argument("need at least one map");
    for (const auto& m : maps)
        if (!(m.operator_norm() < 1.0))
            throw std::invalid_argument("global iteration requires contractions");
    const double tol = effective_tol(opts, k0);
    GlobalAttractorResult result;
    GridSet current = std::move(k0);
    for (int n = 1; n <= opts.max_iter; ++n) {
        GridSet next(current.bounds(), current.resolution());
        for (const auto& m : maps) next = union_grid_sets(next, map_grid_set(m, current));
        if (next.is_empty())
            throw std::runtime_error("global iterate left the bounds");
        const double dh = next == current ? 0.0 : hausdorff_distance(next, current);
        result.trace.records.push_back({n, next.size(), dh});
        current = std::move(next);
        if (dh <= tol) {
            result.converged = true;
            break;
        }
    }
    result.attractor = std::move(current);
    return result;
}

SubsetCheck check_local_subset_global(const LocalIFS& ifs, double h, IterateOptions opts) {
    ifs.validate();
    const GridSet k0 = GridSet::full(ifs.bounds, h);
    const auto local = iterate_local_attractor(ifs, k0, opts);
    const auto maps = ifs.maps();
    const auto global = iterate_global_attractor(maps, k0, opts);
    SubsetCheck check;
    if (local.attractor.is_empty()) {
        // the empty set is a subset of everything
        check.local_empty = true;
        check.holds = true;
        return check;
    }
    check.directed = directed_hausdorff_distance(local.attractor, global.attractor);
    check.holds = check.directed <= 2.0 * h;
    return check;
}

double code_metric(const CodeWord& sigma, const CodeWord& tau, int N) {
    if (sigma.symbols.size() != tau.symbols.size())
        throw std::invalid_argument("codes must be compared at equal length");
    if (N < 1) throw std::invalid_argument("N must be positive");
    double sum = 0.0, weight = 1.0;
    for (std::size_t n = 0; n < sigma.symbols.size(); ++n) {
        const int a = sigma.symbols[n], b = tau.symbols[n];
        if (a < 1 || a > N || b < 1 || b > N)
            throw std::invalid_argument("code symbol out of range");
        weight /= (N + 1);
        sum += std::abs(a - b) * weight;
    }
    return sum;
}

namespace {

Rect bbox_of_image(const AffineMap2D& m, const Rect& r) {
    const Vec2 c[4] = {m({r.x0, r.y0}), m({r.x1, r.y0}), m({r.x0, r.y1}), m({r.x1, r.y1})};
    Rect out{c[0].x, c[0].x, c[0].y, c[0].y};
    for (const auto& p : c) {
        out.x0 = std::min(out.x0, p.x);
        out.x1 = std::max(out.x1, p.x);
        out.y0 = std::min(out.y0, p.y);
        out.y1 = std::max(out.y1, p.y);
    }
    return out;
}

}  // namespace

CodePoint code_point(const LocalIFS& ifs, const CodeWord& code) {
    ifs.validate();
    const int N = static_cast<int>(ifs.pieces.size());
    Rect box = ifs.bounds;
    double factor = 1.0;
    // innermost map first: f_{s1} o ... o f_{sn}(X)
    for (auto it = code.symbols.rbegin(); it != code.symbols.rend(); ++it) {
        if (*it < 1 || *it > N) throw std::invalid_argument("code symbol out of range");
        const auto& piece = ifs.pieces[static_cast<std::size_t>(*it - 1)];
        const Rect clipped{std::max(box.x0, piece.domain.x0), std::min(box.x1, piece.domain.x1),
                           std::max(box.y0, piece.domain.y0), std::min(box.y1, piece.domain.y1)};
        if (clipped.x0 > clipped.x1 || clipped.y0 > clipped.y1)
            throw std::runtime_error("code not admissible");
        box = bbox_of_image(piece.map, clipped);
        factor *= piece.map.operator_norm();
    }
    return {{0.5 * (box.x0 + box.x1), 0.5 * (box.y0 + box.y1)},
            ifs.bounds.diameter() * factor};
}

namespace {

struct AffineOnPiece {
    double lo = 0.0, hi = 0.0;
    double slope = 0.0, intercept = 0.0;
};

// per-piece (slope, intercept) in the global variable; throws unless every
// polynomial piece is affine (maxdeg 1 once elevated coefficients are collinear)
std::vector<AffineOnPiece> as_affine_pieces(const PiecewisePoly& f, int max_degree) {
    std::vector<AffineOnPiece> out;
    const auto& breaks = f.breakpoints();
    for (std::size_t i = 0; i < f.piece_count(); ++i) {
        const auto& b = f.piece_coeffs(i);
        const double lo = breaks[i], hi = breaks[i + 1];
        const double first = b.front(), last = b.back();
        const int d = static_cast<int>(b.size()) - 1;
        for (int j = 0; j <= d; ++j) {
            const double want = d == 0 ? first : first + (last - first) * j / d;
            if (std::abs(b[static_cast<std::size_t>(j)] - want) >
                1e-12 * std::max(1.0, std::abs(want)))
                throw std::invalid_argument(
                    "graph system requires affine lambda and constant scale per piece");
        }
        if (max_degree == 0 && std::abs(last - first) > 1e-12 * std::max(1.0, std::abs(first)))
            throw std::invalid_argument(
                "graph system requires affine lambda and constant scale per piece");
        const double slope = (last - first) / (hi - lo);
        out.push_back({lo, hi, slope, first - slope * lo});
    }
    return out;
}

}  // namespace

GraphSystem graph_ifs_from_rb(const RBSystem& sys, GraphOptions opts) {
    const double a = sys.partition.max_lipschitz();
    if (!(a < 1.0))
        throw std::invalid_argument("graph system requires contractive base maps");

    GraphSystem g;
    auto solved = solve_fixed_point(
        sys, SampledFunction::zeros(sys.partition.base.lo, sys.partition.base.hi, opts.grid),
        opts.solve);
    g.fixed_point = std::move(solved.fixed_point);

    double fmin = g.fixed_point.values.front(), fmax = fmin;
    for (double v : g.fixed_point.values) {
        fmin = std::min(fmin, v);
        fmax = std::max(fmax, v);
    }
    const double ylo = fmin - 1.0, yhi = fmax + 1.0;
    const double ymax_abs = std::max(std::abs(ylo), std::abs(yhi));

    double big_l = 0.0;
    g.ifs.bounds = {sys.partition.base.lo, sys.partition.base.hi, ylo, yhi};
    for (int i = 0; i < sys.partition.N; ++i) {
        const auto& u = sys.partition.maps[static_cast<std::size_t>(i)];
        const auto lam = as_affine_pieces(sys.lambda[static_cast<std::size_t>(i)], 1);
        const auto sc = as_affine_pieces(sys.scale[static_cast<std::size_t>(i)], 0);
        // merged breakpoints of the two coefficient functions
        std::vector<double> cuts;
        for (const auto& p : lam) {
            cuts.push_back(p.lo);
            cuts.push_back(p.hi);
        }
        for (const auto& p : sc) {
            cuts.push_back(p.lo);
            cuts.push_back(p.hi);
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end(),
                               [](double x, double y) { return std::abs(x - y) <= 1e-12; }),
                   cuts.end());
        const auto lookup = [](const std::vector<AffineOnPiece>& v, double x) {
            for (const auto& p : v)
                if (x >= p.lo && x <= p.hi) return p;
            return v.back();
        };
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            const double lo = cuts[c], hi = cuts[c + 1], mid = 0.5 * (lo + hi);
            const auto lp = lookup(lam, mid);
            const auto sp = lookup(sc, mid);
            const double s_const = sp.intercept + sp.slope * mid;  // slope is ~0
            big_l = std::max(big_l, std::abs(lp.slope) + std::abs(sp.slope) * ymax_abs);
            LocalIFSPiece piece;
            piece.domain = {lo, hi, ylo, yhi};
            piece.map.linear = {u.slope, 0.0, lp.slope, s_const};
            piece.map.translation = {u.intercept, lp.intercept};
            g.ifs.pieces.push_back(piece);
        }
    }
    g.ifs.validate();

    // theta = (1-a)/(2L); any positive weight works when L = 0, so use 1
    g.theta = big_l > 0.0 ? (1.0 - a) / (2.0 * big_l) : 1.0;
    g.q = std::max(a + g.theta * big_l, sys.scale_sup());
    return g;
}

GridSet rasterize_graph(const SampledFunction& f, Rect bounds, double h) {
    GridSet grid(bounds, h);
    for (int ix = 0; ix < grid.nx(); ++ix) {
        const double xc = bounds.x0 + (ix + 0.5) * h;
        if (xc < f.lo || xc > f.hi) continue;
        grid.insert_point({xc, f.value_at(xc)});
    }
    grid.normalize();
    return grid;
}

}  // namespace fractalfn
