#pragma once

#include <cstdint>
#include <utility>
#include <vector>

// Metric-space substrate: intervals, affine maps of the line and the plane,
// finite pixel sets at a fixed resolution, and the Hausdorff metric on them.

namespace fractalfn {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    bool lo_closed = true;
    bool hi_closed = true;

    Interval() = default;
    Interval(double a, double b, bool lc = true, bool hc = true);

    static Interval closed(double a, double b) { return Interval(a, b, true, true); }
    static Interval half_open(double a, double b) { return Interval(a, b, true, false); }

    double length() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
    bool contains(double x) const;

    bool operator==(const Interval&) const = default;
};

struct AffineMap1D {
    double slope = 1.0;
    double intercept = 0.0;

    double operator()(double x) const { return slope * x + intercept; }
    AffineMap1D inverse() const;
    double lipschitz() const;

    // the affine bijection sending [from.lo, from.hi] onto [to.lo, to.hi]
    static AffineMap1D mapping(const Interval& from, const Interval& to);

    bool operator==(const AffineMap1D&) const = default;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Vec2&) const = default;
};

struct Mat2 {
    // row-major: [m00 m01; m10 m11]
    double m00 = 1.0, m01 = 0.0, m10 = 0.0, m11 = 1.0;
    bool operator==(const Mat2&) const = default;
};

struct AffineMap2D {
    Mat2 linear;
    Vec2 translation;

    Vec2 operator()(Vec2 p) const;
    // spectral norm of the linear part; contractivity factor when < 1
    double operator_norm() const;

    static AffineMap2D identity() { return {}; }
    static AffineMap2D scaling(double sx, double sy, Vec2 t = {0.0, 0.0});

    bool operator==(const AffineMap2D&) const = default;
};

struct Rect {
    double x0 = 0.0, x1 = 1.0;
    double y0 = 0.0, y1 = 1.0;

    bool contains(Vec2 p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
    bool contains_rect(const Rect& r) const;
    bool intersects(const Rect& r) const;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double diameter() const;
    // smallest enclosing rectangle whose corners are integer multiples of h
    Rect snapped_outward(double h) const;

    bool operator==(const Rect&) const = default;
};

// Finite subset of the plane, one bit per cell of an h-grid over a bounding
// rectangle. A cell belongs to a set via its center point. Cells are kept as
// sorted packed indices so all operations are deterministic.
class GridSet {
public:
    GridSet() = default;
    GridSet(Rect bounds, double h);

    static GridSet full(Rect bounds, double h);

    double resolution() const { return h_; }
    const Rect& bounds() const { return bounds_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }

    bool is_empty() const { return cells_.empty(); }
    std::size_t size() const { return cells_.size(); }
    bool same_grid(const GridSet& other) const;
    bool operator==(const GridSet& other) const;

    // inserts the cell containing p; points outside bounds are dropped
    void insert_point(Vec2 p);
    void insert_cell(int ix, int iy);
    bool contains_cell(int ix, int iy) const;
    // call once after a batch of inserts
    void normalize();

    Vec2 cell_center(std::int64_t key) const;
    const std::vector<std::int64_t>& cells() const { return cells_; }
    std::vector<Vec2> cell_centers() const;

    bool is_subset_of(const GridSet& other) const;
    // max pairwise center distance; O(n^2), intended for small sets and tests
    double diameter() const;

private:
    double h_ = 1.0;
    Rect bounds_;
    int nx_ = 0;
    int ny_ = 0;
    std::vector<std::int64_t> cells_;
    bool dirty_ = false;

    friend GridSet map_grid_set(const AffineMap2D&, const GridSet&);
    friend GridSet intersect_grid_set(const GridSet&, const Rect&);
    friend GridSet union_grid_sets(const GridSet&, const GridSet&);
};

// d_H(A,B) = max of the two directed distances, Euclidean between cell
// centers. Throws if either set is empty or the grids differ.
double hausdorff_distance(const GridSet& a, const GridSet& b);
// max over a in A of min over b in B
double directed_hausdorff_distance(const GridSet& a, const GridSet& b);

GridSet map_grid_set(const AffineMap2D& m, const GridSet& s);
GridSet intersect_grid_set(const GridSet& s, const Rect& r);
GridSet union_grid_sets(const GridSet& a, const GridSet& b);

namespace detail {
// both return the max over A of the min squared center distance in cell units;
// the brute-force path is the oracle for the transform path
std::int64_t directed_sq_bruteforce(const GridSet& a, const GridSet& b);
std::int64_t directed_sq_transform(const GridSet& a, const GridSet& b);
}  // namespace detail

}  // namespace fractalfn
