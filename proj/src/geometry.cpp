#include "fractalfn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fractalfn {

Interval::Interval(double a, double b, bool lc, bool hc)
    : lo(a), hi(b), lo_closed(lc), hi_closed(hc) {
    if (!(a < b)) throw std::invalid_argument("interval must have positive length");
    if (!std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("interval endpoints must be finite");
}

bool Interval::contains(double x) const {
    if (x < lo || x > hi) return false;
    if (x == lo && !lo_closed) return false;
    if (x == hi && !hi_closed) return false;
    return true;
}

AffineMap1D AffineMap1D::inverse() const {
    if (slope == 0.0) throw std::invalid_argument("affine map with zero slope has no inverse");
    return {1.0 / slope, -intercept / slope};
}

double AffineMap1D::lipschitz() const { return std::abs(slope); }

AffineMap1D AffineMap1D::mapping(const Interval& from, const Interval& to) {
    const double s = to.length() / from.length();
    return {s, to.lo - s * from.lo};
}

Vec2 AffineMap2D::operator()(Vec2 p) const {
    return {linear.m00 * p.x + linear.m01 * p.y + translation.x,
            linear.m10 * p.x + linear.m11 * p.y + translation.y};
}

double AffineMap2D::operator_norm() const {
    // largest singular value of the 2x2 linear part
    const double a = linear.m00, b = linear.m01, c = linear.m10, d = linear.m11;
    const double t = a * a + b * b + c * c + d * d;
    const double det = a * d - b * c;
    const double disc = std::max(0.0, t * t - 4.0 * det * det);
    return std::sqrt(0.5 * (t + std::sqrt(disc)));
}

AffineMap2D AffineMap2D::scaling(double sx, double sy, Vec2 t) {
    AffineMap2D m;
    m.linear = {sx, 0.0, 0.0, sy};
    m.translation = t;
    return m;
}

bool Rect::contains_rect(const Rect& r) const {
    return r.x0 >= x0 && r.x1 <= x1 && r.y0 >= y0 && r.y1 <= y1;
}

bool Rect::intersects(const Rect& r) const {
    return r.x0 <= x1 && x0 <= r.x1 && r.y0 <= y1 && y0 <= r.y1;
}

double Rect::diameter() const { return std::hypot(width(), height()); }

Rect Rect::snapped_outward(double h) const {
    return {std::floor(x0 / h) * h, std::ceil(x1 / h) * h,
            std::floor(y0 / h) * h, std::ceil(y1 / h) * h};
}

namespace {

int checked_cell_count(double lo, double hi, double h) {
    const double n = (hi - lo) / h;
    const auto rounded = static_cast<long long>(std::llround(n));
    if (rounded < 1 || std::abs(n - static_cast<double>(rounded)) > 1e-9 * std::max(1.0, n))
        throw std::invalid_argument("grid bounds are not a multiple of the resolution");
    if (rounded > (1 << 24)) throw std::invalid_argument("grid too fine");
    return static_cast<int>(rounded);
}

}  // namespace

GridSet::GridSet(Rect bounds, double h) : h_(h), bounds_(bounds) {
    if (!(h > 0.0)) throw std::invalid_argument("resolution must be positive");
    nx_ = checked_cell_count(bounds.x0, bounds.x1, h);
    ny_ = checked_cell_count(bounds.y0, bounds.y1, h);
}

GridSet GridSet::full(Rect bounds, double h) {
    GridSet g(bounds, h);
    g.cells_.reserve(static_cast<std::size_t>(g.nx_) * g.ny_);
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(g.nx_) * g.ny_; ++k)
        g.cells_.push_back(k);
    return g;
}

bool GridSet::same_grid(const GridSet& other) const {
    return h_ == other.h_ && nx_ == other.nx_ && ny_ == other.ny_ &&
           bounds_.x0 == other.bounds_.x0 && bounds_.y0 == other.bounds_.y0;
}

bool GridSet::operator==(const GridSet& other) const {
    return same_grid(other) && cells_ == other.cells_;
}

void GridSet::insert_point(Vec2 p) {
    if (!bounds_.contains(p)) return;
    int ix = static_cast<int>(std::floor((p.x - bounds_.x0) / h_));
    int iy = static_cast<int>(std::floor((p.y - bounds_.y0) / h_));
    if (ix == nx_) ix = nx_ - 1;  // p.x == x1 exactly
    if (iy == ny_) iy = ny_ - 1;
    if (ix < 0 || ix >= nx_ || iy < 0 || iy >= ny_) return;
    cells_.push_back(static_cast<std::int64_t>(iy) * nx_ + ix);
    dirty_ = true;
}

void GridSet::insert_cell(int ix, int iy) {
    if (ix < 0 || ix >= nx_ || iy < 0 || iy >= ny_)
        throw std::out_of_range("cell outside grid bounds");
    cells_.push_back(static_cast<std::int64_t>(iy) * nx_ + ix);
    dirty_ = true;
}

bool GridSet::contains_cell(int ix, int iy) const {
    if (ix < 0 || ix >= nx_ || iy < 0 || iy >= ny_) return false;
    const std::int64_t key = static_cast<std::int64_t>(iy) * nx_ + ix;
    return std::binary_search(cells_.begin(), cells_.end(), key);
}

void GridSet::normalize() {
    std::sort(cells_.begin(), cells_.end());
    cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
    dirty_ = false;
}

Vec2 GridSet::cell_center(std::int64_t key) const {
    const auto iy = key / nx_;
    const auto ix = key % nx_;
    return {bounds_.x0 + (static_cast<double>(ix) + 0.5) * h_,
            bounds_.y0 + (static_cast<double>(iy) + 0.5) * h_};
}

std::vector<Vec2> GridSet::cell_centers() const {
    std::vector<Vec2> out;
    out.reserve(cells_.size());
    for (auto k : cells_) out.push_back(cell_center(k));
    return out;
}

bool GridSet::is_subset_of(const GridSet& other) const {
    if (!same_grid(other)) return false;
    return std::includes(other.cells_.begin(), other.cells_.end(), cells_.begin(), cells_.end());
}

double GridSet::diameter() const {
    double best = 0.0;
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        const auto ai = cells_[i] % nx_, aj = cells_[i] / nx_;
        for (std::size_t j = i + 1; j < cells_.size(); ++j) {
            const auto bi = cells_[j] % nx_, bj = cells_[j] / nx_;
            const double dx = static_cast<double>(ai - bi), dy = static_cast<double>(aj - bj);
            best = std::max(best, dx * dx + dy * dy);
        }
    }
    return h_ * std::sqrt(best);
}

namespace detail {

std::int64_t directed_sq_bruteforce(const GridSet& a, const GridSet& b) {
    const int nx = a.nx();
    std::int64_t best = 0;
    for (auto ka : a.cells()) {
        const std::int64_t ax = ka % nx, ay = ka / nx;
        std::int64_t dmin = std::numeric_limits<std::int64_t>::max();
        for (auto kb : b.cells()) {
            const std::int64_t dx = ax - kb % nx, dy = ay - kb / nx;
            const std::int64_t d2 = dx * dx + dy * dy;
            if (d2 < dmin) {
                dmin = d2;
                if (dmin <= best) break;  // cannot raise the max
            }
        }
        best = std::max(best, dmin);
    }
    return best;
}

namespace {

// 1-D squared distance transform, lower envelope of parabolas
void dt1d(const std::vector<std::int64_t>& f, std::vector<std::int64_t>& d,
          std::vector<int>& v, std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (int q = 1; q < n; ++q) {
        if (f[q] == std::numeric_limits<std::int64_t>::max() / 4) continue;
        double s;
        for (;;) {
            const int p = v[k];
            s = (static_cast<double>(f[q] - f[p]) + static_cast<double>(q) * q -
                 static_cast<double>(p) * p) /
                (2.0 * (q - p));
            if (s > z[k]) break;
            --k;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    // leading sentinel-only case: no finite parabola before the first real one
    if (f[v[0]] == std::numeric_limits<std::int64_t>::max() / 4 && k == 0) {
        d.assign(n, std::numeric_limits<std::int64_t>::max() / 4);
        return;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < static_cast<double>(q)) ++k;
        const std::int64_t dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

}  // namespace

std::int64_t directed_sq_transform(const GridSet& a, const GridSet& b) {
    const int nx = b.nx(), ny = b.ny();
    constexpr std::int64_t kFar = std::numeric_limits<std::int64_t>::max() / 4;

    // vertical pass: per column, distance (in rows) to the nearest cell of b
    std::vector<std::int64_t> vert(static_cast<std::size_t>(nx) * ny, kFar);
    for (auto kb : b.cells()) vert[static_cast<std::size_t>(kb)] = 0;
    for (int x = 0; x < nx; ++x) {
        std::int64_t run = kFar;
        for (int y = 0; y < ny; ++y) {
            auto& c = vert[static_cast<std::size_t>(y) * nx + x];
            run = std::min(run < kFar ? run + 1 : kFar, c);
            c = run;
        }
        run = kFar;
        for (int y = ny - 1; y >= 0; --y) {
            auto& c = vert[static_cast<std::size_t>(y) * nx + x];
            run = std::min(run < kFar ? run + 1 : kFar, c);
            c = run;
        }
    }
    // horizontal pass: envelope over squared column distances
    std::vector<std::int64_t> dist(static_cast<std::size_t>(nx) * ny);
    std::vector<std::int64_t> f(nx), d(nx);
    std::vector<int> v(nx);
    std::vector<double> z(nx + 1);
    for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) {
            const auto g = vert[static_cast<std::size_t>(y) * nx + x];
            f[x] = g >= kFar ? kFar : g * g;
        }
        dt1d(f, d, v, z);
        for (int x = 0; x < nx; ++x) dist[static_cast<std::size_t>(y) * nx + x] = d[x];
    }

    std::int64_t best = 0;
    for (auto ka : a.cells()) best = std::max(best, dist[static_cast<std::size_t>(ka)]);
    return best;
}

}  // namespace detail

namespace {

std::int64_t directed_sq(const GridSet& a, const GridSet& b) {
    // brute force at desk scale, distance transform beyond it; identical results
    const auto work = static_cast<std::uint64_t>(a.size()) * b.size();
    if (work <= (1u << 22)) return detail::directed_sq_bruteforce(a, b);
    return detail::directed_sq_transform(a, b);
}

void require_comparable(const GridSet& a, const GridSet& b) {
    if (a.is_empty() || b.is_empty())
        throw std::invalid_argument("hausdorff undefined on empty set");
    if (!a.same_grid(b))
        throw std::invalid_argument("hausdorff requires same resolution and bounds");
}

}  // namespace

double directed_hausdorff_distance(const GridSet& a, const GridSet& b) {
    require_comparable(a, b);
    return a.resolution() * std::sqrt(static_cast<double>(directed_sq(a, b)));
}

double hausdorff_distance(const GridSet& a, const GridSet& b) {
    require_comparable(a, b);
    const auto d = std::max(directed_sq(a, b), directed_sq(b, a));
    return a.resolution() * std::sqrt(static_cast<double>(d));
}

GridSet map_grid_set(const AffineMap2D& m, const GridSet& s) {
    GridSet out(s.bounds_, s.h_);
    out.cells_.reserve(s.cells_.size());
    for (auto k : s.cells_) out.insert_point(m(s.cell_center(k)));
    out.normalize();
    return out;
}

GridSet intersect_grid_set(const GridSet& s, const Rect& r) {
    GridSet out(s.bounds_, s.h_);
    for (auto k : s.cells_)
        if (r.contains(s.cell_center(k))) out.cells_.push_back(k);
    return out;  // already sorted
}

GridSet union_grid_sets(const GridSet& a, const GridSet& b) {
    if (!a.same_grid(b)) throw std::invalid_argument("union requires same grid");
    GridSet out(a.bounds_, a.h_);
    out.cells_.reserve(a.cells_.size() + b.cells_.size());
    std::set_union(a.cells_.begin(), a.cells_.end(), b.cells_.begin(), b.cells_.end(),
                   std::back_inserter(out.cells_));
    return out;
}

}  // namespace fractalfn
