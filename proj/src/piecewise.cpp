#include "fractalfn/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fractalfn {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double de_casteljau(const std::vector<double>& b, double t) {
    std::vector<double> w(b);
    for (std::size_t r = 1; r < w.size(); ++r)
        for (std::size_t j = 0; j + r < w.size(); ++j)
            w[j] = (1.0 - t) * w[j] + t * w[j + 1];
    return w.empty() ? 0.0 : w[0];
}

// Bernstein coefficients on [l, r] of a polynomial given by monomial
// coefficients (low to high) in the global variable
std::vector<double> bernstein_of_monomial(std::span<const double> a, double l, double r) {
    const int d = std::max(0, static_cast<int>(a.size()) - 1);
    const double w = r - l;
    // shift to the local variable sigma in [0,1]: x = l + w*sigma
    std::vector<double> shifted(d + 1, 0.0);
    for (int k = 0; k <= d; ++k) {
        double c = k < static_cast<int>(a.size()) ? a[k] : 0.0;
        if (c == 0.0) continue;
        double pw = 1.0;
        for (int j = 0; j <= k; ++j) {
            shifted[j] += c * binom(k, j) * std::pow(l, k - j) * pw;
            pw *= w;
        }
    }
    std::vector<double> b(d + 1, 0.0);
    for (int i = 0; i <= d; ++i)
        for (int j = 0; j <= i; ++j) b[i] += shifted[j] * binom(i, j) / binom(d, j);
    return b;
}

std::vector<double> elevate_once(const std::vector<double>& b) {
    const int d = static_cast<int>(b.size()) - 1;
    std::vector<double> out(d + 2);
    out[0] = b[0];
    out[d + 1] = b[d];
    for (int i = 1; i <= d; ++i) {
        const double t = static_cast<double>(i) / (d + 1);
        out[i] = t * b[i - 1] + (1.0 - t) * b[i];
    }
    return out;
}

}  // namespace

PiecewisePoly::PiecewisePoly(Interval domain, std::vector<double> breakpoints,
                             std::vector<std::vector<double>> bernstein_coeffs)
    : domain_(domain), breaks_(std::move(breakpoints)), coef_(std::move(bernstein_coeffs)) {
    if (breaks_.size() < 2 || coef_.size() != breaks_.size() - 1)
        throw std::invalid_argument("breakpoints and pieces do not match");
    if (breaks_.front() != domain_.lo || breaks_.back() != domain_.hi)
        throw std::invalid_argument("breakpoints must span the domain");
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
        if (!(breaks_[i] < breaks_[i + 1]))
            throw std::invalid_argument("breakpoints must be strictly ascending");
    for (const auto& c : coef_)
        if (c.empty()) throw std::invalid_argument("empty coefficient list");
    // pieces are stored at one common degree
    const std::size_t deg = std::max_element(coef_.begin(), coef_.end(),
                                             [](const auto& a, const auto& b) {
                                                 return a.size() < b.size();
                                             })
                                ->size();
    for (auto& c : coef_)
        while (c.size() < deg) c = elevate_once(c);
}

PiecewisePoly PiecewisePoly::constant(Interval domain, double c) {
    return PiecewisePoly(domain, {domain.lo, domain.hi}, {{c}});
}

PiecewisePoly PiecewisePoly::linear(Interval domain, double value_lo, double value_hi) {
    return PiecewisePoly(domain, {domain.lo, domain.hi}, {{value_lo, value_hi}});
}

PiecewisePoly PiecewisePoly::from_monomial(Interval domain, std::span<const double> coeffs) {
    return PiecewisePoly(domain, {domain.lo, domain.hi},
                         {bernstein_of_monomial(coeffs, domain.lo, domain.hi)});
}

PiecewisePoly PiecewisePoly::from_monomial_pieces(Interval domain, std::vector<double> breakpoints,
                                                  const std::vector<std::vector<double>>& coeffs) {
    std::vector<std::vector<double>> b;
    b.reserve(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        b.push_back(bernstein_of_monomial(coeffs[i], breakpoints[i], breakpoints[i + 1]));
    return PiecewisePoly(domain, std::move(breakpoints), std::move(b));
}

PiecewisePoly PiecewisePoly::bspline(int order, Interval domain, double amplitude) {
    if (order < 3) throw std::invalid_argument("bspline order must be at least 3");

    // cardinal B-spline pieces on unit intervals, each in its local Bernstein
    // basis, built by the integral recursion
    //   M_m(k + t) = int_0^t M_{m-1}(k + s) ds + int_t^1 M_{m-1}(k - 1 + s) ds.
    // The antiderivative of Bernstein coefficients (b_0..b_d) is
    // (0, A_1..A_{d+1}) with A_{j+1} = A_j + b_j/(d+1); the tail integral is
    // the total minus that, which keeps the outermost coefficients exactly
    // zero at every step.
    std::vector<std::vector<double>> pieces = {{1.0}};
    for (int m = 2; m <= order; ++m) {
        const int d = m - 2;  // degree of the previous pieces
        std::vector<std::vector<double>> anti(pieces.size());
        std::vector<double> total(pieces.size());
        for (std::size_t k = 0; k < pieces.size(); ++k) {
            anti[k].assign(d + 2, 0.0);
            for (int j = 0; j <= d; ++j) anti[k][j + 1] = anti[k][j] + pieces[k][j] / (d + 1);
            total[k] = anti[k][d + 1];
        }
        std::vector<std::vector<double>> next(m);
        for (int k = 0; k < m; ++k) {
            std::vector<double> c(d + 2, 0.0);
            if (k < static_cast<int>(pieces.size()))
                for (int j = 0; j <= d + 1; ++j) c[j] += anti[k][j];
            if (k - 1 >= 0)
                for (int j = 0; j <= d + 1; ++j) c[j] += total[k - 1] - anti[k - 1][j];
            next[k] = std::move(c);
        }
        pieces = std::move(next);
    }

    std::vector<double> breaks(order + 1);
    for (int k = 0; k <= order; ++k)
        breaks[k] = domain.lo + domain.length() * static_cast<double>(k) / order;
    breaks.front() = domain.lo;
    breaks.back() = domain.hi;

    PiecewisePoly spline(domain, std::move(breaks), std::move(pieces));
    const double peak = spline(domain.midpoint());  // symmetric and unimodal
    const double scale = amplitude / peak;
    for (auto& piece : spline.coef_)
        for (auto& c : piece) c *= scale;
    return spline;
}

int PiecewisePoly::degree() const { return static_cast<int>(coef_[0].size()) - 1; }

std::size_t PiecewisePoly::piece_index(double x) const {
    const double snap = 1e-9 * std::max(1.0, domain_.length());
    if (x < domain_.lo - snap || x > domain_.hi + snap)
        throw std::domain_error("evaluation outside domain");
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    if (it == breaks_.begin()) return 0;
    std::size_t i = static_cast<std::size_t>(it - breaks_.begin()) - 1;
    return std::min(i, coef_.size() - 1);
}

double PiecewisePoly::operator()(double x) const {
    const std::size_t i = piece_index(x);
    const double l = breaks_[i], r = breaks_[i + 1];
    double t = (x - l) / (r - l);
    t = std::clamp(t, 0.0, 1.0);
    return de_casteljau(coef_[i], t);
}

PiecewisePoly PiecewisePoly::derivative(int k) const {
    if (k < 0) throw std::invalid_argument("derivative order must be nonnegative");
    PiecewisePoly out(*this);
    for (int pass = 0; pass < k; ++pass) {
        const int d = out.degree();
        for (std::size_t i = 0; i < out.coef_.size(); ++i) {
            const double w = out.breaks_[i + 1] - out.breaks_[i];
            std::vector<double> c(std::max(1, d), 0.0);
            if (d >= 1)
                for (int j = 0; j < d; ++j)
                    c[j] = d * (out.coef_[i][j + 1] - out.coef_[i][j]) / w;
            out.coef_[i] = std::move(c);
        }
    }
    return out;
}

PiecewisePoly PiecewisePoly::antiderivative() const {
    PiecewisePoly out(*this);
    double carry = 0.0;
    const int d = degree();
    for (std::size_t i = 0; i < coef_.size(); ++i) {
        const double w = breaks_[i + 1] - breaks_[i];
        std::vector<double> c(d + 2, 0.0);
        c[0] = carry;
        for (int j = 0; j <= d; ++j) c[j + 1] = c[j] + coef_[i][j] * w / (d + 1);
        carry = c[d + 1];
        out.coef_[i] = std::move(c);
    }
    return out;
}

double PiecewisePoly::lipschitz_upper() const {
    const PiecewisePoly d = derivative();
    double lip = 0.0;
    for (const auto& piece : d.coef_)
        for (double c : piece) lip = std::max(lip, std::abs(c));
    return lip;
}

std::pair<double, double> PiecewisePoly::sup_norm_bracket(int samples_per_piece) const {
    const int n = std::max(2, samples_per_piece);
    const PiecewisePoly deriv = derivative();
    double lower = 0.0, pad = 0.0, hull = 0.0;
    for (std::size_t i = 0; i < coef_.size(); ++i) {
        for (int j = 0; j < n; ++j)
            lower = std::max(lower, std::abs(de_casteljau(coef_[i], static_cast<double>(j) / (n - 1))));
        double lip = 0.0;
        for (double c : deriv.coef_[i]) lip = std::max(lip, std::abs(c));
        const double spacing = (breaks_[i + 1] - breaks_[i]) / (n - 1);
        pad = std::max(pad, 0.5 * lip * spacing);
        for (double c : coef_[i]) hull = std::max(hull, std::abs(c));
    }
    return {lower, std::max(lower, std::min(hull, lower + pad))};
}

double PiecewisePoly::holder_seminorm_estimate(double s, double grid_h) const {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("holder exponent must be in (0,1)");
    const double span = domain_.length();
    const int n = std::max(2, static_cast<int>(std::llround(span / grid_h)) + 1);
    std::vector<double> xs(n), vs(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = domain_.lo + span * static_cast<double>(i) / (n - 1);
        vs[i] = (*this)(xs[i]);
    }
    double best = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            best = std::max(best, std::abs(vs[i] - vs[j]) / std::pow(xs[j] - xs[i], s));
    return best;
}

double PiecewisePoly::holder_seminorm_upper(double s) const {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("holder exponent must be in (0,1)");
    // |f(x)-f(x')| <= Lip |x-x'| gives quotient <= Lip |x-x'|^(1-s)
    return lipschitz_upper() * std::pow(domain_.length(), 1.0 - s);
}

bool PiecewisePoly::endpoint_derivatives_vanish(int upto) const {
    const int d = degree();
    if (upto > d) return false;
    for (int j = 0; j <= upto; ++j) {
        if (coef_.front()[j] != 0.0) return false;
        if (coef_.back()[d - j] != 0.0) return false;
    }
    return true;
}

bool PiecewisePoly::is_ck(int k, double tol) const {
    for (int order = 0; order <= k; ++order) {
        const PiecewisePoly d = derivative(order);
        for (std::size_t i = 0; i + 1 < d.coef_.size(); ++i) {
            const double left = d.coef_[i].back();
            const double right = d.coef_[i + 1].front();
            if (std::abs(left - right) > tol) return false;
        }
    }
    return true;
}

PiecewisePoly PiecewisePoly::combine(double alpha, const PiecewisePoly& f, double beta,
                                     const PiecewisePoly& g) {
    if (f.breaks_ != g.breaks_)
        throw std::invalid_argument("combine requires identical breakpoints");
    auto fc = f.coef_;
    auto gc = g.coef_;
    for (std::size_t i = 0; i < fc.size(); ++i) {
        while (fc[i].size() < gc[i].size()) fc[i] = elevate_once(fc[i]);
        while (gc[i].size() < fc[i].size()) gc[i] = elevate_once(gc[i]);
        for (std::size_t j = 0; j < fc[i].size(); ++j)
            fc[i][j] = alpha * fc[i][j] + beta * gc[i][j];
    }
    return PiecewisePoly(f.domain_, f.breaks_, std::move(fc));
}

}  // namespace fractalfn
