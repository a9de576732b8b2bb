#include "fractalfn/rb.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fractalfn {

namespace {

constexpr double kStructTol = 1e-12;

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

PartitionSpec PartitionSpec::general(std::vector<double> knots, std::vector<Interval> subsets) {
    PartitionSpec p;
    p.N = static_cast<int>(subsets.size());
    if (knots.size() != subsets.size() + 1)
        throw std::invalid_argument("need one more knot than subsets");
    p.base = Interval::closed(knots.front(), knots.back());
    p.knots = std::move(knots);
    p.subsets = std::move(subsets);
    p.maps.reserve(p.subsets.size());
    for (int i = 0; i < p.N; ++i)
        p.maps.push_back(AffineMap1D::mapping(p.subsets[static_cast<std::size_t>(i)],
                                              Interval::closed(p.knots[static_cast<std::size_t>(i)],
                                                               p.knots[static_cast<std::size_t>(i) + 1])));
    p.validate();
    return p;
}

void PartitionSpec::validate() const {
    if (N < 1 || knots.size() != static_cast<std::size_t>(N) + 1 ||
        subsets.size() != static_cast<std::size_t>(N) || maps.size() != static_cast<std::size_t>(N))
        throw std::invalid_argument("partition piece counts do not match");
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        if (!(knots[i] < knots[i + 1])) throw std::invalid_argument("knots must be ascending");
    if (std::abs(knots.front() - base.lo) > kStructTol ||
        std::abs(knots.back() - base.hi) > kStructTol)
        throw std::invalid_argument("knots must span the base interval");
    for (int i = 0; i < N; ++i) {
        const auto& sub = subsets[static_cast<std::size_t>(i)];
        if (sub.lo < base.lo - kStructTol || sub.hi > base.hi + kStructTol)
            throw std::invalid_argument("subset outside base interval");
        const auto& u = maps[static_cast<std::size_t>(i)];
        const double a = u(sub.lo), b = u(sub.hi);
        const double klo = knots[static_cast<std::size_t>(i)], khi = knots[static_cast<std::size_t>(i) + 1];
        const bool increasing = std::abs(a - klo) <= 1e-10 && std::abs(b - khi) <= 1e-10;
        const bool decreasing = std::abs(a - khi) <= 1e-10 && std::abs(b - klo) <= 1e-10;
        if (!increasing && !decreasing)
            throw std::invalid_argument("map does not send its subset onto its knot interval");
    }
}

double PartitionSpec::max_lipschitz() const {
    double a = 0.0;
    for (const auto& m : maps) a = std::max(a, m.lipschitz());
    return a;
}

int PartitionSpec::piece_index(double x) const {
    const double snap = 1e-9 * std::max(1.0, base.length());
    if (x < base.lo - snap || x > base.hi + snap)
        throw std::domain_error("point outside the base interval");
    auto it = std::upper_bound(knots.begin(), knots.end(), x);
    const auto i = static_cast<long>(it - knots.begin()) - 1;
    return static_cast<int>(std::clamp<long>(i, 0, N - 1));
}

bool PartitionSpec::is_binary(double tol) const {
    if (N < 2 || N % 2 != 0) return false;
    if (std::abs(base.lo) > tol || std::abs(base.hi - 1.0) > tol) return false;
    for (int i = 0; i <= N; ++i)
        if (std::abs(knots[static_cast<std::size_t>(i)] - static_cast<double>(i) / N) > tol)
            return false;
    for (int j = 1; j <= N / 2; ++j) {
        const double lo = 2.0 * (j - 1) / N, hi = 2.0 * j / N;
        for (int i : {2 * j - 2, 2 * j - 1}) {
            const auto& sub = subsets[static_cast<std::size_t>(i)];
            if (std::abs(sub.lo - lo) > tol || std::abs(sub.hi - hi) > tol) return false;
            const auto& u = maps[static_cast<std::size_t>(i)];
            if (std::abs(u.slope - 0.5) > tol) return false;
            const double want = (i % 2 == 0) ? static_cast<double>(j - 1) / N
                                             : static_cast<double>(j) / N;
            if (std::abs(u.intercept - want) > tol) return false;
        }
    }
    return true;
}

PartitionSpec make_binary_partition(int N) {
    if (N < 2 || N % 2 != 0) throw std::invalid_argument("binary partition needs even N >= 2");
    PartitionSpec p;
    p.N = N;
    p.base = Interval::closed(0.0, 1.0);
    p.knots.resize(static_cast<std::size_t>(N) + 1);
    for (int i = 0; i <= N; ++i) p.knots[static_cast<std::size_t>(i)] = static_cast<double>(i) / N;
    p.subsets.reserve(static_cast<std::size_t>(N));
    p.maps.reserve(static_cast<std::size_t>(N));
    for (int j = 1; j <= N / 2; ++j) {
        const Interval sub(2.0 * (j - 1) / N, 2.0 * j / N);
        p.subsets.push_back(sub);
        p.subsets.push_back(sub);
        p.maps.push_back({0.5, static_cast<double>(j - 1) / N});
        p.maps.push_back({0.5, static_cast<double>(j) / N});
    }
    p.validate();
    return p;
}

RBSystem::RBSystem(PartitionSpec part, std::vector<PiecewisePoly> lam,
                   std::vector<PiecewisePoly> sc)
    : partition(std::move(part)), lambda(std::move(lam)), scale(std::move(sc)) {
    partition.validate();
    if (lambda.size() != static_cast<std::size_t>(partition.N) ||
        scale.size() != static_cast<std::size_t>(partition.N))
        throw std::invalid_argument("need one lambda and one scale function per piece");
    for (int i = 0; i < partition.N; ++i) {
        const auto& sub = partition.subsets[static_cast<std::size_t>(i)];
        for (const auto* f : {&lambda[static_cast<std::size_t>(i)], &scale[static_cast<std::size_t>(i)]}) {
            if (std::abs(f->domain().lo - sub.lo) > kStructTol ||
                std::abs(f->domain().hi - sub.hi) > kStructTol)
                throw std::invalid_argument("coefficient function domain does not match its subset");
        }
    }
    for (const auto& s : scale) scale_sup_ = std::max(scale_sup_, s.sup_upper_bound());
    for (const auto& l : lambda) lambda_sup_ = std::max(lambda_sup_, l.sup_upper_bound());
}

double RBSystem::fixed_point_bound() const {
    if (scale_sup_ >= 1.0) throw std::runtime_error("operator not sup-norm contractive");
    return lambda_sup_ / (1.0 - scale_sup_);
}

SampledFunction SampledFunction::zeros(double lo, double hi, int intervals) {
    if (intervals < 1) throw std::invalid_argument("grid needs at least one interval");
    return {lo, hi, std::vector<double>(static_cast<std::size_t>(intervals) + 1, 0.0)};
}

double SampledFunction::value_at(double xq) const {
    const double h = spacing();
    const double snap = 1e-9;
    double pos = (xq - lo) / h;
    const int m = intervals();
    if (pos < -snap || pos > m + snap) throw std::domain_error("read outside sampled range");
    pos = std::clamp(pos, 0.0, static_cast<double>(m));
    int j = static_cast<int>(std::floor(pos));
    if (j == m) j = m - 1;
    const double frac = pos - j;
    if (frac <= snap) return values[static_cast<std::size_t>(j)];
    if (frac >= 1.0 - snap) return values[static_cast<std::size_t>(j) + 1];
    return (1.0 - frac) * values[static_cast<std::size_t>(j)] +
           frac * values[static_cast<std::size_t>(j) + 1];
}

double SampledFunction::sup_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double SampledFunction::sup_diff(const SampledFunction& other) const {
    if (values.size() != other.values.size())
        throw std::invalid_argument("grids differ");
    double m = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j)
        m = std::max(m, std::abs(values[j] - other.values[j]));
    return m;
}

InterpolationData InterpolationData::simple(std::vector<double> x, std::vector<double> y) {
    InterpolationData d;
    d.sites = std::move(x);
    d.values.reserve(y.size());
    for (double v : y) d.values.push_back({v});
    d.validate();
    return d;
}

void InterpolationData::validate() const {
    if (sites.size() != values.size() || sites.empty())
        throw std::invalid_argument("interpolation data sites and values do not match");
    for (std::size_t j = 0; j + 1 < sites.size(); ++j)
        if (!(sites[j] < sites[j + 1]))
            throw std::invalid_argument("interpolation sites must be ascending");
    const std::size_t arity = values.front().size();
    if (arity == 0) throw std::invalid_argument("interpolation values must be nonempty");
    for (const auto& v : values)
        if (v.size() != arity)
            throw std::invalid_argument("interpolation values must have uniform arity");
}

SampledFunction apply_rb(const RBSystem& sys, const SampledFunction& f) {
    const auto& base = sys.partition.base;
    if (std::abs(f.lo - base.lo) > kStructTol || std::abs(f.hi - base.hi) > kStructTol)
        throw std::invalid_argument("sample grid does not cover the base interval");
    SampledFunction out = f;
    const int m = f.intervals();
    for (int j = 0; j <= m; ++j) {
        const double x = f.x(j);
        const int i = sys.partition.piece_index(x);
        const auto& u = sys.partition.maps[static_cast<std::size_t>(i)];
        const auto& sub = sys.partition.subsets[static_cast<std::size_t>(i)];
        double y = (x - u.intercept) / u.slope;
        y = std::clamp(y, sub.lo, sub.hi);
        out.values[static_cast<std::size_t>(j)] =
            sys.lambda[static_cast<std::size_t>(i)](y) +
            sys.scale[static_cast<std::size_t>(i)](y) * f.value_at(y);
    }
    return out;
}

SolveResult solve_fixed_point(const RBSystem& sys, SampledFunction f0, SolveOptions opts) {
    if (sys.scale_sup() >= 1.0 && !opts.force)
        throw std::runtime_error("operator not sup-norm contractive");
    std::vector<double> residuals;
    residuals.reserve(32);
    for (int k = 0; k < opts.max_iter; ++k) {
        SampledFunction next = apply_rb(sys, f0);
        const double r = next.sup_diff(f0);
        residuals.push_back(r);
        f0 = std::move(next);
        if (r <= opts.tol) return {std::move(f0), std::move(residuals)};
    }
    std::ostringstream msg;
    msg << "fixed-point iteration did not converge in " << opts.max_iter
        << " iterations (last residual " << residuals.back() << ")";
    throw SolveError(msg.str(), std::move(residuals));
}

SampledFunction initial_iterate(const InterpolationData& data, double lo, double hi,
                                int intervals) {
    SampledFunction f = SampledFunction::zeros(lo, hi, intervals);
    if (data.sites.empty()) return f;
    data.validate();
    for (int j = 0; j <= intervals; ++j) {
        const double x = f.x(j);
        auto it = std::upper_bound(data.sites.begin(), data.sites.end(), x);
        if (it == data.sites.begin()) {
            f.values[static_cast<std::size_t>(j)] = data.y(0);
        } else if (it == data.sites.end()) {
            f.values[static_cast<std::size_t>(j)] = data.y(data.size() - 1);
        } else {
            const auto k = static_cast<std::size_t>(it - data.sites.begin());
            const double t = (x - data.sites[k - 1]) / (data.sites[k] - data.sites[k - 1]);
            f.values[static_cast<std::size_t>(j)] =
                (1.0 - t) * data.y(k - 1) + t * data.y(k);
        }
    }
    return f;
}

RecursiveEval eval_recursive(const RBSystem& sys, double x, int depth) {
    if (depth < 0) throw std::invalid_argument("depth must be nonnegative");
    const double s = sys.scale_sup();
    const double bound = sys.fixed_point_bound();  // throws when s >= 1
    double acc = 0.0, mult = 1.0, y = x;
    for (int k = 0; k < depth; ++k) {
        const int i = sys.partition.piece_index(y);
        const auto& u = sys.partition.maps[static_cast<std::size_t>(i)];
        const auto& sub = sys.partition.subsets[static_cast<std::size_t>(i)];
        y = std::clamp((y - u.intercept) / u.slope, sub.lo, sub.hi);
        acc += mult * sys.lambda[static_cast<std::size_t>(i)](y);
        mult *= sys.scale[static_cast<std::size_t>(i)](y);
    }
    return {acc, std::pow(s, depth) * bound};
}

namespace {

void require_binary_sites(const PartitionSpec& p, const InterpolationData& data) {
    if (!p.is_binary()) throw std::invalid_argument("construction requires a binary partition");
    data.validate();
    if (data.size() != static_cast<std::size_t>(p.N / 2) + 1)
        throw std::invalid_argument("need one data site per even knot");
    for (std::size_t j = 0; j < data.size(); ++j)
        if (std::abs(data.sites[j] - p.knots[2 * j]) > 1e-9)
            throw std::invalid_argument("data sites must coincide with the even knots");
}

}  // namespace

PropertyJReport check_property_J(const RBSystem& sys, const InterpolationData& data, double tol) {
    require_binary_sites(sys.partition, data);
    const int N = sys.partition.N;
    double worst = 0.0;
    for (int j = 1; j <= N / 2; ++j) {
        const auto odd = static_cast<std::size_t>(2 * j - 2);   // lambda_{2j-1}
        const auto even = static_cast<std::size_t>(2 * j - 1);  // lambda_{2j}
        const double a = sys.partition.knots[static_cast<std::size_t>(2 * (j - 1))];
        const double b = sys.partition.knots[static_cast<std::size_t>(2 * j)];
        const double yl = data.y(static_cast<std::size_t>(j - 1));
        const double yr = data.y(static_cast<std::size_t>(j));
        const double r1 = sys.lambda[odd](a) + (sys.scale[odd](a) - 1.0) * yl;
        const double r2 = sys.lambda[even](b) + (sys.scale[even](b) - 1.0) * yr;
        const double r3 = sys.lambda[even](a) + sys.scale[even](a) * yl -
                          sys.lambda[odd](b) - sys.scale[odd](b) * yr;
        worst = std::max({worst, std::abs(r1), std::abs(r2), std::abs(r3)});
    }
    return {worst, worst <= tol};
}

RBSystem build_affine_fif(const InterpolationData& data, std::span<const double> s_values,
                          std::span<const double> midpoints) {
    data.validate();
    if (data.size() < 2) throw std::invalid_argument("need at least two data points");
    const int N = 2 * (static_cast<int>(data.size()) - 1);
    if (static_cast<int>(s_values.size()) != N)
        throw std::invalid_argument("need one scaling value per piece");
    for (int i = 0; i < N; ++i)
        if (!(std::abs(s_values[static_cast<std::size_t>(i)]) < 1.0)) {
            std::ostringstream msg;
            msg << "scaling " << (i + 1) << " has magnitude >= 1";
            throw std::invalid_argument(msg.str());
        }
    if (!midpoints.empty() && static_cast<int>(midpoints.size()) != N / 2)
        throw std::invalid_argument("need one midpoint value per odd knot");

    PartitionSpec part = make_binary_partition(N);
    require_binary_sites(part, data);

    std::vector<PiecewisePoly> lambda, scale;
    lambda.reserve(static_cast<std::size_t>(N));
    scale.reserve(static_cast<std::size_t>(N));
    for (int j = 1; j <= N / 2; ++j) {
        const Interval sub = part.subsets[static_cast<std::size_t>(2 * j - 2)];
        const double yl = data.y(static_cast<std::size_t>(j - 1));
        const double yr = data.y(static_cast<std::size_t>(j));
        const double m = midpoints.empty() ? 0.5 * (yl + yr)
                                           : midpoints[static_cast<std::size_t>(j - 1)];
        const double s_odd = s_values[static_cast<std::size_t>(2 * j - 2)];
        const double s_even = s_values[static_cast<std::size_t>(2 * j - 1)];
        lambda.push_back(PiecewisePoly::linear(sub, (1.0 - s_odd) * yl, m - s_odd * yr));
        lambda.push_back(PiecewisePoly::linear(sub, m - s_even * yl, (1.0 - s_even) * yr));
        scale.push_back(PiecewisePoly::constant(sub, s_odd));
        scale.push_back(PiecewisePoly::constant(sub, s_even));
    }
    return RBSystem(std::move(part), std::move(lambda), std::move(scale));
}

RBSystem build_property_S_system(std::vector<double> knots, std::vector<Interval> subsets,
                                 const InterpolationData& data,
                                 std::vector<PiecewisePoly> scale,
                                 std::vector<PiecewisePoly> lambda) {
    PartitionSpec part = PartitionSpec::general(std::move(knots), std::move(subsets));
    data.validate();
    if (data.size() != static_cast<std::size_t>(part.N) + 1)
        throw std::invalid_argument("need one data site per knot");
    for (std::size_t j = 0; j < data.size(); ++j)
        if (std::abs(data.sites[j] - part.knots[j]) > 1e-9)
            throw std::invalid_argument("data sites must coincide with the knots");
    if (scale.size() != static_cast<std::size_t>(part.N) ||
        lambda.size() != static_cast<std::size_t>(part.N))
        throw std::invalid_argument("need one lambda and one scale function per piece");

    std::ostringstream offenders;
    for (int i = 0; i < part.N; ++i)
        if (!scale[static_cast<std::size_t>(i)].endpoint_derivatives_vanish(0))
            offenders << " S_" << (i + 1);
    if (!offenders.str().empty())
        throw std::invalid_argument("scale functions must vanish at subset endpoints:" +
                                    offenders.str());

    std::ostringstream bad;
    const auto check = [&](double got, double want, int i, const char* side) {
        if (std::abs(got - want) > kStructTol) bad << " lambda_" << i << "(" << side << ")";
    };
    check(lambda.front().value_at_lo(), data.y(0), 1, "lo");
    check(lambda.back().value_at_hi(), data.y(data.size() - 1), part.N, "hi");
    for (int i = 1; i < part.N; ++i) {
        check(lambda[static_cast<std::size_t>(i) - 1].value_at_hi(), data.y(static_cast<std::size_t>(i)), i, "hi");
        check(lambda[static_cast<std::size_t>(i)].value_at_lo(), data.y(static_cast<std::size_t>(i)), i + 1, "lo");
    }
    if (!bad.str().empty())
        throw std::invalid_argument("lambda endpoint values do not match the data:" + bad.str());

    RBSystem sys(std::move(part), std::move(lambda), std::move(scale));
    sys.property_s_verified = true;
    return sys;
}

CnReport check_Cn_conditions(const RBSystem& sys, const InterpolationData& data, int n,
                             double tol) {
    require_binary_sites(sys.partition, data);
    if (n < 0) throw std::invalid_argument("n must be nonnegative");
    if (data.derivative_order() < n)
        throw std::invalid_argument("data must carry derivatives up to order n");
    for (int i = 0; i < sys.partition.N; ++i) {
        if (!sys.lambda[static_cast<std::size_t>(i)].is_ck(n) ||
            !sys.scale[static_cast<std::size_t>(i)].is_ck(n))
            throw std::invalid_argument("insufficient smoothness of the coefficient functions");
    }

    const int N = sys.partition.N;
    std::vector<std::vector<PiecewisePoly>> dl, ds;
    for (int i = 0; i < N; ++i) {
        std::vector<PiecewisePoly> li, si;
        for (int k = 0; k <= n; ++k) {
            li.push_back(sys.lambda[static_cast<std::size_t>(i)].derivative(k));
            si.push_back(sys.scale[static_cast<std::size_t>(i)].derivative(k));
        }
        dl.push_back(std::move(li));
        ds.push_back(std::move(si));
    }

    // D^k(Phi f) at a point whose preimage is the even knot with data row j
    const auto dk_phi = [&](int piece, int k, double preimage, std::size_t j) {
        double sum = dl[static_cast<std::size_t>(piece)][static_cast<std::size_t>(k)](preimage);
        for (int l = 0; l <= k; ++l)
            sum += binom(k, l) *
                   ds[static_cast<std::size_t>(piece)][static_cast<std::size_t>(l)](preimage) *
                   data.y(j, k - l);
        return std::ldexp(sum, k);  // 2^k from the chain rule through u_i^{-1}
    };

    double worst = 0.0;
    for (int j = 1; j <= N / 2; ++j) {
        const int odd = 2 * j - 2, even = 2 * j - 1;
        const double a = sys.partition.knots[static_cast<std::size_t>(2 * (j - 1))];
        const double b = sys.partition.knots[static_cast<std::size_t>(2 * j)];
        for (int k = 0; k <= n; ++k) {
            const double left = dk_phi(odd, k, a, static_cast<std::size_t>(j - 1)) -
                                data.y(static_cast<std::size_t>(j - 1), k);
            const double right = dk_phi(even, k, b, static_cast<std::size_t>(j)) -
                                 data.y(static_cast<std::size_t>(j), k);
            const double join = dk_phi(odd, k, b, static_cast<std::size_t>(j)) -
                                dk_phi(even, k, a, static_cast<std::size_t>(j - 1));
            worst = std::max({worst, std::abs(left), std::abs(right), std::abs(join)});
        }
    }
    return {n, worst, worst <= tol};
}

double verify_self_referential(const RBSystem& sys, const SampledFunction& f) {
    return f.sup_diff(apply_rb(sys, f));
}

std::vector<SampledFunction> recover_lambda(const PartitionSpec& partition,
                                            const std::vector<PiecewisePoly>& scale,
                                            const SampledFunction& f) {
    if (scale.size() != static_cast<std::size_t>(partition.N))
        throw std::invalid_argument("need one scale function per piece");
    const double h = f.spacing();
    std::vector<SampledFunction> out;
    out.reserve(scale.size());
    for (int i = 0; i < partition.N; ++i) {
        const double klo = partition.knots[static_cast<std::size_t>(i)];
        const double khi = partition.knots[static_cast<std::size_t>(i) + 1];
        const int jlo = static_cast<int>(std::ceil((klo - f.lo) / h - 1e-9));
        // the image is half-open except for the last piece: a grid point on an
        // interior knot carries the next piece's equation
        const int jhi = i + 1 == partition.N
                            ? static_cast<int>(std::floor((khi - f.lo) / h + 1e-9))
                            : static_cast<int>(std::ceil((khi - f.lo) / h - 1e-9)) - 1;
        if (jhi - jlo < 1) throw std::runtime_error("grid too coarse for a partition piece");
        const auto& u = partition.maps[static_cast<std::size_t>(i)];
        const auto& sub = partition.subsets[static_cast<std::size_t>(i)];
        std::vector<std::pair<double, double>> samples;
        samples.reserve(static_cast<std::size_t>(jhi - jlo) + 1);
        for (int j = jlo; j <= jhi; ++j) {
            const double img = f.x(j);
            const double x = std::clamp((img - u.intercept) / u.slope, sub.lo, sub.hi);
            samples.emplace_back(x, f.values[static_cast<std::size_t>(j)] -
                                        scale[static_cast<std::size_t>(i)](x) * f.value_at(x));
        }
        std::sort(samples.begin(), samples.end());
        SampledFunction piece;
        piece.lo = samples.front().first;
        piece.hi = samples.back().first;
        piece.values.reserve(samples.size());
        for (const auto& [x, v] : samples) piece.values.push_back(v);
        out.push_back(std::move(piece));
    }
    return out;
}

}  // namespace fractalfn
