#include "fractalfn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fractalfn/io.hpp"

namespace fractalfn {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

bool is_inf(double p) { return std::isinf(p) && p > 0.0; }

}  // namespace

std::string to_string(SpaceTag tag) {
    switch (tag) {
        case SpaceTag::Lp: return "Lp";
        case SpaceTag::Sup: return "sup";
        case SpaceTag::Holder: return "holder";
        case SpaceTag::Cn: return "Cn";
        case SpaceTag::Sobolev: return "sobolev";
    }
    return "?";
}

std::string ConditionReport::to_text() const {
    std::ostringstream out;
    out << "space = " << to_string(space) << "\n";
    switch (space) {
        case SpaceTag::Lp:
            out << "p = " << (is_inf(p) ? std::string("inf") : format_double(p)) << "\n";
            break;
        case SpaceTag::Holder:
            out << "s = " << format_double(s_exp) << "\n";
            break;
        case SpaceTag::Cn:
            out << "n = " << n << "\n";
            break;
        case SpaceTag::Sobolev:
            out << "m = " << m << "\n";
            out << "p = " << (is_inf(p) ? std::string("inf") : format_double(p)) << "\n";
            break;
        case SpaceTag::Sup:
            break;
    }
    out << "lhs = " << format_double(lhs) << "\n";
    out << "threshold = " << format_double(threshold) << "\n";
    out << "pass = " << (pass ? "true" : "false") << "\n";
    out << "branch = " << branch << "\n";
    for (const auto& line : per_piece) out << line << "\n";
    return out.str();
}

ConditionReport check_Lp(const RBSystem& sys, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
    ConditionReport rep;
    rep.space = SpaceTag::Lp;
    rep.p = p;
    const int n_pieces = sys.partition.N;
    if (is_inf(p)) {
        double lhs = 0.0;
        for (int i = 0; i < n_pieces; ++i) {
            const double si = sys.scale[static_cast<std::size_t>(i)].sup_upper_bound();
            lhs = std::max(lhs, si);
            rep.per_piece.push_back("piece " + std::to_string(i + 1) +
                                    ": S_sup = " + format_double(si));
        }
        rep.lhs = lhs;
        rep.branch = "max ||S_i|| (p = inf)";
    } else {
        double sum = 0.0;
        for (int i = 0; i < n_pieces; ++i) {
            const double ai = sys.partition.lipschitz(i);
            const double si = sys.scale[static_cast<std::size_t>(i)].sup_upper_bound();
            const double term = ai * std::pow(si, p);
            sum += term;
            rep.per_piece.push_back("piece " + std::to_string(i + 1) + ": a = " +
                                    format_double(ai) + ", S_sup = " + format_double(si) +
                                    ", term = " + format_double(term));
        }
        if (p < 1.0) {
            rep.lhs = sum;
            rep.branch = "sum a_i ||S_i||^p (p in (0,1))";
        } else {
            rep.lhs = std::pow(sum, 1.0 / p);
            rep.branch = "(sum a_i ||S_i||^p)^(1/p) (p in [1,inf))";
        }
    }
    rep.pass = rep.lhs < rep.threshold;
    return rep;
}

ConditionReport check_holder(const RBSystem& sys, double s_exp) {
    if (!(s_exp > 0.0 && s_exp < 1.0))
        throw std::invalid_argument("Holder exponent must be in (0,1)");
    if (!sys.partition.is_binary())
        throw std::invalid_argument("Holder criterion defined for binary partitions");
    ConditionReport rep;
    rep.space = SpaceTag::Holder;
    rep.s_exp = s_exp;
    double smax = 0.0;
    for (int i = 0; i < sys.partition.N; ++i) {
        const double si = sys.scale[static_cast<std::size_t>(i)].sup_upper_bound();
        smax = std::max(smax, si);
        rep.per_piece.push_back("piece " + std::to_string(i + 1) +
                                ": S_sup = " + format_double(si));
    }
    rep.lhs = std::pow(2.0, s_exp) * smax;
    rep.branch = "2^s max ||S_i||";
    rep.pass = rep.lhs < rep.threshold;
    return rep;
}

ConditionReport check_Cn(const RBSystem& sys, int n) {
    if (n < 0) throw std::invalid_argument("n must be nonnegative");
    if (!sys.partition.is_binary())
        throw std::invalid_argument("C^n criterion defined for binary partitions");
    for (int i = 0; i < sys.partition.N; ++i)
        if (!sys.scale[static_cast<std::size_t>(i)].is_ck(n))
            throw std::invalid_argument("insufficient smoothness of the scale functions");

    ConditionReport rep;
    rep.space = SpaceTag::Cn;
    rep.n = n;
    double worst = 0.0;
    for (int i = 0; i < sys.partition.N; ++i) {
        std::vector<double> dsup(static_cast<std::size_t>(n) + 1);
        for (int l = 0; l <= n; ++l)
            dsup[static_cast<std::size_t>(l)] =
                sys.scale[static_cast<std::size_t>(i)].derivative(l).sup_upper_bound();
        double inner = 0.0;
        for (int k = 0; k <= n; ++k) {
            double sum = 0.0;
            for (int l = 0; l <= k; ++l)
                sum += binom(n - k + l, l) * dsup[static_cast<std::size_t>(l)];
            inner = std::max(inner, sum);
        }
        worst = std::max(worst, inner);
        rep.per_piece.push_back("piece " + std::to_string(i + 1) +
                                ": max_k sum = " + format_double(inner));
    }
    rep.lhs = std::ldexp(worst, n);  // 2^n factor
    rep.branch = "2^n max_i max_k sum_l C(n-k+l,l) ||D^l S_i||";
    rep.pass = rep.lhs < rep.threshold;
    return rep;
}

ConditionReport check_sobolev(const PartitionSpec& partition, std::span<const double> s_values,
                              int m, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("Sobolev criterion requires p >= 1");
    if (m < 0) throw std::invalid_argument("m must be nonnegative");
    if (s_values.size() != static_cast<std::size_t>(partition.N))
        throw std::invalid_argument("need one scaling value per piece");

    ConditionReport rep;
    rep.space = SpaceTag::Sobolev;
    rep.m = m;
    rep.p = p;
    double best = 0.0;
    int best_k = 0;
    for (int k = 0; k <= m; ++k) {
        double sum = 0.0;
        for (int i = 0; i < partition.N; ++i) {
            const double ai = partition.lipschitz(i);
            const double si = std::abs(s_values[static_cast<std::size_t>(i)]);
            sum += is_inf(p) ? si / std::pow(ai, k) : std::pow(si, p) * std::pow(ai, 1.0 - k * p);
        }
        rep.per_piece.push_back("k = " + std::to_string(k) + ": sum = " + format_double(sum));
        if (sum > best || k == 0) {
            best = sum;
            best_k = k;
        }
    }
    rep.per_piece.push_back("max at k = " + std::to_string(best_k));
    rep.lhs = is_inf(p) ? best : std::pow(best, 1.0 / p);
    rep.branch = is_inf(p) ? "max_k sum |s_i| / a_i^k (p = inf)"
                           : "(max_k sum |s_i|^p a_i^(1-kp))^(1/p)";
    rep.pass = rep.lhs < rep.threshold;
    return rep;
}

namespace {

double trapezoid(const std::vector<double>& v, double h) {
    double sum = 0.5 * (v.front() + v.back());
    for (std::size_t j = 1; j + 1 < v.size(); ++j) sum += v[j];
    return sum * h;
}

// second-order finite-difference derivative on the full grid: central inside,
// one-sided at the two boundary points
std::vector<double> diff(const std::vector<double>& v, double h) {
    const std::size_t n = v.size();
    if (n < 3) throw std::invalid_argument("grid too coarse for finite differences");
    std::vector<double> d(n);
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (v[j + 1] - v[j - 1]) / (2.0 * h);
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    return d;
}

double lp_of(const std::vector<double>& v, double h, double p) {
    if (is_inf(p)) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }
    std::vector<double> w(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) w[j] = std::pow(std::abs(v[j]), p);
    return std::pow(trapezoid(w, h), 1.0 / p);
}

double holder_pairs(const SampledFunction& f, double s) {
    const std::size_t n = f.values.size();
    double best = 0.0;
    // adjacent pairs at full resolution
    for (std::size_t i = 0; i + 1 < n; ++i)
        best = std::max(best, std::abs(f.values[i + 1] - f.values[i]) / std::pow(f.spacing(), s));
    std::size_t stride = 1;
    if (n > 10000) stride = (n + 8191) / 8192;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; i += stride) idx.push_back(i);
    if (idx.back() != n - 1) idx.push_back(n - 1);
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
            const double dx = f.x(static_cast<int>(idx[b])) - f.x(static_cast<int>(idx[a]));
            best = std::max(best,
                            std::abs(f.values[idx[b]] - f.values[idx[a]]) / std::pow(dx, s));
        }
    return best;
}

}  // namespace

double estimate_norm(const SampledFunction& f, SpaceTag space, const NormParams& params) {
    const double h = f.spacing();
    switch (space) {
        case SpaceTag::Sup:
            return f.sup_abs();
        case SpaceTag::Lp:
            if (!(params.p > 0.0)) throw std::invalid_argument("p must be positive");
            return lp_of(f.values, h, params.p);
        case SpaceTag::Holder:
            if (!(params.s > 0.0 && params.s < 1.0))
                throw std::invalid_argument("Holder exponent must be in (0,1)");
            return holder_pairs(f, params.s);
        case SpaceTag::Cn: {
            double sum = 0.0;
            std::vector<double> v = f.values;
            for (int k = 0; k <= params.n; ++k) {
                sum += lp_of(v, h, std::numeric_limits<double>::infinity());
                if (k < params.n) v = diff(v, h);
            }
            return sum;
        }
        case SpaceTag::Sobolev: {
            if (!(params.p >= 1.0)) throw std::invalid_argument("Sobolev estimate requires p >= 1");
            std::vector<double> v = f.values;
            if (is_inf(params.p)) {
                double best = 0.0;
                for (int k = 0; k <= params.m; ++k) {
                    best = std::max(best, lp_of(v, h, params.p));
                    if (k < params.m) v = diff(v, h);
                }
                return best;
            }
            double sum = 0.0;
            for (int k = 0; k <= params.m; ++k) {
                sum += std::pow(lp_of(v, h, params.p), params.p);
                if (k < params.m) v = diff(v, h);
            }
            return std::pow(sum, 1.0 / params.p);
        }
    }
    throw std::invalid_argument("unknown norm tag");
}

double holder_bound(const RBSystem& sys, double s_exp) {
    const ConditionReport rep = check_holder(sys, s_exp);
    if (!rep.pass) throw std::runtime_error("bound diverges");
    double lambda_sum = 0.0;
    for (const auto& l : sys.lambda) lambda_sum += l.holder_seminorm_upper(s_exp);
    double smax = 0.0;
    for (const auto& s : sys.scale) smax = std::max(smax, s.sup_upper_bound());
    const double two_s = std::pow(2.0, s_exp);
    return two_s * lambda_sum / (1.0 - two_s * smax);
}

}  // namespace fractalfn
