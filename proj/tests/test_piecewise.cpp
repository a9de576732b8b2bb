#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fractalfn/piecewise.hpp"

using namespace fractalfn;

namespace {

const Interval unit = Interval::closed(0.0, 1.0);

double horner(const std::vector<double>& monomial, double x) {
    double v = 0.0;
    for (auto it = monomial.rbegin(); it != monomial.rend(); ++it) v = v * x + *it;
    return v;
}

}  // namespace

TEST_CASE("evaluation of simple pieces") {
    CHECK(PiecewisePoly::constant(unit, 3.5)(0.7) == 3.5);
    const auto ident = PiecewisePoly::linear(unit, 0.0, 1.0);
    CHECK(ident(0.25) == doctest::Approx(0.25).epsilon(1e-15));

    // two pieces {x on [0,1/2), 1-x on [1/2,1]}: breakpoint uses the right piece
    const auto tent = PiecewisePoly::from_monomial_pieces(unit, {0.0, 0.5, 1.0},
                                                          {{0.0, 1.0}, {1.0, -1.0}});
    CHECK(tent(0.5) == doctest::Approx(0.5));
    CHECK(tent(0.25) == doctest::Approx(0.25));
    CHECK(tent(0.75) == doctest::Approx(0.25));
    CHECK(tent(1.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(tent(1.5), std::domain_error);
}

TEST_CASE("evaluation reproduces monomials exactly") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> mono(4);
        for (auto& c : mono) c = coeff(rng);
        const auto poly = PiecewisePoly::from_monomial(Interval::closed(0.2, 0.9), mono);
        for (double x : {0.2, 0.35, 0.5, 0.77, 0.9})
            CHECK(poly(x) == doctest::Approx(horner(mono, x)).epsilon(1e-13));
    }
}

TEST_CASE("derivatives") {
    CHECK(PiecewisePoly::constant(unit, 4.0).derivative()(0.3) == 0.0);
    const auto sq = PiecewisePoly::from_monomial(unit, std::vector<double>{0.0, 0.0, 1.0});
    const auto d = sq.derivative();
    CHECK(d(0.25) == doctest::Approx(0.5));
    CHECK(d(1.0) == doctest::Approx(2.0));
    CHECK(sq.derivative(2)(0.5) == doctest::Approx(2.0));
    CHECK(sq.derivative(3)(0.5) == doctest::Approx(0.0));
}

TEST_CASE("derivative undoes antiderivative") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::vector<double> mono(5);
    for (auto& c : mono) c = coeff(rng);
    const auto f = PiecewisePoly::from_monomial(unit, mono);
    const auto rt = f.antiderivative().derivative();
    for (double x : {0.0, 0.1, 0.33, 0.5, 0.99, 1.0})
        CHECK(rt(x) == doctest::Approx(f(x)).epsilon(1e-12));
}

TEST_CASE("sup norm bracket") {
    const auto [clo, chi] = PiecewisePoly::constant(unit, -2.5).sup_norm_bracket();
    CHECK(clo == 2.5);
    CHECK(chi == 2.5);

    const auto ident = PiecewisePoly::linear(unit, 0.0, 1.0);
    const auto [ilo, ihi] = ident.sup_norm_bracket();
    CHECK(ilo <= 1.0);
    CHECK(ihi >= 1.0);
    CHECK(ihi - ilo <= 1e-6);

    // x(1 - x): true sup 0.25 inside the bracket
    const auto bump = PiecewisePoly::from_monomial(unit, std::vector<double>{0.0, 1.0, -1.0});
    const auto [blo, bhi] = bump.sup_norm_bracket();
    CHECK(blo <= 0.25);
    CHECK(bhi >= 0.25);
    CHECK(bhi - blo <= 1e-3);
}

TEST_CASE("bracket upper bound survives 10x denser sampling") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> coeff(-1.5, 1.5);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> mono(5);
        for (auto& c : mono) c = coeff(rng);
        const auto f = PiecewisePoly::from_monomial(unit, mono);
        const double upper = f.sup_norm_bracket().second;
        for (int j = 0; j <= 40960; ++j)
            CHECK(std::abs(f(j / 40960.0)) <= upper + 1e-12);
    }
}

TEST_CASE("holder seminorm estimate") {
    CHECK(PiecewisePoly::constant(unit, 7.0).holder_seminorm_estimate(0.5, 0.125) == 0.0);

    const auto ident = PiecewisePoly::linear(unit, 0.0, 1.0);
    CHECK(ident.holder_seminorm_estimate(0.5, 1.0 / 1024) >= 1.0);

    // all-pairs oracle at h = 2^-4
    const auto bump = PiecewisePoly::from_monomial(unit, std::vector<double>{0.1, 1.0, -1.3});
    const double h = 1.0 / 16;
    double oracle = 0.0;
    for (int i = 0; i <= 16; ++i)
        for (int j = i + 1; j <= 16; ++j)
            oracle = std::max(oracle, std::abs(bump(j * h) - bump(i * h)) /
                                          std::pow((j - i) * h, 0.5));
    CHECK(bump.holder_seminorm_estimate(0.5, h) == doctest::Approx(oracle).epsilon(1e-13));

    // certified upper bound dominates the grid estimate
    CHECK(bump.holder_seminorm_estimate(0.5, 1.0 / 256) <= bump.holder_seminorm_upper(0.5));
}

TEST_CASE("bspline construction") {
    CHECK_THROWS_AS(PiecewisePoly::bspline(2, unit, 1.0), std::invalid_argument);

    for (int order : {3, 4, 5, 6}) {
        const auto b = PiecewisePoly::bspline(order, unit, 0.5);
        CHECK(b(0.0) == 0.0);
        CHECK(b(1.0) == 0.0);
        // derivatives up to order-2 vanish at both endpoints, at the
        // coefficient level
        CHECK(b.endpoint_derivatives_vanish(order - 2));
        CHECK_FALSE(b.endpoint_derivatives_vanish(order - 1));
        for (int k = 0; k <= order - 2; ++k) {
            CHECK(b.derivative(k)(0.0) == 0.0);
            CHECK(b.derivative(k)(1.0) == 0.0);
        }
        // scaled so the sup equals the amplitude
        const auto [lo, hi] = b.sup_norm_bracket();
        CHECK(lo <= 0.5 + 1e-12);
        CHECK(hi >= 0.5 - 1e-12);
        CHECK(b(unit.midpoint()) == doctest::Approx(0.5).epsilon(1e-14));
        // smooth across the interior knots
        CHECK(b.is_ck(order - 2));
    }

    const auto wide = PiecewisePoly::bspline(4, Interval::closed(0.25, 0.75), -0.8);
    CHECK(wide(0.25) == 0.0);
    CHECK(wide(0.5) == doctest::Approx(-0.8));
    CHECK(wide.sup_norm_bracket().second == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("smoothness check catches breaks") {
    const auto step = PiecewisePoly::from_monomial_pieces(unit, {0.0, 0.5, 1.0},
                                                          {{0.0}, {1.0}});
    CHECK_FALSE(step.is_ck(0));
    const auto tent = PiecewisePoly::from_monomial_pieces(unit, {0.0, 0.5, 1.0},
                                                          {{0.0, 1.0}, {1.0, -1.0}});
    CHECK(tent.is_ck(0));
    CHECK_FALSE(tent.is_ck(1));
}

TEST_CASE("linear combination") {
    const auto f = PiecewisePoly::linear(unit, 1.0, 3.0);
    const auto g = PiecewisePoly::from_monomial(unit, std::vector<double>{0.0, 0.0, 1.0});
    const auto c = PiecewisePoly::combine(2.0, f, -1.0, g);
    for (double x : {0.0, 0.3, 0.5, 1.0})
        CHECK(c(x) == doctest::Approx(2.0 * f(x) - g(x)).epsilon(1e-13));
}
