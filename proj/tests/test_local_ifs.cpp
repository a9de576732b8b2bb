#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fractalfn/local_ifs.hpp"
#include "test_util.hpp"

using namespace fractalfn;
using testutil::example_planar_ifs;
using testutil::random_grid_set;
using testutil::uniform;

namespace {

const Rect unit_square{0.0, 1.0, 0.0, 1.0};

GridSet cells_of(Rect bounds, double h, std::initializer_list<Vec2> pts) {
    GridSet s(bounds, h);
    for (const auto& p : pts) s.insert_point(p);
    s.normalize();
    return s;
}

}  // namespace

TEST_CASE("local operator basics") {
    const LocalIFS ifs = example_planar_ifs();
    const double h = 1.0 / 64;

    SUBCASE("set disjoint from every domain maps to the empty set") {
        const GridSet s = cells_of(unit_square, h, {{0.95, 0.05}});
        CHECK(apply_local_operator(ifs, s).is_empty());
    }
    SUBCASE("identity on the full bounds is the identity") {
        LocalIFS ident;
        ident.bounds = unit_square;
        ident.pieces.push_back({unit_square, AffineMap2D::identity()});
        const GridSet s = GridSet::full(unit_square, 1.0 / 8);
        CHECK(apply_local_operator(ident, s) == s);
    }
    SUBCASE("overlapping domains act on the shared points") {
        // (0.4, 0.3) lies in both domains: it is fixed by the second map and
        // sent to (0.2, 0.15) by the first, so the two-point set grows
        const GridSet s = cells_of(unit_square, 0.01, {{0.0, 0.0}, {0.4, 0.3}});
        const GridSet image = apply_local_operator(ifs, s);
        CHECK(image.size() == 3);
        CHECK(image.contains_cell(0, 0));
        CHECK(image.contains_cell(40, 30));  // fixed cell of the second map
        CHECK(image.contains_cell(20, 15));  // cross image under the first map
    }
}

TEST_CASE("local operator is monotone and the iteration nests") {
    std::mt19937 rng(3);
    const LocalIFS ifs = example_planar_ifs();
    const double h = 1.0 / 32;
    for (int trial = 0; trial < 10; ++trial) {
        const GridSet small = random_grid_set(rng, unit_square, h, 0.2);
        GridSet big = union_grid_sets(small, random_grid_set(rng, unit_square, h, 0.2));
        CHECK(apply_local_operator(ifs, small).is_subset_of(apply_local_operator(ifs, big)));
    }
    GridSet k = GridSet::full(unit_square, h);
    for (int n = 0; n < 12; ++n) {
        const GridSet next = apply_local_operator(ifs, k);
        CHECK(next.is_subset_of(k));
        k = next;
    }
}

TEST_CASE("local attractor of the worked example") {
    const LocalIFS ifs = example_planar_ifs();
    const double h = 1.0 / 256;
    const auto res = iterate_local_attractor(ifs, GridSet::full(unit_square, h));
    CHECK(res.converged);
    CHECK_FALSE(res.became_empty);
    CHECK_FALSE(res.attractor.is_empty());

    // the limit is the backward orbit of (0.4, 0.3) under the half-scaling
    // plus the origin; every point sits on the segment y = 0.75 x
    GridSet orbit(unit_square, h);
    orbit.insert_point({0.0, 0.0});
    double px = 0.4, py = 0.3;
    while (px > h / 4) {
        orbit.insert_point({px, py});
        px *= 0.5;
        py *= 0.5;
    }
    orbit.normalize();
    CHECK(hausdorff_distance(res.attractor, orbit) <= 2.0 * h * std::sqrt(2.0));

    // invariance of the computed set under one more application
    const GridSet once_more = apply_local_operator(ifs, res.attractor);
    CHECK(hausdorff_distance(once_more, res.attractor) <= 2.0 * h * std::sqrt(2.0));

    // trace bookkeeping
    REQUIRE_FALSE(res.trace.records.empty());
    for (std::size_t i = 0; i < res.trace.records.size(); ++i)
        CHECK(res.trace.records[i].iteration == static_cast<int>(i) + 1);
}

TEST_CASE("maps into their own domains never empty out") {
    LocalIFS ifs;
    ifs.bounds = unit_square;
    // f_i(X_i) inside X_i for both pieces
    ifs.pieces.push_back({{0.0, 0.5, 0.0, 0.5}, AffineMap2D::scaling(0.5, 0.5, {0.1, 0.1})});
    ifs.pieces.push_back({{0.5, 1.0, 0.5, 1.0}, AffineMap2D::scaling(0.5, 0.5, {0.4, 0.4})});
    const auto res = iterate_local_attractor(ifs, GridSet::full(unit_square, 1.0 / 64));
    CHECK_FALSE(res.became_empty);
    CHECK_FALSE(res.attractor.is_empty());
}

TEST_CASE("single contraction collapses to its fixed cell") {
    LocalIFS ifs;
    ifs.bounds = unit_square;
    ifs.pieces.push_back({unit_square, AffineMap2D::scaling(0.0, 0.0, {0.7, 0.3})});
    const auto res = iterate_local_attractor(ifs, GridSet::full(unit_square, 1.0 / 16));
    CHECK(res.attractor.size() == 1);
    CHECK(res.attractor.contains_cell(11, 4));  // floor(0.7*16), floor(0.3*16)
}

TEST_CASE("iteration reports emptiness instead of failing") {
    LocalIFS ifs;
    ifs.bounds = unit_square;
    // domain in one corner, image in the other: the second iterate dies
    ifs.pieces.push_back(
        {{0.0, 0.25, 0.0, 0.25}, AffineMap2D::scaling(0.1, 0.1, {0.85, 0.85})});
    const auto res = iterate_local_attractor(ifs, GridSet::full(unit_square, 1.0 / 16));
    CHECK(res.became_empty);
    CHECK(res.attractor.is_empty());
}

TEST_CASE("global attractor of the worked example is the segment") {
    const LocalIFS ifs = example_planar_ifs();
    const double h = 1.0 / 256;
    const auto res =
        iterate_global_attractor(ifs.maps(), GridSet::full(unit_square, h));
    CHECK(res.converged);

    GridSet segment(unit_square, h);
    for (int k = 0; k <= 4096; ++k) {
        const double t = 0.4 * k / 4096;
        segment.insert_point({t, 0.75 * t});
    }
    segment.normalize();
    CHECK(hausdorff_distance(res.attractor, segment) <= 2.0 * h * std::sqrt(2.0));
}

TEST_CASE("global iteration rejects expansions") {
    std::vector<AffineMap2D> maps{AffineMap2D::scaling(1.2, 0.5)};
    CHECK_THROWS_WITH_AS(
        iterate_global_attractor(maps, GridSet::full(unit_square, 0.125)),
        "global iteration requires contractions", std::invalid_argument);
}

TEST_CASE("global attractor degenerate cases") {
    const double h = 1.0 / 32;
    SUBCASE("one contraction to a point gives that cell") {
        std::vector<AffineMap2D> maps{AffineMap2D::scaling(0.0, 0.0, {0.51, 0.51})};
        const auto res = iterate_global_attractor(maps, GridSet::full(unit_square, h));
        CHECK(res.attractor.size() == 1);
        CHECK(res.attractor.contains_cell(16, 16));
    }
    SUBCASE("two maps sharing a fixed point give a singleton") {
        std::vector<AffineMap2D> maps{AffineMap2D::scaling(0.0, 0.0, {0.51, 0.51}),
                                      AffineMap2D::scaling(0.0, 0.0, {0.51, 0.51})};
        const auto res = iterate_global_attractor(maps, GridSet::full(unit_square, h));
        CHECK(res.attractor.size() == 1);
    }
    SUBCASE("a mild contraction settles within a cell of its fixed point") {
        std::vector<AffineMap2D> maps{AffineMap2D::scaling(0.5, 0.5, {0.25, 0.25})};
        const auto res =
            iterate_global_attractor(maps, GridSet::full(unit_square, h), {256, h / 2});
        CHECK(res.converged);
        for (const auto& c : res.attractor.cell_centers())
            CHECK(std::hypot(c.x - 0.5, c.y - 0.5) <= h * std::sqrt(2.0));
    }
}

TEST_CASE("local iterates stay inside the global ones") {
    const LocalIFS ifs = example_planar_ifs();
    const double h = 1.0 / 64;
    GridSet local = GridSet::full(unit_square, h);
    GridSet global = local;
    for (int n = 0; n < 10; ++n) {
        local = apply_local_operator(ifs, local);
        GridSet next(global.bounds(), global.resolution());
        for (const auto& piece : ifs.pieces)
            next = union_grid_sets(next, map_grid_set(piece.map, global));
        global = next;
        CHECK(local.is_subset_of(global));
    }
}

TEST_CASE("containment check against the global attractor") {
    const LocalIFS ifs = example_planar_ifs();
    const auto check = check_local_subset_global(ifs, 1.0 / 128);
    CHECK(check.holds);
    CHECK_FALSE(check.local_empty);

    // domains equal to the bounds degenerate to the global system
    LocalIFS degenerate = ifs;
    for (auto& piece : degenerate.pieces) piece.domain = degenerate.bounds;
    const auto deg = check_local_subset_global(degenerate, 1.0 / 128);
    CHECK(deg.holds);
    CHECK(deg.directed == 0.0);
}

TEST_CASE("containment holds for random contractive instances") {
    std::mt19937 rng(17);
    for (int seed = 0; seed < 100; ++seed) {
        LocalIFS ifs;
        ifs.bounds = unit_square;
        const int n = testutil::uniform_int(rng, 1, 3);
        for (int i = 0; i < n; ++i) {
            const double x0 = uniform(rng, 0.0, 0.5), y0 = uniform(rng, 0.0, 0.5);
            const Rect domain{x0, x0 + uniform(rng, 0.3, 0.5), y0, y0 + uniform(rng, 0.3, 0.5)};
            const double c = uniform(rng, 0.2, 0.6);
            // fixed point inside the unit square keeps images in bounds
            const double fx = uniform(rng, 0.2, 0.8), fy = uniform(rng, 0.2, 0.8);
            ifs.pieces.push_back(
                {domain, AffineMap2D::scaling(c, c, {(1.0 - c) * fx, (1.0 - c) * fy})});
        }
        const auto check = check_local_subset_global(ifs, 1.0 / 64);
        CHECK(check.holds);
    }
}

TEST_CASE("code metric") {
    const CodeWord a{{1}}, b{{2}};
    CHECK(code_metric(a, a, 2) == 0.0);
    CHECK(code_metric(a, b, 2) == doctest::Approx(1.0 / 3));
    const CodeWord aa{{1, 1}}, bb{{2, 2}};
    CHECK(code_metric(aa, bb, 2) == doctest::Approx(4.0 / 9));
    CHECK_THROWS_AS(code_metric(a, aa, 2), std::invalid_argument);
    CHECK_THROWS_AS(code_metric(CodeWord{{3}}, CodeWord{{1}}, 2), std::invalid_argument);
}

TEST_CASE("code points address attractor points") {
    const LocalIFS ifs = example_planar_ifs();

    SUBCASE("empty code gives the bounds") {
        const auto cp = code_point(ifs, CodeWord{});
        CHECK(cp.point.x == doctest::Approx(0.5));
        CHECK(cp.point.y == doctest::Approx(0.5));
        CHECK(cp.diameter_bound == doctest::Approx(unit_square.diameter()));
    }
    SUBCASE("constant codes converge to the map fixed points") {
        CodeWord ones, twos;
        for (int k = 0; k < 20; ++k) {
            ones.symbols.push_back(1);
            twos.symbols.push_back(2);
        }
        const auto p1 = code_point(ifs, ones);
        CHECK(p1.point.x == doctest::Approx(0.0).epsilon(1e-4));
        CHECK(p1.point.y == doctest::Approx(0.0).epsilon(1e-4));
        CHECK(p1.diameter_bound ==
              doctest::Approx(unit_square.diameter() * std::pow(0.5, 20)));
        const auto p2 = code_point(ifs, twos);
        CHECK(p2.point.x == doctest::Approx(0.4).epsilon(1e-4));
        CHECK(p2.point.y == doctest::Approx(0.3).epsilon(1e-4));
    }
    SUBCASE("diameter bound shrinks geometrically") {
        CodeWord code;
        double last = unit_square.diameter();
        for (int k = 0; k < 12; ++k) {
            code.symbols.push_back(2);
            const auto cp = code_point(ifs, code);
            CHECK(cp.diameter_bound == doctest::Approx(0.5 * last));
            last = cp.diameter_bound;
        }
    }
    SUBCASE("a composition that misses the next domain is rejected") {
        // piece 2's domain starts at x = 0.4; the image of piece 1 iterated
        // enough times lies strictly below it
        CodeWord code{{2, 1, 1, 1, 1, 1}};
        CHECK_THROWS_WITH_AS(code_point(ifs, code), "code not admissible", std::runtime_error);
    }
}

TEST_CASE("graph system from an rb system") {
    const Interval unit = Interval::closed(0.0, 1.0);

    SUBCASE("constant coefficients give theta = 1") {
        PartitionSpec part = make_binary_partition(2);
        std::vector<PiecewisePoly> lambda{PiecewisePoly::constant(unit, 0.2),
                                          PiecewisePoly::constant(unit, 0.7)};
        std::vector<PiecewisePoly> scale{PiecewisePoly::constant(unit, 0.5),
                                         PiecewisePoly::constant(unit, 0.5)};
        const RBSystem sys(std::move(part), std::move(lambda), std::move(scale));
        const GraphSystem g = graph_ifs_from_rb(sys, {256, {}});
        CHECK(g.theta == 1.0);                     // L = 0 degenerate case
        CHECK(g.q == doctest::Approx(0.5));        // max{a, s}
        CHECK(g.ifs.pieces.size() == 2);
    }
    SUBCASE("lipschitz bound comes from the lambda slopes") {
        PartitionSpec part = make_binary_partition(2);
        std::vector<PiecewisePoly> lambda{PiecewisePoly::linear(unit, 0.0, 1.0),
                                          PiecewisePoly::constant(unit, 0.2)};
        std::vector<PiecewisePoly> scale{PiecewisePoly::constant(unit, 0.5),
                                         PiecewisePoly::constant(unit, 0.5)};
        const RBSystem sys(std::move(part), std::move(lambda), std::move(scale));
        const GraphSystem g = graph_ifs_from_rb(sys, {256, {}});
        // L = 1, a = 1/2: theta = (1-a)/(2L) = 1/4, q = max{(1+a)/2, s} = 3/4
        CHECK(g.theta == doctest::Approx(0.25));
        CHECK(g.q == doctest::Approx(0.75));
        CHECK(g.q < 1.0);
    }
    SUBCASE("graph cells are invariant under the planar system") {
        std::mt19937 rng(23);
        for (int trial = 0; trial < 3; ++trial) {
            PartitionSpec part = make_binary_partition(2);
            std::vector<PiecewisePoly> lambda, scale;
            for (int i = 0; i < 2; ++i) {
                lambda.push_back(PiecewisePoly::linear(unit, uniform(rng, -0.5, 0.5),
                                                       uniform(rng, -0.5, 0.5)));
                scale.push_back(PiecewisePoly::constant(unit, uniform(rng, -0.25, 0.25)));
            }
            const RBSystem sys(part, std::move(lambda), std::move(scale));
            const GraphSystem g = graph_ifs_from_rb(sys, {4096, {}});
            const double h = 1.0 / 256;
            const GridSet graph = rasterize_graph(g.fixed_point,
                                                  g.ifs.bounds.snapped_outward(h), h);
            const GridSet image = apply_local_operator(g.ifs, graph);
            CHECK(hausdorff_distance(image, graph) <= 2.0 * h * std::sqrt(2.0));
            CHECK(g.q < 1.0);
        }
    }
    SUBCASE("non-affine lambda is rejected") {
        PartitionSpec part = make_binary_partition(2);
        std::vector<PiecewisePoly> lambda{
            PiecewisePoly::from_monomial(unit, std::vector<double>{0.0, 0.0, 1.0}),
            PiecewisePoly::constant(unit, 0.0)};
        std::vector<PiecewisePoly> scale{PiecewisePoly::constant(unit, 0.5),
                                         PiecewisePoly::constant(unit, 0.5)};
        const RBSystem sys(std::move(part), std::move(lambda), std::move(scale));
        CHECK_THROWS_AS(graph_ifs_from_rb(sys, {64, {}}), std::invalid_argument);
    }
    SUBCASE("expansive base maps are rejected") {
        const std::vector<double> knots{0.0, 0.5, 1.0};
        const std::vector<Interval> subsets{Interval::closed(0.0, 0.2),
                                            Interval::closed(0.2, 1.0)};
        PartitionSpec part = PartitionSpec::general(knots, subsets);
        std::vector<PiecewisePoly> lambda{PiecewisePoly::constant(subsets[0], 0.1),
                                          PiecewisePoly::constant(subsets[1], 0.2)};
        std::vector<PiecewisePoly> scale{PiecewisePoly::constant(subsets[0], 0.3),
                                         PiecewisePoly::constant(subsets[1], 0.3)};
        const RBSystem sys(std::move(part), std::move(lambda), std::move(scale));
        CHECK_THROWS_AS(graph_ifs_from_rb(sys, {64, {}}), std::invalid_argument);
    }
}
