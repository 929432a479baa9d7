#include <catch2/catch_amalgamated.hpp>

#include "dhasym/polytope.hpp"

using namespace dhasym;

namespace {

LatticePolytope unit_square() {
    return LatticePolytope(2, {{{1, 0}, Rational(1)},
                               {{0, 1}, Rational(1)},
                               {{-1, 0}, Rational(0)},
                               {{0, -1}, Rational(0)}});
}

LatticePolytope standard_simplex() {
    return LatticePolytope(2, {{{1, 1}, Rational(1)},
                               {{-1, 0}, Rational(0)},
                               {{0, -1}, Rational(0)}});
}

LatticePolytope interval(long a, long b) {
    return LatticePolytope(1, {{{1}, Rational(b)}, {{-1}, Rational(-a)}});
}

Vec pt(std::initializer_list<long> xs) {
    Vec v;
    for (long x : xs) v.push_back(Rational(x));
    return v;
}

}  // namespace

TEST_CASE("vertex enumeration") {
    auto sq = unit_square();
    CHECK(sq.vertices() ==
          std::vector<Vec>{pt({0, 0}), pt({0, 1}), pt({1, 0}), pt({1, 1})});

    auto tri = standard_simplex();
    CHECK(tri.vertices() == std::vector<Vec>{pt({0, 0}), pt({0, 1}), pt({1, 0})});

    CHECK(interval(-2, 0).vertices() == std::vector<Vec>{pt({-2}), pt({0})});

    SECTION("empty polytope has no vertices") {
        LatticePolytope empty(1, {{{1}, Rational(0)}, {{-1}, Rational(-1)}});
        CHECK(empty.empty());
        CHECK(empty.vertices().empty());
        CHECK(empty.lattice_points().empty());
    }

    SECTION("unbounded input is refused") {
        LatticePolytope ray(1, {{{-1}, Rational(0)}});
        CHECK_THROWS_WITH(ray.vertices(), "polytope unbounded");
        LatticePolytope wedge(2, {{{-1, 0}, Rational(0)}, {{0, -1}, Rational(0)}});
        CHECK_THROWS_WITH(wedge.lattice_points(), "polytope unbounded");
    }

    SECTION("lower-dimensional input is refused with a distinct error") {
        LatticePolytope seg(2, {{{1, 0}, Rational(0)},
                                {{-1, 0}, Rational(0)},
                                {{0, 1}, Rational(1)},
                                {{0, -1}, Rational(0)}});
        CHECK_THROWS_WITH(seg.vertices(),
                          Catch::Matchers::ContainsSubstring("degenerate"));
    }

    SECTION("redundant halfspaces do not add vertices") {
        LatticePolytope sq2(2, {{{1, 0}, Rational(1)},
                                {{0, 1}, Rational(1)},
                                {{-1, 0}, Rational(0)},
                                {{0, -1}, Rational(0)},
                                {{1, 1}, Rational(5)}});
        CHECK(sq2.vertices() == unit_square().vertices());
    }
}

TEST_CASE("dilation and lattice points") {
    auto sq = unit_square();
    CHECK(sq.dilate(3).vertices() ==
          std::vector<Vec>{pt({0, 0}), pt({0, 3}), pt({3, 0}), pt({3, 3})});
    CHECK(sq.dilate(3).lattice_points().size() == 16);
    CHECK(sq.lattice_points() ==
          std::vector<IVec>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});

    auto tri = standard_simplex();
    for (long k = 1; k <= 5; ++k)
        CHECK(tri.dilate(k).lattice_points().size() ==
              static_cast<size_t>((k + 1) * (k + 2) / 2));

    CHECK(interval(-2, 0).dilate(2).lattice_points() ==
          std::vector<IVec>{{-4}, {-3}, {-2}, {-1}, {0}});

    SECTION("counts follow a polynomial in the dilation factor") {
        // fit a quadratic through k = 1..3 and check k = 4, 5
        for (const auto& poly : {unit_square(), standard_simplex()}) {
            RMat A;
            Vec b;
            for (long k = 1; k <= 3; ++k) {
                A.push_back({Rational(k * k), Rational(k), Rational(1)});
                b.push_back(Rational(static_cast<long>(poly.dilate(k).lattice_points().size())));
            }
            Vec c = solve_square(A, b);
            for (long k = 4; k <= 5; ++k) {
                Rational predicted =
                    c[0] * Rational(k * k) + c[1] * Rational(k) + c[2];
                CHECK(predicted ==
                      Rational(static_cast<long>(poly.dilate(k).lattice_points().size())));
            }
        }
    }
}

TEST_CASE("tangent cones") {
    auto sq = unit_square();
    auto c00 = sq.tangent_cone(pt({0, 0}));
    CHECK(c00.generators == std::vector<IVec>{{1, 0}, {0, 1}});
    auto c11 = sq.tangent_cone(pt({1, 1}));
    CHECK(c11.generators == std::vector<IVec>{{-1, 0}, {0, -1}});

    auto tri = standard_simplex();
    auto c10 = tri.tangent_cone(pt({1, 0}));
    CHECK(c10.generators == std::vector<IVec>{{-1, 0}, {-1, 1}});

    auto seg = interval(-2, 0);
    CHECK(seg.tangent_cone(pt({-2})).generators == std::vector<IVec>{{1}});
    CHECK(seg.tangent_cone(pt({0})).generators == std::vector<IVec>{{-1}});

    // edge midpoint and interior point are not vertices
    CHECK_THROWS_AS(sq.tangent_cone(Vec{Rational(1, 2), Rational(1)}), std::invalid_argument);
    CHECK_THROWS_AS(interval(0, 2).tangent_cone(pt({1})), std::invalid_argument);
}

TEST_CASE("delzant check") {
    CHECK(unit_square().is_delzant());
    CHECK(standard_simplex().is_delzant());
    CHECK(interval(-2, 0).is_delzant());

    SECTION("non-unimodular corner is reported with its vertex") {
        auto bad = LatticePolytope::from_vertices(2, {pt({0, 0}), pt({2, 0}), pt({0, 1})});
        auto rep = bad.delzant_check();
        REQUIRE_FALSE(rep.ok);
        REQUIRE(rep.witness.has_value());
        CHECK(*rep.witness == pt({0, 1}));
        CHECK(rep.reason == "edge generators are not unimodular");
    }

    SECTION("fractional vertex is reported") {
        LatticePolytope p(2, {{{1, 2}, Rational(1)},
                              {{-1, 0}, Rational(0)},
                              {{0, -1}, Rational(0)}});
        auto rep = p.delzant_check();
        REQUIRE_FALSE(rep.ok);
        CHECK(rep.reason == "vertex is not a lattice point");
        CHECK(*rep.witness == Vec{Rational(0), Rational(1, 2)});
    }
}

TEST_CASE("vertex representation round trip") {
    auto sq = LatticePolytope::from_vertices(
        2, {pt({0, 0}), pt({1, 0}), pt({0, 1}), pt({1, 1})});
    CHECK(sq.vertices() == unit_square().vertices());
    CHECK(sq.contains(Vec{Rational(1, 2), Rational(1, 2)}));
    CHECK_FALSE(sq.contains(Vec{Rational(3, 2), Rational(1, 2)}));

    // interior points of the input do not change the hull
    auto sq2 = LatticePolytope::from_vertices(
        2, {pt({0, 0}), pt({1, 0}), pt({0, 1}), pt({1, 1}),
            Vec{Rational(1, 2), Rational(1, 2)}});
    CHECK(sq2.vertices() == sq.vertices());

    CHECK_NOTHROW(LatticePolytope::from_both(
        2,
        {{{1, 1}, Rational(1)}, {{-1, 0}, Rational(0)}, {{0, -1}, Rational(0)}},
        {pt({0, 0}), pt({1, 0}), pt({0, 1})}));
    CHECK_THROWS_AS(LatticePolytope::from_both(
                        2,
                        {{{1, 1}, Rational(1)},
                         {{-1, 0}, Rational(0)},
                         {{0, -1}, Rational(0)}},
                        {pt({0, 0}), pt({1, 0}), pt({1, 1})}),
                    std::invalid_argument);
}

TEST_CASE("face lattice") {
    auto euler = [](const LatticePolytope& p) {
        long s = 0;
        for (const auto& f : p.faces()) s += (f.dim % 2 == 0) ? 1 : -1;
        return s;
    };

    auto sq_faces = unit_square().faces();
    size_t nv = 0, ne = 0, nc = 0;
    for (const auto& f : sq_faces) {
        if (f.dim == 0) ++nv;
        if (f.dim == 1) ++ne;
        if (f.dim == 2) ++nc;
    }
    CHECK(nv == 4);
    CHECK(ne == 4);
    CHECK(nc == 1);
    CHECK(euler(unit_square()) == 1);
    CHECK(euler(standard_simplex()) == 1);
    CHECK(euler(interval(0, 3)) == 1);

    SECTION("three-dimensional box") {
        LatticePolytope box(3, {{{1, 0, 0}, Rational(1)},
                                {{0, 1, 0}, Rational(1)},
                                {{0, 0, 1}, Rational(1)},
                                {{-1, 0, 0}, Rational(0)},
                                {{0, -1, 0}, Rational(0)},
                                {{0, 0, -1}, Rational(0)}});
        CHECK(box.vertices().size() == 8);
        CHECK(box.lattice_points().size() == 8);
        size_t counts[4] = {0, 0, 0, 0};
        for (const auto& f : box.faces()) counts[f.dim]++;
        CHECK(counts[0] == 8);
        CHECK(counts[1] == 12);
        CHECK(counts[2] == 6);
        CHECK(counts[3] == 1);
        CHECK(euler(box) == 1);
        CHECK(box.is_delzant());
    }
}
