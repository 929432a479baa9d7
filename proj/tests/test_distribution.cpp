#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dhasym/distribution.hpp"

using namespace dhasym;
using Catch::Matchers::ContainsSubstring;

namespace {

Rational rq(long n, long d = 1) { return Rational(n, d); }

MultiPoly xi() { return MultiPoly::variable("x1"); }

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

LatticePolytope interval_polytope(const Rational& a, const Rational& b) {
    std::vector<Halfspace> hs;
    hs.push_back({{1}, b});
    hs.push_back({{-1}, -a});
    return LatticePolytope(1, hs);
}

std::vector<FaceDistribution> interval_list(const Rational& a, const Rational& b, int nmax) {
    std::vector<FaceDistribution> out;
    for (int n = 0; n <= nmax; ++n) out.push_back(dh_interval(a, b, n));
    return out;
}

// tent multiplicity 2k+1-|j| on |j| <= 2k, the lattice count profile of the
// product of two projective lines at twist k
long long tent(long long j, long long k) {
    if (j < -2 * k || j > 2 * k) return 0;
    return 2 * k + 1 - (j < 0 ? -j : j);
}

Rational tent_moment(long k, int m) {
    Rational s;
    for (long long j = -2 * k; j <= 2 * k; ++j)
        s += Rational(tent(j, k)) * (Rational(j) / Rational(k)).pow(m);
    return s;
}

}  // namespace

TEST_CASE("interval coefficient distributions: frozen pairings") {
    auto D0 = dh_interval(rq(0), rq(1), 0);
    auto D1 = dh_interval(rq(0), rq(1), 1);
    auto D2 = dh_interval(rq(0), rq(1), 2);
    auto D3 = dh_interval(rq(0), rq(1), 3);
    auto D4 = dh_interval(rq(0), rq(1), 4);

    auto x = xi();
    CHECK(D0.pair_poly(MultiPoly::constant(rq(1))) == rq(1));
    CHECK(D0.pair_poly(x * x) == rq(1, 3));
    CHECK(D1.pair_poly(x * x) == rq(1, 2));
    CHECK(D2.pair_poly(x * x) == rq(1, 6));
    CHECK(D3.terms().empty());
    CHECK(D4.pair_poly(x * x) == rq(0));
    CHECK(D4.pair_poly(x.pow(4)) == rq(-1, 30));

    // odd orders vanish beyond the endpoint masses
    CHECK(dh_interval(rq(-2), rq(0), 5).terms().empty());
}

TEST_CASE("interval distributions reproduce endpoint lattice sums exactly") {
    // sum_{j=0..k} (j/k)^m  ==  sum_n k^{1-n} <DH_n, xi^m>
    for (int m = 0; m <= 4; ++m) {
        MultiPoly p = m == 0 ? MultiPoly::constant(rq(1)) : xi().pow(m);
        std::vector<Rational> paired;
        for (int n = 0; n <= m + 1; ++n)
            paired.push_back(dh_interval(rq(0), rq(1), n).pair_poly(p));
        for (long k = 1; k <= 6; ++k) {
            Rational lhs;
            for (long j = 0; j <= k; ++j) lhs += (Rational(j) / Rational(k)).pow(m);
            Rational rhs;
            for (int n = 0; n <= m + 1; ++n)
                rhs += Rational(k).pow(1 - n) * paired[n];
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("half-line coefficient distributions") {
    auto x = xi();
    auto poly2 = x * x + Rational(3) * x + MultiPoly::constant(rq(2));
    auto bump = PiecewisePoly1D::bump_power(rq(1), rq(1), 4);
    auto f = TestFunction::exact(1, poly2, {bump});

    // order 1: half the value at the apex
    CHECK(dh_halfline(rq(0), 1, 1).pair(f) == rq(1) * poly2.eval({rq(0)}) * bump.eval(rq(0)) / rq(2));
    // order 2: -1/12 of the derivative along the ray direction
    auto g = TestFunction::exact(1, x * x, {});
    CHECK(dh_halfline(rq(1), 1, 2).pair(g) == rq(-1, 6));
    CHECK(dh_halfline(rq(1), -1, 2).pair(g) == rq(1, 6));
    CHECK(dh_halfline(rq(0), 1, 3).terms().empty());
    CHECK(dh_halfline(rq(0), 1, 4).pair_poly(x.pow(4)) == rq(0));

    // ray against a compact factor integrates over the overlap only
    auto ind = TestFunction::exact(1, MultiPoly::constant(rq(1)),
                                   {PiecewisePoly1D::bump_power(rq(0), rq(2), 1)});
    // integral over [0,2] of 1 - x^2/4
    CHECK(dh_halfline(rq(0), 1, 0).pair(ind) == rq(4, 3));
    CHECK(dh_halfline(rq(0), -1, 0).pair(ind) == rq(4, 3));

    CHECK_THROWS_WITH(dh_halfline(rq(0), 1, 0).pair_poly(xi()),
                      ContainsSubstring("divergent"));
}

TEST_CASE("canonical one-dimensional form: integration by parts and merging") {
    // segment with a first derivative: integral of f' picks up the endpoints
    {
        FaceDistribution D(1);
        DistTerm t;
        t.base = {rq(0)};
        t.blocks = {{Rail{{1}, rq(1)}}};
        t.density = MultiPoly::constant(rq(1));
        t.ops = {DerivOp{{1}, 1}};
        D.add_term(t);
        auto C = canonicalize_1d(D);
        CHECK(C.segment.is_zero());
        CHECK(!C.ray_pos);
        CHECK(!C.ray_neg);
        REQUIRE(C.atoms.size() == 2);
        CHECK(C.atoms.at({rq(1), 0}) == rq(1));
        CHECK(C.atoms.at({rq(0), 0}) == rq(-1));
    }
    // weighted segment with a derivative: boundary term plus a residual density
    {
        FaceDistribution D(1);
        DistTerm t;
        t.base = {rq(0)};
        t.blocks = {{Rail{{1}, rq(1)}}};
        t.density = MultiPoly::variable("t1");
        t.ops = {DerivOp{{1}, 1}};
        D.add_term(t);
        auto C = canonicalize_1d(D);
        REQUIRE(C.atoms.size() == 1);
        CHECK(C.atoms.at({rq(1), 0}) == rq(1));
        REQUIRE(!C.segment.is_zero());
        CHECK(C.segment.breaks() == std::vector<Rational>{rq(0), rq(1)});
        CHECK(C.segment.pieces()[0] == MultiPoly::constant(rq(-1)));
        // pairing of the canonical form agrees with the original
        auto f = TestFunction::exact(1, xi() * xi(), {});
        CHECK(C.to_distribution().pair(f) == D.pair(f));
    }
    // derivative on a ray: only the apex boundary survives
    {
        FaceDistribution D(1);
        DistTerm t;
        t.base = {rq(0)};
        t.blocks = {{Rail{{1}, std::nullopt}}};
        t.density = MultiPoly::constant(rq(1));
        t.ops = {DerivOp{{1}, 1}};
        D.add_term(t);
        auto C = canonicalize_1d(D);
        CHECK(!C.ray_pos);
        REQUIRE(C.atoms.size() == 1);
        CHECK(C.atoms.at({rq(0), 0}) == rq(-1));
    }
    // downward rail becomes a segment left of the base
    {
        FaceDistribution D(1);
        DistTerm t;
        t.base = {rq(0)};
        t.blocks = {{Rail{{-1}, rq(2)}}};
        t.density = MultiPoly::constant(rq(1));
        D.add_term(t);
        auto C = canonicalize_1d(D);
        CHECK(C.atoms.empty());
        CHECK(C.segment.breaks() == std::vector<Rational>{rq(-2), rq(0)});
        CHECK(C.segment.pieces()[0] == MultiPoly::constant(rq(1)));
    }
    // non-primitive direction: speed folds into the density
    {
        FaceDistribution D(1);
        DistTerm t;
        t.base = {rq(0)};
        t.blocks = {{Rail{{2}, rq(3)}}};
        t.density = MultiPoly::variable("t1");
        D.add_term(t);
        auto C = canonicalize_1d(D);
        CHECK(C.segment.breaks() == std::vector<Rational>{rq(0), rq(6)});
        CHECK(C.segment.pieces()[0] == rq(1, 4) * MultiPoly::variable("x"));
        CHECK(D.pair_poly(xi()) == rq(18));
        CHECK(C.to_distribution().pair_poly(xi()) == rq(18));
    }
}

TEST_CASE("vertex cone distributions in one dimension match half-lines") {
    VertexCone up{{rq(0)}, {{1}}};
    for (int n = 0; n <= 4; ++n) {
        auto A = canonicalize_1d(dh_vertex_cone(up, n));
        auto B = canonicalize_1d(dh_halfline(rq(0), 1, n));
        CHECK(A == B);
    }
    // half-open edge flips the order-zero coefficient only
    auto S1 = canonicalize_1d(dh_vertex_cone(up, 1, {true}));
    REQUIRE(S1.atoms.size() == 1);
    CHECK(S1.atoms.at({rq(0), 0}) == rq(-1, 2));
    auto S2 = canonicalize_1d(dh_vertex_cone(up, 2, {true}));
    CHECK(S2.atoms == std::map<std::pair<Rational, int>, Rational>{{{rq(0), 1}, rq(-1, 12)}});
}

TEST_CASE("polarized vertex sums match interval distributions") {
    std::vector<std::pair<Rational, Rational>> intervals = {
        {rq(0), rq(1)}, {rq(-2), rq(0)}, {rq(0), rq(3)}};
    for (const auto& [a, b] : intervals) {
        auto P = interval_polytope(a, b);
        for (int n = 0; n <= 5; ++n) {
            auto via_vertices = canonicalize_1d(dh_delzant(P, n));
            auto direct = canonicalize_1d(dh_interval(a, b, n));
            INFO("interval [" << a.str() << ", " << b.str() << "], order " << n);
            CHECK(via_vertices == direct);
            for (int m = 0; m <= 6; ++m) {
                MultiPoly p = m == 0 ? MultiPoly::constant(rq(1)) : xi().pow(m);
                Rational want = dh_interval(a, b, n).pair_poly(p);
                // termwise the polarized cones are unbounded, so polynomials
                // pair through a cutoff box; any box containing [a, b] works
                CHECK(dh_delzant(P, n).pair_poly_boxed(p, {a}, {b}) == want);
                CHECK(dh_delzant(P, n).pair_poly_boxed(p, {a - rq(2)}, {b + rq(3)}) == want);
            }
        }
    }
}

TEST_CASE("product of projective lines: convolution route matches printed data") {
    auto A = interval_list(rq(-2), rq(0), 3);
    auto B = interval_list(rq(0), rq(2), 3);

    // order 0: the tent density
    auto C0 = canonicalize_1d(dh_convolve_graded(A, B, 0));
    Canonical1D want0;
    auto x = MultiPoly::variable("x");
    want0.segment = PiecewisePoly1D({rq(-2), rq(0), rq(2)},
                                    {MultiPoly::constant(rq(2)) + x,
                                     MultiPoly::constant(rq(2)) - x});
    CHECK(C0 == want0);

    // order 1: plain Lebesgue measure on the support
    auto C1 = canonicalize_1d(dh_convolve_graded(A, B, 1));
    Canonical1D want1;
    want1.segment = PiecewisePoly1D({rq(-2), rq(2)}, {MultiPoly::constant(rq(1))});
    CHECK(C1 == want1);

    // order 2: the three point masses
    auto C2 = canonicalize_1d(dh_convolve_graded(A, B, 2));
    Canonical1D want2;
    want2.atoms = {{{rq(-2), 0}, rq(5, 12)},
                   {{rq(0), 0}, rq(1, 6)},
                   {{rq(2), 0}, rq(5, 12)}};
    CHECK(C2 == want2);

    // order 3: first derivative masses at the outer points
    auto C3 = canonicalize_1d(dh_convolve_graded(A, B, 3));
    Canonical1D want3;
    want3.atoms = {{{rq(-2), 1}, rq(-1, 12)}, {{rq(2), 1}, rq(1, 12)}};
    CHECK(C3 == want3);

    // frozen pairings
    auto D1 = dh_convolve_graded(A, B, 1);
    auto D2 = dh_convolve_graded(A, B, 2);
    auto D3 = dh_convolve_graded(A, B, 3);
    CHECK(D1.pair_poly(MultiPoly::constant(rq(1))) == rq(4));
    CHECK(D2.pair_poly(MultiPoly::constant(rq(1))) == rq(1));
    CHECK(D3.pair_poly(xi() * xi()) == rq(2, 3));
    CHECK(D3.pair_poly(xi().pow(3)) == rq(0));
    CHECK(D3.pair_poly(MultiPoly::constant(rq(1))) == rq(0));
    CHECK(D3.pair_poly(xi()) == rq(0));
}

TEST_CASE("convolution mechanics piece by piece") {
    // derivative masses against a density shift the boundary
    auto piece = canonicalize_1d(
        dh_convolve(dh_interval(rq(-2), rq(0), 2), dh_interval(rq(0), rq(2), 0)));
    Canonical1D want;
    want.atoms = {{{rq(-2), 0}, rq(1, 12)},
                  {{rq(0), 0}, rq(-1, 6)},
                  {{rq(2), 0}, rq(1, 12)}};
    CHECK(piece == want);

    // point masses against point masses
    auto pp = canonicalize_1d(
        dh_convolve(dh_interval(rq(-2), rq(0), 1), dh_interval(rq(0), rq(2), 1)));
    Canonical1D want_pp;
    want_pp.atoms = {{{rq(-2), 0}, rq(1, 4)}, {{rq(0), 0}, rq(1, 2)}, {{rq(2), 0}, rq(1, 4)}};
    CHECK(pp == want_pp);

    // two noncompact factors are rejected
    CHECK_THROWS_WITH(dh_convolve(dh_halfline(rq(0), 1, 0), dh_halfline(rq(0), 1, 0)),
                      ContainsSubstring("compactly supported"));

    // a ray against a segment stays exact
    auto rs = canonicalize_1d(dh_convolve(dh_halfline(rq(0), 1, 0), dh_interval(rq(0), rq(1), 0)));
    REQUIRE(!rs.segment.is_zero());
    REQUIRE(rs.ray_pos.has_value());
    CHECK(rs.ray_pos->first == rq(1));
    CHECK(rs.ray_pos->second == MultiPoly::constant(rq(1)));
    CHECK(rs.segment.breaks() == std::vector<Rational>{rq(0), rq(1)});
    CHECK(rs.segment.pieces()[0] == MultiPoly::variable("x"));

    // point mass with derivative convolved against a two-dimensional box
    FaceDistribution atom2(2);
    DistTerm a2;
    a2.base = {rq(1), rq(2)};
    a2.density = MultiPoly::constant(rq(2));
    a2.ops = {DerivOp{{1, 0}, 1}};
    atom2.add_term(a2);
    auto box = dh_tensor(dh_interval(rq(0), rq(1), 0), dh_interval(rq(0), rq(1), 0));
    auto shifted = dh_convolve(atom2, box);
    auto p2 = MultiPoly::variable("x1") * MultiPoly::variable("x1") * MultiPoly::variable("x2");
    auto f2 = TestFunction::polynomial(2, p2);
    CHECK(shifted.pair(f2) == rq(15));
    // cross-check: same as pairing the translated box with 2 * d(p2)/dx1
    auto dp = Rational(2) * p2.directional_derivative({1, 0});
    CHECK(shifted.pair(f2) == box.translated({rq(1), rq(2)}).pair_poly(dp));
}

TEST_CASE("moment sequences determine the coefficient pairings") {
    // unit interval, constant weight: (k+1) = k + 1
    auto c_int = fit_moments([](long k) { return Rational(k + 1); }, 1, 0);
    CHECK(c_int == Vec{rq(1), rq(1)});

    // unit square count (k+1)^2
    auto c_sq = fit_moments([](long k) { return Rational((k + 1) * (k + 1)); }, 2, 0);
    CHECK(c_sq == Vec{rq(1), rq(2), rq(1)});

    // tent multiplicity, constant weight
    auto c0 = fit_moments([](long k) { return tent_moment(k, 0); }, 2, 0);
    CHECK(c0 == Vec{rq(4), rq(4), rq(1)});

    // tent multiplicity, quadratic weight
    auto c2 = fit_moments([](long k) { return tent_moment(k, 2); }, 2, 2);
    CHECK(c2 == Vec{rq(8, 3), rq(16, 3), rq(10, 3), rq(2, 3), rq(0)});

    // every fitted coefficient agrees with the convolved distribution pairings
    auto A = interval_list(rq(-2), rq(0), 7);
    auto B = interval_list(rq(0), rq(2), 7);
    for (int m = 0; m <= 5; ++m) {
        auto fit = fit_moments([&](long k) { return tent_moment(k, m); }, 2, m);
        MultiPoly p = m == 0 ? MultiPoly::constant(rq(1)) : xi().pow(m);
        for (int n = 0; n < static_cast<int>(fit.size()); ++n) {
            INFO("moment " << m << ", order " << n);
            CHECK(dh_convolve_graded(A, B, n).pair_poly(p) == fit[n]);
        }
    }

    // a non-polynomial sequence is rejected
    CHECK_THROWS_WITH(fit_moments([](long k) { return Rational(1L << k); }, 1, 0),
                      ContainsSubstring("quasi-polynomial"));
}

TEST_CASE("square vertex decomposition integrates exactly") {
    auto sq = unit_square();
    auto psi = PiecewisePoly1D::plateau(rq(-1), rq(-1, 2), rq(3, 2), rq(2), 2);
    auto one = TestFunction::exact(2, MultiPoly::constant(rq(1)), {psi, psi});
    auto x1 = MultiPoly::variable("x1");
    auto x2 = MultiPoly::variable("x2");

    auto D0 = dh_delzant(sq, 0);
    CHECK(D0.pair(one) == rq(1));
    CHECK(D0.pair(TestFunction::exact(2, x1 * x2, {psi, psi})) == rq(1, 4));
    CHECK(D0.pair(TestFunction::exact(2, x1 * x1, {psi, psi})) == rq(1, 3));

    auto D1 = dh_delzant(sq, 1);
    CHECK(D1.pair(one) == rq(2));
    auto D2 = dh_delzant(sq, 2);
    CHECK(D2.pair(one) == rq(1));
    auto D3 = dh_delzant(sq, 3);
    CHECK(D3.pair(one) == rq(0));

    // partial overlap: the signed cones must reproduce the integral over the
    // square of a bump that straddles two vertex regions
    auto bx = PiecewisePoly1D::bump_power(rq(0), rq(1), 2);
    auto by = PiecewisePoly1D::bump_power(rq(1, 2), rq(2), 2);
    auto f = TestFunction::exact(2, MultiPoly::constant(rq(1)), {bx, by});
    Rational wx = dh_interval(rq(0), rq(1), 0).pair(TestFunction::exact(1, MultiPoly::constant(rq(1)), {bx}));
    Rational wy = dh_interval(rq(0), rq(1), 0).pair(TestFunction::exact(1, MultiPoly::constant(rq(1)), {by}));
    CHECK(D0.pair(f) == wx * wy);

    // tensor route gives the same pairings as the vertex route
    auto L = interval_list(rq(0), rq(1), 3);
    for (int n = 0; n <= 3; ++n) {
        auto T = dh_tensor_graded(L, L, n);
        auto V = dh_delzant(sq, n);
        for (const auto& g :
             {one, TestFunction::exact(2, x1 * x2, {psi, psi}),
              TestFunction::exact(2, x1 * x1 * x2, {psi, psi}), f}) {
            CHECK(T.pair(g) == V.pair(g));
        }
    }

    // termwise support containment holds for the tensor route (the polarized
    // vertex route has unbounded terms whose tails cancel only in the sum)
    CHECK(dh_tensor_graded(L, L, 1).support_in(sq));
    CHECK(dh_tensor_graded(L, L, 2).support_in(sq));
    CHECK_FALSE(dh_tensor_graded(L, L, 0).translated({rq(3), rq(0)}).support_in(sq));
    CHECK_FALSE(dh_delzant(sq, 0).support_in(sq));

    // boxed polynomial pairing against the vertex route
    CHECK(dh_delzant(sq, 0).pair_poly_boxed(x1 * x2, {rq(0), rq(0)}, {rq(1), rq(1)}) ==
          rq(1, 4));
    CHECK(dh_delzant(sq, 2).pair_poly_boxed(MultiPoly::constant(rq(1)), {rq(-1), rq(-1)},
                                            {rq(2), rq(2)}) == rq(1));
}

TEST_CASE("simplex vertex decomposition handles skew cones") {
    auto sx = standard_simplex();
    auto psi = PiecewisePoly1D::plateau(rq(-1), rq(-1, 2), rq(3, 2), rq(2), 2);
    auto one = TestFunction::exact(2, MultiPoly::constant(rq(1)), {psi, psi});
    auto x1 = MultiPoly::variable("x1");

    auto D0 = dh_delzant(sx, 0);
    CHECK(D0.pair(one) == rq(1, 2));
    CHECK(D0.pair(TestFunction::exact(2, x1, {psi, psi})) == rq(1, 6));

    auto D1 = dh_delzant(sx, 1);
    CHECK(D1.pair(one) == rq(3, 2));
    auto D2 = dh_delzant(sx, 2);
    CHECK(D2.pair(one) == rq(1));

    // matching the Ehrhart fit (k+1)(k+2)/2
    auto fit = fit_moments(
        [](long k) { return Rational((k + 1) * (k + 2)) / Rational(2); }, 2, 0);
    CHECK(fit == Vec{rq(1, 2), rq(3, 2), rq(1)});

    // boxed polynomial pairings match the Ehrhart coefficients
    CHECK(D0.pair_poly_boxed(MultiPoly::constant(rq(1)), {rq(0), rq(0)}, {rq(1), rq(1)}) ==
          rq(1, 2));
    CHECK(D1.pair_poly_boxed(MultiPoly::constant(rq(1)), {rq(0), rq(0)}, {rq(1), rq(1)}) ==
          rq(3, 2));
    CHECK(D2.pair_poly_boxed(MultiPoly::constant(rq(1)), {rq(0), rq(0)}, {rq(1), rq(1)}) ==
          rq(1));
    CHECK(D0.pair_poly_boxed(x1, {rq(0), rq(0)}, {rq(1), rq(1)}) == rq(1, 6));
}

TEST_CASE("tensor products of distributions") {
    // separable pairing splits into the product of the factors
    auto q0 = dh_tensor(dh_halfline(rq(0), 1, 0), dh_halfline(rq(0), 1, 0));
    auto bx = PiecewisePoly1D::bump_power(rq(0), rq(1), 2);
    auto by = PiecewisePoly1D::bump_power(rq(0), rq(2), 2);
    auto f = TestFunction::separable({bx, by});
    Rational wx = dh_halfline(rq(0), 1, 0).pair(TestFunction::separable({bx}));
    Rational wy = dh_halfline(rq(0), 1, 0).pair(TestFunction::separable({by}));
    CHECK(q0.pair(f) == wx * wy);
    CHECK_THROWS_WITH(q0.pair_poly(MultiPoly::constant(rq(1))),
                      ContainsSubstring("divergent"));

    // density variables renumber across the factors
    FaceDistribution A(1), B(1);
    DistTerm ta;
    ta.base = {rq(0)};
    ta.blocks = {{Rail{{1}, rq(1)}}};
    ta.density = MultiPoly::variable("t1");
    A.add_term(ta);
    DistTerm tb;
    tb.base = {rq(0)};
    tb.blocks = {{Rail{{1}, rq(2)}}};
    tb.density = MultiPoly::variable("t1") * MultiPoly::variable("t1");
    B.add_term(tb);
    auto AB = dh_tensor(A, B);
    CHECK(AB.pair_poly(MultiPoly::variable("x1") * MultiPoly::variable("x2")) ==
          rq(4, 3));

    // mixed atom/rail tensor: half-line masses against an interval
    auto m1 = dh_tensor(dh_halfline(rq(0), 1, 1), dh_interval(rq(0), rq(1), 0));
    CHECK(m1.pair_poly(MultiPoly::variable("x2")) == rq(1, 4));
}

TEST_CASE("pairing rejects test functions without the needed smoothness") {
    // a jump right on a point mass
    auto ind = PiecewisePoly1D::indicator(rq(0), rq(1));
    auto D1 = dh_interval(rq(0), rq(1), 1);
    CHECK_THROWS_WITH(D1.pair(TestFunction::separable({ind})),
                      ContainsSubstring("smoothness"));

    // third derivative mass against a C^2 plateau ramp joint
    auto psi = PiecewisePoly1D::plateau(rq(-1), rq(0), rq(1), rq(2), 2);
    auto D4 = dh_interval(rq(0), rq(1), 4);
    CHECK_THROWS_WITH(D4.pair(TestFunction::separable({psi})),
                      ContainsSubstring("smoothness"));

    // the same mass against a C^5 bump is fine
    auto smooth = PiecewisePoly1D::bump_power(rq(1, 2), rq(1), 6);
    CHECK(D4.pair(TestFunction::separable({smooth})) ==
          rq(-1, 720) * (smooth.eval_deriv_checked(rq(0), 3) * rq(-1) +
                         smooth.eval_deriv_checked(rq(1), 3)));
}

TEST_CASE("distribution term validation") {
    FaceDistribution D(2);
    DistTerm t;
    t.base = {rq(0)};
    CHECK_THROWS_WITH(D.add_term(t), ContainsSubstring("base dimension"));
    t.base = {rq(0), rq(0)};
    t.blocks = {{Rail{{0, 0}, rq(1)}}};
    CHECK_THROWS_WITH(D.add_term(t), ContainsSubstring("zero rail"));
    t.blocks = {{Rail{{1, 0}, rq(1)}}};
    t.density = MultiPoly::variable("t2");
    CHECK_THROWS_WITH(D.add_term(t), ContainsSubstring("rail parameter"));
    t.density = MultiPoly::constant(rq(0));
    D.add_term(t);
    CHECK(D.terms().empty());
}

TEST_CASE("numeric pairing agrees with the exact engine") {
    // one-dimensional density against a cubic bump
    auto D = dh_interval(rq(0), rq(2), 0);
    auto fn = [](const std::vector<double>& x) {
        double u = x[0] - 1.0;
        double v = 1.0 - u * u;
        return v > 0 ? v * v * v : 0.0;
    };
    auto numeric = TestFunction::numeric(1, fn, {{0.0, 2.0}});
    auto exact = TestFunction::separable({PiecewisePoly1D::bump_power(rq(1), rq(1), 3)});
    double got = D.pair_numeric(numeric);
    double want = D.pair(exact).to_double();
    CHECK(std::fabs(got - want) < 1e-8);

    // a ray clipped by the support box
    auto H = dh_halfline(rq(0), 1, 0);
    double gotr = H.pair_numeric(numeric);
    double wantr = H.pair(exact).to_double();
    CHECK(std::fabs(gotr - wantr) < 1e-8);

    // two-dimensional product case
    auto box = dh_tensor(dh_interval(rq(0), rq(1), 0), dh_interval(rq(0), rq(2), 0));
    auto fn2 = [](const std::vector<double>& x) {
        double a = 1.0 - (2 * x[0] - 1.0) * (2 * x[0] - 1.0);
        double b = 1.0 - (x[1] - 1.0) * (x[1] - 1.0);
        if (a < 0 || b < 0) return 0.0;
        return a * a * b * b;
    };
    auto numeric2 = TestFunction::numeric(2, fn2, {{0.0, 1.0}, {0.0, 2.0}});
    auto exact2 = TestFunction::separable({PiecewisePoly1D::bump_power(rq(1, 2), rq(1, 2), 2),
                                           PiecewisePoly1D::bump_power(rq(1), rq(1), 2)});
    CHECK(std::fabs(box.pair_numeric(numeric2) - box.pair(exact2).to_double()) < 1e-6);
}
