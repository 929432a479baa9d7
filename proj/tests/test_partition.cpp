#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dhasym/partition.hpp"

using namespace dhasym;
using Catch::Matchers::ContainsSubstring;

namespace {

Rational rq(long n, long d = 1) { return Rational(n, d); }

VectorList a2_weights() { return VectorList(2, {{1, 0}, {0, 1}, {1, 1}}); }

std::vector<FaceDistribution> halfline_list(int nmax) {
    std::vector<FaceDistribution> out;
    for (int n = 0; n <= nmax; ++n) out.push_back(dh_halfline(Rational(0), 1, n));
    return out;
}

}  // namespace

TEST_CASE("weight list validation") {
    CHECK_THROWS_WITH(VectorList(2, {{1, 0}, {-1, 0}}), ContainsSubstring("non-pointed"));
    CHECK_THROWS_WITH(VectorList(2, {{1, 0}, {1, 2}}), ContainsSubstring("non-unimodular"));
    CHECK_THROWS_WITH(VectorList(1, {{2}}), ContainsSubstring("non-unimodular"));
    CHECK_THROWS_WITH(VectorList(2, {{1, 0}, {0, 0}}), ContainsSubstring("zero weight"));
    CHECK_THROWS_WITH(VectorList(2, {{1}}), ContainsSubstring("dimension"));

    auto d = a2_weights();
    const Vec& g = d.pointing_direction();
    for (const auto& w : d.weights()) {
        Rational h;
        for (size_t i = 0; i < w.size(); ++i) h += Rational(w[i]) * g[i];
        CHECK(h >= rq(1));
    }
}

TEST_CASE("partition counts by memoized recursion") {
    PartitionCount K(a2_weights());
    CHECK(K({3, 2}) == rq(3));
    CHECK(K({2, 3}) == rq(3));
    CHECK(K({0, 0}) == rq(1));
    CHECK(K({5, 0}) == rq(1));
    CHECK(K({-1, 2}) == rq(0));
    CHECK(K({4, 4}) == rq(5));
    // closed form min(a, b) + 1 on the positive quadrant
    for (long long a = 0; a <= 6; ++a)
        for (long long b = 0; b <= 6; ++b)
            CHECK(K({a, b}) == Rational(std::min(a, b) + 1));

    PartitionCount K2(VectorList(1, {{1}, {1}}));
    auto rows = K2.table({{0, 3}});
    REQUIRE(rows.size() == 4);
    for (long long j = 0; j <= 3; ++j) {
        CHECK(rows[static_cast<size_t>(j)].first == IVec{j});
        CHECK(rows[static_cast<size_t>(j)].second == Rational(j + 1));
    }
}

TEST_CASE("two-dimensional spline fan of the standard three weights") {
    auto T = truncated_power_fan({{1, 0}, {0, 1}, {1, 1}});
    REQUIRE(T.sectors.size() == 2);
    CHECK(T.sectors[0].u == IVec{1, 0});
    CHECK(T.sectors[0].v == IVec{1, 1});
    CHECK(T.sectors[0].density == MultiPoly::variable("x2"));
    CHECK(T.sectors[1].u == IVec{1, 1});
    CHECK(T.sectors[1].v == IVec{0, 1});
    CHECK(T.sectors[1].density == MultiPoly::variable("x1"));

    // doubled diagonal weight: integrating min along the diagonal gives
    // int_0^{x2} (x2 - s) ds = x2^2 / 2 on the sector x1 >= x2
    auto Q = truncated_power_fan({{1, 0}, {0, 1}, {1, 1}, {1, 1}});
    REQUIRE(Q.sectors.size() == 2);
    auto x1 = MultiPoly::variable("x1");
    auto x2 = MultiPoly::variable("x2");
    CHECK(Q.sectors[0].density == rq(1, 2) * x2 * x2);
    CHECK(Q.sectors[1].density == rq(1, 2) * x1 * x1);
    // total mass over the unit box matches the volume of
    // {t >= 0, t1 + t3 + t4 <= 1, t2 + t3 + t4 <= 1}
    Rational mass;
    for (const auto& s : Q.sectors) {
        FaceDistribution piece(2);
        DistTerm t;
        t.base = {rq(0), rq(0)};
        t.blocks = {{Rail{s.u, std::nullopt}, Rail{s.v, std::nullopt}}};
        MultiPoly i1 = Rational(s.u[0]) * MultiPoly::variable("t1") +
                       Rational(s.v[0]) * MultiPoly::variable("t2");
        MultiPoly i2 = Rational(s.u[1]) * MultiPoly::variable("t1") +
                       Rational(s.v[1]) * MultiPoly::variable("t2");
        Rational jac = Rational(s.u[0] * s.v[1] - s.u[1] * s.v[0]).abs();
        t.density = jac * s.density.substitute({{"x1", i1}, {"x2", i2}});
        piece.add_term(t);
        mass += piece.pair(TestFunction::exact(
            2, MultiPoly::constant(rq(1)),
            {PiecewisePoly1D::indicator(rq(0), rq(1)), PiecewisePoly1D::indicator(rq(0), rq(1))}));
    }
    CHECK(mass == rq(1, 12));
}

TEST_CASE("graded family of a single ray matches the half-line family") {
    auto D = partition_distributions(VectorList(1, {{1}}), 5);
    for (int n = 0; n <= 5; ++n) {
        auto got = canonicalize_1d(D[static_cast<size_t>(n)]);
        auto want = canonicalize_1d(dh_halfline(rq(0), 1, n));
        INFO("order " << n);
        CHECK(got == want);
    }
}

TEST_CASE("graded family of two parallel rays matches graded convolution") {
    auto D = partition_distributions(VectorList(1, {{1}, {1}}), 4);
    auto H = halfline_list(4);

    auto C0 = canonicalize_1d(D[0]);
    REQUIRE(C0.ray_pos.has_value());
    CHECK(C0.ray_pos->first == rq(0));
    CHECK(C0.ray_pos->second == MultiPoly::variable("x"));
    CHECK(C0.atoms.empty());

    auto C1 = canonicalize_1d(D[1]);
    REQUIRE(C1.ray_pos.has_value());
    CHECK(C1.ray_pos->second == MultiPoly::constant(rq(1)));

    auto C2 = canonicalize_1d(D[2]);
    CHECK(!C2.ray_pos);
    CHECK(C2.segment.is_zero());
    CHECK(C2.atoms == std::map<std::pair<Rational, int>, Rational>{{{rq(0), 0}, rq(5, 12)}});

    auto C3 = canonicalize_1d(D[3]);
    CHECK(C3.atoms == std::map<std::pair<Rational, int>, Rational>{{{rq(0), 1}, rq(-1, 12)}});

    // the ray-with-derivative tuples agree with the convolution engine
    for (int n = 1; n <= 4; ++n) {
        INFO("order " << n);
        CHECK(canonicalize_1d(D[static_cast<size_t>(n)]) ==
              canonicalize_1d(dh_convolve_graded(H, H, n)));
    }
}

TEST_CASE("graded family of the standard three weights") {
    auto D = partition_distributions(a2_weights(), 3);

    // order zero: the min(x1, x2) spline on two sectors
    REQUIRE(D[0].terms().size() == 2);
    for (const auto& t : D[0].terms()) {
        REQUIRE(t.blocks.size() == 1);
        REQUIRE(t.blocks[0].size() == 2);
        CHECK(t.ops.empty());
    }

    // a separable test function supported where x1 < x2 sees density x1
    auto psi1 = PiecewisePoly1D::bump_power(rq(1, 2), rq(1, 4), 2);
    auto psi2 = PiecewisePoly1D::bump_power(rq(2), rq(1, 2), 2);
    auto f_lo = TestFunction::separable({psi1, psi2});
    auto ray = dh_halfline(rq(0), 1, 0);
    Rational a = ray.pair(TestFunction::exact(1, MultiPoly::variable("x1"), {psi1}));
    Rational b = ray.pair(TestFunction::exact(1, MultiPoly::constant(rq(1)), {psi2}));
    CHECK(D[0].pair(f_lo) == a * b);
    // mirrored support sees density x2
    auto f_hi = TestFunction::separable({psi2, psi1});
    CHECK(D[0].pair(f_hi) == b * a);

    // order one: three half-weight cone measures
    REQUIRE(D[1].terms().size() == 3);
    for (const auto& t : D[1].terms()) {
        CHECK(t.density == MultiPoly::constant(rq(1, 2)));
        CHECK(t.ops.empty());
    }
    // pairing with a wide plateau over [0, 3]^2 gives half the areas of the
    // three sectors clipped to the plateau core plus ramp contributions;
    // instead pair with a bump strictly inside the quadrant interior where
    // all three cones overlap
    auto bump = PiecewisePoly1D::bump_power(rq(3, 2), rq(1, 2), 2);
    auto f_mid = TestFunction::separable({bump, bump});
    Rational w = ray.pair(TestFunction::exact(1, MultiPoly::constant(rq(1)), {bump}));
    // cones (x>=0,y>=0), (x>=y>=0), (y>=x>=0) all contain the bump support
    // except the two diagonal cones split it; their halves sum to the square
    Rational full = w * w;
    Rational diag_sum = D[1].pair(f_mid) - rq(1, 2) * full;
    CHECK(diag_sum == rq(1, 2) * full);

    // numeric agreement on a straddling test function
    auto fn = [](const std::vector<double>& x) {
        double a0 = 1.0 - (x[0] - 1.5) * (x[0] - 1.5);
        double b0 = 1.0 - (x[1] - 1.5) * (x[1] - 1.5);
        if (a0 < 0 || b0 < 0) return 0.0;
        return a0 * a0 * b0 * b0;
    };
    auto f_num = TestFunction::numeric(2, fn, {{0.5, 2.5}, {0.5, 2.5}});
    auto f_exact = TestFunction::separable({PiecewisePoly1D::bump_power(rq(3, 2), rq(1), 2),
                                            PiecewisePoly1D::bump_power(rq(3, 2), rq(1), 2)});
    CHECK(std::fabs(D[0].pair_numeric(f_num) - D[0].pair(f_exact).to_double()) < 1e-6);
}

TEST_CASE("scaled partition sums approach the graded pairings") {
    auto delta = a2_weights();
    PartitionCount K(delta);
    auto D = partition_distributions(delta, 4);

    // each weight contributes one power of k, so with three weights the sum
    // of K(lambda) f(lambda/k) opens with k^3 times the density pairing
    auto bump = PiecewisePoly1D::bump_power(rq(3, 2), rq(1), 4);
    auto f = TestFunction::separable({bump, bump});
    std::vector<Rational> d;
    for (const auto& Dn : D) d.push_back(Dn.pair(f));
    // swapping the two coordinates fixes f and negates the odd orders
    CHECK(d[3] == rq(0));

    auto scaled_sum = [&](long long k) {
        Rational s;
        for (long long a = k / 2; a <= 3 * k; ++a)
            for (long long b = k / 2; b <= 3 * k; ++b) {
                Rational fv = f.eval_exact({Rational(a, k), Rational(b, k)});
                if (!fv.is_zero()) s += K({a, b}) * fv;
            }
        return s;
    };
    auto err = [&](long long k, int nmax) {
        Rational model;
        Rational kq(k);
        for (int n = 0; n <= nmax; ++n) model += kq.pow(3 - n) * d[static_cast<size_t>(n)];
        return std::fabs((scaled_sum(k) - model).to_double());
    };

    // truncating after the k^1 order leaves an error of lower order
    CHECK(err(16, 2) < err(8, 2) / 1.5);
    // the full family through order four tracks the sum much more closely
    double e8 = err(8, 4), e16 = err(16, 4);
    CHECK(e16 < e8 / 3);
    CHECK(e16 < 1e-6 * std::fabs((Rational(4096) * d[0]).to_double()));
}

TEST_CASE("chamber polynomials and their continuity") {
    auto delta = a2_weights();
    PartitionCount K(delta);
    auto chambers = chamber_counts(K);
    REQUIRE(chambers.size() == 2);
    auto x1 = MultiPoly::variable("x1");
    auto x2 = MultiPoly::variable("x2");
    CHECK(chambers[0].u == IVec{1, 0});
    CHECK(chambers[0].v == IVec{1, 1});
    CHECK(chambers[0].count == x2 + MultiPoly::constant(rq(1)));
    CHECK(chambers[1].u == IVec{1, 1});
    CHECK(chambers[1].v == IVec{0, 1});
    CHECK(chambers[1].count == x1 + MultiPoly::constant(rq(1)));

    auto rep = verify_chamber_continuity(K, chambers, 5);
    CHECK(rep.ok);

    PartitionCount K1(VectorList(1, {{1}, {1}}));
    auto ch1 = chamber_counts(K1);
    REQUIRE(ch1.size() == 1);
    CHECK(ch1[0].count == x1 + MultiPoly::constant(rq(1)));
    CHECK(verify_chamber_continuity(K1, ch1, 8).ok);
}

TEST_CASE("generating function identity with a rational tail bound") {
    auto delta = a2_weights();
    PartitionCount K(delta);
    Rational t1(1, 2), t2(1, 3);
    Rational full = rq(1) / ((rq(1) - t1) * (rq(1) - t2) * (rq(1) - t1 * t2));

    auto partial = [&](long long J) {
        Rational s;
        for (long long a = 0; a <= J; ++a)
            for (long long b = 0; b <= J; ++b) s += K({a, b}) * t1.pow(a) * t2.pow(b);
        return s;
    };
    auto bound = [&](long long J) {
        // weights outside the box are dominated coordinatewise
        return t1.pow(J + 1) / ((rq(1) - t1) * (rq(1) - t2) * (rq(1) - t2)) +
               t2.pow(J + 1) / ((rq(1) - t2) * (rq(1) - t1) * (rq(1) - t1));
    };
    for (long long J : {6LL, 10LL, 14LL}) {
        Rational tail = full - partial(J);
        CHECK(tail >= rq(0));
        CHECK(tail <= bound(J));
    }
    CHECK(bound(14) < bound(6));
}
