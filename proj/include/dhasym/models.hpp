#pragma once

// The bundled model corpus: lattice intervals, the unit square, the standard
// 2-simplex, the rank-one tent profile of a product of two projective lines,
// and the noncompact half-line and quadrant counters. Each builder fixes the
// multiplicity function, the homogeneity degree, and the graded family in one
// place so every verification route sees the same data.

#include <string>
#include <vector>

#include "dhasym/distribution.hpp"
#include "dhasym/multiplicity.hpp"
#include "dhasym/polytope.hpp"
#include "dhasym/rational.hpp"
#include "dhasym/theta.hpp"

namespace dhasym {

inline LatticePolytope interval_polytope(long long a, long long b) {
    std::vector<Halfspace> hs;
    hs.push_back({{1}, Rational(b)});
    hs.push_back({{-1}, Rational(-a)});
    return LatticePolytope(1, hs);
}

inline LatticePolytope unit_square_polytope() {
    return LatticePolytope(2, {{{1, 0}, Rational(1)},
                               {{0, 1}, Rational(1)},
                               {{-1, 0}, Rational(0)},
                               {{0, -1}, Rational(0)}});
}

inline LatticePolytope standard_simplex_polytope() {
    return LatticePolytope(2, {{{1, 1}, Rational(1)},
                               {{-1, 0}, Rational(0)},
                               {{0, -1}, Rational(0)}});
}

namespace detail {

inline std::vector<FaceDistribution> interval_family(const Rational& a, const Rational& b,
                                                     int nmax) {
    std::vector<FaceDistribution> out;
    for (int n = 0; n <= nmax; ++n) out.push_back(dh_interval(a, b, n));
    return out;
}

inline std::vector<FaceDistribution> halfline_family(int nmax) {
    std::vector<FaceDistribution> out;
    for (int n = 0; n <= nmax; ++n) out.push_back(dh_halfline(Rational(0), 1, n));
    return out;
}

}  // namespace detail

inline ThetaModel model_interval(long long a, long long b) {
    if (b <= a) throw std::invalid_argument("model_interval: needs a < b");
    ThetaModel m;
    m.name = "interval [" + std::to_string(a) + "," + std::to_string(b) + "]";
    m.mult = toric_multiplicity(interval_polytope(a, b), m.name + " counts");
    m.d = 1;
    m.dh = [a, b](int n) { return dh_interval(Rational(a), Rational(b), n); };
    return m;
}

inline ThetaModel model_square() {
    ThetaModel m;
    m.name = "unit square";
    m.mult = toric_multiplicity(unit_square_polytope(), "unit square counts");
    m.d = 2;
    m.dh = [](int n) {
        auto F = detail::interval_family(Rational(0), Rational(1), n);
        return dh_tensor_graded(F, F, n);
    };
    return m;
}

inline ThetaModel model_simplex() {
    ThetaModel m;
    m.name = "standard 2-simplex";
    m.mult = toric_multiplicity(standard_simplex_polytope(), "2-simplex counts");
    m.d = 2;
    LatticePolytope P = standard_simplex_polytope();
    m.dh = [P](int n) { return dh_delzant(P, n); };
    m.pair_box = {{Rational(-1), Rational(-1)}, {Rational(2), Rational(2)}};
    return m;
}

// Product of two projective lines in its one-dimensional moment coordinate:
// the tent multiplicity with twist scaling degree two.
inline ThetaModel model_p1p1() {
    ThetaModel m;
    m.name = "p1p1";
    m.mult = tent_multiplicity();
    m.d = 2;
    m.dh = [](int n) {
        auto F = detail::interval_family(Rational(-1), Rational(1), n);
        return dh_convolve_graded(F, F, n);
    };
    return m;
}

inline ThetaModel model_halfline() {
    ThetaModel m;
    m.name = "half-line";
    MultiplicityFunction mult;
    mult.rank = 1;
    mult.name = "half-line counts";
    mult.eval = [](const IVec& lambda, long long) {
        return lambda[0] >= 0 ? Rational(1) : Rational(0);
    };
    mult.support_box = [](long long) -> std::vector<std::pair<long long, long long>> {
        throw std::domain_error("half-line counts: support is unbounded");
    };
    m.mult = std::move(mult);
    m.d = 1;
    m.dh = [](int n) { return dh_halfline(Rational(0), 1, n); };
    m.compact = false;
    return m;
}

inline ThetaModel model_quadrant() {
    ThetaModel m;
    m.name = "quadrant";
    MultiplicityFunction mult;
    mult.rank = 2;
    mult.name = "quadrant counts";
    mult.eval = [](const IVec& lambda, long long) {
        return lambda[0] >= 0 && lambda[1] >= 0 ? Rational(1) : Rational(0);
    };
    mult.support_box = [](long long) -> std::vector<std::pair<long long, long long>> {
        throw std::domain_error("quadrant counts: support is unbounded");
    };
    m.mult = std::move(mult);
    m.d = 2;
    m.dh = [](int n) {
        auto F = detail::halfline_family(n);
        return dh_tensor_graded(F, F, n);
    };
    m.compact = false;
    return m;
}

// The five compact corpus models used by the exactness and counting checks.
inline std::vector<ThetaModel> compact_model_corpus() {
    std::vector<ThetaModel> out;
    out.push_back(model_interval(0, 1));
    out.push_back(model_interval(-2, 0));
    out.push_back(model_square());
    out.push_back(model_simplex());
    out.push_back(model_p1p1());
    return out;
}

}  // namespace dhasym
