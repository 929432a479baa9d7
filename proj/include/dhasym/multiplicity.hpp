#pragma once

// Lattice multiplicity data for rank-r torus representations. A multiplicity
// function assigns an exact weight to every lattice point at each twist k and
// declares a finite support box. The header also provides the signed
// polarized vertex-cone decomposition for pointwise lattice counts, the
// rank-one closed form of a cone character, and the two-chamber wall
// decomposition of the tent profile.

#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dhasym/linalg.hpp"
#include "dhasym/multipoly.hpp"
#include "dhasym/polytope.hpp"
#include "dhasym/rational.hpp"

namespace dhasym {

struct MultiplicityFunction {
    size_t rank = 0;
    std::string name;
    // weight of the lattice point lambda at twist k
    std::function<Rational(const IVec&, long long)> eval;
    // closed per-coordinate bounds [lo, hi] containing the support at twist k
    std::function<std::vector<std::pair<long long, long long>>(long long)> support_box;
};

namespace detail {

// Iterates all integer points of a box, calling fn(point).
inline void for_each_lattice_point(const std::vector<std::pair<long long, long long>>& box,
                                   const std::function<void(const IVec&)>& fn) {
    size_t r = box.size();
    for (const auto& [lo, hi] : box)
        if (hi < lo) return;
    IVec p(r);
    for (size_t i = 0; i < r; ++i) p[i] = box[i].first;
    while (true) {
        fn(p);
        size_t i = 0;
        while (i < r && p[i] == box[i].second) {
            p[i] = box[i].first;
            ++i;
        }
        if (i == r) return;
        ++p[i];
    }
}

}  // namespace detail

// Counting measure of the dilated polytope: weight one on kP, zero elsewhere.
inline MultiplicityFunction toric_multiplicity(const LatticePolytope& P, std::string name = "") {
    auto hs = P.halfspaces();
    auto verts = P.vertices();
    if (verts.empty()) throw std::invalid_argument("toric_multiplicity: empty polytope");
    MultiplicityFunction M;
    M.rank = P.dim();
    M.name = name.empty() ? "polytope counts" : std::move(name);
    M.eval = [hs](const IVec& lambda, long long k) {
        if (k < 0) return Rational(0);
        for (const auto& h : hs) {
            Rational lhs;
            for (size_t i = 0; i < h.normal.size(); ++i)
                lhs += Rational(h.normal[i]) * Rational(lambda[i]);
            if (lhs > Rational(k) * h.offset) return Rational(0);
        }
        return Rational(1);
    };
    size_t d = P.dim();
    M.support_box = [verts, d](long long k) {
        std::vector<std::pair<long long, long long>> box(d);
        for (size_t i = 0; i < d; ++i) {
            Rational lo = verts[0][i], hi = verts[0][i];
            for (const auto& v : verts) {
                lo = std::min(lo, v[i]);
                hi = std::max(hi, v[i]);
            }
            box[i] = {(Rational(k) * lo).floor().get_si(), (Rational(k) * hi).ceil().get_si()};
        }
        return box;
    };
    return M;
}

// Tent profile 2k+1-|j| on [-2k, 2k]: the rank-one multiplicity of the
// product of two projective lines.
inline MultiplicityFunction tent_multiplicity() {
    MultiplicityFunction M;
    M.rank = 1;
    M.name = "tent";
    M.eval = [](const IVec& lambda, long long k) {
        long long j = lambda[0];
        long long a = j < 0 ? -j : j;
        if (k < 0 || a > 2 * k) return Rational(0);
        return Rational(2 * k + 1 - a);
    };
    M.support_box = [](long long k) {
        return std::vector<std::pair<long long, long long>>{{-2 * k, 2 * k}};
    };
    return M;
}

inline MultiplicityFunction convolve_multiplicity(const MultiplicityFunction& A,
                                                  const MultiplicityFunction& B) {
    if (A.rank != B.rank)
        throw std::invalid_argument("convolve_multiplicity: rank mismatch");
    MultiplicityFunction M;
    M.rank = A.rank;
    M.name = A.name + " * " + B.name;
    M.eval = [A, B](const IVec& lambda, long long k) {
        Rational total;
        detail::for_each_lattice_point(A.support_box(k), [&](const IVec& mu) {
            Rational a = A.eval(mu, k);
            if (a.is_zero()) return;
            IVec rest(lambda.size());
            for (size_t i = 0; i < lambda.size(); ++i) rest[i] = lambda[i] - mu[i];
            total += a * B.eval(rest, k);
        });
        return total;
    };
    M.support_box = [A, B](long long k) {
        auto ba = A.support_box(k);
        auto bb = B.support_box(k);
        std::vector<std::pair<long long, long long>> box(ba.size());
        for (size_t i = 0; i < ba.size(); ++i)
            box[i] = {ba[i].first + bb[i].first, ba[i].second + bb[i].second};
        return box;
    };
    return M;
}

// Character value sum_lambda m(lambda, k) * prod_i t_i^lambda_i over the
// declared support box. Coordinates of t must be nonzero.
inline Rational character_eval(const MultiplicityFunction& M, const Vec& t, long long k) {
    if (t.size() != M.rank)
        throw std::invalid_argument("character_eval: point dimension mismatch");
    for (const auto& c : t)
        if (c.is_zero())
            throw std::invalid_argument("character_eval: point must have nonzero coordinates");
    Rational total;
    detail::for_each_lattice_point(M.support_box(k), [&](const IVec& lambda) {
        Rational m = M.eval(lambda, k);
        if (m.is_zero()) return;
        Rational term = m;
        for (size_t i = 0; i < t.size(); ++i) term *= t[i].pow(lambda[i]);
        total += term;
    });
    return total;
}

// One signed cone of the polarized vertex decomposition. At twist k the apex
// sits at k * vertex; a lattice point belongs to the cone when its generator
// coordinates are nonnegative integers, at least one for half-open edges.
struct ConeCharacter {
    Vec vertex;
    std::vector<IVec> generators;
    std::vector<bool> strict;
    int sign = 1;

    bool contains(const IVec& lambda, long long k) const {
        size_t d = vertex.size();
        RMat M(d, Vec(d));
        for (size_t i = 0; i < d; ++i)
            for (size_t j = 0; j < d; ++j) M[i][j] = Rational(generators[j][i]);
        Vec rhs(d);
        for (size_t i = 0; i < d; ++i)
            rhs[i] = Rational(lambda[i]) - Rational(k) * vertex[i];
        Vec c = solve_square(M, rhs);
        for (size_t j = 0; j < d; ++j) {
            if (!c[j].is_integer()) return false;
            if (c[j] < Rational(strict[j] ? 1 : 0)) return false;
        }
        return true;
    }
};

inline std::vector<ConeCharacter> polarized_vertex_characters(const LatticePolytope& P) {
    auto rep = P.delzant_check();
    if (!rep.ok)
        throw std::domain_error("character data requires Delzant input: " + rep.reason);
    std::vector<ConeCharacter> out;
    for (const auto& v : P.vertices()) {
        PolarizedCone pc = polarize_lex(P.tangent_cone(v));
        ConeCharacter cc;
        cc.vertex = pc.cone.vertex;
        cc.generators = pc.cone.generators;
        cc.strict = pc.strict;
        cc.sign = pc.sign;
        out.push_back(std::move(cc));
    }
    return out;
}

// Signed lattice membership count: equals the plain count over kP pointwise.
inline Rational vertex_character_count(const std::vector<ConeCharacter>& cones,
                                       const IVec& lambda, long long k) {
    Rational total;
    for (const auto& c : cones)
        if (c.contains(lambda, k)) total += Rational(c.sign);
    return total;
}

// Closed form of a rank-one cone character at a point t: the geometric series
// sum_{c >= c0} t^(apex + c g) summed as a rational function. Valid at every
// t with t != 0, 1; pointwise convergence is not required because the signed
// sum over all vertices is a polynomial identity.
inline Rational cone_character_rank1(const ConeCharacter& C, const Rational& t, long long k) {
    if (C.vertex.size() != 1)
        throw std::invalid_argument("cone_character_rank1: rank-one cones only");
    if (t.is_zero() || t == Rational(1))
        throw std::domain_error("cone_character_rank1: point must avoid 0 and 1");
    Rational apex = Rational(k) * C.vertex[0];
    if (!apex.is_integer())
        throw std::domain_error("cone_character_rank1: apex is not a lattice point");
    long g = static_cast<long>(C.generators[0][0]);
    long c0 = C.strict[0] ? 1 : 0;
    Rational tg = t.pow(g);
    Rational head = t.pow(apex.floor().get_si()) * tg.pow(c0);
    return Rational(C.sign) * head / (Rational(1) - tg);
}

// One wall piece of the two-chamber decomposition of the tent profile: a
// polynomial in the lattice coordinate j and the twist k, valid on the
// integer region cut out by the domain rows a.(j,k) <= b.
struct WallPiece {
    Rational beta;
    MultiPoly value;              // polynomial in variables "j" and "k"
    std::vector<LinIneq> domain;  // empty means all of Z

    Rational eval(long long j, long long k) const {
        for (const auto& q : domain) {
            Rational lhs = q.a[0] * Rational(j) + q.a[1] * Rational(k);
            if (lhs > q.b) return Rational(0);
        }
        return value.eval_map({{"j", Rational(j)}, {"k", Rational(k)}});
    }

    std::string str() const {
        std::ostringstream os;
        os << "beta=" << beta.str() << "  value " << value.str();
        if (!domain.empty()) {
            os << "  on";
            for (const auto& q : domain)
                os << " {" << q.a[0].str() << " j + " << q.a[1].str() << " k <= " << q.b.str()
                   << "}";
        }
        return os.str();
    }
};

// Decomposition of the tent profile into wall pieces for a regular value r of
// the moment interval [-2, 2]. Pieces attached to the outer walls are shared
// by both chambers; the pieces at r and at the interior wall 0 switch shape
// when r crosses 0. The piece values sum to the tent at every lattice point.
inline std::vector<WallPiece> tent_wall_pieces(const Rational& r) {
    Rational lo(-2), hi(2), zero(0);
    if (r <= lo || r >= hi || r == zero)
        throw std::domain_error("tent_wall_pieces: r must be a regular value in (-2, 2)");
    MultiPoly j = MultiPoly::variable("j");
    MultiPoly k = MultiPoly::variable("k");
    MultiPoly count = Rational(2) * k + MultiPoly::constant(Rational(1));  // 2k + 1

    std::vector<WallPiece> out;
    // outer wall -2: cancels the overshoot below j = -2k
    out.push_back({lo, Rational(-1) * (count + j),
                   {{{Rational(1), Rational(2)}, Rational(-1)}}});
    // outer wall 2: cancels the overshoot above j = 2k
    out.push_back({hi, j - count, {{{Rational(-1), Rational(2)}, Rational(-1)}}});
    if (r < zero) {
        out.push_back({r, count + j, {}});
        out.push_back({zero, Rational(-2) * j, {{{Rational(-1), Rational(0)}, Rational(-1)}}});
    } else {
        out.push_back({r, count - j, {}});
        out.push_back({zero, Rational(2) * j, {{{Rational(1), Rational(0)}, Rational(-1)}}});
    }
    return out;
}

inline Rational wall_pieces_eval(const std::vector<WallPiece>& pieces, long long j,
                                 long long k) {
    Rational total;
    for (const auto& p : pieces) total += p.eval(j, k);
    return total;
}

}  // namespace dhasym
