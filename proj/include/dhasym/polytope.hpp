#pragma once

// Rational convex polytopes with integer facet normals, at desk scale:
// exact vertex enumeration, lattice point listing, tangent cones, face
// lattice, and the Delzant (smoothness) check.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dhasym/linalg.hpp"
#include "dhasym/rational.hpp"

namespace dhasym {

// normal . x <= offset
struct Halfspace {
    IVec normal;
    Rational offset;
};

struct VertexCone {
    Vec vertex;
    std::vector<IVec> generators;  // primitive edge directions
};

// A vertex cone with every generator flipped into the lexicographically
// positive half-space. Flipped generators become half-open (their lattice
// coefficient must be at least one) and each flip negates the sign.
struct PolarizedCone {
    VertexCone cone;
    std::vector<bool> strict;
    int sign = 1;
};

inline PolarizedCone polarize_lex(VertexCone cone) {
    PolarizedCone out;
    out.strict.assign(cone.generators.size(), false);
    int flips = 0;
    for (size_t e = 0; e < cone.generators.size(); ++e) {
        if (!lex_positive(cone.generators[e])) {
            cone.generators[e] = ivec_neg(cone.generators[e]);
            out.strict[e] = true;
            ++flips;
        }
    }
    out.cone = std::move(cone);
    out.sign = flips % 2 == 1 ? -1 : 1;
    return out;
}

struct Face {
    std::vector<size_t> vertex_ids;  // indices into vertices(), sorted
    std::vector<size_t> active;      // halfspace indices tight on the face
    int dim;
};

namespace detail {

inline std::vector<LinIneq> to_ineqs(const std::vector<Halfspace>& hs) {
    std::vector<LinIneq> sys;
    sys.reserve(hs.size());
    for (const auto& h : hs) sys.push_back({to_vec(h.normal), h.offset});
    return sys;
}

// All vertices of {x : sys}, by enumerating maximal-rank active subsets.
// The caller is responsible for boundedness; every basic feasible point is
// returned, sorted lexicographically.
inline std::vector<Vec> enumerate_basic_points(const std::vector<LinIneq>& sys, size_t nvars) {
    std::vector<Vec> found;
    size_t m = sys.size();
    if (m < nvars) return found;
    std::vector<size_t> idx(nvars);
    // iterate over nvars-subsets of constraints
    std::vector<size_t> comb(nvars);
    for (size_t i = 0; i < nvars; ++i) comb[i] = i;
    auto advance = [&]() -> bool {
        size_t i = nvars;
        while (i > 0) {
            --i;
            if (comb[i] != i + m - nvars) {
                ++comb[i];
                for (size_t j = i + 1; j < nvars; ++j) comb[j] = comb[j - 1] + 1;
                return true;
            }
        }
        return false;
    };
    if (nvars == 0) return found;
    do {
        RMat A(nvars);
        Vec b(nvars);
        for (size_t i = 0; i < nvars; ++i) {
            A[i] = sys[comb[i]].a;
            b[i] = sys[comb[i]].b;
        }
        if (det(A).is_zero()) continue;
        Vec p = solve_square(A, b);
        bool feasible = true;
        for (const auto& q : sys) {
            if (dot(q.a, p) > q.b) {
                feasible = false;
                break;
            }
        }
        if (feasible) found.push_back(p);
    } while (advance());
    std::sort(found.begin(), found.end(), [](const Vec& a, const Vec& b) {
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] < b[i]) return true;
            if (b[i] < a[i]) return false;
        }
        return false;
    });
    found.erase(std::unique(found.begin(), found.end()), found.end());
    return found;
}

inline int affine_dim(const std::vector<Vec>& pts) {
    if (pts.empty()) return -1;
    RMat diffs;
    for (size_t i = 1; i < pts.size(); ++i) diffs.push_back(vec_sub(pts[i], pts[0]));
    if (diffs.empty()) return 0;
    return static_cast<int>(rank(diffs));
}

// Convex hull of 2d points (monotone chain); returns the hull in counter-
// clockwise order without repeated endpoints. Collinear input collapses.
inline std::vector<Vec> convex_hull_2d(std::vector<Vec> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
        if (a[0] != b[0]) return a[0] < b[0];
        return a[1] < b[1];
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 2) return pts;
    auto cross = [](const Vec& o, const Vec& a, const Vec& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<Vec> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2 &&
               cross(hull[hull.size() - 2], hull.back(), p) <= Rational(0))
            hull.pop_back();
        hull.push_back(p);
    }
    size_t lower = hull.size() + 1;
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
        while (hull.size() >= lower &&
               cross(hull[hull.size() - 2], hull.back(), *it) <= Rational(0))
            hull.pop_back();
        hull.push_back(*it);
    }
    hull.pop_back();
    return hull;
}

}  // namespace detail

class LatticePolytope {
public:
    LatticePolytope(size_t dim, std::vector<Halfspace> halfspaces)
        : dim_(dim), halfspaces_(std::move(halfspaces)) {
        for (auto& h : halfspaces_) {
            if (h.normal.size() != dim_)
                throw std::invalid_argument("LatticePolytope: normal dimension mismatch");
            long long g = ivec_gcd(h.normal);
            if (g == 0) throw std::invalid_argument("LatticePolytope: zero facet normal");
            if (g > 1) {
                for (auto& x : h.normal) x /= g;
                h.offset /= Rational(g);
            }
        }
    }

    // Vertex input; supported for dim 1 and 2.
    static LatticePolytope from_vertices(size_t dim, const std::vector<Vec>& pts) {
        if (pts.empty()) throw std::invalid_argument("from_vertices: no points");
        for (const auto& p : pts)
            if (p.size() != dim) throw std::invalid_argument("from_vertices: point dimension");
        if (dim == 1) {
            Rational lo = pts[0][0], hi = pts[0][0];
            for (const auto& p : pts) {
                lo = std::min(lo, p[0]);
                hi = std::max(hi, p[0]);
            }
            return LatticePolytope(1, {{{1}, hi}, {{-1}, -lo}});
        }
        if (dim != 2)
            throw std::invalid_argument("from_vertices: only dimensions 1 and 2 supported");
        auto hull = detail::convex_hull_2d(pts);
        if (detail::affine_dim(hull) < 2)
            throw std::domain_error("polytope degenerate: affine dimension below ambient");
        std::vector<Halfspace> hs;
        for (size_t i = 0; i < hull.size(); ++i) {
            const Vec& p = hull[i];
            const Vec& q = hull[(i + 1) % hull.size()];
            Vec d = vec_sub(q, p);
            // hull is counterclockwise, so (d1, -d0) points outward
            Rational n0 = d[1], n1 = -d[0];
            // scale to a primitive integer normal
            mpz_class den_lcm;
            mpz_lcm(den_lcm.get_mpz_t(), n0.den().get_mpz_t(), n1.den().get_mpz_t());
            Rational s{mpz_class(den_lcm)};
            mpz_class i0 = (n0 * s).num(), i1 = (n1 * s).num();
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), i0.get_mpz_t(), i1.get_mpz_t());
            i0 /= g;
            i1 /= g;
            IVec n = {i0.get_si(), i1.get_si()};
            hs.push_back({n, dot(n, p)});
        }
        return LatticePolytope(2, std::move(hs));
    }

    // Builds from halfspaces and checks the advertised vertex set matches.
    static LatticePolytope from_both(size_t dim, std::vector<Halfspace> halfspaces,
                                     std::vector<Vec> advertised) {
        LatticePolytope p(dim, std::move(halfspaces));
        auto verts = p.vertices();
        std::sort(advertised.begin(), advertised.end(), [](const Vec& a, const Vec& b) {
            for (size_t i = 0; i < a.size(); ++i) {
                if (a[i] < b[i]) return true;
                if (b[i] < a[i]) return false;
            }
            return false;
        });
        if (verts != advertised)
            throw std::invalid_argument(
                "LatticePolytope: vertex and halfspace representations disagree");
        return p;
    }

    size_t dim() const { return dim_; }
    const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }

    bool empty() const { return !fm_feasible(detail::to_ineqs(halfspaces_), dim_); }

    bool contains(const Vec& p) const {
        for (const auto& h : halfspaces_)
            if (dot(h.normal, p) > h.offset) return false;
        return true;
    }

    bool bounded() const {
        auto sys = detail::to_ineqs(halfspaces_);
        for (size_t i = 0; i < dim_; ++i) {
            auto b = fm_var_bounds(sys, dim_, i);
            if (!b.lo || !b.hi) return false;
        }
        return true;
    }

    // Vertices sorted lexicographically. Empty polytope gives an empty list;
    // unbounded or lower-dimensional input is refused.
    const std::vector<Vec>& vertices() const {
        if (verts_) return *verts_;
        auto sys = detail::to_ineqs(halfspaces_);
        if (!fm_feasible(sys, dim_)) {
            verts_ = std::vector<Vec>{};
            return *verts_;
        }
        if (!bounded()) throw std::domain_error("polytope unbounded");
        auto v = detail::enumerate_basic_points(sys, dim_);
        if (detail::affine_dim(v) < static_cast<int>(dim_))
            throw std::domain_error("polytope degenerate: affine dimension below ambient");
        verts_ = std::move(v);
        return *verts_;
    }

    LatticePolytope dilate(long k) const {
        if (k < 1) throw std::invalid_argument("dilate: factor must be positive");
        auto hs = halfspaces_;
        for (auto& h : hs) h.offset *= Rational(k);
        return LatticePolytope(dim_, std::move(hs));
    }

    // All lattice points, sorted lexicographically.
    std::vector<IVec> lattice_points() const {
        if (empty()) return {};
        if (!bounded()) throw std::domain_error("polytope unbounded");
        std::vector<IVec> out;
        IVec current(dim_);
        enumerate_points(detail::to_ineqs(halfspaces_), 0, current, out);
        return out;
    }

    // Tangent cone at a vertex of a simple polytope: generators are the
    // primitive directions of the edges leaving the vertex.
    VertexCone tangent_cone(const Vec& vertex) const {
        std::vector<size_t> act = active_at(vertex);
        if (act.size() < dim_)
            throw std::invalid_argument("tangent_cone: point is not a vertex");
        if (act.size() > dim_)
            throw std::domain_error("tangent_cone: vertex is not simple");
        RMat N(dim_);
        for (size_t i = 0; i < dim_; ++i) N[i] = to_vec(halfspaces_[act[i]].normal);
        RMat Ninv = inverse(N);  // throws if normals are dependent
        VertexCone cone;
        cone.vertex = vertex;
        for (size_t j = 0; j < dim_; ++j) {
            // direction with N.d = -e_j: stays tight on all other facets
            Vec d(dim_);
            for (size_t i = 0; i < dim_; ++i) d[i] = -Ninv[i][j];
            cone.generators.push_back(primitive_direction(d));
        }
        return cone;
    }

    struct DelzantReport {
        bool ok = true;
        std::optional<Vec> witness;  // a failing vertex
        std::string reason;
    };

    DelzantReport delzant_check() const {
        DelzantReport rep;
        for (const auto& v : vertices()) {
            for (const auto& c : v)
                if (!c.is_integer()) {
                    rep.ok = false;
                    rep.witness = v;
                    rep.reason = "vertex is not a lattice point";
                    return rep;
                }
            VertexCone cone;
            try {
                cone = tangent_cone(v);
            } catch (const std::domain_error&) {
                rep.ok = false;
                rep.witness = v;
                rep.reason = "vertex is not simple";
                return rep;
            }
            long long d = idet(cone.generators);
            if (d != 1 && d != -1) {
                rep.ok = false;
                rep.witness = v;
                rep.reason = "edge generators are not unimodular";
                return rep;
            }
        }
        return rep;
    }

    bool is_delzant() const { return delzant_check().ok; }

    // Nonempty faces of all dimensions, including the polytope itself.
    std::vector<Face> faces() const {
        const auto& verts = vertices();
        std::vector<std::vector<size_t>> vertex_active(verts.size());
        for (size_t i = 0; i < verts.size(); ++i) vertex_active[i] = active_at(verts[i]);
        std::set<std::vector<size_t>> seen;
        std::vector<Face> out;
        for (size_t i = 0; i < verts.size(); ++i) {
            const auto& act = vertex_active[i];
            size_t n = act.size();
            for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
                std::vector<size_t> sel;
                for (size_t b = 0; b < n; ++b)
                    if (mask & (size_t{1} << b)) sel.push_back(act[b]);
                std::vector<size_t> members;
                for (size_t j = 0; j < verts.size(); ++j) {
                    if (std::includes(vertex_active[j].begin(), vertex_active[j].end(),
                                      sel.begin(), sel.end()))
                        members.push_back(j);
                }
                if (members.empty() || !seen.insert(members).second) continue;
                Face f;
                f.vertex_ids = members;
                // common active set over the members
                f.active = vertex_active[members[0]];
                for (size_t j = 1; j < members.size(); ++j) {
                    std::vector<size_t> tmp;
                    std::set_intersection(f.active.begin(), f.active.end(),
                                          vertex_active[members[j]].begin(),
                                          vertex_active[members[j]].end(),
                                          std::back_inserter(tmp));
                    f.active = std::move(tmp);
                }
                std::vector<Vec> pts;
                for (size_t j : members) pts.push_back(verts[j]);
                f.dim = detail::affine_dim(pts);
                out.push_back(std::move(f));
            }
        }
        std::sort(out.begin(), out.end(), [](const Face& a, const Face& b) {
            if (a.dim != b.dim) return a.dim < b.dim;
            return a.vertex_ids < b.vertex_ids;
        });
        return out;
    }

private:
    std::vector<size_t> active_at(const Vec& p) const {
        if (p.size() != dim_) throw std::invalid_argument("active_at: dimension mismatch");
        if (!contains(p)) throw std::invalid_argument("active_at: point outside polytope");
        std::vector<size_t> act;
        for (size_t i = 0; i < halfspaces_.size(); ++i)
            if (dot(halfspaces_[i].normal, p) == halfspaces_[i].offset) act.push_back(i);
        return act;
    }

    static IVec primitive_direction(const Vec& d) {
        mpz_class l(1);
        for (const auto& c : d) {
            mpz_class den = c.den();
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
        }
        IVec out(d.size());
        for (size_t i = 0; i < d.size(); ++i) {
            Rational scaled = d[i] * Rational(l);
            out[i] = scaled.num().get_si();
        }
        return primitive(out);
    }

    void enumerate_points(const std::vector<LinIneq>& sys, size_t var, IVec& current,
                          std::vector<IVec>& out) const {
        if (var == dim_) {
            out.push_back(current);
            return;
        }
        // bounds of coordinate `var` given the fixed prefix
        std::vector<LinIneq> fixed;
        for (const auto& q : sys) {
            LinIneq r;
            r.b = q.b;
            for (size_t i = 0; i < var; ++i) r.b -= q.a[i] * Rational(current[i]);
            r.a.assign(q.a.begin() + static_cast<long>(var), q.a.end());
            fixed.push_back(std::move(r));
        }
        auto b = fm_var_bounds(fixed, dim_ - var, 0);
        if (b.empty) return;
        if (!b.lo || !b.hi) throw std::domain_error("polytope unbounded");
        mpz_class lo = b.lo->ceil(), hi = b.hi->floor();
        for (mpz_class x = lo; x <= hi; x = x + 1) {
            current[var] = x.get_si();
            // quick feasibility cut on the fixed prefix
            bool ok = true;
            for (const auto& q : fixed) {
                bool rest_zero = true;
                for (size_t i = 1; i < q.a.size(); ++i) rest_zero = rest_zero && q.a[i].is_zero();
                if (rest_zero && q.a[0] * Rational(current[var]) > q.b) {
                    ok = false;
                    break;
                }
            }
            if (ok) enumerate_points(sys, var + 1, current, out);
        }
    }

    size_t dim_;
    std::vector<Halfspace> halfspaces_;
    mutable std::optional<std::vector<Vec>> verts_;
};

}  // namespace dhasym
