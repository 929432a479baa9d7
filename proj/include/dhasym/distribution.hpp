#pragma once

// Polyhedral distributions with polynomial densities. A distribution is a
// finite sum of terms; each term carries a base point, bundles of segment or
// ray directions ("rails", grouped into independently integrated blocks), a
// polynomial density in the rail parameters, and directional derivatives to
// apply to the test function. The pairing engine evaluates
//
//   <term, f> = integral over t of density(t) * (D f)(base + sum_i t_i d_i)
//
// exactly, for test functions that are polynomials times per-coordinate
// piecewise polynomials. This single representation covers graded
// Duistermaat-Heckman coefficient distributions, their building blocks on
// intervals, half-lines and vertex cones, and truncated partition densities.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dhasym/bernoulli.hpp"
#include "dhasym/linalg.hpp"
#include "dhasym/multipoly.hpp"
#include "dhasym/piecewise.hpp"
#include "dhasym/polytope.hpp"
#include "dhasym/quadrature.hpp"
#include "dhasym/rational.hpp"
#include "dhasym/test_function.hpp"

namespace dhasym {

struct DerivOp {
    IVec dir;
    int order = 1;
};

struct Rail {
    IVec dir;
    std::optional<Rational> len;  // nullopt: a ray
};

struct DistTerm {
    Vec base;
    std::vector<std::vector<Rail>> blocks;
    MultiPoly density;  // in the rail parameters t1..tr, numbered across blocks
    std::vector<DerivOp> ops;
};

inline std::string rail_var(size_t i) { return "t" + std::to_string(i + 1); }

inline std::vector<std::string> rail_vars(size_t r) {
    std::vector<std::string> v;
    for (size_t i = 0; i < r; ++i) v.push_back(rail_var(i));
    return v;
}

namespace detail {

// Candidate local polynomial extensions of a piecewise factor at a point:
// strictly inside a piece there is one, at a breakpoint the adjacent pieces
// (and zero beyond the support) all qualify.
inline std::vector<MultiPoly> local_pieces(const PiecewisePoly1D& pw, const Rational& x,
                                           const std::string& xvar) {
    std::vector<MultiPoly> loc;
    auto add = [&](const MultiPoly& p) {
        for (const auto& q : loc)
            if (q == p) return;
        loc.push_back(p);
    };
    if (pw.is_zero()) {
        add(MultiPoly());
        return loc;
    }
    if (x <= pw.support_lo() || x >= pw.support_hi()) add(MultiPoly());
    const auto& br = pw.breaks();
    const auto& pc = pw.pieces();
    for (size_t i = 0; i + 1 < br.size(); ++i)
        if (x >= br[i] && x <= br[i + 1])
            add(pc[i].substitute({{"x", MultiPoly::variable(xvar)}}));
    return loc;
}

}  // namespace detail

class FaceDistribution {
public:
    explicit FaceDistribution(size_t dim) : dim_(dim) {}

    size_t dim() const { return dim_; }
    const std::vector<DistTerm>& terms() const { return terms_; }

    void add_term(DistTerm t) {
        if (t.base.size() != dim_)
            throw std::invalid_argument("FaceDistribution: base dimension mismatch");
        size_t r = 0;
        for (const auto& block : t.blocks)
            for (const auto& rl : block) {
                if (rl.dir.size() != dim_)
                    throw std::invalid_argument("FaceDistribution: rail dimension mismatch");
                bool nz = false;
                for (auto c : rl.dir) nz = nz || c != 0;
                if (!nz) throw std::invalid_argument("FaceDistribution: zero rail direction");
                if (rl.len && *rl.len < Rational(0))
                    throw std::invalid_argument("FaceDistribution: negative rail length");
                ++r;
            }
        for (const auto& op : t.ops) {
            if (op.dir.size() != dim_)
                throw std::invalid_argument("FaceDistribution: derivative dimension mismatch");
            bool nz = false;
            for (auto c : op.dir) nz = nz || c != 0;
            if (!nz || op.order < 1)
                throw std::invalid_argument("FaceDistribution: bad derivative operator");
        }
        auto tv = rail_vars(r);
        for (const auto& v : t.density.vars())
            if (std::find(tv.begin(), tv.end(), v) == tv.end())
                throw std::invalid_argument("FaceDistribution: density variable " + v +
                                            " is not a rail parameter");
        if (t.density.is_zero()) return;
        terms_.push_back(std::move(t));
    }

    FaceDistribution operator+(const FaceDistribution& o) const {
        if (dim_ != o.dim_) throw std::invalid_argument("FaceDistribution: dimension mismatch");
        FaceDistribution out = *this;
        for (const auto& t : o.terms_) out.terms_.push_back(t);
        return out;
    }

    FaceDistribution& operator+=(const FaceDistribution& o) { return *this = *this + o; }

    FaceDistribution scaled(const Rational& c) const {
        FaceDistribution out(dim_);
        if (c.is_zero()) return out;
        for (auto t : terms_) {
            t.density = c * t.density;
            out.terms_.push_back(std::move(t));
        }
        return out;
    }

    FaceDistribution translated(const Vec& v) const {
        if (v.size() != dim_) throw std::invalid_argument("FaceDistribution: translate dimension");
        FaceDistribution out = *this;
        for (auto& t : out.terms_) t.base = vec_add(t.base, v);
        return out;
    }

    Rational pair(const TestFunction& f) const {
        if (f.kind() != TestFunction::Kind::Exact)
            throw std::invalid_argument("exact pairing requires an exact test function");
        if (f.dim() != dim_) throw std::invalid_argument("pairing: dimension mismatch");
        for (const auto& fac : f.factors())
            if (fac && fac->is_zero()) return Rational(0);
        Rational total;
        for (const auto& t : terms_) total += pair_term(t, f);
        return total;
    }

    Rational pair_poly(const MultiPoly& p) const {
        return pair(TestFunction::polynomial(dim_, p));
    }

    // Pairing with a polynomial cut off outside [lo, hi]. Signed vertex-cone
    // sums have unbounded terms whose divergences cancel; multiplying by a
    // plateau that is one on a box containing the support makes every term
    // finite without changing the total. The plateau is smooth enough for the
    // highest derivative order appearing in the terms.
    Rational pair_poly_boxed(const MultiPoly& p, const Vec& lo, const Vec& hi) const {
        if (lo.size() != dim_ || hi.size() != dim_)
            throw std::invalid_argument("pair_poly_boxed: box dimension mismatch");
        int maxop = 0;
        for (const auto& t : terms_) {
            int m = 0;
            for (const auto& op : t.ops) m += op.order;
            maxop = std::max(maxop, m);
        }
        std::vector<std::optional<PiecewisePoly1D>> factors;
        for (size_t j = 0; j < dim_; ++j) {
            if (hi[j] <= lo[j]) throw std::invalid_argument("pair_poly_boxed: empty box");
            factors.emplace_back(PiecewisePoly1D::plateau(lo[j] - Rational(1), lo[j], hi[j],
                                                          hi[j] + Rational(1), maxop + 1));
        }
        return pair(TestFunction::exact(dim_, p, std::move(factors)));
    }

    // Quadrature fallback for numeric test functions: density terms only (no
    // derivative operators); rays are clipped by the declared support box.
    double pair_numeric(const TestFunction& f) const {
        if (f.kind() != TestFunction::Kind::Numeric)
            throw std::invalid_argument("numeric pairing requires a numeric test function");
        if (f.dim() != dim_) throw std::invalid_argument("pairing: dimension mismatch");
        double total = 0;
        for (const auto& t : terms_) total += pair_term_numeric(t, f);
        return total;
    }

    // Structural check that every term lives inside P: bases and bounded rail
    // corners must lie in P, ray directions in its recession cone.
    bool support_in(const LatticePolytope& P) const {
        for (const auto& t : terms_) {
            std::vector<Vec> corners = {t.base};
            for (const auto& block : t.blocks)
                for (const auto& rl : block) {
                    if (rl.len) {
                        std::vector<Vec> more;
                        for (const auto& c : corners) {
                            Vec shifted = c;
                            for (size_t j = 0; j < dim_; ++j)
                                shifted[j] += *rl.len * Rational(rl.dir[j]);
                            more.push_back(shifted);
                        }
                        corners.insert(corners.end(), more.begin(), more.end());
                    } else {
                        for (const auto& h : P.halfspaces()) {
                            Rational d;
                            for (size_t j = 0; j < dim_; ++j)
                                d += Rational(h.normal[j]) * Rational(rl.dir[j]);
                            if (d > Rational(0)) return false;
                        }
                    }
                }
            for (const auto& c : corners)
                if (!P.contains(c)) return false;
        }
        return true;
    }

    std::string str() const {
        std::ostringstream os;
        os << "distribution dim=" << dim_ << " terms=" << terms_.size() << "\n";
        for (const auto& t : terms_) {
            os << "  base (";
            for (size_t j = 0; j < t.base.size(); ++j)
                os << (j ? "," : "") << t.base[j].str();
            os << ") rails [";
            bool first = true;
            for (const auto& block : t.blocks) {
                for (const auto& rl : block) {
                    if (!first) os << "; ";
                    first = false;
                    os << "(";
                    for (size_t j = 0; j < rl.dir.size(); ++j)
                        os << (j ? "," : "") << rl.dir[j];
                    os << ")" << (rl.len ? " len " + rl.len->str() : " ray");
                }
                os << " |";
            }
            os << "] ops [";
            for (size_t i = 0; i < t.ops.size(); ++i) {
                os << (i ? "; " : "") << "(";
                for (size_t j = 0; j < t.ops[i].dir.size(); ++j)
                    os << (j ? "," : "") << t.ops[i].dir[j];
                os << ")^" << t.ops[i].order;
            }
            os << "] density " << t.density.str() << "\n";
        }
        return os.str();
    }

private:
    size_t dim_;
    std::vector<DistTerm> terms_;

    struct CellData {
        std::vector<Vec> verts;  // in the block's local rail coordinates
        MultiPoly factor;        // selected piecewise factors, in ambient vars
    };

    struct BlockData {
        std::vector<size_t> rails;  // global rail indices, ascending
        std::vector<CellData> cells;
    };

    Rational pair_term(const DistTerm& term, const TestFunction& f) const {
        size_t g = dim_;
        std::vector<Rail> rails;
        std::vector<size_t> rail_block;
        for (size_t bi = 0; bi < term.blocks.size(); ++bi)
            for (const auto& rl : term.blocks[bi]) {
                rails.push_back(rl);
                rail_block.push_back(bi);
            }
        size_t r = rails.size();

        std::vector<char> moved(g, 0);
        for (const auto& rl : rails)
            for (size_t j = 0; j < g; ++j)
                if (rl.dir[j] != 0) moved[j] = 1;
        std::vector<int> op_order(g, 0);
        for (const auto& op : term.ops)
            for (size_t j = 0; j < g; ++j)
                if (op.dir[j] != 0) op_order[j] += op.order;

        const auto& factors = f.factors();

        // Coordinates fixed at the base point: factors there contribute a
        // checked scalar, or local polynomial candidates when derivatives act.
        Rational scalar(1);
        std::vector<std::pair<size_t, std::vector<MultiPoly>>> combo_sets;
        for (size_t j = 0; j < g; ++j) {
            if (!factors[j]) continue;
            if (moved[j]) {
                // Derivatives integrated across a piecewise factor need the
                // factor smooth below the top order at every breakpoint,
                // including the transition to zero at the support ends.
                if (op_order[j] > 0)
                    for (const auto& bp : factors[j]->breaks())
                        for (int m = 0; m < op_order[j]; ++m)
                            factors[j]->eval_deriv_checked(bp, m);
                continue;
            }
            if (op_order[j] == 0) {
                scalar *= factors[j]->eval_deriv_checked(term.base[j], 0);
            } else {
                auto cands = detail::local_pieces(*factors[j], term.base[j], ambient_vars(g)[j]);
                combo_sets.push_back({j, std::move(cands)});
            }
        }
        if (scalar.is_zero()) return Rational(0);

        // Blocks that share a coordinate cut by a piecewise factor must be
        // integrated together; merge them.
        size_t nb = term.blocks.size();
        std::vector<size_t> parent(nb);
        std::iota(parent.begin(), parent.end(), size_t(0));
        std::function<size_t(size_t)> find = [&](size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        auto unite = [&](size_t a, size_t b) { parent[find(a)] = find(b); };
        for (size_t j = 0; j < g; ++j) {
            if (!factors[j] || !moved[j]) continue;
            long long first = -1;
            for (size_t i = 0; i < r; ++i)
                if (rails[i].dir[j] != 0) {
                    if (first < 0)
                        first = static_cast<long long>(rail_block[i]);
                    else
                        unite(static_cast<size_t>(first), rail_block[i]);
                }
        }
        std::map<size_t, std::vector<size_t>> groups;
        for (size_t i = 0; i < r; ++i) groups[find(rail_block[i])].push_back(i);

        std::vector<BlockData> blocks;
        for (const auto& [root, grails] : groups) {
            (void)root;
            BlockData bd;
            bd.rails = grails;
            if (!build_cells(term, rails, grails, factors, bd))
                return Rational(0);  // empty or degenerate region
            if (bd.cells.empty()) return Rational(0);
            blocks.push_back(std::move(bd));
        }

        // Iterate the candidate combinations at fixed coordinates; all must
        // agree or the pairing is not defined for this test function.
        std::vector<size_t> idx(combo_sets.size(), 0);
        std::optional<Rational> agreed;
        while (true) {
            MultiPoly fbase = f.poly();
            for (size_t k = 0; k < combo_sets.size(); ++k)
                fbase *= combo_sets[k].second[idx[k]];
            Rational v = integrate_tuples(term, rails, blocks, fbase);
            if (!agreed)
                agreed = v;
            else if (*agreed != v)
                throw std::domain_error(
                    "test function lacks the smoothness required at an atom");
            size_t k = 0;
            for (; k < idx.size(); ++k) {
                if (++idx[k] < combo_sets[k].second.size()) break;
                idx[k] = 0;
            }
            if (k == idx.size()) break;
        }
        return scalar * (agreed ? *agreed : Rational(0));
    }

    // Build the bounded full-dimensional integration cells of one block.
    // Returns false when the whole term pairs to zero (empty or lower
    // dimensional region); throws on genuinely unbounded regions.
    bool build_cells(const DistTerm& term, const std::vector<Rail>& rails,
                     const std::vector<size_t>& grails,
                     const std::vector<std::optional<PiecewisePoly1D>>& factors,
                     BlockData& bd) const {
        size_t g = dim_;
        size_t n = grails.size();
        std::vector<LinIneq> sys;
        for (size_t li = 0; li < n; ++li) {
            LinIneq lower;
            lower.a.assign(n, Rational(0));
            lower.a[li] = Rational(-1);
            lower.b = Rational(0);
            sys.push_back(lower);
            if (rails[grails[li]].len) {
                LinIneq upper;
                upper.a.assign(n, Rational(0));
                upper.a[li] = Rational(1);
                upper.b = *rails[grails[li]].len;
                sys.push_back(upper);
            }
        }
        std::vector<size_t> cut_coords;
        for (size_t j = 0; j < g; ++j) {
            if (!factors[j]) continue;
            bool here = false;
            for (size_t li = 0; li < n; ++li) here = here || rails[grails[li]].dir[j] != 0;
            if (!here) continue;
            cut_coords.push_back(j);
            Vec a(n);
            for (size_t li = 0; li < n; ++li) a[li] = Rational(rails[grails[li]].dir[j]);
            LinIneq up{a, factors[j]->support_hi() - term.base[j]};
            Vec na(n);
            for (size_t li = 0; li < n; ++li) na[li] = -a[li];
            LinIneq lo{na, term.base[j] - factors[j]->support_lo()};
            sys.push_back(up);
            sys.push_back(lo);
        }
        for (size_t li = 0; li < n; ++li) {
            auto vb = fm_var_bounds(sys, n, li);
            if (vb.empty) return false;
            if (!vb.lo || !vb.hi) throw std::domain_error("divergent pairing");
        }
        auto verts = detail::enumerate_basic_points(sys, n);
        if (verts.empty() || detail::affine_dim(verts) < static_cast<int>(n)) return false;

        struct WorkCell {
            std::vector<LinIneq> sys;
            std::vector<Vec> verts;
        };
        std::vector<WorkCell> cells = {{sys, verts}};
        for (size_t j : cut_coords) {
            Vec a(n);
            for (size_t li = 0; li < n; ++li) a[li] = Rational(rails[grails[li]].dir[j]);
            for (const auto& bp : factors[j]->interior_breaks()) {
                Rational c = bp - term.base[j];
                std::vector<WorkCell> next;
                for (const auto& cell : cells) {
                    for (int side = 0; side < 2; ++side) {
                        WorkCell cand = cell;
                        if (side == 0) {
                            cand.sys.push_back({a, c});
                        } else {
                            Vec na(n);
                            for (size_t li = 0; li < n; ++li) na[li] = -a[li];
                            cand.sys.push_back({na, -c});
                        }
                        cand.verts = detail::enumerate_basic_points(cand.sys, n);
                        if (!cand.verts.empty() &&
                            detail::affine_dim(cand.verts) == static_cast<int>(n))
                            next.push_back(std::move(cand));
                    }
                }
                cells = std::move(next);
            }
        }

        for (const auto& cell : cells) {
            Vec sample(n);
            for (const auto& v : cell.verts)
                for (size_t li = 0; li < n; ++li) sample[li] += v[li];
            for (size_t li = 0; li < n; ++li)
                sample[li] /= Rational(static_cast<long>(cell.verts.size()));
            MultiPoly factor = MultiPoly::constant(Rational(1));
            bool zero = false;
            for (size_t j : cut_coords) {
                Rational xval = term.base[j];
                for (size_t li = 0; li < n; ++li)
                    xval += Rational(rails[grails[li]].dir[j]) * sample[li];
                MultiPoly piece = factors[j]->piece_at(xval);
                if (piece.is_zero()) {
                    zero = true;
                    break;
                }
                factor *= piece.substitute({{"x", MultiPoly::variable(ambient_vars(g)[j])}});
            }
            if (zero) continue;
            bd.cells.push_back({cell.verts, factor});
        }
        return true;
    }

    Rational integrate_tuples(const DistTerm& term, const std::vector<Rail>& rails,
                              const std::vector<BlockData>& blocks,
                              const MultiPoly& fbase) const {
        size_t g = dim_;
        Rational total;
        std::vector<size_t> idx(blocks.size(), 0);
        while (true) {
            MultiPoly fcell = fbase;
            for (size_t b = 0; b < blocks.size(); ++b)
                fcell *= blocks[b].cells[idx[b]].factor;
            fcell = fcell.with_vars(ambient_vars(g));
            for (const auto& op : term.ops)
                for (int i = 0; i < op.order; ++i) fcell = fcell.directional_derivative(op.dir);
            std::map<std::string, MultiPoly> sub;
            auto av = ambient_vars(g);
            for (size_t j = 0; j < g; ++j) {
                MultiPoly expr = MultiPoly::constant(term.base[j]);
                for (size_t i = 0; i < rails.size(); ++i)
                    if (rails[i].dir[j] != 0)
                        expr += Rational(rails[i].dir[j]) * MultiPoly::variable(rail_var(i));
                sub[av[j]] = expr;
            }
            MultiPoly G = term.density * fcell.substitute(sub);
            for (size_t b = 0; b < blocks.size(); ++b)
                G = integrate_block(G, blocks[b].rails, blocks[b].cells[idx[b]].verts);
            if (!G.is_zero()) total += G.constant_value();

            size_t k = 0;
            for (; k < idx.size(); ++k) {
                if (++idx[k] < blocks[k].cells.size()) break;
                idx[k] = 0;
            }
            if (k == idx.size()) break;
        }
        return total;
    }

    MultiPoly integrate_block(const MultiPoly& G, const std::vector<size_t>& grails,
                              const std::vector<Vec>& verts) const {
        if (grails.size() == 1) {
            Rational lo = verts[0][0], hi = verts[0][0];
            for (const auto& v : verts) {
                lo = std::min(lo, v[0]);
                hi = std::max(hi, v[0]);
            }
            auto tv = rail_var(grails[0]);
            MultiPoly A = G.antiderivative(tv);
            return A.substitute({{tv, MultiPoly::constant(hi)}}) -
                   A.substitute({{tv, MultiPoly::constant(lo)}});
        }
        if (grails.size() == 2) {
            auto hull = detail::convex_hull_2d(verts);
            MultiPoly acc;
            if (hull.size() < 3) return acc;
            auto tva = rail_var(grails[0]);
            auto tvb = rail_var(grails[1]);
            MultiPoly uu = MultiPoly::variable("uu");
            MultiPoly vv = MultiPoly::variable("vv");
            for (size_t i = 1; i + 1 < hull.size(); ++i) {
                const Vec& A = hull[0];
                const Vec& B = hull[i];
                const Vec& C = hull[i + 1];
                Rational jac =
                    (B[0] - A[0]) * (C[1] - A[1]) - (B[1] - A[1]) * (C[0] - A[0]);
                if (jac < Rational(0)) jac = -jac;
                if (jac.is_zero()) continue;
                MultiPoly e0 = MultiPoly::constant(A[0]) + (B[0] - A[0]) * uu + (C[0] - A[0]) * vv;
                MultiPoly e1 = MultiPoly::constant(A[1]) + (B[1] - A[1]) * uu + (C[1] - A[1]) * vv;
                MultiPoly H = G.substitute({{tva, e0}, {tvb, e1}});
                MultiPoly Hv = H.antiderivative("vv");
                MultiPoly inner =
                    Hv.substitute({{"vv", MultiPoly::constant(Rational(1)) - uu}}) -
                    Hv.substitute({{"vv", MultiPoly::constant(Rational(0))}});
                MultiPoly Hu = inner.antiderivative("uu");
                MultiPoly piece = Hu.substitute({{"uu", MultiPoly::constant(Rational(1))}}) -
                                  Hu.substitute({{"uu", MultiPoly::constant(Rational(0))}});
                acc += jac * piece;
            }
            return acc;
        }
        throw std::domain_error("pairing a block with more than two spread directions is unsupported");
    }

    double pair_term_numeric(const DistTerm& term, const TestFunction& f) const {
        if (!term.ops.empty())
            throw std::domain_error("numeric pairing does not support derivative terms");
        std::vector<Rail> rails;
        for (const auto& block : term.blocks)
            for (const auto& rl : block) rails.push_back(rl);
        std::vector<double> upper(rails.size());
        const auto& box = f.support_box();
        for (size_t i = 0; i < rails.size(); ++i) {
            if (rails[i].len) {
                upper[i] = rails[i].len->to_double();
            } else {
                double T = -1;
                for (size_t j = 0; j < dim_; ++j) {
                    if (rails[i].dir[j] == 0) continue;
                    double edge = rails[i].dir[j] > 0 ? box[j].second : box[j].first;
                    double cand = (edge - term.base[j].to_double()) / rails[i].dir[j];
                    if (T < 0 || cand < T) T = cand;
                }
                if (T < 0) T = 0;
                upper[i] = T;
            }
            if (upper[i] == 0) return 0;
        }
        if (rails.empty()) {
            std::vector<double> x(dim_);
            for (size_t j = 0; j < dim_; ++j) x[j] = term.base[j].to_double();
            return term.density.constant_value().to_double() * f.eval_numeric(x);
        }
        // flatten the density to double coefficients, exponents indexed by rail
        std::vector<std::pair<std::vector<int>, double>> flat;
        {
            const auto& dvars = term.density.vars();
            std::vector<size_t> slot(dvars.size(), rails.size());
            for (size_t v = 0; v < dvars.size(); ++v)
                for (size_t k = 0; k < rails.size(); ++k)
                    if (dvars[v] == rail_var(k)) slot[v] = k;
            for (size_t v = 0; v < dvars.size(); ++v)
                if (slot[v] == rails.size())
                    throw std::domain_error("FaceDistribution: density variable " + dvars[v] +
                                            " has no rail");
            for (const auto& [e, c] : term.density.terms()) {
                std::vector<int> re(rails.size(), 0);
                for (size_t v = 0; v < e.size(); ++v) re[slot[v]] += e[v];
                flat.push_back({std::move(re), c.to_double()});
            }
        }
        std::vector<double> t(rails.size(), 0.0);
        std::function<double(size_t)> level = [&](size_t i) -> double {
            if (i == rails.size()) {
                std::vector<double> x(dim_);
                for (size_t j = 0; j < dim_; ++j) {
                    x[j] = term.base[j].to_double();
                    for (size_t k = 0; k < rails.size(); ++k) x[j] += rails[k].dir[j] * t[k];
                }
                double rho = 0;
                for (const auto& [e, c] : flat) {
                    double mono = c;
                    for (size_t k = 0; k < rails.size(); ++k)
                        for (int p = 0; p < e[k]; ++p) mono *= t[k];
                    rho += mono;
                }
                return rho * f.eval_numeric(x);
            }
            // inner levels run tighter so outer refinement sees a smooth map
            double tol = 1e-9 * std::pow(1e-3, static_cast<double>(i));
            return adaptive_quad([&](double v) { t[i] = v; return level(i + 1); }, 0.0,
                                 upper[i], tol);
        };
        return level(0);
    }
};

// Canonical form of a one-dimensional distribution: a piecewise density, at
// most one ray in each direction, and point masses with derivative orders.
// An atom entry ((p, m) -> c) acts on f as c * f^(m)(p).
struct Canonical1D {
    PiecewisePoly1D segment;
    std::optional<std::pair<Rational, MultiPoly>> ray_pos;  // density on [start, inf)
    std::optional<std::pair<Rational, MultiPoly>> ray_neg;  // density on (-inf, start]
    std::map<std::pair<Rational, int>, Rational> atoms;

    bool operator==(const Canonical1D& o) const {
        auto ray_eq = [](const std::optional<std::pair<Rational, MultiPoly>>& a,
                         const std::optional<std::pair<Rational, MultiPoly>>& b) {
            if (a.has_value() != b.has_value()) return false;
            if (!a) return true;
            return a->first == b->first && a->second == b->second;
        };
        return segment == o.segment && ray_eq(ray_pos, o.ray_pos) && ray_eq(ray_neg, o.ray_neg) &&
               atoms == o.atoms;
    }
    bool operator!=(const Canonical1D& o) const { return !(*this == o); }

    std::string str() const {
        std::ostringstream os;
        for (const auto& [key, c] : atoms)
            os << "atom at " << key.first.str() << " order " << key.second << " coeff "
               << c.str() << "\n";
        if (ray_neg)
            os << "ray down from " << ray_neg->first.str() << " density "
               << ray_neg->second.str() << "\n";
        if (!segment.is_zero()) {
            for (size_t i = 0; i < segment.pieces().size(); ++i)
                os << "segment [" << segment.breaks()[i].str() << ", "
                   << segment.breaks()[i + 1].str() << "] density "
                   << segment.pieces()[i].str() << "\n";
        }
        if (ray_pos)
            os << "ray up from " << ray_pos->first.str() << " density " << ray_pos->second.str()
               << "\n";
        return os.str();
    }

    FaceDistribution to_distribution() const {
        FaceDistribution D(1);
        MultiPoly t1 = MultiPoly::variable("t1");
        auto xsub = [&](const MultiPoly& rho, const MultiPoly& image) {
            return rho.substitute({{"x", image}});
        };
        if (!segment.is_zero())
            for (size_t i = 0; i < segment.pieces().size(); ++i) {
                if (segment.pieces()[i].is_zero()) continue;
                Rational a = segment.breaks()[i], b = segment.breaks()[i + 1];
                DistTerm t;
                t.base = {a};
                t.blocks = {{Rail{{1}, b - a}}};
                t.density = xsub(segment.pieces()[i], MultiPoly::constant(a) + t1);
                D.add_term(t);
            }
        if (ray_pos) {
            DistTerm t;
            t.base = {ray_pos->first};
            t.blocks = {{Rail{{1}, std::nullopt}}};
            t.density = xsub(ray_pos->second, MultiPoly::constant(ray_pos->first) + t1);
            D.add_term(t);
        }
        if (ray_neg) {
            DistTerm t;
            t.base = {ray_neg->first};
            t.blocks = {{Rail{{-1}, std::nullopt}}};
            t.density = xsub(ray_neg->second, MultiPoly::constant(ray_neg->first) - t1);
            D.add_term(t);
        }
        for (const auto& [key, c] : atoms) {
            DistTerm t;
            t.base = {key.first};
            t.density = MultiPoly::constant(c);
            if (key.second > 0) t.ops = {DerivOp{{1}, key.second}};
            D.add_term(t);
        }
        return D;
    }
};

inline Canonical1D canonicalize_1d(const FaceDistribution& D) {
    if (D.dim() != 1)
        throw std::invalid_argument("canonical form is defined for one-dimensional data");
    struct Seg {
        Rational a, b;
        MultiPoly rho;  // in "x"
    };
    std::vector<Seg> segs;
    std::vector<std::pair<Rational, MultiPoly>> pos_rays, neg_rays;
    std::map<std::pair<Rational, int>, Rational> atoms;

    std::function<void(Rational, Rational, MultiPoly, int)> reduce_seg =
        [&](Rational a, Rational b, MultiPoly sigma, int M) {
            if (M == 0) {
                if (!sigma.is_zero()) segs.push_back({a, b, sigma});
                return;
            }
            atoms[{b, M - 1}] += sigma.eval_map({{"x", b}});
            atoms[{a, M - 1}] -= sigma.eval_map({{"x", a}});
            reduce_seg(a, b, -sigma.derivative("x"), M - 1);
        };
    std::function<void(Rational, MultiPoly, int)> reduce_ray_pos =
        [&](Rational a, MultiPoly sigma, int M) {
            if (M == 0) {
                if (!sigma.is_zero()) pos_rays.push_back({a, sigma});
                return;
            }
            atoms[{a, M - 1}] -= sigma.eval_map({{"x", a}});
            reduce_ray_pos(a, -sigma.derivative("x"), M - 1);
        };
    std::function<void(Rational, MultiPoly, int)> reduce_ray_neg =
        [&](Rational b, MultiPoly sigma, int M) {
            if (M == 0) {
                if (!sigma.is_zero()) neg_rays.push_back({b, sigma});
                return;
            }
            atoms[{b, M - 1}] += sigma.eval_map({{"x", b}});
            reduce_ray_neg(b, -sigma.derivative("x"), M - 1);
        };

    for (const auto& term : D.terms()) {
        std::vector<Rail> rails;
        for (const auto& block : term.blocks)
            for (const auto& rl : block) rails.push_back(rl);
        if (rails.size() > 1)
            throw std::domain_error(
                "canonical one-dimensional form requires terms with a single direction");
        int M = 0;
        Rational opf(1);
        for (const auto& op : term.ops) {
            opf *= Rational(op.dir[0]).pow(op.order);
            M += op.order;
        }
        if (rails.empty()) {
            atoms[{term.base[0], M}] += opf * term.density.constant_value();
            continue;
        }
        long long d = rails[0].dir[0];
        Rational rd(d);
        Rational absd = d < 0 ? -rd : rd;
        MultiPoly x = MultiPoly::variable("x");
        MultiPoly texpr = (Rational(1) / rd) * (x - MultiPoly::constant(term.base[0]));
        MultiPoly sigma =
            ((opf / absd) * term.density.substitute({{"t1", texpr}})).with_vars({"x"});
        if (rails[0].len) {
            Rational p = term.base[0], q = term.base[0] + rd * *rails[0].len;
            if (q < p) std::swap(p, q);
            if (p < q) reduce_seg(p, q, sigma, M);
        } else if (d > 0) {
            reduce_ray_pos(term.base[0], sigma, M);
        } else {
            reduce_ray_neg(term.base[0], sigma, M);
        }
    }

    Canonical1D out;
    if (!pos_rays.empty()) {
        Rational start = pos_rays[0].first;
        for (const auto& [a, rho] : pos_rays) start = std::max(start, a);
        MultiPoly total;
        for (const auto& [a, rho] : pos_rays) {
            if (a < start) segs.push_back({a, start, rho});
            total += rho;
        }
        if (!total.is_zero()) out.ray_pos = {start, total};
    }
    if (!neg_rays.empty()) {
        Rational start = neg_rays[0].first;
        for (const auto& [a, rho] : neg_rays) start = std::min(start, a);
        MultiPoly total;
        for (const auto& [a, rho] : neg_rays) {
            if (a > start) segs.push_back({start, a, rho});
            total += rho;
        }
        if (!total.is_zero()) out.ray_neg = {start, total};
    }
    if (out.ray_pos && out.ray_neg && out.ray_pos->first < out.ray_neg->first) {
        Rational p = out.ray_pos->first, q = out.ray_neg->first;
        segs.push_back({p, q, out.ray_pos->second});
        segs.push_back({p, q, out.ray_neg->second});
        out.ray_pos->first = q;
        out.ray_neg->first = p;
    }

    if (!segs.empty()) {
        std::vector<Rational> breaks;
        for (const auto& s : segs) {
            breaks.push_back(s.a);
            breaks.push_back(s.b);
        }
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
        std::vector<MultiPoly> pieces;
        for (size_t i = 0; i + 1 < breaks.size(); ++i) {
            MultiPoly p;
            for (const auto& s : segs)
                if (s.a <= breaks[i] && breaks[i + 1] <= s.b) p += s.rho;
            pieces.push_back(p);
        }
        while (!pieces.empty() && pieces.front().is_zero()) {
            pieces.erase(pieces.begin());
            breaks.erase(breaks.begin());
        }
        while (!pieces.empty() && pieces.back().is_zero()) {
            pieces.pop_back();
            breaks.pop_back();
        }
        for (size_t i = 0; i + 1 < pieces.size();) {
            if (pieces[i] == pieces[i + 1]) {
                pieces.erase(pieces.begin() + i + 1);
                breaks.erase(breaks.begin() + i + 1);
            } else {
                ++i;
            }
        }
        if (!pieces.empty()) out.segment = PiecewisePoly1D(breaks, pieces);
    }

    for (auto it = atoms.begin(); it != atoms.end();) {
        if (it->second.is_zero())
            it = atoms.erase(it);
        else
            ++it;
    }
    out.atoms = std::move(atoms);
    return out;
}

// Per-edge coefficient of the lattice cone expansion: the order-j derivative
// at the apex carries -B_{j+1}/(j+1)!; on a half-open edge the order-0
// coefficient flips from 1/2 to -1/2.
inline Rational cone_edge_coeff(int j, bool strict) {
    Rational c = -bernoulli(j + 1) / Rational(factorial(j + 1));
    if (j == 0 && strict) c -= Rational(1);
    return c;
}

inline FaceDistribution dh_interval(const Rational& a, const Rational& b, int n) {
    if (!(a < b)) throw std::invalid_argument("dh_interval: need a < b");
    if (n < 0) throw std::invalid_argument("dh_interval: negative order");
    FaceDistribution D(1);
    if (n == 0) {
        DistTerm t;
        t.base = {a};
        t.blocks = {{Rail{{1}, b - a}}};
        t.density = MultiPoly::constant(Rational(1));
        D.add_term(t);
    } else if (n == 1) {
        for (const Rational& p : {a, b}) {
            DistTerm t;
            t.base = {p};
            t.density = MultiPoly::constant(Rational(1, 2));
            D.add_term(t);
        }
    } else {
        Rational c = bernoulli(n) / Rational(factorial(n));
        DistTerm hi;
        hi.base = {b};
        hi.density = MultiPoly::constant(c);
        hi.ops = {DerivOp{{1}, n - 1}};
        D.add_term(hi);
        DistTerm lo;
        lo.base = {a};
        lo.density = MultiPoly::constant(-c);
        lo.ops = {DerivOp{{1}, n - 1}};
        D.add_term(lo);
    }
    return D;
}

inline FaceDistribution dh_halfline(const Rational& a, int dir, int n) {
    if (dir != 1 && dir != -1) throw std::invalid_argument("dh_halfline: direction must be +-1");
    if (n < 0) throw std::invalid_argument("dh_halfline: negative order");
    FaceDistribution D(1);
    if (n == 0) {
        DistTerm t;
        t.base = {a};
        t.blocks = {{Rail{{dir}, std::nullopt}}};
        t.density = MultiPoly::constant(Rational(1));
        D.add_term(t);
    } else {
        DistTerm t;
        t.base = {a};
        t.density = MultiPoly::constant(-bernoulli(n) / Rational(factorial(n)));
        if (n > 1) t.ops = {DerivOp{{dir}, n - 1}};
        D.add_term(t);
    }
    return D;
}

inline FaceDistribution dh_vertex_cone(const VertexCone& cone, int n,
                                       std::vector<bool> strict = {}) {
    size_t g = cone.vertex.size();
    size_t m = cone.generators.size();
    if (strict.empty()) strict.assign(m, false);
    if (strict.size() != m) throw std::invalid_argument("dh_vertex_cone: strict flag count");
    if (n < 0) throw std::invalid_argument("dh_vertex_cone: negative order");
    FaceDistribution D(g);

    std::vector<int> w(m, 0);
    std::function<void(size_t, int)> rec = [&](size_t e, int left) {
        if (e == m) {
            if (left != 0) return;
            Rational coeff(1);
            std::vector<Rail> rails;
            std::vector<DerivOp> ops;
            for (size_t i = 0; i < m; ++i) {
                if (w[i] == 0) {
                    rails.push_back(Rail{cone.generators[i], std::nullopt});
                } else {
                    int j = w[i] - 1;
                    coeff *= cone_edge_coeff(j, strict[i]);
                    if (j >= 1) ops.push_back(DerivOp{cone.generators[i], j});
                }
            }
            if (coeff.is_zero()) return;
            DistTerm t;
            t.base = cone.vertex;
            if (!rails.empty()) t.blocks = {rails};
            t.density = MultiPoly::constant(coeff);
            t.ops = std::move(ops);
            D.add_term(t);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            w[e] = v;
            rec(e + 1, left - v);
        }
    };
    rec(0, n);
    return D;
}

// Signed sum of polarized vertex cone distributions. Generators pointing
// lexicographically downward are flipped; each flip makes that edge half-open
// and contributes a sign.
inline FaceDistribution dh_delzant(const LatticePolytope& P, int n) {
    auto rep = P.delzant_check();
    if (!rep.ok)
        throw std::domain_error("distribution data requires Delzant input: " + rep.reason);
    FaceDistribution D(P.dim());
    for (const auto& v : P.vertices()) {
        PolarizedCone pc = polarize_lex(P.tangent_cone(v));
        FaceDistribution piece = dh_vertex_cone(pc.cone, n, pc.strict);
        D += pc.sign < 0 ? piece.scaled(Rational(-1)) : piece;
    }
    return D;
}

inline FaceDistribution dh_tensor(const FaceDistribution& A, const FaceDistribution& B) {
    size_t ga = A.dim(), gb = B.dim();
    FaceDistribution out(ga + gb);
    for (const auto& ta : A.terms()) {
        size_t ra = 0;
        for (const auto& block : ta.blocks) ra += block.size();
        for (const auto& tb : B.terms()) {
            DistTerm t;
            t.base = ta.base;
            t.base.insert(t.base.end(), tb.base.begin(), tb.base.end());
            for (const auto& block : ta.blocks) {
                std::vector<Rail> nb;
                for (const auto& rl : block) {
                    IVec d = rl.dir;
                    d.resize(ga + gb, 0);
                    nb.push_back(Rail{d, rl.len});
                }
                t.blocks.push_back(std::move(nb));
            }
            size_t rb = 0;
            for (const auto& block : tb.blocks) {
                std::vector<Rail> nb;
                for (const auto& rl : block) {
                    IVec d(ga, 0);
                    d.insert(d.end(), rl.dir.begin(), rl.dir.end());
                    nb.push_back(Rail{d, rl.len});
                    ++rb;
                }
                t.blocks.push_back(std::move(nb));
            }
            std::map<std::string, MultiPoly> shift;
            for (size_t i = 0; i < rb; ++i)
                shift[rail_var(i)] = MultiPoly::variable(rail_var(i + ra));
            t.density = ta.density * tb.density.substitute(shift);
            for (const auto& op : ta.ops) {
                IVec d = op.dir;
                d.resize(ga + gb, 0);
                t.ops.push_back(DerivOp{d, op.order});
            }
            for (const auto& op : tb.ops) {
                IVec d(ga, 0);
                d.insert(d.end(), op.dir.begin(), op.dir.end());
                t.ops.push_back(DerivOp{d, op.order});
            }
            out.add_term(t);
        }
    }
    return out;
}

inline FaceDistribution dh_tensor_graded(const std::vector<FaceDistribution>& A,
                                         const std::vector<FaceDistribution>& B, int n) {
    if (static_cast<int>(A.size()) <= n || static_cast<int>(B.size()) <= n)
        throw std::invalid_argument("dh_tensor_graded: component lists too short");
    FaceDistribution out(A[0].dim() + B[0].dim());
    for (int i = 0; i <= n; ++i) out += dh_tensor(A[i], B[n - i]);
    return out;
}

namespace detail {

struct Part1D {
    enum Kind { Atom, Segment, RayUp, RayDown } kind;
    Rational a, b;  // atom: point in a; segment: [a, b]; ray: a is the start
    int m = 0;
    Rational c;
    MultiPoly rho;  // density in "x" for spread parts
};

inline std::vector<Part1D> canonical_parts(const Canonical1D& C) {
    std::vector<Part1D> out;
    for (const auto& [key, c] : C.atoms) {
        Part1D p;
        p.kind = Part1D::Atom;
        p.a = key.first;
        p.m = key.second;
        p.c = c;
        out.push_back(p);
    }
    if (!C.segment.is_zero())
        for (size_t i = 0; i < C.segment.pieces().size(); ++i) {
            if (C.segment.pieces()[i].is_zero()) continue;
            Part1D p;
            p.kind = Part1D::Segment;
            p.a = C.segment.breaks()[i];
            p.b = C.segment.breaks()[i + 1];
            p.rho = C.segment.pieces()[i];
            out.push_back(p);
        }
    if (C.ray_pos) {
        Part1D p;
        p.kind = Part1D::RayUp;
        p.a = C.ray_pos->first;
        p.rho = C.ray_pos->second;
        out.push_back(p);
    }
    if (C.ray_neg) {
        Part1D p;
        p.kind = Part1D::RayDown;
        p.a = C.ray_neg->first;
        p.rho = C.ray_neg->second;
        out.push_back(p);
    }
    return out;
}

inline void convolve_parts(const Part1D& pa, const Part1D& pb, FaceDistribution& out) {
    using P = Part1D;
    if (pa.kind != P::Atom && pb.kind == P::Atom) {
        convolve_parts(pb, pa, out);
        return;
    }
    MultiPoly t1 = MultiPoly::variable("t1");
    if (pa.kind == P::Atom) {
        if (pb.kind == P::Atom) {
            DistTerm t;
            t.base = {pa.a + pb.a};
            t.density = MultiPoly::constant(pa.c * pb.c);
            if (pa.m + pb.m > 0) t.ops = {DerivOp{{1}, pa.m + pb.m}};
            out.add_term(t);
            return;
        }
        DistTerm t;
        t.base = {pb.a + pa.a};
        if (pb.kind == P::Segment) {
            t.blocks = {{Rail{{1}, pb.b - pb.a}}};
            t.density = pa.c * pb.rho.substitute({{"x", MultiPoly::constant(pb.a) + t1}});
        } else if (pb.kind == P::RayUp) {
            t.blocks = {{Rail{{1}, std::nullopt}}};
            t.density = pa.c * pb.rho.substitute({{"x", MultiPoly::constant(pb.a) + t1}});
        } else {
            t.blocks = {{Rail{{-1}, std::nullopt}}};
            t.density = pa.c * pb.rho.substitute({{"x", MultiPoly::constant(pb.a) - t1}});
        }
        if (pa.m > 0) t.ops = {DerivOp{{1}, pa.m}};
        out.add_term(t);
        return;
    }
    // both parts are spread; segment x segment / segment x ray only
    if ((pa.kind == P::RayUp || pa.kind == P::RayDown) &&
        (pb.kind == P::RayUp || pb.kind == P::RayDown))
        throw std::invalid_argument("convolution needs at least one compactly supported factor");
    const Part1D& seg = pa.kind == P::Segment ? pa : pb;
    const Part1D& oth = pa.kind == P::Segment ? pb : pa;
    MultiPoly tv = MultiPoly::variable("t");
    MultiPoly sv = MultiPoly::variable("s");
    MultiPoly prod = seg.rho.substitute({{"x", tv}}) * oth.rho.substitute({{"x", sv - tv}});
    MultiPoly H = prod.antiderivative("t");
    auto H_at = [&](const MultiPoly& expr) { return H.substitute({{"t", expr}}); };
    auto emit_seg = [&](const Rational& s0, const Rational& s1, const MultiPoly& h) {
        if (!(s0 < s1) || h.is_zero()) return;
        DistTerm t;
        t.base = {s0};
        t.blocks = {{Rail{{1}, s1 - s0}}};
        t.density = h.substitute({{"s", MultiPoly::constant(s0) + t1}});
        out.add_term(t);
    };
    Rational p1 = seg.a, q1 = seg.b;
    if (oth.kind == P::Segment) {
        Rational p2 = oth.a, q2 = oth.b;
        std::vector<Rational> breaks = {p1 + p2, p1 + q2, q1 + p2, q1 + q2};
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
        for (size_t i = 0; i + 1 < breaks.size(); ++i) {
            Rational mid = (breaks[i] + breaks[i + 1]) / Rational(2);
            Rational lov = std::max(p1, mid - q2);
            Rational upv = std::min(q1, mid - p2);
            if (!(lov < upv)) continue;
            MultiPoly lo_expr =
                p1 >= mid - q2 ? MultiPoly::constant(p1) : sv - MultiPoly::constant(q2);
            MultiPoly up_expr =
                q1 <= mid - p2 ? MultiPoly::constant(q1) : sv - MultiPoly::constant(p2);
            emit_seg(breaks[i], breaks[i + 1], H_at(up_expr) - H_at(lo_expr));
        }
        return;
    }
    if (oth.kind == P::RayUp) {
        Rational al = oth.a;
        emit_seg(p1 + al, q1 + al,
                 H_at(sv - MultiPoly::constant(al)) - H_at(MultiPoly::constant(p1)));
        MultiPoly tail = H_at(MultiPoly::constant(q1)) - H_at(MultiPoly::constant(p1));
        if (!tail.is_zero()) {
            DistTerm t;
            t.base = {q1 + al};
            t.blocks = {{Rail{{1}, std::nullopt}}};
            t.density = tail.substitute({{"s", MultiPoly::constant(q1 + al) + t1}});
            out.add_term(t);
        }
        return;
    }
    // oth is a downward ray from beta: s - t <= beta, so t >= s - beta
    Rational be = oth.a;
    emit_seg(p1 + be, q1 + be,
             H_at(MultiPoly::constant(q1)) - H_at(sv - MultiPoly::constant(be)));
    MultiPoly tail = H_at(MultiPoly::constant(q1)) - H_at(MultiPoly::constant(p1));
    if (!tail.is_zero()) {
        DistTerm t;
        t.base = {p1 + be};
        t.blocks = {{Rail{{-1}, std::nullopt}}};
        t.density = tail.substitute({{"s", MultiPoly::constant(p1 + be) - t1}});
        out.add_term(t);
    }
}

}  // namespace detail

inline FaceDistribution dh_convolve(const FaceDistribution& A, const FaceDistribution& B) {
    if (A.dim() != B.dim()) throw std::invalid_argument("dh_convolve: dimension mismatch");
    auto pure_atoms = [](const FaceDistribution& D) {
        for (const auto& t : D.terms())
            for (const auto& block : t.blocks)
                for (const auto& rl : block) {
                    (void)rl;
                    return false;
                }
        return true;
    };
    if (pure_atoms(A) || pure_atoms(B)) {
        const FaceDistribution& at = pure_atoms(A) ? A : B;
        const FaceDistribution& other = pure_atoms(A) ? B : A;
        FaceDistribution out(A.dim());
        for (const auto& ta : at.terms()) {
            Rational c = ta.density.constant_value();
            for (const auto& tb : other.terms()) {
                DistTerm t = tb;
                t.base = vec_add(tb.base, ta.base);
                t.density = c * tb.density;
                for (const auto& op : ta.ops) t.ops.push_back(op);
                out.add_term(t);
            }
        }
        return out;
    }
    if (A.dim() != 1)
        throw std::invalid_argument(
            "convolution of two spread distributions is supported in one dimension only");
    Canonical1D CA = canonicalize_1d(A);
    Canonical1D CB = canonicalize_1d(B);
    bool a_rays = CA.ray_pos || CA.ray_neg;
    bool b_rays = CB.ray_pos || CB.ray_neg;
    if (a_rays && b_rays)
        throw std::invalid_argument("convolution needs at least one compactly supported factor");
    FaceDistribution out(1);
    for (const auto& pa : detail::canonical_parts(CA))
        for (const auto& pb : detail::canonical_parts(CB)) detail::convolve_parts(pa, pb, out);
    return out;
}

inline FaceDistribution dh_convolve_graded(const std::vector<FaceDistribution>& A,
                                           const std::vector<FaceDistribution>& B, int n) {
    if (static_cast<int>(A.size()) <= n || static_cast<int>(B.size()) <= n)
        throw std::invalid_argument("dh_convolve_graded: component lists too short");
    FaceDistribution out(A[0].dim());
    for (int i = 0; i <= n; ++i) out += dh_convolve(A[i], B[n - i]);
    return out;
}

// Fit S(k) = sum_{n=0}^{d+deg} c_n k^{d-n} through k = 1..d+deg+1 and verify
// the fit at one extra point.
inline Vec fit_moments(const std::function<Rational(long)>& S, int d, int deg) {
    if (d < 0 || deg < 0) throw std::invalid_argument("fit_moments: negative degree");
    int M = d + deg;
    size_t m = static_cast<size_t>(M) + 1;
    RMat A(m, Vec(m));
    Vec b(m);
    for (size_t i = 0; i < m; ++i) {
        long k = static_cast<long>(i) + 1;
        for (size_t n = 0; n < m; ++n)
            A[i][n] = Rational(k).pow(M - static_cast<long>(n));
        b[i] = S(k) * Rational(k).pow(deg);
    }
    Vec c = solve_square(A, b);
    long k = static_cast<long>(m) + 1;
    Rational lhs = S(k) * Rational(k).pow(deg);
    Rational rhs;
    for (size_t n = 0; n < m; ++n) rhs += c[n] * Rational(k).pow(M - static_cast<long>(n));
    if (lhs != rhs)
        throw std::domain_error("sequence is not quasi-polynomial of the expected degree");
    return c;
}

}  // namespace dhasym
