#pragma once

// Vector partition functions for a pointed unimodular list of integer
// weights: exact counts by memoized recursion, the continuous spline given by
// convolving Lebesgue measure on the weight rays, its graded coefficient
// family, and per-chamber polynomial forms of the count function.

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dhasym/bernoulli.hpp"
#include "dhasym/distribution.hpp"
#include "dhasym/linalg.hpp"
#include "dhasym/multipoly.hpp"
#include "dhasym/rational.hpp"

namespace dhasym {

// A finite list of nonzero integer vectors, all contained in an open half
// space (so every value has finitely many representations) and unimodular
// (every linearly independent subset of full size has determinant +-1, which
// makes the count function piecewise polynomial rather than quasi-polynomial).
class VectorList {
public:
    VectorList(size_t rank, std::vector<IVec> weights)
        : rank_(rank), weights_(std::move(weights)) {
        if (rank_ == 0) throw std::invalid_argument("VectorList: rank must be positive");
        for (const auto& w : weights_) {
            if (w.size() != rank_)
                throw std::invalid_argument("VectorList: weight dimension mismatch");
            bool zero = true;
            for (long long c : w) zero = zero && c == 0;
            if (zero) throw std::invalid_argument("VectorList: zero weight");
        }
        std::vector<LinIneq> sys;
        for (const auto& w : weights_) {
            LinIneq q;
            q.a.resize(rank_);
            for (size_t i = 0; i < rank_; ++i) q.a[i] = Rational(-w[i]);
            q.b = Rational(-1);
            sys.push_back(std::move(q));
        }
        auto witness = fm_witness(sys, rank_);
        if (!witness)
            throw std::domain_error("VectorList: non-pointed weight list");
        gamma_ = *witness;
        check_unimodular();
    }

    size_t rank() const { return rank_; }
    const std::vector<IVec>& weights() const { return weights_; }
    // direction with <w, gamma> >= 1 for every weight w
    const Vec& pointing_direction() const { return gamma_; }

private:
    void check_unimodular() const {
        size_t n = weights_.size();
        std::vector<size_t> idx(rank_);
        std::function<void(size_t, size_t)> rec = [&](size_t pos, size_t start) {
            if (pos == rank_) {
                std::vector<IVec> m(rank_);
                for (size_t i = 0; i < rank_; ++i) m[i] = weights_[idx[i]];
                long long d = idet(m);
                if (d != 0 && d != 1 && d != -1)
                    throw std::domain_error("VectorList: non-unimodular weight list");
                return;
            }
            for (size_t i = start; i < n; ++i) {
                idx[pos] = i;
                rec(pos + 1, i + 1);
            }
        };
        if (n >= rank_) rec(0, 0);
    }

    size_t rank_;
    std::vector<IVec> weights_;
    Vec gamma_;
};

// Number of ways to write lambda as a nonnegative integer combination of the
// weights. Memoized across calls.
class PartitionCount {
public:
    explicit PartitionCount(VectorList delta) : delta_(std::move(delta)) {}

    const VectorList& weights() const { return delta_; }

    Rational operator()(const IVec& lambda) {
        if (lambda.size() != delta_.rank())
            throw std::invalid_argument("PartitionCount: dimension mismatch");
        return count(0, lambda);
    }

    // counts over a closed lattice box, one row per point in odometer order
    std::vector<std::pair<IVec, Rational>> table(
        const std::vector<std::pair<long long, long long>>& box) {
        if (box.size() != delta_.rank())
            throw std::invalid_argument("PartitionCount: box dimension mismatch");
        std::vector<std::pair<IVec, Rational>> out;
        IVec p(box.size());
        for (size_t i = 0; i < box.size(); ++i) {
            if (box[i].second < box[i].first)
                throw std::invalid_argument("PartitionCount: empty box");
            p[i] = box[i].first;
        }
        while (true) {
            out.emplace_back(p, (*this)(p));
            size_t i = 0;
            while (i < p.size() && p[i] == box[i].second) {
                p[i] = box[i].first;
                ++i;
            }
            if (i == p.size()) break;
            ++p[i];
        }
        return out;
    }

private:
    Rational height(const IVec& v) const {
        Rational h;
        const Vec& g = delta_.pointing_direction();
        for (size_t i = 0; i < v.size(); ++i) h += Rational(v[i]) * g[i];
        return h;
    }

    Rational count(size_t i, const IVec& target) {
        Rational th = height(target);
        if (th < Rational(0)) return Rational(0);
        const auto& ws = delta_.weights();
        if (i == ws.size()) {
            for (long long c : target)
                if (c != 0) return Rational(0);
            return Rational(1);
        }
        auto key = std::make_pair(i, target);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        Rational total;
        IVec rest = target;
        while (height(rest) >= Rational(0)) {
            total += count(i + 1, rest);
            for (size_t c = 0; c < rest.size(); ++c) rest[c] -= ws[i][c];
        }
        memo_.emplace(std::move(key), total);
        return total;
    }

    VectorList delta_;
    std::map<std::pair<size_t, IVec>, Rational> memo_;
};

namespace detail {

inline long long cross2(const IVec& a, const IVec& b) { return a[0] * b[1] - a[1] * b[0]; }

inline Rational cross2q(const Vec& a, const IVec& b) {
    return a[0] * Rational(b[1]) - a[1] * Rational(b[0]);
}

inline IVec primitive_ivec(IVec v) {
    long long g = 0;
    for (long long c : v) g = std::gcd(g, c < 0 ? -c : c);
    if (g > 1)
        for (auto& c : v) c /= g;
    return v;
}

// A two-dimensional piecewise polynomial supported on a pointed cone,
// written on the sectors of a fan: each sector spans from ray u to ray v
// (counterclockwise) and carries a polynomial density in x1, x2.
struct FanSpline {
    struct Sector {
        IVec u, v;
        MultiPoly density;
    };
    std::vector<Sector> sectors;

    std::optional<MultiPoly> density_at(const Vec& x) const {
        for (const auto& s : sectors)
            if (cross2q(x, s.u) <= Rational(0) && cross2q(x, s.v) >= Rational(0))
                return s.density;
        return std::nullopt;
    }
};

// Convolves the fan spline with Lebesgue measure on the ray through alpha:
// (T * L_alpha)(x) = integral over s >= 0 of T(x - s alpha).
inline FanSpline fan_convolve_ray(const FanSpline& T, const IVec& alpha) {
    // collect the fan rays of the result
    std::vector<IVec> rays;
    rays.push_back(primitive_ivec(alpha));
    for (const auto& s : T.sectors) {
        rays.push_back(s.u);
        rays.push_back(s.v);
    }
    std::sort(rays.begin(), rays.end(), [](const IVec& a, const IVec& b) {
        long long c = cross2(a, b);
        if (c != 0) return c > 0;
        return false;
    });
    rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
    // the sort above is a total angular order only inside an open half plane;
    // the pointedness of the weight list guarantees that
    for (size_t i = 0; i + 1 < rays.size(); ++i)
        if (cross2(rays[i], rays[i + 1]) <= 0)
            throw std::domain_error("fan_convolve_ray: rays do not fit in an open half plane");

    MultiPoly x1 = MultiPoly::variable("x1"), x2 = MultiPoly::variable("x2");
    MultiPoly sv = MultiPoly::variable("s");
    MultiPoly shift1 = x1 - Rational(alpha[0]) * sv;
    MultiPoly shift2 = x2 - Rational(alpha[1]) * sv;

    FanSpline out;
    for (size_t i = 0; i + 1 < rays.size(); ++i) {
        IVec sample = {rays[i][0] + rays[i + 1][0], rays[i][1] + rays[i + 1][1]};
        Vec x0 = {Rational(sample[0]), Rational(sample[1])};
        // breakpoints of s -> T(x0 - s alpha): crossings with the fan rays of T
        std::vector<std::pair<Rational, IVec>> crossings;
        for (const auto& s : T.sectors)
            for (const IVec& rho : {s.u, s.v}) {
                long long ca = cross2(alpha, rho);
                if (ca == 0) continue;
                Rational sstar = cross2q(x0, rho) / Rational(ca);
                if (sstar <= Rational(0)) continue;
                // the crossing must happen on the ray itself, not its negative
                Vec y = {x0[0] - sstar * Rational(alpha[0]), x0[1] - sstar * Rational(alpha[1])};
                Rational t = rho[0] != 0 ? y[0] / Rational(rho[0]) : y[1] / Rational(rho[1]);
                if (t < Rational(0)) continue;
                crossings.push_back({sstar, rho});
            }
        std::sort(crossings.begin(), crossings.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        crossings.erase(std::unique(crossings.begin(), crossings.end(),
                                    [](const auto& a, const auto& b) { return a.first == b.first; }),
                        crossings.end());

        // accumulate the integral segment by segment; bounds are linear in x
        MultiPoly total;
        MultiPoly prev_bound;  // zero polynomial: the integral starts at s = 0
        for (size_t c = 0; c <= crossings.size(); ++c) {
            Rational seg_lo = c == 0 ? Rational(0) : crossings[c - 1].first;
            std::optional<Rational> seg_hi =
                c < crossings.size() ? std::optional<Rational>(crossings[c].first) : std::nullopt;
            Rational mid = seg_hi ? (seg_lo + *seg_hi) / Rational(2) : seg_lo + Rational(1);
            Vec y = {x0[0] - mid * Rational(alpha[0]), x0[1] - mid * Rational(alpha[1])};
            auto rho = T.density_at(y);
            if (rho && !seg_hi)
                throw std::domain_error("fan_convolve_ray: ray integral does not terminate");
            if (rho) {
                MultiPoly integrand =
                    rho->substitute({{"x1", shift1}, {"x2", shift2}}).antiderivative("s");
                const IVec& rup = crossings[c].second;
                MultiPoly up = (Rational(1) / Rational(cross2(alpha, rup))) *
                               (Rational(rup[1]) * x1 - Rational(rup[0]) * x2);
                total = total + integrand.substitute({{"s", up}}) -
                        integrand.substitute({{"s", prev_bound}});
            }
            if (seg_hi) {
                const IVec& r = crossings[c].second;
                prev_bound = (Rational(1) / Rational(cross2(alpha, r))) *
                             (Rational(r[1]) * x1 - Rational(r[0]) * x2);
            }
        }
        if (!total.is_zero()) out.sectors.push_back({rays[i], rays[i + 1], total});
    }
    return out;
}

}  // namespace detail

// The fan form of the spline obtained by convolving Lebesgue measure on the
// rays through the given weights (rank two, weights spanning the plane).
inline detail::FanSpline truncated_power_fan(const std::vector<IVec>& weights) {
    size_t two = 0;
    for (size_t i = 1; i < weights.size() && two == 0; ++i)
        if (detail::cross2(weights[0], weights[i]) != 0) two = i;
    if (weights.size() < 2 || two == 0)
        throw std::invalid_argument("truncated_power_fan: weights must span the plane");
    IVec a = weights[0], b = weights[two];
    if (detail::cross2(a, b) < 0) std::swap(a, b);
    long long d = detail::cross2(a, b);
    detail::FanSpline T;
    T.sectors.push_back({detail::primitive_ivec(a), detail::primitive_ivec(b),
                         MultiPoly::constant(Rational(1, d))});
    // the first sector absorbs a and b with their original lengths: the
    // pushforward of Lebesgue on the quadrant has density 1/|det(a, b)|
    for (size_t i = 1; i < weights.size(); ++i) {
        if (i == two) continue;
        T = detail::fan_convolve_ray(T, weights[i]);
    }
    return T;
}

// Graded coefficient family D_0, ..., D_nmax of the weight list: D_n collects
// one derivative-weighted term for every way of distributing total order n
// over the rays, the rays left at order zero contributing their continuous
// spline. Supported for weights spanning at most two dimensions.
inline std::vector<FaceDistribution> partition_distributions(const VectorList& delta,
                                                             int n_max) {
    size_t r = delta.rank();
    const auto& ws = delta.weights();
    size_t N = ws.size();
    if (r > 2)
        throw std::domain_error(
            "partition_distributions: supported in ranks one and two only");

    auto bern = bernoulli_upto(n_max + 1);
    // per-ray coefficients c(m) = -B_m / m! for m >= 1 (order m - 1 derivative)
    std::vector<Rational> coeff(static_cast<size_t>(n_max) + 1);
    for (int m = 1; m <= n_max; ++m)
        coeff[static_cast<size_t>(m)] = -bern[static_cast<size_t>(m)] / factorial(m);

    // spread part for every subset of rays, memoized by bitmask
    struct Spread {
        int span = 0;           // dimension of the linear span
        IVec dir;               // span 1: primitive direction
        MultiPoly density1;     // span 1: density in the rail parameter "t1"
        detail::FanSpline fan;  // span 2
    };
    std::map<unsigned, Spread> spread_memo;
    auto spread_of = [&](unsigned mask) -> const Spread& {
        auto it = spread_memo.find(mask);
        if (it != spread_memo.end()) return it->second;
        Spread sp;
        std::vector<IVec> rays;
        for (size_t i = 0; i < N; ++i)
            if (mask & (1u << i)) rays.push_back(ws[i]);
        if (!rays.empty()) {
            bool one_dim = true;
            if (r == 2)
                for (size_t i = 1; i < rays.size(); ++i)
                    one_dim = one_dim && detail::cross2(rays[0], rays[i]) == 0;
            if (one_dim) {
                sp.span = 1;
                sp.dir = detail::primitive_ivec(rays[0]);
                // speeds relative to the primitive direction
                Rational prod(1);
                size_t pi = 0;
                while (sp.dir[pi] == 0) ++pi;
                for (const auto& w : rays) prod *= Rational(w[pi]) / Rational(sp.dir[pi]);
                size_t m = rays.size();
                MultiPoly t1 = MultiPoly::variable("t1");
                MultiPoly mono = m == 1 ? MultiPoly::constant(Rational(1)) : t1.pow(m - 1);
                sp.density1 = (Rational(1) / (factorial(m - 1) * prod)) * mono;
            } else {
                sp.span = 2;
                sp.fan = truncated_power_fan(rays);
            }
        }
        return spread_memo.emplace(mask, std::move(sp)).first->second;
    };

    std::vector<FaceDistribution> out(static_cast<size_t>(n_max) + 1, FaceDistribution(r));
    // odometer over derivative orders per ray
    std::vector<int> order(N, 0);
    while (true) {
        int total = 0;
        for (int m : order) total += m;
        if (total <= n_max) {
            Rational c(1);
            for (int m : order)
                if (m >= 1) c *= coeff[static_cast<size_t>(m)];
            if (!c.is_zero()) {
                std::vector<DerivOp> ops;
                unsigned mask = 0;
                for (size_t i = 0; i < N; ++i) {
                    if (order[i] == 0)
                        mask |= 1u << i;
                    else if (order[i] >= 2)
                        ops.push_back(DerivOp{ws[i], order[i] - 1});
                }
                const Spread& sp = spread_of(mask);
                if (sp.span == 0) {
                    DistTerm t;
                    t.base = Vec(r, Rational(0));
                    t.density = MultiPoly::constant(c);
                    t.ops = ops;
                    out[static_cast<size_t>(total)].add_term(t);
                } else if (sp.span == 1) {
                    DistTerm t;
                    t.base = Vec(r, Rational(0));
                    t.blocks = {{Rail{sp.dir, std::nullopt}}};
                    t.density = c * sp.density1;
                    t.ops = ops;
                    out[static_cast<size_t>(total)].add_term(t);
                } else {
                    for (const auto& sec : sp.fan.sectors) {
                        DistTerm t;
                        t.base = Vec(r, Rational(0));
                        t.blocks = {{Rail{sec.u, std::nullopt}, Rail{sec.v, std::nullopt}}};
                        MultiPoly u1 = MultiPoly::variable("t1");
                        MultiPoly u2 = MultiPoly::variable("t2");
                        MultiPoly img1 = Rational(sec.u[0]) * u1 + Rational(sec.v[0]) * u2;
                        MultiPoly img2 = Rational(sec.u[1]) * u1 + Rational(sec.v[1]) * u2;
                        Rational jac = Rational(detail::cross2(sec.u, sec.v)).abs();
                        t.density = (c * jac) * sec.density.substitute(
                                                    {{"x1", img1}, {"x2", img2}});
                        t.ops = ops;
                        out[static_cast<size_t>(total)].add_term(t);
                    }
                }
            }
        }
        // advance, skipping hopeless suffixes
        size_t i = 0;
        while (i < N && order[i] == n_max) {
            order[i] = 0;
            ++i;
        }
        if (i == N) break;
        ++order[i];
    }
    return out;
}

// Per-chamber polynomial form of the partition count: on each closed sector
// of the weight fan the count agrees with a single polynomial of degree at
// most #weights - rank. The polynomials are fitted on interior points and
// independently verified on a margin, so a wrong structural assumption fails
// loudly rather than returning bad data.
struct ChamberCount {
    IVec u, v;        // boundary rays of the sector (equal in rank one)
    MultiPoly count;  // polynomial in x1, .., xr
};

inline std::vector<ChamberCount> chamber_counts(PartitionCount& counter) {
    const VectorList& delta = counter.weights();
    size_t r = delta.rank();
    size_t N = delta.weights().size();
    int deg = static_cast<int>(N - r);
    if (r == 1) {
        // single chamber on the positive or negative ray
        IVec dir = detail::primitive_ivec(delta.weights()[0]);
        long long s = dir[0] > 0 ? 1 : -1;
        RMat A;
        Vec b;
        for (int row = 0; row <= deg; ++row) {
            long long x = s * (deg + 1 + row);
            Vec arow;
            for (int e = 0; e <= deg; ++e) arow.push_back(Rational(x).pow(e));
            A.push_back(arow);
            b.push_back(counter({x}));
        }
        Vec sol = solve_square(A, b);
        MultiPoly p;
        for (int e = 0; e <= deg; ++e)
            p += sol[static_cast<size_t>(e)] * MultiPoly::variable("x1").pow(e);
        long long hx = s * (2 * deg + 3);
        if (counter({hx}) != p.eval_map({{"x1", Rational(hx)}}))
            throw std::domain_error("chamber_counts: counts are not polynomial on a chamber");
        return {{dir, dir, p}};
    }
    if (r != 2)
        throw std::domain_error("chamber_counts: supported in ranks one and two only");

    // fan rays sorted counterclockwise
    std::vector<IVec> rays;
    for (const auto& w : delta.weights()) rays.push_back(detail::primitive_ivec(w));
    std::sort(rays.begin(), rays.end(), [](const IVec& a, const IVec& b) {
        long long c = detail::cross2(a, b);
        if (c != 0) return c > 0;
        return false;
    });
    rays.erase(std::unique(rays.begin(), rays.end()), rays.end());

    std::vector<std::vector<int>> exps;
    for (int e1 = 0; e1 <= deg; ++e1)
        for (int e2 = 0; e1 + e2 <= deg; ++e2) exps.push_back({e1, e2});

    std::vector<ChamberCount> out;
    for (size_t s = 0; s + 1 < rays.size(); ++s) {
        const IVec& u = rays[s];
        const IVec& v = rays[s + 1];
        // interior sample points a u + b v on a triangular lattice, which is
        // unisolvent for total-degree polynomials; one extra diagonal of
        // points is held out for verification
        std::vector<IVec> pts;
        for (long long t = 2; t <= deg + 3; ++t)
            for (long long a = 1; a < t; ++a) {
                long long b = t - a;
                pts.push_back({a * u[0] + b * v[0], a * u[1] + b * v[1]});
            }
        RMat A;
        Vec bvec;
        for (size_t row = 0; row < exps.size(); ++row) {
            Vec arow;
            for (const auto& e : exps)
                arow.push_back(Rational(pts[row][0]).pow(e[0]) *
                               Rational(pts[row][1]).pow(e[1]));
            A.push_back(arow);
            bvec.push_back(counter(pts[row]));
        }
        Vec sol = solve_square(A, bvec);
        MultiPoly p;
        for (size_t t = 0; t < exps.size(); ++t)
            p += sol[t] * MultiPoly::variable("x1").pow(exps[t][0]) *
                 MultiPoly::variable("x2").pow(exps[t][1]);
        // verify on the held-out samples
        for (size_t extra = exps.size(); extra < pts.size(); ++extra) {
            Rational want = counter(pts[extra]);
            Rational got = p.eval_map({{"x1", Rational(pts[extra][0])},
                                       {"x2", Rational(pts[extra][1])}});
            if (want != got)
                throw std::domain_error(
                    "chamber_counts: counts are not polynomial on a chamber");
        }
        out.push_back({u, v, p});
    }
    return out;
}

// Checks that the chamber polynomials reproduce the count on every lattice
// point of the closed sectors up to the given height, walls included.
struct ContinuityReport {
    bool ok = true;
    IVec witness;
    std::string detail;
};

inline ContinuityReport verify_chamber_continuity(PartitionCount& counter,
                                                  const std::vector<ChamberCount>& chambers,
                                                  long long hi) {
    ContinuityReport rep;
    size_t r = counter.weights().rank();
    if (r == 1) {
        const auto& ch = chambers.at(0);
        long long s = ch.u[0] > 0 ? 1 : -1;
        for (long long x = 0; x <= hi; ++x) {
            Rational want = counter({s * x});
            Rational got = ch.count.eval_map({{"x1", Rational(s * x)}});
            if (want != got) {
                rep.ok = false;
                rep.witness = {s * x};
                rep.detail = "count " + want.str() + " vs polynomial " + got.str();
                return rep;
            }
        }
        return rep;
    }
    for (const auto& ch : chambers) {
        for (long long a = 0; a <= hi; ++a)
            for (long long b = 0; b <= hi; ++b) {
                IVec x = {a * ch.u[0] + b * ch.v[0], a * ch.u[1] + b * ch.v[1]};
                Rational want = counter(x);
                Rational got = ch.count.eval_map(
                    {{"x1", Rational(x[0])}, {"x2", Rational(x[1])}});
                if (want != got) {
                    rep.ok = false;
                    rep.witness = x;
                    rep.detail = "count " + want.str() + " vs polynomial " + got.str();
                    return rep;
                }
            }
    }
    return rep;
}

}  // namespace dhasym
