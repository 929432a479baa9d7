#pragma once

// One-variable piecewise polynomials with rational breakpoints, zero outside
// the outermost breakpoints. These serve as exactly integrable test function
// factors (bumps, plateaus, indicators) and as canonical densities for
// one-dimensional distributions.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dhasym/bernoulli.hpp"
#include "dhasym/multipoly.hpp"
#include "dhasym/rational.hpp"

namespace dhasym {

class PiecewisePoly1D {
public:
    // Identically zero.
    PiecewisePoly1D() = default;

    // breaks.size() == pieces.size() + 1, strictly increasing; pieces are
    // polynomials in the variable "x".
    PiecewisePoly1D(std::vector<Rational> breaks, std::vector<MultiPoly> pieces)
        : breaks_(std::move(breaks)), pieces_(std::move(pieces)) {
        if (breaks_.size() != pieces_.size() + 1 || pieces_.empty())
            throw std::invalid_argument("PiecewisePoly1D: breaks/pieces size mismatch");
        for (size_t i = 0; i + 1 < breaks_.size(); ++i)
            if (!(breaks_[i] < breaks_[i + 1]))
                throw std::invalid_argument("PiecewisePoly1D: breakpoints must increase");
        for (const auto& p : pieces_)
            for (const auto& v : p.vars())
                if (v != "x")
                    throw std::invalid_argument("PiecewisePoly1D: pieces must use variable x");
    }

    static PiecewisePoly1D polynomial_on(const Rational& a, const Rational& b,
                                         const MultiPoly& p) {
        return PiecewisePoly1D({a, b}, {p});
    }

    static PiecewisePoly1D indicator(const Rational& a, const Rational& b) {
        return polynomial_on(a, b, MultiPoly::constant(Rational(1)));
    }

    // (1 - ((x-c)/w)^2)^power on [c-w, c+w]; vanishes to order `power` at the
    // endpoints, hence C^{power-1} on the line.
    static PiecewisePoly1D bump_power(const Rational& c, const Rational& w, int power) {
        if (power < 1 || w <= Rational(0))
            throw std::invalid_argument("bump_power: bad parameters");
        auto x = MultiPoly::variable("x");
        auto u = (Rational(1) / w) * (x - MultiPoly::constant(c));
        auto p = (MultiPoly::constant(Rational(1)) - u * u).pow(static_cast<unsigned>(power));
        return polynomial_on(c - w, c + w, p);
    }

    // Classic smoothstep of order p on [0,1]: first p derivatives vanish at
    // both ends, S(0)=0, S(1)=1.
    static MultiPoly smoothstep(int p) {
        if (p < 0) throw std::invalid_argument("smoothstep: negative order");
        auto u = MultiPoly::variable("x");
        MultiPoly s;
        for (int k = 0; k <= p; ++k) {
            Rational c = binomial(p + k, k) * binomial(2 * p + 1, p - k);
            if (k % 2 == 1) c = -c;
            s += c * u.pow(static_cast<unsigned>(p + k + 1));
        }
        return s;
    }

    // C^order plateau: 0 outside [a0,b0], 1 on [a1,b1], smoothstep ramps
    // between.
    static PiecewisePoly1D plateau(const Rational& a0, const Rational& a1, const Rational& b1,
                                   const Rational& b0, int order) {
        if (!(a0 < a1 && a1 < b1 && b1 < b0))
            throw std::invalid_argument("plateau: need a0 < a1 < b1 < b0");
        auto x = MultiPoly::variable("x");
        auto s = smoothstep(order);
        auto rise = s.substitute({{"x", (Rational(1) / (a1 - a0)) * (x - MultiPoly::constant(a0))}});
        auto fall = s.substitute({{"x", (Rational(1) / (b0 - b1)) * (MultiPoly::constant(b0) - x)}});
        return PiecewisePoly1D({a0, a1, b1, b0},
                               {rise, MultiPoly::constant(Rational(1)), fall});
    }

    bool is_zero() const { return pieces_.empty(); }
    const std::vector<Rational>& breaks() const { return breaks_; }
    const std::vector<MultiPoly>& pieces() const { return pieces_; }

    friend bool operator==(const PiecewisePoly1D& a, const PiecewisePoly1D& b) {
        return a.breaks_ == b.breaks_ && a.pieces_ == b.pieces_;
    }
    friend bool operator!=(const PiecewisePoly1D& a, const PiecewisePoly1D& b) {
        return !(a == b);
    }

    Rational support_lo() const {
        if (is_zero()) throw std::domain_error("PiecewisePoly1D: zero function has no support");
        return breaks_.front();
    }
    Rational support_hi() const {
        if (is_zero()) throw std::domain_error("PiecewisePoly1D: zero function has no support");
        return breaks_.back();
    }

    std::vector<Rational> interior_breaks() const {
        if (is_zero()) return {};
        return std::vector<Rational>(breaks_.begin() + 1, breaks_.end() - 1);
    }

    // The polynomial valid on the piece containing x, for x in the interior
    // of a piece; at a breakpoint the right piece is used (outermost
    // breakpoints fall back to zero outside).
    MultiPoly piece_at(const Rational& x) const {
        if (is_zero() || x < breaks_.front() || x > breaks_.back()) return MultiPoly();
        if (x == breaks_.back()) return pieces_.back();
        for (size_t i = 0; i + 1 < breaks_.size(); ++i)
            if (x >= breaks_[i] && x < breaks_[i + 1]) return pieces_[i];
        return MultiPoly();
    }

    Rational eval(const Rational& x) const {
        auto p = piece_at(x);
        if (p.is_zero()) return Rational(0);
        return p.eval_map({{"x", x}});
    }

    // Derivative value at x when both one-sided polynomial extensions agree;
    // a jump in the requested derivative is an error.
    Rational eval_deriv_checked(const Rational& x, int order) const {
        if (is_zero()) return Rational(0);
        auto deriv_val = [&](MultiPoly p) {
            bool has_x = std::find(p.vars().begin(), p.vars().end(), "x") != p.vars().end();
            if (order > 0 && !has_x) return Rational(0);
            for (int i = 0; i < order; ++i) p = p.derivative("x");
            return p.eval_map({{"x", x}});
        };
        // collect candidate pieces that touch x (including zero outside)
        std::vector<MultiPoly> local;
        if (x <= breaks_.front() || x >= breaks_.back()) local.push_back(MultiPoly());
        for (size_t i = 0; i + 1 < breaks_.size(); ++i)
            if (x >= breaks_[i] && x <= breaks_[i + 1]) local.push_back(pieces_[i]);
        Rational v = deriv_val(local[0]);
        for (size_t i = 1; i < local.size(); ++i)
            if (deriv_val(local[i]) != v)
                throw std::domain_error(
                    "test function lacks the smoothness required at an atom");
        return v;
    }

    // Exact integral over the whole support.
    Rational integral() const {
        Rational total;
        for (size_t i = 0; i < pieces_.size(); ++i) {
            auto F = pieces_[i].antiderivative("x");
            total += F.eval_map({{"x", breaks_[i + 1]}}) - F.eval_map({{"x", breaks_[i]}});
        }
        return total;
    }

private:
    std::vector<Rational> breaks_;
    std::vector<MultiPoly> pieces_;
};

}  // namespace dhasym
