#pragma once

// Multivariate polynomials with Rational coefficients.
//
// Variable lists are kept sorted by name and exponent vectors are stored in a
// map ordered by graded lexicographic order, so equal polynomials have equal
// representations. Arithmetic between polynomials over different variable
// lists aligns them to the sorted union first.

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dhasym/rational.hpp"

namespace dhasym {

struct GrlexLess {
    bool operator()(const std::vector<int>& a, const std::vector<int>& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        long da = 0, db = 0;
        for (int x : a) da += x;
        for (int x : b) db += x;
        if (da != db) return da < db;
        return a < b;
    }
};

class MultiPoly {
public:
    using TermMap = std::map<std::vector<int>, Rational, GrlexLess>;

    MultiPoly() = default;

    static MultiPoly constant(const Rational& c) {
        MultiPoly p;
        if (!c.is_zero()) p.terms_[{}] = c;
        return p;
    }

    static MultiPoly variable(const std::string& name) {
        MultiPoly p;
        p.vars_ = {name};
        p.terms_[{1}] = Rational(1);
        return p;
    }

    static MultiPoly monomial(std::vector<std::string> vars, std::vector<int> exps,
                              const Rational& coeff) {
        if (vars.size() != exps.size())
            throw std::invalid_argument("MultiPoly: vars/exps size mismatch");
        for (int e : exps)
            if (e < 0) throw std::invalid_argument("MultiPoly: negative exponent");
        std::vector<size_t> idx(vars.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&](size_t i, size_t j) { return vars[i] < vars[j]; });
        MultiPoly p;
        for (size_t i : idx) {
            if (!p.vars_.empty() && p.vars_.back() == vars[i])
                throw std::invalid_argument("MultiPoly: duplicate variable " + vars[i]);
            p.vars_.push_back(vars[i]);
        }
        std::vector<int> sorted_exps(exps.size());
        for (size_t k = 0; k < idx.size(); ++k) sorted_exps[k] = exps[idx[k]];
        if (!coeff.is_zero()) p.terms_[sorted_exps] = coeff;
        return p;
    }

    const std::vector<std::string>& vars() const { return vars_; }
    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && degree_of(terms_.begin()->first) == 0);
    }

    Rational constant_value() const {
        if (!is_constant()) throw std::domain_error("MultiPoly: not a constant");
        return terms_.empty() ? Rational(0) : terms_.begin()->second;
    }

    // Total degree; -1 for the zero polynomial.
    int total_degree() const {
        if (terms_.empty()) return -1;
        return degree_of(terms_.rbegin()->first);
    }

    // Re-expresses the polynomial over a sorted superset of its variables.
    MultiPoly with_vars(const std::vector<std::string>& newvars) const {
        MultiPoly out;
        out.vars_ = newvars;
        std::vector<size_t> pos(vars_.size());
        for (size_t i = 0; i < vars_.size(); ++i) {
            auto it = std::lower_bound(newvars.begin(), newvars.end(), vars_[i]);
            if (it == newvars.end() || *it != vars_[i])
                throw std::invalid_argument("MultiPoly: variable " + vars_[i] +
                                            " missing from target list");
            pos[i] = static_cast<size_t>(it - newvars.begin());
        }
        for (const auto& [e, c] : terms_) {
            std::vector<int> ne(newvars.size(), 0);
            for (size_t i = 0; i < e.size(); ++i) ne[pos[i]] = e[i];
            out.terms_[ne] = c;
        }
        return out;
    }

    static std::vector<std::string> merged_vars(const MultiPoly& a, const MultiPoly& b) {
        std::vector<std::string> m;
        std::set_union(a.vars_.begin(), a.vars_.end(), b.vars_.begin(), b.vars_.end(),
                       std::back_inserter(m));
        return m;
    }

    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
        auto m = merged_vars(a, b);
        MultiPoly x = a.with_vars(m), y = b.with_vars(m);
        for (const auto& [e, c] : y.terms_) x.add_term(e, c);
        return x;
    }

    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
        auto m = merged_vars(a, b);
        MultiPoly x = a.with_vars(m), y = b.with_vars(m);
        for (const auto& [e, c] : y.terms_) x.add_term(e, -c);
        return x;
    }

    MultiPoly operator-() const {
        MultiPoly out = *this;
        for (auto& [e, c] : out.terms_) c = -c;
        return out;
    }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        auto m = merged_vars(a, b);
        MultiPoly x = a.with_vars(m), y = b.with_vars(m);
        MultiPoly out;
        out.vars_ = m;
        for (const auto& [ea, ca] : x.terms_)
            for (const auto& [eb, cb] : y.terms_) {
                std::vector<int> e(ea.size());
                for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                out.add_term(e, ca * cb);
            }
        return out;
    }

    friend MultiPoly operator*(const Rational& c, const MultiPoly& p) {
        MultiPoly out = p;
        if (c.is_zero()) {
            out.terms_.clear();
            return out;
        }
        for (auto& [e, v] : out.terms_) v *= c;
        return out;
    }

    MultiPoly& operator+=(const MultiPoly& o) { return *this = *this + o; }
    MultiPoly& operator-=(const MultiPoly& o) { return *this = *this - o; }
    MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

    MultiPoly pow(unsigned n) const {
        MultiPoly out = constant(Rational(1));
        MultiPoly base = *this;
        while (n) {
            if (n & 1) out = out * base;
            base = base * base;
            n >>= 1;
        }
        return out;
    }

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        auto m = merged_vars(a, b);
        return a.with_vars(m).terms_ == b.with_vars(m).terms_;
    }
    friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

    MultiPoly derivative(const std::string& var) const {
        size_t i = var_index(var);
        MultiPoly out;
        out.vars_ = vars_;
        for (const auto& [e, c] : terms_) {
            if (e[i] == 0) continue;
            std::vector<int> ne = e;
            ne[i] -= 1;
            out.add_term(ne, c * Rational(e[i]));
        }
        return out;
    }

    // Derivative along an integer direction expressed in this polynomial's
    // (sorted) variable order.
    MultiPoly directional_derivative(const IVec& dir) const {
        if (dir.size() != vars_.size())
            throw std::invalid_argument("MultiPoly: direction dimension mismatch");
        MultiPoly out;
        out.vars_ = vars_;
        for (size_t i = 0; i < vars_.size(); ++i) {
            if (dir[i] == 0) continue;
            out = out + Rational(dir[i]) * derivative(vars_[i]);
        }
        return out;
    }

    MultiPoly antiderivative(const std::string& var) const {
        MultiPoly self = *this;
        if (std::find(vars_.begin(), vars_.end(), var) == vars_.end())
            self = self.with_vars(merged_vars(self, variable(var)));
        size_t i = self.var_index(var);
        MultiPoly out;
        out.vars_ = self.vars_;
        for (const auto& [e, c] : self.terms_) {
            std::vector<int> ne = e;
            ne[i] += 1;
            out.add_term(ne, c / Rational(ne[i]));
        }
        return out;
    }

    // Evaluation; `point` follows the sorted variable order.
    Rational eval(const Vec& point) const {
        if (point.size() != vars_.size())
            throw std::invalid_argument("MultiPoly: evaluation dimension mismatch");
        Rational total;
        for (const auto& [e, c] : terms_) {
            Rational t = c;
            for (size_t i = 0; i < e.size(); ++i)
                if (e[i] != 0) t *= point[i].pow(e[i]);
            total += t;
        }
        return total;
    }

    Rational eval_map(const std::map<std::string, Rational>& point) const {
        Vec p(vars_.size());
        for (size_t i = 0; i < vars_.size(); ++i) {
            auto it = point.find(vars_[i]);
            if (it == point.end())
                throw std::invalid_argument("MultiPoly: no value for variable " + vars_[i]);
            p[i] = it->second;
        }
        return eval(p);
    }

    // Substitutes polynomials for variables; unmapped variables stay themselves.
    MultiPoly substitute(const std::map<std::string, MultiPoly>& sub) const {
        std::vector<MultiPoly> images(vars_.size());
        for (size_t i = 0; i < vars_.size(); ++i) {
            auto it = sub.find(vars_[i]);
            images[i] = it != sub.end() ? it->second : variable(vars_[i]);
        }
        MultiPoly total;
        for (const auto& [e, c] : terms_) {
            MultiPoly t = constant(c);
            for (size_t i = 0; i < e.size(); ++i)
                if (e[i] != 0) t = t * images[i].pow(static_cast<unsigned>(e[i]));
            total = total + t;
        }
        return total;
    }

    MultiPoly homogeneous_component(int n) const {
        MultiPoly out;
        out.vars_ = vars_;
        for (const auto& [e, c] : terms_)
            if (degree_of(e) == n) out.terms_[e] = c;
        return out;
    }

    // Drops variables that no term uses.
    MultiPoly compacted() const {
        std::vector<bool> used(vars_.size(), false);
        for (const auto& [e, c] : terms_)
            for (size_t i = 0; i < e.size(); ++i)
                if (e[i] != 0) used[i] = true;
        MultiPoly out;
        std::vector<size_t> keep;
        for (size_t i = 0; i < vars_.size(); ++i)
            if (used[i]) {
                keep.push_back(i);
                out.vars_.push_back(vars_[i]);
            }
        for (const auto& [e, c] : terms_) {
            std::vector<int> ne(keep.size());
            for (size_t k = 0; k < keep.size(); ++k) ne[k] = e[keep[k]];
            out.terms_[ne] = c;
        }
        return out;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            if (!first) os << " + ";
            first = false;
            os << it->second.str();
            for (size_t i = 0; i < it->first.size(); ++i) {
                if (it->first[i] == 0) continue;
                os << "*" << vars_[i];
                if (it->first[i] > 1) os << "^" << it->first[i];
            }
        }
        return os.str();
    }

private:
    static int degree_of(const std::vector<int>& e) {
        int d = 0;
        for (int x : e) d += x;
        return d;
    }

    size_t var_index(const std::string& var) const {
        auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
        if (it == vars_.end() || *it != var)
            throw std::invalid_argument("MultiPoly: unknown variable " + var);
        return static_cast<size_t>(it - vars_.begin());
    }

    void add_term(const std::vector<int>& e, const Rational& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    std::vector<std::string> vars_;
    TermMap terms_;
};

}  // namespace dhasym
