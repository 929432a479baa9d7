#pragma once

// Laurent series in one bookkeeping variable q whose coefficients are
// rational combinations of integer linear forms raised to integer powers
// (negative powers allowed). This is the coefficient ring needed for
// expansions like 1/(1 - e^{q<a,X>}), whose q^j coefficient is a rational
// multiple of <a,X>^j.

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dhasym/rational.hpp"

namespace dhasym {

// Finite sum  c . prod_k <f_k, X>^{e_k}  over distinct canonical forms f_k.
// Forms are primitive integer vectors whose first nonzero entry is positive;
// the sign lost in canonicalization is folded into the coefficient.
class RationalLinearCombo {
public:
    // Key: sorted list of (form, exponent) with nonzero exponents.
    using Key = std::vector<std::pair<IVec, int>>;

    RationalLinearCombo() = default;

    static RationalLinearCombo scalar(const Rational& c) {
        RationalLinearCombo r;
        if (!c.is_zero()) r.terms_[{}] = c;
        return r;
    }

    static RationalLinearCombo form_power(IVec form, int exp, const Rational& coeff) {
        bool zero_form = true;
        for (long long x : form) zero_form = zero_form && x == 0;
        if (zero_form) {
            if (exp < 0)
                throw std::invalid_argument("RationalLinearCombo: negative power of zero form");
            if (exp > 0) return RationalLinearCombo();
            return scalar(coeff);
        }
        if (exp == 0) return scalar(coeff);
        int sign = make_canonical_form(form);
        Rational c = coeff;
        if (sign < 0 && (exp % 2 != 0)) c = -c;
        RationalLinearCombo r;
        if (!c.is_zero()) r.terms_[{{std::move(form), exp}}] = c;
        return r;
    }

    const std::map<Key, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_scalar() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }
    Rational scalar_value() const {
        if (!is_scalar()) throw std::domain_error("RationalLinearCombo: not a scalar");
        return terms_.empty() ? Rational(0) : terms_.begin()->second;
    }

    // Total weight (sum of exponents) when every term agrees; nullopt if mixed.
    std::optional<int> weight() const {
        std::optional<int> w;
        for (const auto& [key, c] : terms_) {
            int tw = 0;
            for (const auto& [f, e] : key) tw += e;
            if (!w)
                w = tw;
            else if (*w != tw)
                return std::nullopt;
        }
        return w;
    }

    friend RationalLinearCombo operator+(const RationalLinearCombo& a,
                                         const RationalLinearCombo& b) {
        RationalLinearCombo r = a;
        for (const auto& [key, c] : b.terms_) r.add_term(key, c);
        return r;
    }

    RationalLinearCombo operator-() const {
        RationalLinearCombo r = *this;
        for (auto& [key, c] : r.terms_) c = -c;
        return r;
    }

    friend RationalLinearCombo operator-(const RationalLinearCombo& a,
                                         const RationalLinearCombo& b) {
        return a + (-b);
    }

    friend RationalLinearCombo operator*(const RationalLinearCombo& a,
                                         const RationalLinearCombo& b) {
        RationalLinearCombo r;
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) r.add_term(merge_keys(ka, kb), ca * cb);
        return r;
    }

    friend RationalLinearCombo operator*(const Rational& c, const RationalLinearCombo& a) {
        RationalLinearCombo r;
        if (c.is_zero()) return r;
        r = a;
        for (auto& [key, v] : r.terms_) v *= c;
        return r;
    }

    friend bool operator==(const RationalLinearCombo& a, const RationalLinearCombo& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const RationalLinearCombo& a, const RationalLinearCombo& b) {
        return !(a == b);
    }

    // Evaluates at a point X; negative powers require nonvanishing forms.
    Rational eval(const Vec& X) const {
        Rational total;
        for (const auto& [key, c] : terms_) {
            Rational t = c;
            for (const auto& [f, e] : key) {
                Rational v = dot(f, X);
                if (v.is_zero() && e < 0)
                    throw std::domain_error("RationalLinearCombo: pole at evaluation point");
                t *= v.pow(e);
            }
            total += t;
        }
        return total;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [key, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << c.str();
            for (const auto& [f, e] : key) {
                os << "*<";
                for (size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << f[i];
                os << ">^" << e;
            }
        }
        return os.str();
    }

private:
    static Key merge_keys(const Key& a, const Key& b) {
        Key out;
        size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
                out.push_back(a[i++]);
            } else if (i == a.size() || b[j].first < a[i].first) {
                out.push_back(b[j++]);
            } else {
                int e = a[i].second + b[j].second;
                if (e != 0) out.emplace_back(a[i].first, e);
                ++i, ++j;
            }
        }
        return out;
    }

    void add_term(const Key& key, const Rational& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.emplace(key, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    std::map<Key, Rational> terms_;
};

// Laurent series sum_{j >= lowest} a_j q^j known exactly for j <= trunc.
class LaurentSeries {
public:
    explicit LaurentSeries(int trunc) : trunc_(trunc) {}

    static LaurentSeries zero(int trunc) { return LaurentSeries(trunc); }

    static LaurentSeries one(int trunc) {
        LaurentSeries s(trunc);
        if (trunc >= 0) s.coef_[0] = RationalLinearCombo::scalar(Rational(1));
        return s;
    }

    static LaurentSeries monomial(int power, RationalLinearCombo c, int trunc) {
        LaurentSeries s(trunc);
        if (power <= trunc && !c.is_zero()) s.coef_[power] = std::move(c);
        return s;
    }

    int truncation_order() const { return trunc_; }

    RationalLinearCombo coeff(int j) const {
        if (j > trunc_)
            throw std::out_of_range("LaurentSeries: coefficient beyond truncation order");
        auto it = coef_.find(j);
        return it == coef_.end() ? RationalLinearCombo() : it->second;
    }

    const std::map<int, RationalLinearCombo>& coefficients() const { return coef_; }

    std::optional<int> lowest() const {
        if (coef_.empty()) return std::nullopt;
        return coef_.begin()->first;
    }

    void set_coeff(int j, RationalLinearCombo c) {
        if (j > trunc_) return;
        if (c.is_zero())
            coef_.erase(j);
        else
            coef_[j] = std::move(c);
    }

    friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
        LaurentSeries s(std::min(a.trunc_, b.trunc_));
        for (const auto& [j, c] : a.coef_)
            if (j <= s.trunc_) s.coef_[j] = c;
        for (const auto& [j, c] : b.coef_) {
            if (j > s.trunc_) continue;
            auto it = s.coef_.find(j);
            if (it == s.coef_.end()) {
                s.coef_[j] = c;
            } else {
                it->second = it->second + c;
                if (it->second.is_zero()) s.coef_.erase(it);
            }
        }
        return s;
    }

    LaurentSeries operator-() const {
        LaurentSeries s(trunc_);
        for (const auto& [j, c] : coef_) s.coef_[j] = -c;
        return s;
    }

    friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) {
        return a + (-b);
    }

    // Product; the result is exact up to the order both factors support.
    friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
        int la = a.coef_.empty() ? 0 : a.coef_.begin()->first;
        int lb = b.coef_.empty() ? 0 : b.coef_.begin()->first;
        LaurentSeries s(std::min(a.trunc_ + lb, b.trunc_ + la));
        for (const auto& [i, ca] : a.coef_)
            for (const auto& [j, cb] : b.coef_) {
                if (i + j > s.trunc_) continue;
                auto prod = ca * cb;
                if (prod.is_zero()) continue;
                auto it = s.coef_.find(i + j);
                if (it == s.coef_.end()) {
                    s.coef_[i + j] = prod;
                } else {
                    it->second = it->second + prod;
                    if (it->second.is_zero()) s.coef_.erase(it);
                }
            }
        return s;
    }

    // Multiplicative inverse; requires the lowest coefficient to be a nonzero
    // scalar rational.
    LaurentSeries inverse() const {
        if (coef_.empty()) throw std::domain_error("LaurentSeries: inverse of zero");
        int l = coef_.begin()->first;
        const RationalLinearCombo& lead = coef_.begin()->second;
        if (!lead.is_scalar())
            throw std::domain_error("LaurentSeries: inverse needs a scalar leading term");
        Rational c = lead.scalar_value();
        int prec = trunc_ - l;  // shifted series known up to this order
        LaurentSeries inv(prec - l);
        std::map<int, RationalLinearCombo> shifted;
        for (const auto& [j, v] : coef_) shifted[j - l] = v;
        std::vector<RationalLinearCombo> b(static_cast<size_t>(prec) + 1);
        b[0] = RationalLinearCombo::scalar(Rational(1) / c);
        for (int n = 1; n <= prec; ++n) {
            RationalLinearCombo s;
            for (int i = 1; i <= n; ++i) {
                auto it = shifted.find(i);
                if (it == shifted.end()) continue;
                s = s + it->second * b[static_cast<size_t>(n - i)];
            }
            b[static_cast<size_t>(n)] = (Rational(-1) / c) * s;
        }
        for (int n = 0; n <= prec; ++n)
            if (n - l <= inv.trunc_) inv.set_coeff(n - l, b[static_cast<size_t>(n)]);
        return inv;
    }

    friend bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
        return a.trunc_ == b.trunc_ && a.coef_ == b.coef_;
    }

    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (const auto& [j, c] : coef_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c.str() << ")*q^" << j;
        }
        if (first) os << "0";
        os << " + O(q^" << trunc_ + 1 << ")";
        return os.str();
    }

private:
    int trunc_;
    std::map<int, RationalLinearCombo> coef_;
};

}  // namespace dhasym
