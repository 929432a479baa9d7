#pragma once

// Exact rational scalars backed by GMP, plus small vector helpers.
// Every Rational is kept in canonical form: reduced fraction, positive
// denominator. Serialization is always the string "num/den".

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace dhasym {

class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}
    Rational(int n) : v_(n) {}
    Rational(long long n) { set_ll(n); }
    Rational(long num, long den) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }
    explicit Rational(const mpz_class& z) : v_(z) {}

    // Parses "num/den" or a bare integer string.
    static Rational parse(const std::string& s) {
        if (s.empty()) throw std::invalid_argument("Rational: empty string");
        mpq_class q;
        if (q.set_str(s, 10) != 0)
            throw std::invalid_argument("Rational: bad literal '" + s + "'");
        if (q.get_den() == 0)
            throw std::invalid_argument("Rational: zero denominator in '" + s + "'");
        q.canonicalize();
        return Rational(std::move(q), already_canonical{});
    }

    mpz_class num() const { return v_.get_num(); }
    mpz_class den() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    Rational operator-() const { return Rational(mpq_class(-v_), already_canonical{}); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    Rational abs() const { return Rational(mpq_class(::abs(v_)), already_canonical{}); }

    // Integer power; negative exponents require a nonzero base.
    Rational pow(long e) const {
        if (e == 0) return Rational(1);
        if (is_zero() && e < 0) throw std::domain_error("Rational: 0 to a negative power");
        mpq_class base = e < 0 ? mpq_class(1 / v_) : v_;
        unsigned long n = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
        mpq_class out;
        mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), n);
        mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), n);
        return Rational(std::move(out), already_canonical{});
    }

    mpz_class floor() const {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
        return q;
    }
    mpz_class ceil() const {
        mpz_class q;
        mpz_cdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
        return q;
    }

    std::string str() const { return v_.get_num().get_str() + "/" + v_.get_den().get_str(); }
    double to_double() const { return v_.get_d(); }

private:
    struct already_canonical {};
    Rational(mpq_class q, already_canonical) : v_(std::move(q)) {}
    void set_ll(long long n) { v_ = mpq_class(mpz_class(std::to_string(n))); }
    mpq_class v_;
};

using Vec = std::vector<Rational>;
using IVec = std::vector<long long>;

inline Rational dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    Rational s;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Rational dot(const IVec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    Rational s;
    for (size_t i = 0; i < a.size(); ++i) s += Rational(a[i]) * b[i];
    return s;
}

inline long long dot(const IVec& a, const IVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    long long s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline long long ivec_gcd(const IVec& v) {
    long long g = 0;
    for (long long x : v) g = std::gcd(g, x < 0 ? -x : x);
    return g;
}

// Divides out the gcd, keeping direction.
inline IVec primitive(IVec v) {
    long long g = ivec_gcd(v);
    if (g > 1)
        for (auto& x : v) x /= g;
    return v;
}

// Divides out the gcd and flips so the first nonzero entry is positive.
// Returns the sign that was factored out (+1 or -1; +1 for zero vectors).
inline int make_canonical_form(IVec& v) {
    long long g = ivec_gcd(v);
    if (g > 1)
        for (auto& x : v) x /= g;
    for (long long x : v) {
        if (x > 0) return 1;
        if (x < 0) {
            for (auto& y : v) y = -y;
            return -1;
        }
    }
    return 1;
}

inline bool lex_positive(const IVec& v) {
    for (long long x : v) {
        if (x > 0) return true;
        if (x < 0) return false;
    }
    return false;
}

inline IVec ivec_neg(IVec v) {
    for (auto& x : v) x = -x;
    return v;
}

inline Vec vec_add(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec_add: size mismatch");
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec vec_sub(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec_sub: size mismatch");
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec vec_scale(const Rational& c, const Vec& a) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

inline Vec to_vec(const IVec& a) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = Rational(a[i]);
    return r;
}

}  // namespace dhasym
