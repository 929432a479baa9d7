#pragma once

// Scaled multiplicity sums. A model bundles a multiplicity function with the
// graded family of distributions describing its large-twist behaviour; theta
// evaluates the sum of m(lambda, k) f(lambda / k), verify_exact checks the
// finite expansion against the family for polynomial data, and
// verify_asymptotic_order fits the decay rate of the truncation error for
// smooth compactly supported data.

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dhasym/distribution.hpp"
#include "dhasym/multiplicity.hpp"
#include "dhasym/multipoly.hpp"
#include "dhasym/polytope.hpp"
#include "dhasym/rational.hpp"
#include "dhasym/test_function.hpp"

namespace dhasym {

struct ThetaModel {
    std::string name;
    MultiplicityFunction mult;
    // homogeneity degree of the twist scaling: the sum opens with k^d times
    // the order-zero pairing, independent of the rank the weights live in
    int d = 0;
    std::function<FaceDistribution(int)> dh;
    // pairing cutoff for families whose individual pieces are unbounded even
    // though the sum has compact support
    std::optional<std::pair<Vec, Vec>> pair_box;
    bool compact = true;

    Rational pair_dh(int n, const MultiPoly& p) const {
        FaceDistribution D = dh(n);
        if (pair_box) return D.pair_poly_boxed(p, pair_box->first, pair_box->second);
        return D.pair_poly(p);
    }

    Rational pair_dh(int n, const TestFunction& f) const { return dh(n).pair(f); }
};

namespace detail {

// Lattice window covering the sum for one twist: the multiplicity box for
// compact models, intersected with the test-function support when present.
inline std::vector<std::pair<long long, long long>> theta_window(const ThetaModel& model,
                                                                 long long k,
                                                                 const TestFunction& f) {
    size_t r = model.mult.rank;
    if (f.dim() != r) throw std::invalid_argument("theta: test function dimension mismatch");
    std::vector<std::pair<long long, long long>> box;
    if (model.compact) box = model.mult.support_box(k);

    auto clip = [&](size_t i, const Rational& lo, const Rational& hi) {
        long long a = (Rational(k) * lo).ceil().get_si();
        long long b = (Rational(k) * hi).floor().get_si();
        if (box.empty()) return std::make_pair(a, b);
        return std::make_pair(std::max(box[i].first, a), std::min(box[i].second, b));
    };

    std::vector<std::pair<long long, long long>> out(r);
    for (size_t i = 0; i < r; ++i) {
        std::optional<std::pair<Rational, Rational>> fsup;
        if (f.kind() == TestFunction::Kind::Exact) {
            const auto& fac = f.factors()[i];
            if (fac && !fac->is_zero()) fsup = {fac->support_lo(), fac->support_hi()};
        } else {
            const auto& b = f.support_box()[i];
            fsup = {Rational(static_cast<long>(std::floor(b.first))),
                    Rational(static_cast<long>(std::ceil(b.second)))};
        }
        if (fsup)
            out[i] = clip(i, fsup->first, fsup->second);
        else if (!box.empty())
            out[i] = box[i];
        else
            throw std::domain_error(
                "theta: unbounded sum; a noncompact model needs compactly supported data in "
                "every coordinate");
    }
    return out;
}

}  // namespace detail

// <Theta(k), f> = sum over lattice points of m(lambda, k) f(lambda / k).
inline Rational theta(const ThetaModel& model, long long k, const TestFunction& f) {
    if (k <= 0) throw std::invalid_argument("theta: twist must be positive");
    if (f.kind() != TestFunction::Kind::Exact)
        throw std::invalid_argument("theta: exact evaluation needs an exact test function");
    auto window = detail::theta_window(model, k, f);
    Rational total;
    detail::for_each_lattice_point(window, [&](const IVec& lambda) {
        Rational m = model.mult.eval(lambda, k);
        if (m.is_zero()) return;
        Vec x(lambda.size());
        for (size_t i = 0; i < lambda.size(); ++i) x[i] = Rational(lambda[i]) / Rational(k);
        Rational fv = f.eval_exact(x);
        if (!fv.is_zero()) total += m * fv;
    });
    return total;
}

inline Rational theta(const ThetaModel& model, long long k, const MultiPoly& p) {
    return theta(model, k, TestFunction::polynomial(model.mult.rank, p));
}

// Numeric fallback for callable data with a declared support box.
inline double theta_numeric(const ThetaModel& model, long long k, const TestFunction& f) {
    if (k <= 0) throw std::invalid_argument("theta: twist must be positive");
    auto window = detail::theta_window(model, k, f);
    double total = 0.0;
    detail::for_each_lattice_point(window, [&](const IVec& lambda) {
        Rational m = model.mult.eval(lambda, k);
        if (m.is_zero()) return;
        std::vector<double> x(lambda.size());
        for (size_t i = 0; i < lambda.size(); ++i)
            x[i] = static_cast<double>(lambda[i]) / static_cast<double>(k);
        total += m.to_double() * f.eval_numeric(x);
    });
    return total;
}

struct ExactRow {
    long long k = 0;
    Rational lhs;
    Rational rhs;
    bool equal = false;
};

struct ExactReport {
    std::string model;
    std::string convention;
    int degree = 0;
    int d = 0;
    std::vector<ExactRow> rows;
    bool all_equal = true;
    std::optional<long long> first_mismatch;

    std::string str() const {
        std::ostringstream os;
        os << "model: " << model << "\n" << convention << "\n";
        for (const auto& r : rows)
            os << "k=" << r.k << "  lhs=" << r.lhs.str() << "  rhs=" << r.rhs.str()
               << (r.equal ? "  equal" : "  MISMATCH") << "\n";
        os << (all_equal ? "all rows equal" : "FAILED") << "\n";
        return os.str();
    }
};

// Exact finite expansion of the scaled sum for polynomial data: with
// N = deg P, both sides agree for every twist once the family is summed
// through order N + d. Powers of k below k^0 appear when n exceeds d.
inline ExactReport verify_exact(const ThetaModel& model, const MultiPoly& P,
                                const std::vector<long long>& ks) {
    if (!model.compact)
        throw std::domain_error("verify_exact: needs a compact model");
    ExactReport rep;
    rep.model = model.name;
    rep.degree = P.total_degree();
    rep.d = model.d;
    rep.convention =
        "convention: sum_lambda m(lambda,k) P(lambda/k) = "
        "sum_{n<=deg+d} k^(d-n) <DH_n, P>";
    int top = rep.degree + model.d;
    std::vector<Rational> coeff;
    for (int n = 0; n <= top; ++n) coeff.push_back(model.pair_dh(n, P));
    for (long long k : ks) {
        ExactRow row;
        row.k = k;
        row.lhs = theta(model, k, P);
        for (int n = 0; n <= top; ++n)
            row.rhs += Rational(k).pow(model.d - n) * coeff[static_cast<size_t>(n)];
        row.equal = row.lhs == row.rhs;
        if (!row.equal) {
            rep.all_equal = false;
            if (!rep.first_mismatch) rep.first_mismatch = k;
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

struct RRRow {
    long long k = 0;
    Rational count;
    Rational dh_side;
    bool equal = false;
};

// Total multiplicity at twist k next to the distribution-side value
// sum_{n<=d} k^(d-n) <DH_n, 1>.
inline RRRow riemann_roch_row(const ThetaModel& model, long long k) {
    RRRow row;
    row.k = k;
    row.count = theta(model, k, MultiPoly::constant(Rational(1)));
    for (int n = 0; n <= model.d; ++n)
        row.dh_side += Rational(k).pow(model.d - n) * model.pair_dh(n, MultiPoly::constant(Rational(1)));
    row.equal = row.count == row.dh_side;
    return row;
}

inline long long riemann_roch_number(const ThetaModel& model, long long k) {
    RRRow row = riemann_roch_row(model, k);
    if (!row.equal)
        throw std::runtime_error("riemann_roch_number: count and distribution side disagree at k=" +
                                 std::to_string(k));
    if (!row.count.is_integer())
        throw std::runtime_error("riemann_roch_number: total multiplicity is not an integer");
    return row.count.floor().get_si();
}

struct AsymptoticReport {
    std::string model;
    int N = 0;
    int d = 0;
    std::vector<long long> ks;
    std::vector<double> errors;
    double slope = 0.0;
    double bound = 0.0;
    bool vacuous = false;
    bool pass = false;
    std::string note;

    std::string str() const {
        std::ostringstream os;
        os << "model: " << model << "  N=" << N << "  d=" << d << "\n";
        for (size_t i = 0; i < ks.size(); ++i)
            os << "k=" << ks[i] << "  error=" << errors[i] << "\n";
        if (vacuous)
            os << note << "\n";
        else
            os << "slope=" << slope << "  bound=" << bound << (pass ? "  pass" : "  FAIL")
               << "\n";
        return os.str();
    }
};

// Truncation error E(k) = |<Theta(k), f> - sum_{n<=N} k^(d-n) <DH_n, f>| and
// the least-squares slope of log E against log k. The truncated family is
// accurate to the next order, so the slope should not exceed d - N - 1 plus
// a fitting allowance.
inline AsymptoticReport verify_asymptotic_order(const ThetaModel& model, const TestFunction& f,
                                                int N, const std::vector<long long>& ks) {
    if (ks.size() < 2)
        throw std::invalid_argument("verify_asymptotic_order: need at least two twists");
    AsymptoticReport rep;
    rep.model = model.name;
    rep.N = N;
    rep.d = model.d;
    rep.ks = ks;
    rep.bound = static_cast<double>(model.d - N - 1) + 0.3;

    std::vector<Rational> coeff;
    for (int n = 0; n <= N; ++n) coeff.push_back(model.pair_dh(n, f));
    for (long long k : ks) {
        Rational expansion;
        for (int n = 0; n <= N; ++n)
            expansion += Rational(k).pow(model.d - n) * coeff[static_cast<size_t>(n)];
        Rational err = theta(model, k, f) - expansion;
        rep.errors.push_back(std::fabs(err.to_double()));
    }

    bool all_tiny = true;
    for (double e : rep.errors) all_tiny = all_tiny && e < 1e-12;
    if (all_tiny) {
        rep.vacuous = true;
        rep.pass = true;
        rep.note = "exact, order test vacuous";
        return rep;
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t m = ks.size();
    for (size_t i = 0; i < m; ++i) {
        double x = std::log(static_cast<double>(ks[i]));
        double y = std::log(std::max(rep.errors[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = static_cast<double>(m) * sxx - sx * sx;
    rep.slope = (static_cast<double>(m) * sxy - sx * sy) / denom;
    rep.pass = rep.slope <= rep.bound;
    return rep;
}

}  // namespace dhasym
