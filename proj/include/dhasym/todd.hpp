#pragma once

// Todd series in one variable, its Laurent counterpart on half-open rays,
// and graded Todd components for diagonal and general (trace-coordinate)
// weights.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "dhasym/bernoulli.hpp"
#include "dhasym/laurent.hpp"
#include "dhasym/multipoly.hpp"
#include "dhasym/rational.hpp"

namespace dhasym {

// Coefficients t_0..t_order of y/(1 - e^{-y}) = sum t_n y^n.
// t_n = (-1)^n B_n / n!, so t_0 = 1, t_1 = 1/2, t_2 = 1/12, t_4 = -1/720.
inline std::vector<Rational> todd_1d(int order) {
    if (order < 0) throw std::invalid_argument("todd_1d: negative order");
    auto b = bernoulli_upto(order);
    std::vector<Rational> t(static_cast<size_t>(order) + 1);
    for (int n = 0; n <= order; ++n) {
        Rational v = b[static_cast<size_t>(n)] / factorial(static_cast<unsigned long>(n));
        t[static_cast<size_t>(n)] = (n % 2 == 0) ? v : -v;
    }
    return t;
}

// Laurent expansion of 1/(1 - e^{q y}) for the linear form y = <form, X>:
// q^{-1} carries -1/y, q^0 carries 1/2, and q^j carries -B_{j+1}/(j+1)! y^j
// for j >= 1. `order` is the truncation order in q (at least -1).
inline LaurentSeries inv_one_minus_exp(int order, const IVec& form) {
    if (order < -1) throw std::invalid_argument("inv_one_minus_exp: order below -1");
    auto b = bernoulli_upto(order + 1);
    LaurentSeries s(order);
    s.set_coeff(-1, RationalLinearCombo::form_power(form, -1, Rational(-1)));
    for (int j = 0; j <= order; ++j) {
        Rational c = -b[static_cast<size_t>(j) + 1] / factorial(static_cast<unsigned long>(j) + 1);
        s.set_coeff(j, RationalLinearCombo::form_power(form, j, c));
    }
    return s;
}

// Half-open variant e^{q y}/(1 - e^{q y}) = 1/(1 - e^{q y}) - 1; only the
// q^0 coefficient changes, from +1/2 to -1/2.
inline LaurentSeries inv_one_minus_exp_strict(int order, const IVec& form) {
    LaurentSeries s = inv_one_minus_exp(order, form);
    if (order >= 0)
        s.set_coeff(0, RationalLinearCombo::scalar(Rational(-1, 2)));
    return s;
}

// Graded components T_0..T_{n_max} of  prod_i  y_i/(1 - e^{-y_i})  where
// y_i = <weights[i], X> in the given ambient variables.
inline std::vector<MultiPoly> graded_todd_diagonal(const std::vector<IVec>& weights, int n_max,
                                                   const std::vector<std::string>& vars) {
    if (n_max < 0) throw std::invalid_argument("graded_todd_diagonal: negative order");
    auto t = todd_1d(n_max);
    std::vector<MultiPoly> acc(static_cast<size_t>(n_max) + 1);
    acc[0] = MultiPoly::constant(Rational(1));
    for (const auto& w : weights) {
        if (w.size() != vars.size())
            throw std::invalid_argument("graded_todd_diagonal: weight dimension mismatch");
        MultiPoly y;
        for (size_t i = 0; i < vars.size(); ++i)
            if (w[i] != 0)
                y += Rational(w[i]) * MultiPoly::variable(vars[i]);
        std::vector<MultiPoly> ypow(static_cast<size_t>(n_max) + 1);
        ypow[0] = MultiPoly::constant(Rational(1));
        for (int n = 1; n <= n_max; ++n) ypow[static_cast<size_t>(n)] = ypow[n - 1] * y;
        std::vector<MultiPoly> next(static_cast<size_t>(n_max) + 1);
        for (int n = 0; n <= n_max; ++n)
            for (int j = 0; j <= n; ++j)
                next[static_cast<size_t>(n)] +=
                    t[static_cast<size_t>(j)] * (ypow[static_cast<size_t>(j)] * acc[n - j]);
        acc = std::move(next);
    }
    std::vector<std::string> sorted_vars = vars;
    std::sort(sorted_vars.begin(), sorted_vars.end());
    for (auto& p : acc) p = p.with_vars(sorted_vars);
    return acc;
}

namespace detail {

// Taylor coefficients of log((e^t - 1)/t) up to t^order.
inline std::vector<Rational> log_j_series(int order) {
    std::vector<Rational> u(static_cast<size_t>(order) + 1);
    for (int m = 1; m <= order; ++m)
        u[static_cast<size_t>(m)] = Rational(1) / factorial(static_cast<unsigned long>(m) + 1);
    // log(1+u) = u - u^2/2 + u^3/3 - ...
    std::vector<Rational> out(static_cast<size_t>(order) + 1);
    std::vector<Rational> upow = u;
    for (int k = 1; k <= order; ++k) {
        Rational sgn = (k % 2 == 1) ? Rational(1, k) : Rational(-1, k);
        for (int j = 0; j <= order; ++j) out[j] += sgn * upow[j];
        if (k == order) break;
        std::vector<Rational> nxt(static_cast<size_t>(order) + 1);
        for (int i = 0; i <= order; ++i)
            for (int j = 0; i + j <= order; ++j) nxt[i + j] += upow[i] * u[j];
        upow = std::move(nxt);
    }
    return out;
}

inline int weighted_degree(const std::vector<std::string>& vars, const std::vector<int>& exps) {
    int d = 0;
    for (size_t i = 0; i < vars.size(); ++i)
        d += std::stoi(vars[i].substr(1)) * exps[i];
    return d;
}

inline MultiPoly weighted_component(const MultiPoly& p, int n) {
    MultiPoly out;
    for (const auto& [e, c] : p.terms()) {
        if (weighted_degree(p.vars(), e) != n) continue;
        std::vector<int> exps = e;
        out += MultiPoly::monomial(p.vars(), exps, c);
    }
    return out;
}

}  // namespace detail

// Degree-n graded component of det(A/(e^A - 1)) as a polynomial in the
// power-sum coordinates p_j = tr(A^j). The expression is dimension-free;
// evaluate with eval_power_sums.
inline MultiPoly graded_todd_matrix(int n) {
    if (n < 0) throw std::invalid_argument("graded_todd_matrix: negative degree");
    if (n == 0) return MultiPoly::constant(Rational(1));
    auto gamma = detail::log_j_series(n);
    MultiPoly L;  // sum_j gamma_j p_j, weight(p_j) = j
    for (int j = 1; j <= n; ++j)
        L += gamma[static_cast<size_t>(j)] * MultiPoly::variable("p" + std::to_string(j));
    // exp(-L), truncated beyond weighted degree n.
    MultiPoly result = MultiPoly::constant(Rational(1));
    MultiPoly lpow = MultiPoly::constant(Rational(1));
    Rational fact(1);
    for (int k = 1; k <= n; ++k) {
        lpow = lpow * (-L);
        // prune weighted degrees above n to keep products small
        MultiPoly pruned;
        for (int w = k; w <= n; ++w) pruned += detail::weighted_component(lpow, w);
        lpow = pruned;
        fact *= Rational(k);
        result += (Rational(1) / fact) * lpow;
    }
    return detail::weighted_component(result, n);
}

// Evaluates a polynomial in p_1..p_m at the diagonal matrix with the given
// eigenvalues, i.e. p_j = sum_i eigenvalues[i]^j.
inline Rational eval_power_sums(const MultiPoly& p, const Vec& eigenvalues) {
    std::map<std::string, Rational> point;
    for (const auto& var : p.vars()) {
        if (var.empty() || var[0] != 'p')
            throw std::invalid_argument("eval_power_sums: variable " + var +
                                        " is not a power sum");
        int j = std::stoi(var.substr(1));
        Rational s;
        for (const auto& y : eigenvalues) s += y.pow(j);
        point[var] = s;
    }
    return p.eval_map(point);
}

}  // namespace dhasym
