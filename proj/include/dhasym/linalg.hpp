#pragma once

// Small exact linear algebra over Rational: determinants, rank, square
// solves, inverses, and Fourier-Motzkin elimination for systems of
// non-strict linear inequalities a.x <= b.

#include <optional>
#include <stdexcept>
#include <vector>

#include "dhasym/rational.hpp"

namespace dhasym {

using RMat = std::vector<Vec>;

inline Rational det(RMat m) {
    size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw std::invalid_argument("det: not square");
    Rational d(1);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && m[piv][col].is_zero()) ++piv;
        if (piv == n) return Rational(0);
        if (piv != col) {
            std::swap(m[piv], m[col]);
            d = -d;
        }
        d *= m[col][col];
        for (size_t r = col + 1; r < n; ++r) {
            if (m[r][col].is_zero()) continue;
            Rational f = m[r][col] / m[col][col];
            for (size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return d;
}

inline long long idet(const std::vector<IVec>& m) {
    size_t n = m.size();
    if (n == 1) return m[0][0];
    if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (n == 3)
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    RMat rm(n);
    for (size_t i = 0; i < n; ++i) rm[i] = to_vec(m[i]);
    Rational d = det(rm);
    return static_cast<long long>(d.num().get_si());
}

inline size_t rank(RMat m) {
    if (m.empty()) return 0;
    size_t rows = m.size(), cols = m[0].size(), r = 0;
    for (size_t col = 0; col < cols && r < rows; ++col) {
        size_t piv = r;
        while (piv < rows && m[piv][col].is_zero()) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[r]);
        for (size_t i = r + 1; i < rows; ++i) {
            if (m[i][col].is_zero()) continue;
            Rational f = m[i][col] / m[r][col];
            for (size_t c = col; c < cols; ++c) m[i][c] -= f * m[r][c];
        }
        ++r;
    }
    return r;
}

inline size_t irank(const std::vector<IVec>& m) {
    RMat rm(m.size());
    for (size_t i = 0; i < m.size(); ++i) rm[i] = to_vec(m[i]);
    return rank(rm);
}

// Solves the square system m.x = b; throws on singular m.
inline Vec solve_square(RMat m, Vec b) {
    size_t n = m.size();
    if (b.size() != n) throw std::invalid_argument("solve_square: size mismatch");
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && m[piv][col].is_zero()) ++piv;
        if (piv == n) throw std::domain_error("solve_square: singular matrix");
        std::swap(m[piv], m[col]);
        std::swap(b[piv], b[col]);
        for (size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col].is_zero()) continue;
            Rational f = m[r][col] / m[col][col];
            for (size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
            b[r] -= f * b[col];
        }
    }
    Vec x(n);
    for (size_t i = 0; i < n; ++i) x[i] = b[i] / m[i][i];
    return x;
}

inline RMat inverse(const RMat& m) {
    size_t n = m.size();
    RMat aug = m;
    for (size_t i = 0; i < n; ++i) {
        if (aug[i].size() != n) throw std::invalid_argument("inverse: not square");
        for (size_t j = 0; j < n; ++j) aug[i].push_back(Rational(i == j ? 1 : 0));
    }
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && aug[piv][col].is_zero()) ++piv;
        if (piv == n) throw std::domain_error("inverse: singular matrix");
        std::swap(aug[piv], aug[col]);
        Rational p = aug[col][col];
        for (size_t c = 0; c < 2 * n; ++c) aug[col][c] /= p;
        for (size_t r = 0; r < n; ++r) {
            if (r == col || aug[r][col].is_zero()) continue;
            Rational f = aug[r][col];
            for (size_t c = 0; c < 2 * n; ++c) aug[r][c] -= f * aug[col][c];
        }
    }
    RMat inv(n, Vec(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return inv;
}

// One linear inequality a.x <= b.
struct LinIneq {
    Vec a;
    Rational b;
};

// Eliminates variable `var` from the system, producing an equivalent
// projection onto the remaining variables (column `var` is removed).
inline std::vector<LinIneq> fm_eliminate(const std::vector<LinIneq>& sys, size_t var) {
    std::vector<LinIneq> zero, pos, neg;
    for (const auto& q : sys) {
        int s = q.a[var].sign();
        (s == 0 ? zero : s > 0 ? pos : neg).push_back(q);
    }
    auto drop_col = [var](LinIneq q) {
        q.a.erase(q.a.begin() + static_cast<long>(var));
        return q;
    };
    std::vector<LinIneq> out;
    for (const auto& q : zero) out.push_back(drop_col(q));
    for (const auto& p : pos)
        for (const auto& m : neg) {
            // p: a_v x_v <= b_p - rest;  m gives lower bound. Combine so x_v drops.
            Rational cp = p.a[var], cm = -m.a[var];
            LinIneq q;
            q.a.resize(p.a.size());
            for (size_t i = 0; i < p.a.size(); ++i) q.a[i] = cm * p.a[i] + cp * m.a[i];
            q.b = cm * p.b + cp * m.b;
            out.push_back(drop_col(q));
        }
    return out;
}

namespace detail {
inline std::optional<Vec> fm_witness_impl(const std::vector<LinIneq>& sys, size_t nvars) {
    if (nvars == 0) {
        for (const auto& q : sys)
            if (q.b < Rational(0)) return std::nullopt;
        return Vec{};
    }
    size_t var = nvars - 1;
    auto reduced = fm_eliminate(sys, var);
    auto inner = fm_witness_impl(reduced, nvars - 1);
    if (!inner) return std::nullopt;
    // Bounds for the eliminated variable at the inner point.
    std::optional<Rational> lo, hi;
    for (const auto& q : sys) {
        int s = q.a[var].sign();
        if (s == 0) continue;
        Rational rest = q.b;
        for (size_t i = 0; i < var; ++i) rest -= q.a[i] * (*inner)[i];
        Rational bound = rest / q.a[var];
        if (s > 0) {
            if (!hi || bound < *hi) hi = bound;
        } else {
            if (!lo || bound > *lo) lo = bound;
        }
    }
    Rational x;
    if (lo && hi)
        x = (*lo + *hi) / Rational(2);
    else if (lo)
        x = *lo + Rational(1);
    else if (hi)
        x = *hi - Rational(1);
    Vec point = *inner;
    point.push_back(x);
    return point;
}
}  // namespace detail

// Feasibility witness for {x : a.x <= b for all rows}; nullopt if empty.
inline std::optional<Vec> fm_witness(const std::vector<LinIneq>& sys, size_t nvars) {
    for (const auto& q : sys)
        if (q.a.size() != nvars) throw std::invalid_argument("fm_witness: bad row size");
    return detail::fm_witness_impl(sys, nvars);
}

inline bool fm_feasible(const std::vector<LinIneq>& sys, size_t nvars) {
    return fm_witness(sys, nvars).has_value();
}

// Exact bounds of one coordinate over the feasible set.
// Each side is nullopt when unbounded in that direction; `empty` is set when
// the system itself is infeasible.
struct VarBounds {
    std::optional<Rational> lo, hi;
    bool empty = false;
};

inline VarBounds fm_var_bounds(std::vector<LinIneq> sys, size_t nvars, size_t var) {
    // Move the target variable to the last column, eliminate all others,
    // then read off one-variable bounds.
    for (auto& q : sys) std::swap(q.a[var], q.a[nvars - 1]);
    for (size_t v = nvars - 1; v > 0; --v) sys = fm_eliminate(sys, v - 1);
    VarBounds out;
    for (const auto& q : sys) {
        int s = q.a[0].sign();
        if (s == 0) {
            if (q.b < Rational(0)) {
                out.empty = true;
                return out;
            }
            continue;
        }
        Rational bound = q.b / q.a[0];
        if (s > 0) {
            if (!out.hi || bound < *out.hi) out.hi = bound;
        } else {
            if (!out.lo || bound > *out.lo) out.lo = bound;
        }
    }
    if (out.lo && out.hi && *out.lo > *out.hi) out.empty = true;
    return out;
}

}  // namespace dhasym
