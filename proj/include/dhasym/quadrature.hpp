#pragma once

// Adaptive Gauss-Legendre quadrature for the numeric test function fallback.

#include <cmath>
#include <functional>

namespace dhasym {

namespace detail {

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
inline const double* gl16_nodes() {
    static const double n[16] = {
        -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
        -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
        0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
        0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
    return n;
}

inline const double* gl16_weights() {
    static const double w[16] = {
        0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
        0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
        0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
        0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};
    return w;
}

inline double gl16(const std::function<double(double)>& f, double a, double b) {
    const double* xs = gl16_nodes();
    const double* ws = gl16_weights();
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0;
    for (int i = 0; i < 16; ++i) s += ws[i] * f(mid + half * xs[i]);
    return s * half;
}

inline double adaptive_impl(const std::function<double(double)>& f, double a, double b,
                            double whole, double tol, int depth) {
    double mid = 0.5 * (a + b);
    double left = gl16(f, a, mid), right = gl16(f, mid, b);
    if (depth > 24 || std::fabs(left + right - whole) < tol)
        return left + right;
    return adaptive_impl(f, a, mid, left, tol * 0.5, depth + 1) +
           adaptive_impl(f, mid, b, right, tol * 0.5, depth + 1);
}

}  // namespace detail

inline double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                            double tol = 1e-12) {
    if (a >= b) return 0.0;
    return detail::adaptive_impl(f, a, b, detail::gl16(f, a, b), tol, 0);
}

}  // namespace dhasym
