#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace polling {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Supported orders: 1..32.
const GaussRule& gauss_rule(int order);

template <class F>
double gauss_legendre(F&& f, double a, double b, int order = 16) {
    const GaussRule& r = gauss_rule(order);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double s = 0.0;
    for (std::size_t k = 0; k < r.nodes.size(); ++k) s += r.weights[k] * f(mid + half * r.nodes[k]);
    return s * half;
}

namespace detail {
template <class F>
double adapt(F& f, double a, double b, double whole, double rel_tol, double abs_tol, int depth) {
    const double m = 0.5 * (a + b);
    const double left = gauss_legendre(f, a, m);
    const double right = gauss_legendre(f, m, b);
    const double both = left + right;
    const double err = both - whole;
    if (depth <= 0 || std::abs(err) <= std::max(abs_tol, rel_tol * std::abs(both))) return both;
    return adapt(f, a, m, left, rel_tol, 0.5 * abs_tol, depth - 1) +
           adapt(f, m, b, right, rel_tol, 0.5 * abs_tol, depth - 1);
}
}  // namespace detail

// Adaptive order-16 Gauss-Legendre: bisect until successive refinements agree.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-9, double abs_tol = 1e-14) {
    if (b == a) return 0.0;
    const double whole = gauss_legendre(f, a, b);
    return detail::adapt(f, a, b, whole, rel_tol, abs_tol, 40);
}

// Same as integrate, split at the sorted breakpoints that fall inside (a, b).
template <class F>
double integrate_pieces(F&& f, std::span<const double> breaks, double a, double b,
                        double rel_tol = 1e-9, double abs_tol = 1e-14) {
    double s = 0.0;
    double lo = a;
    for (double p : breaks) {
        if (p <= lo) continue;
        if (p >= b) break;
        s += integrate(f, lo, p, rel_tol, abs_tol);
        lo = p;
    }
    return s + integrate(f, lo, b, rel_tol, abs_tol);
}

}  // namespace polling
