// integrals.hpp — closed-form antiderivatives for products of trigonometric
// edge functions with polynomials of degree <= 2, plus an endpoint-safe
// adaptive Gauss quadrature for the few integrands with no closed form.
#pragma once

#include <array>
#include <cmath>
#include <functional>

namespace qgraph {

namespace detail {

// J_k(u, w, h) = int_0^h t^k cos(u t + w) dt, k in {0,1,2}.
// A power series in u*h covers the cancellation-prone small-frequency range
// (u == 0 included); otherwise the exact antiderivative is used.
inline double poly_cos_moment(int k, double u, double w, double h) {
    const double uh = std::abs(u) * std::abs(h);
    if (uh <= 0.5) {
        // int t^k cos(ut) = sum_j (-1)^j u^(2j) h^(k+2j+1) / ((2j)! (k+2j+1))
        // int t^k sin(ut) = sum_j (-1)^j u^(2j+1) h^(k+2j+2) / ((2j+1)! (k+2j+2))
        double cc = 0, ss = 0;
        double term_c = std::pow(h, k + 1);       // j = 0 numerator piece h^(k+1)
        double term_s = term_c * h;               // h^(k+2)
        double fact = 1;                          // (2j)!
        for (int j = 0; j <= 20; ++j) {
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            const double upow = std::pow(u, 2 * j);
            cc += sign * upow * term_c / (fact * (k + 2 * j + 1));
            ss += sign * upow * u * term_s / (fact * (2 * j + 1) * (k + 2 * j + 2));
            term_c *= h * h;
            term_s *= h * h;
            fact *= (2 * j + 1) * (2 * j + 2);
            if (std::abs(upow * term_c / fact) < 1e-300) break;
        }
        return std::cos(w) * cc - std::sin(w) * ss;
    }
    const double se = std::sin(u * h + w), ce = std::cos(u * h + w);
    const double s0 = std::sin(w), c0 = std::cos(w);
    switch (k) {
        case 0:
            return (se - s0) / u;
        case 1:
            return h * se / u + (ce - c0) / (u * u);
        default:
            return h * h * se / u + 2 * h * ce / (u * u) - 2 * (se - s0) / (u * u * u);
    }
}

}  // namespace detail

// int_{x0}^{x1} (c0 + c1 x + c2 x^2) sin(a x + p) sin(b x + q) dx, exact up to
// rounding. Either frequency may be 0 (constant factor via its phase).
inline double int_poly_sinsin(double c0, double c1, double c2, double a, double p, double b,
                              double q, double x0, double x1) {
    const double h = x1 - x0;
    if (h == 0) return 0;
    // shift to t = x - x0
    const double d0 = c0 + c1 * x0 + c2 * x0 * x0;
    const double d1 = c1 + 2 * c2 * x0;
    const double d2 = c2;
    const double pm = a * x0 + p, qm = b * x0 + q;
    double out = 0;
    const double coeff[3] = {d0, d1, d2};
    for (int k = 0; k < 3; ++k) {
        if (coeff[k] == 0) continue;
        out += 0.5 * coeff[k] * (detail::poly_cos_moment(k, a - b, pm - qm, h) -
                                 detail::poly_cos_moment(k, a + b, pm + qm, h));
    }
    return out;
}

inline double int_sinsin(double a, double p, double b, double q, double x0, double x1) {
    return int_poly_sinsin(1, 0, 0, a, p, b, q, x0, x1);
}

// Adaptive composite 10-point Gauss-Legendre. Nodes are interior, so
// integrands with removable endpoint singularities are never evaluated at the
// panel boundary.
inline double adaptive_gauss(const std::function<double(double)>& f, double x0, double x1,
                             double rel_tol = 1e-10, int max_depth = 28) {
    static const std::array<double, 5> xs = {0.1488743389816312, 0.4333953941292472,
                                             0.6794095682990244, 0.8650633666889845,
                                             0.9739065285171717};
    static const std::array<double, 5> ws = {0.2955242247147529, 0.2692667193099963,
                                             0.2190863625159820, 0.1494513491505806,
                                             0.0666713443086881};
    auto gl10 = [&](double a, double b) {
        const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
        double s = 0;
        for (int i = 0; i < 5; ++i)
            s += ws[i] * (f(c - hw * xs[i]) + f(c + hw * xs[i]));
        return s * hw;
    };
    const double whole = gl10(x0, x1);
    const double scale = std::max(std::abs(whole), 1e-30);
    std::function<double(double, double, double, int)> rec = [&](double a, double b, double est,
                                                                 int depth) -> double {
        const double m = 0.5 * (a + b);
        const double left = gl10(a, m), right = gl10(m, b);
        if (depth >= max_depth || std::abs(left + right - est) <= rel_tol * scale)
            return left + right;
        return rec(a, m, left, depth + 1) + rec(m, b, right, depth + 1);
    };
    return rec(x0, x1, whole, 0);
}

}  // namespace qgraph
