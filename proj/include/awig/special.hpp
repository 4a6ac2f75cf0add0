#ifndef AWIG_SPECIAL_HPP
#define AWIG_SPECIAL_HPP

#include <array>
#include <cmath>
#include <limits>

#include "grid.hpp"

namespace awig {

// lambda(u) = u e^u / (e^u - 1), lambda(0) = 1.
inline double lambda_eval(double u) {
    if (std::abs(u) < 1e-3) {
        const double u2 = u * u;
        return 1.0 + u / 2.0 + u2 / 12.0 - u2 * u2 / 720.0 + u2 * u2 * u2 / 30240.0;
    }
    if (u > 0.0) return u / -std::expm1(-u);
    return u * std::exp(u) / std::expm1(u);
}

// log lambda(u); log u - log(1 - e^{-u}) for u > 0, log|u| + u - log(1 - e^u) for u < 0.
inline double log_lambda(double u) {
    if (std::abs(u) < 0.1) {
        const double u2 = u * u;
        return 0.5 * u -
               u2 * (1.0 / 24.0 - u2 * (1.0 / 2880.0 - u2 * (1.0 / 181440.0 - u2 * (1.0 / 9676800.0 - u2 / 479001600.0))));
    }
    if (u > 0.0) return std::log(u) - std::log(-std::expm1(-u));
    return std::log(-u) + u - std::log(-std::expm1(u));
}

// d/du log lambda(u) = 1/u - 1/(e^u - 1).
inline double dlog_lambda(double u) {
    if (std::abs(u) < 1e-2) return 0.5 - u / 12.0 + u * u * u / 720.0;
    return 1.0 / u - 1.0 / std::expm1(u);
}

inline double lambda_inv(double v) {
    require(std::isfinite(v) && v > 0.0, "lambda_inv: argument must be positive");
    if (v == 1.0) return 0.0;
    double lo, hi;
    if (v > 1.0) {
        lo = std::max(0.0, v - 1.0);
        hi = v;
    } else {
        hi = 0.0;
        lo = -1.0;
        while (lambda_eval(lo) > v) lo *= 2.0;
    }
    // Safeguarded Newton on log lambda, iterated to a step at rounding level.
    const double target = std::log(v);
    double u = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double f = log_lambda(u) - target;
        if (f == 0.0) return u;
        if (f > 0.0) hi = u; else lo = u;
        double next = u - f / dlog_lambda(u);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - u) <= 4e-16 * std::max(1.0, std::abs(u)) || next == lo || next == hi) {
            u = next;
            break;
        }
        u = next;
    }
    if (std::abs(lambda_eval(u) - v) <= 1e-12 * std::max(1.0, v)) return u;
    throw numerical_error("lambda_inv: no convergence");
}

// Theta(y, b) = (sqrt(b) log b / (b - 1))^(2 pi i y), Theta(y, 1) = 1.
// The base equals sqrt(lambda(u) lambda(-u)) at u = log b.
inline cplx theta_eval(double y, double b) {
    require(std::isfinite(b) && b > 0.0, "theta_eval: b must be positive");
    const double u = std::log(b);
    const double log_base = 0.5 * (log_lambda(u) + log_lambda(-u));
    return std::polar(1.0, two_pi * y * log_base);
}

inline double log_gamma(double x) {
    require(std::isfinite(x) && x > 0.0, "log_gamma: argument must be positive");
    static constexpr std::array<double, 9> c = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) return std::log(pi / std::sin(pi * x)) - log_gamma(1.0 - x);
    const double z = x - 1.0;
    double s = c[0];
    for (int k = 1; k < 9; ++k) s += c[k] / (z + k);
    const double t = z + 7.5;
    return 0.5 * std::log(two_pi) + (z + 0.5) * std::log(t) - t + std::log(s);
}

struct LaguerreSpec {
    int n = 0;
    double alpha = 1.0;

    LaguerreSpec() = default;
    LaguerreSpec(int n_, double alpha_) : n(n_), alpha(alpha_) {
        require(n >= 0, "LaguerreSpec: order must be non-negative");
        require(std::isfinite(alpha) && alpha > -1.0, "LaguerreSpec: alpha must exceed -1");
    }
};

// Plain generalized Laguerre polynomial L_n^(alpha)(x).
inline double laguerre_poly(int n, double alpha, double x) {
    if (n == 0) return 1.0;
    double prev = 1.0, cur = 1.0 + alpha - x;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

// sqrt(n!/Gamma(n+alpha+1)) r^((alpha+1)/2) e^(-r/2) L_n^(alpha)(r).
inline double laguerre_fn(const LaguerreSpec& spec, double r) {
    require(std::isfinite(r) && r > 0.0, "laguerre_fn: r must be positive");
    const double L = laguerre_poly(spec.n, spec.alpha, r);
    const double logpre = 0.5 * (log_gamma(spec.n + 1.0) - log_gamma(spec.n + spec.alpha + 1.0)) +
                          0.5 * (spec.alpha + 1.0) * std::log(r) - 0.5 * r;
    return std::exp(logpre) * L;
}

inline HalfLineSignal laguerre_state(const LaguerreSpec& spec, const LogGrid& grid) {
    HalfLineSignal f(grid);
    for (std::size_t j = 0; j < grid.n; ++j) f[j] = laguerre_fn(spec, grid.a(j));
    return f;
}

// psi_s(r) = r^s e^(-r/2) / Gamma(2s).
inline HalfLineSignal morse_state(double s, const LogGrid& grid) {
    require(std::isfinite(s) && s > 0.0, "morse_state: s must be positive");
    const double lg = log_gamma(2.0 * s);
    HalfLineSignal f(grid);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double t = grid.t(j);
        f[j] = std::exp(s * t - 0.5 * std::exp(t) - lg);
    }
    return f;
}

// psi(r) = C r^(-i beta) e^(i gamma r).
inline HalfLineSignal klauder_state(cplx C, cplx beta, cplx gamma, const LogGrid& grid) {
    require(beta.imag() > 0.0, "klauder_state: Im beta must be positive");
    require(gamma.imag() > 0.0, "klauder_state: Im gamma must be positive");
    const cplx I(0.0, 1.0);
    HalfLineSignal f(grid);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double t = grid.t(j);
        f[j] = C * std::exp(-I * beta * t + I * gamma * std::exp(t));
    }
    return f;
}

// Smooth bump exp(-1/(1-s^2)) in log a, supported on [lo, hi].
inline HalfLineSignal bump_state(double lo, double hi, const LogGrid& grid) {
    require(lo > 0.0 && hi > lo, "bump_state: need 0 < lo < hi");
    const double c = 0.5 * (std::log(hi) + std::log(lo));
    const double h = 0.5 * (std::log(hi) - std::log(lo));
    HalfLineSignal f(grid);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double s = (grid.t(j) - c) / h;
        if (std::abs(s) < 1.0) f[j] = std::exp(-1.0 / (1.0 - s * s));
    }
    return f;
}

}  // namespace awig

#endif
