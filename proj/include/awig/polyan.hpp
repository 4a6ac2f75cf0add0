#ifndef AWIG_POLYAN_HPP
#define AWIG_POLYAN_HPP

#include <cmath>

#include "fft.hpp"
#include "special.hpp"
#include "wigner.hpp"

namespace awig {

enum class Side { analytic, anti_analytic };

struct PolyComponent {
    int order = 2;
    Side side = Side::analytic;
    AffineMap map;
};

// Scale in the change of variables b = a / (kappa |xi|). With the transform
// kernel e^{-2 pi i x xi}, an analytic function has Fourier profile e^{-2 pi xi b}
// in b, which becomes e^{-a/2} (the Laguerre weight) for kappa = 4 pi.
inline constexpr double phi_kappa = 4.0 * pi;

namespace detail {

inline long long centered_axis(const AffineGrid& g, double offset, const char* who) {
    require(g.nx % 2 == 0, std::string(who) + ": x-axis length must be even");
    const auto c = static_cast<long long>(g.nx / 2);
    require(std::abs(g.x_min - (offset - static_cast<double>(c)) * g.dx) <= 1e-9 * g.dx,
            std::string(who) + ": x-axis is not the expected centered grid");
    return c;
}

// Row shift along the log axis by sign * log(kappa |xi|).
inline void shift_rows(AffineMap& F, double sign) {
    const AffineGrid& g = F.agrid;
    const std::size_t nt = g.nt();
    parallel_for(g.nx, [&](std::size_t i) {
        cvec row(nt);
        for (std::size_t j = 0; j < nt; ++j) row[j] = F(i, j);
        const RelStencil rs = rel_stencil(sign * std::log(phi_kappa * std::abs(g.x(i))) / g.log_axis.dt);
        for (std::size_t j = 0; j < nt; ++j) F(i, j) = read(rs, row, j);
    });
}

// Fourier transform in x. The frequency axis is offset by half a step,
// xi_p = (p - nx/2 + 1/2) dxi, so it is symmetric and never samples xi = 0,
// where the change of variables degenerates.
inline AffineMap to_frequency(const AffineMap& f) {
    const AffineGrid& g = f.agrid;
    const long long c = centered_axis(g, 0.0, "phi_forward");
    const std::size_t nx = g.nx, nt = g.nt();
    const double dxi = 1.0 / (static_cast<double>(nx) * g.dx);
    AffineMap out(AffineGrid((0.5 - static_cast<double>(c)) * dxi, dxi, nx, g.log_axis));
    const fft::CenteredDFT dft(nx, c, c, FFTW_FORWARD);
    cvec mod(nx);
    for (std::size_t i = 0; i < nx; ++i) mod[i] = g.dx * std::polar(1.0, -pi * dxi * g.x(i));
    parallel_for(nt, [&](std::size_t j) {
        cvec col(nx);
        for (std::size_t i = 0; i < nx; ++i) col[i] = f(i, j) * mod[i];
        dft(col);
        for (std::size_t i = 0; i < nx; ++i) out(i, j) = col[i];
    });
    return out;
}

inline AffineMap from_frequency(const AffineMap& F) {
    const AffineGrid& g = F.agrid;
    const long long c = centered_axis(g, 0.5, "phi_inverse");
    const std::size_t nx = g.nx, nt = g.nt();
    const double dx = 1.0 / (static_cast<double>(nx) * g.dx);
    AffineMap out(AffineGrid(-static_cast<double>(c) * dx, dx, nx, g.log_axis));
    const fft::CenteredDFT dft(nx, c, c, FFTW_BACKWARD);
    cvec mod(nx);
    for (std::size_t i = 0; i < nx; ++i) mod[i] = g.dx * std::polar(1.0, pi * g.dx * out.agrid.x(i));
    parallel_for(nt, [&](std::size_t j) {
        cvec col(nx);
        for (std::size_t i = 0; i < nx; ++i) col[i] = F(i, j);
        dft(col);
        for (std::size_t i = 0; i < nx; ++i) out(i, j) = col[i] * mod[i];
    });
    return out;
}

}  // namespace detail

// Phi f(xi, a) = (F_x f)(xi, a / (kappa |xi|)); the x-axis becomes the frequency axis.
inline AffineMap phi_forward(const AffineMap& f) {
    AffineMap F = detail::to_frequency(f);
    detail::shift_rows(F, -1.0);
    return F;
}

inline AffineMap phi_inverse(const AffineMap& h) {
    AffineMap F = h;
    detail::shift_rows(F, +1.0);
    return detail::from_frequency(F);
}

// Pure (anti-)poly-analytic component of order n: in Phi-coordinates, the
// xi > 0 (analytic) or xi < 0 half projected onto L_{n-2}^{(1)} under da/a.
// The projected field c(xi) L(a) is separable, so the inverse map evaluates
// L(kappa |xi| b) in closed form instead of resampling it.
inline PolyComponent component_from_phi(const AffineMap& h, int n, Side side) {
    require(n >= 2, "pure_component: order must be at least 2");
    const AffineGrid& g = h.agrid;
    detail::centered_axis(g, 0.5, "pure_component");
    const LaguerreSpec spec(n - 2, 1.0);
    const HalfLineSignal L = laguerre_state(spec, g.log_axis);
    AffineMap F(g);
    parallel_for(g.nx, [&](std::size_t i) {
        const double xi = g.x(i);
        if (side == Side::analytic ? xi < 0.0 : xi > 0.0) return;
        cplx c{};
        for (std::size_t j = 0; j < g.nt(); ++j) c += h(i, j) * L[j].real();
        c *= g.log_axis.dt;
        const double s = phi_kappa * std::abs(xi);
        for (std::size_t j = 0; j < g.nt(); ++j) F(i, j) = c * laguerre_fn(spec, s * g.log_axis.a(j));
    });
    return {n, side, detail::from_frequency(F)};
}

inline PolyComponent pure_component(const AffineMap& f, int n, Side side) {
    require(n >= 2, "pure_component: order must be at least 2");
    return component_from_phi(phi_forward(f), n, side);
}

// Components of orders 2..max_order, analytic then anti-analytic for each order.
inline std::vector<PolyComponent> decompose(const AffineMap& f, int max_order) {
    require(max_order >= 2, "decompose: max_order must be at least 2");
    const AffineMap h = phi_forward(f);
    std::vector<PolyComponent> out;
    for (int n = 2; n <= max_order; ++n)
        for (Side s : {Side::analytic, Side::anti_analytic}) out.push_back(component_from_phi(h, n, s));
    return out;
}

// ||dbar^n f|| / ||f|| with dbar = (d/dx + i e^{-t} d/dt) / 2 by fourth-order
// centered differences, measured on nodes at least max(3, 2n) cells inside.
inline double dbar_residual(const AffineMap& f, int n) {
    require(n >= 1, "dbar_residual: n must be positive");
    const AffineGrid& g = f.agrid;
    const auto nx = static_cast<std::ptrdiff_t>(g.nx), nt = static_cast<std::ptrdiff_t>(g.nt());
    const double fn = f.norm();
    if (fn == 0.0) return 0.0;
    const std::ptrdiff_t margin = std::max<std::ptrdiff_t>(3, 2 * n);
    require(nx > 2 * margin && nt > 2 * margin, "dbar_residual: grid too small for the stencil");
    cvec cur = f.values, next(cur.size());
    auto at = [&](const cvec& v, std::ptrdiff_t i, std::ptrdiff_t j) { return v[static_cast<std::size_t>(i * nt + j)]; };
    const double hx = 12.0 * g.dx, ht = 12.0 * g.log_axis.dt;
    const cplx I(0.0, 1.0);
    for (int p = 1; p <= n; ++p) {
        const std::ptrdiff_t lo = 2 * p;
        std::fill(next.begin(), next.end(), cplx{});
        parallel_for(static_cast<std::size_t>(nx - 2 * lo), [&](std::size_t ii) {
            const std::ptrdiff_t i = lo + static_cast<std::ptrdiff_t>(ii);
            for (std::ptrdiff_t j = lo; j < nt - lo; ++j) {
                const cplx dxv = (at(cur, i - 2, j) - 8.0 * at(cur, i - 1, j) + 8.0 * at(cur, i + 1, j) - at(cur, i + 2, j)) / hx;
                const cplx dtv = (at(cur, i, j - 2) - 8.0 * at(cur, i, j - 1) + 8.0 * at(cur, i, j + 1) - at(cur, i, j + 2)) / ht;
                next[static_cast<std::size_t>(i * nt + j)] = 0.5 * (dxv + I * std::exp(-g.log_axis.t(j)) * dtv);
            }
        });
        std::swap(cur, next);
    }
    double s = 0.0;
    for (std::ptrdiff_t i = margin; i < nx - margin; ++i)
        for (std::ptrdiff_t j = margin; j < nt - margin; ++j) s += std::norm(at(cur, i, j));
    return std::sqrt(s * g.cell()) / fn;
}

}  // namespace awig

#endif
