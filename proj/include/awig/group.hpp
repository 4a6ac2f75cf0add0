#ifndef AWIG_GROUP_HPP
#define AWIG_GROUP_HPP

#include <cmath>

#include "grid.hpp"

namespace awig {

struct GroupElement {
    double x = 0.0;
    double a = 1.0;

    GroupElement() = default;
    GroupElement(double x_, double a_) : x(x_), a(a_) {
        require(std::isfinite(x) && std::isfinite(a) && a > 0.0, "GroupElement: a must be positive");
    }
};

inline GroupElement g_mul(const GroupElement& g, const GroupElement& h) { return {g.x + g.a * h.x, g.a * h.a}; }
inline GroupElement g_inv(const GroupElement& g) { return {-g.x / g.a, 1.0 / g.a}; }
inline double modular(const GroupElement& g) { return 1.0 / g.a; }

struct Box {
    double x_lo, x_hi, a_lo, a_hi;

    Box(double x_lo_, double x_hi_, double a_lo_, double a_hi_) : x_lo(x_lo_), x_hi(x_hi_), a_lo(a_lo_), a_hi(a_hi_) {
        require(x_lo < x_hi, "Box: need x_lo < x_hi");
        require(a_lo > 0.0 && a_lo < a_hi, "Box: need 0 < a_lo < a_hi");
    }
    bool contains(double x, double a) const { return x >= x_lo && x <= x_hi && a >= a_lo && a <= a_hi; }
};

inline double haar_right_measure(const Box& U) { return (U.x_hi - U.x_lo) * (std::log(U.a_hi) - std::log(U.a_lo)); }

// I(F)(x, a) = (1/a) conj F(-x/a, 1/a)
inline AffineMap involution(const AffineMap& F) {
    const AffineGrid& g = F.agrid;
    AffineMap out(g);
    parallel_for(g.nx, [&](std::size_t i) {
        const double x = g.x(i);
        for (std::size_t j = 0; j < g.nt(); ++j) {
            const double t = g.log_axis.t(j);
            out(i, j) = std::exp(-t) * std::conj(sample_affine_log(F, -x * std::exp(-t), -t));
        }
    });
    return out;
}

// Point mass at group element g: 1/(dx dt) on the node at g, which must exist.
inline AffineMap delta_map(const AffineGrid& grid, const GroupElement& g = {}) {
    const double pi_ = (g.x - grid.x_min) / grid.dx;
    const double pj = grid.log_axis.position(std::log(g.a));
    const double ri = std::round(pi_), rj = std::round(pj);
    require(std::abs(pi_ - ri) < 1e-9 && std::abs(pj - rj) < 1e-9 && ri >= 0 && rj >= 0 &&
                ri < static_cast<double>(grid.nx) && rj < static_cast<double>(grid.nt()),
            "delta_map: element is not a grid node");
    AffineMap d(grid);
    d(static_cast<std::size_t>(ri), static_cast<std::size_t>(rj)) = 1.0 / grid.cell();
    return d;
}

// (F * G)(x, a) = dy dt sum_{y,b} G(y, b) F((x, a)(y, b)^-1),
// with (x, a)(y, b)^-1 = (x - a y / b, a / b). F is read bilinearly.
inline AffineMap affine_convolve(const AffineMap& F, const AffineMap& G) {
    require(F.agrid == G.agrid, "affine_convolve: grid mismatch");
    const AffineGrid& g = F.agrid;
    const std::size_t nx = g.nx, nt = g.nt();
    const LogGrid& la = g.log_axis;

    // Columns of F, contiguous in x.
    std::vector<cvec> Fc(nt, cvec(nx));
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < nt; ++j) Fc[j][i] = F(i, j);

    double gmax = 0.0;
    for (const auto& z : G.values) gmax = std::max(gmax, std::abs(z));
    const double skip = 1e-14 * gmax;

    AffineMap out(g);
    parallel_for(nt, [&](std::size_t ja) {
        cvec acc(nx, cplx{});
        const double ta = la.t(ja);
        for (std::size_t jb = 0; jb < nt; ++jb) {
            const double tr = ta - la.t(jb);  // log(a/b)
            double pt = la.position(tr);
            const double rt = std::round(pt);
            if (std::abs(pt - rt) <= node_snap) pt = rt;
            if (pt < 0.0 || pt > static_cast<double>(nt - 1)) continue;
            std::size_t j0 = static_cast<std::size_t>(pt);
            double ft = pt - static_cast<double>(j0);
            if (j0 == nt - 1) { if (nt > 1) { j0 -= 1; ft = 1.0; } else ft = 0.0; }
            const std::size_t j1 = std::min(j0 + 1, nt - 1);
            const double ratio = std::exp(tr);
            for (std::size_t l = 0; l < nx; ++l) {
                const cplx gv = G(l, jb);
                if (std::abs(gv) <= skip || gv == cplx{}) continue;
                // F at x_i - ratio * y_l sits at fractional index i - s.
                const double s = ratio * g.x(l) / g.dx;
                double fs = std::round(s);
                double w = 0.0;
                if (std::abs(s - fs) > node_snap) {
                    fs = std::floor(s);
                    w = s - fs;
                }
                // value = w F[i - sh - 1] + (1 - w) F[i - sh]
                const auto sh = static_cast<std::ptrdiff_t>(fs);
                const auto n = static_cast<std::ptrdiff_t>(nx);
                const cplx c0 = gv * (1.0 - ft), c1 = gv * ft;
                const cplx* A = Fc[j0].data();
                const cplx* B = Fc[j1].data();
                const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, sh + (w > 0.0 ? 1 : 0));
                const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, n - 1 + sh);
                if (w > 0.0) {
                    const cplx a1 = (1.0 - w) * c0, b1 = (1.0 - w) * c1, a0 = w * c0, b0 = w * c1;
                    for (std::ptrdiff_t i = lo; i <= hi; ++i)
                        acc[i] += a1 * A[i - sh] + b1 * B[i - sh] + a0 * A[i - sh - 1] + b0 * B[i - sh - 1];
                } else {
                    for (std::ptrdiff_t i = lo; i <= hi; ++i) acc[i] += c0 * A[i - sh] + c1 * B[i - sh];
                }
            }
        }
        for (std::size_t i = 0; i < nx; ++i) out(i, ja) = acc[i] * g.cell();
    });
    return out;
}

}  // namespace awig

#endif
