#ifndef AWIG_MELLIN_HPP
#define AWIG_MELLIN_HPP

#include <cmath>

#include "fft.hpp"
#include "grid.hpp"

namespace awig {

// Samples of M(psi)(x) = int psi(a) a^(-2 pi i x) da/a at x_k = x_min + k dx.
struct MellinSpectrum {
    double x_min = 0.0;
    double dx = 1.0;
    std::size_t nx = 0;
    cvec values;
    // Set when the source signal carries non-negligible energy near the
    // edges of its log grid, where the DFT wraps around.
    bool periodization_warning = false;

    double x(std::size_t k) const { return x_min + static_cast<double>(k) * dx; }
};

namespace detail {
inline long long center(std::size_t n) { return static_cast<long long>(n / 2); }

inline bool edge_energy_exceeds(const HalfLineSignal& f, double frac) {
    const std::size_t n = f.size();
    const std::size_t w = n / 10;
    double edge = 0.0, total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double e = std::norm(f[j]);
        total += e;
        if (j < w || j >= n - w) edge += e;
    }
    return total > 0.0 && edge > frac * total;
}
}  // namespace detail

// Dual grid of a log grid: x_k = (k - floor(n/2)) / (n dt).
inline MellinSpectrum mellin_dual(const LogGrid& g) {
    MellinSpectrum s;
    s.nx = g.n;
    s.dx = 1.0 / (static_cast<double>(g.n) * g.dt);
    s.x_min = -static_cast<double>(detail::center(g.n)) * s.dx;
    s.values.assign(g.n, cplx{});
    return s;
}

inline MellinSpectrum mellin_forward(const HalfLineSignal& f) {
    const LogGrid& g = f.grid;
    MellinSpectrum s = mellin_dual(g);
    s.values = f.values;
    fft::CenteredDFT(g.n, 0, detail::center(g.n), FFTW_FORWARD)(s.values);
    for (std::size_t k = 0; k < g.n; ++k) s.values[k] *= g.dt * std::polar(1.0, -two_pi * s.x(k) * g.t_min);
    s.periodization_warning = detail::edge_energy_exceeds(f, 1e-10);
    return s;
}

inline HalfLineSignal mellin_inverse(const MellinSpectrum& F, const LogGrid& grid) {
    require(F.nx == grid.n && F.values.size() == grid.n, "mellin_inverse: spectrum length differs from grid size");
    const MellinSpectrum ref = mellin_dual(grid);
    require(std::abs(F.dx - ref.dx) <= 1e-12 * ref.dx && std::abs(F.x_min - ref.x_min) <= 1e-9 * ref.dx,
            "mellin_inverse: spectrum axis is not dual to the grid");
    cvec v(grid.n);
    for (std::size_t k = 0; k < grid.n; ++k) v[k] = F.values[k] * ref.dx * std::polar(1.0, two_pi * ref.x(k) * grid.t_min);
    // sum_k v_k exp(2 pi i (k - c) j / n)
    fft::CenteredDFT(grid.n, detail::center(grid.n), 0, FFTW_BACKWARD)(v);
    return HalfLineSignal(grid, std::move(v));
}

// Direct quadrature of the Mellin transform at arbitrary x.
inline cvec mellin_eval(const HalfLineSignal& f, const std::vector<double>& xs) {
    cvec out(xs.size());
    const LogGrid& g = f.grid;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        cplx s{};
        const cplx step = std::polar(1.0, -two_pi * xs[k] * g.dt);
        cplx ph = std::polar(1.0, -two_pi * xs[k] * g.t_min);
        for (std::size_t j = 0; j < g.n; ++j) {
            if ((j & 63u) == 0) ph = std::polar(1.0, -two_pi * xs[k] * g.t(j));
            s += f[j] * ph;
            ph *= step;
        }
        out[k] = s * g.dt;
    }
    return out;
}

// (D_r psi)(a) = r^(-1/2) psi(a / r) for grid-commensurate r.
inline HalfLineSignal dilate(const HalfLineSignal& f, double r) {
    const std::ptrdiff_t k = commensurate_shift(f.grid, r, "dilate");
    const auto n = static_cast<std::ptrdiff_t>(f.size());
    const double amp = 1.0 / std::sqrt(r);
    HalfLineSignal out(f.grid);
    for (std::ptrdiff_t j = 0; j < n; ++j) {
        const std::ptrdiff_t src = j - k;
        if (src >= 0 && src < n) out[j] = amp * f[src];
    }
    return out;
}

// sup_x |M(D_r psi)(x) - r^(-2 pi i x - 1/2) M(psi)(x)|
inline double mellin_dilation_check(const HalfLineSignal& f, double r) {
    const HalfLineSignal d = dilate(f, r);
    const MellinSpectrum md = mellin_forward(d);
    const MellinSpectrum mf = mellin_forward(f);
    const double lr = std::log(r);
    double dev = 0.0;
    for (std::size_t k = 0; k < md.nx; ++k) {
        const cplx law = std::exp(cplx(-0.5 * lr, -two_pi * mf.x(k) * lr)) * mf.values[k];
        dev = std::max(dev, std::abs(md.values[k] - law));
    }
    return dev;
}

}  // namespace awig

#endif
