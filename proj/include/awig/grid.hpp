#ifndef AWIG_GRID_HPP
#define AWIG_GRID_HPP

#include <array>
#include <cmath>
#include <utility>

#include "common.hpp"

namespace awig {

// Uniform sampling of t = log a. Quadrature weight dt realizes da/a.
struct LogGrid {
    double t_min = 0.0;
    double dt = 1.0;
    std::size_t n = 1;

    LogGrid() = default;
    LogGrid(double t_min_, double dt_, std::size_t n_) : t_min(t_min_), dt(dt_), n(n_) {
        require(std::isfinite(t_min) && std::isfinite(dt) && dt > 0.0, "LogGrid: dt must be finite and positive");
        require(n >= 1, "LogGrid: n must be positive");
    }
    // n samples with both endpoints included.
    static LogGrid from_range(double t_lo, double t_hi, std::size_t n) {
        require(n >= 2 && t_hi > t_lo, "LogGrid: need t_min < t_max and n >= 2");
        return LogGrid(t_lo, (t_hi - t_lo) / static_cast<double>(n - 1), n);
    }
    // Symmetric about t = 0 with the given step; n is forced odd.
    static LogGrid symmetric(double dt, std::size_t half) {
        return LogGrid(-static_cast<double>(half) * dt, dt, 2 * half + 1);
    }

    double t(std::size_t j) const { return t_min + static_cast<double>(j) * dt; }
    double a(std::size_t j) const { return std::exp(t(j)); }
    double t_max() const { return t(n - 1); }
    // Fractional index of log-coordinate s.
    double position(double s) const { return (s - t_min) / dt; }

    bool operator==(const LogGrid& o) const { return t_min == o.t_min && dt == o.dt && n == o.n; }
    bool operator!=(const LogGrid& o) const { return !(*this == o); }
};

// Samples psi(a_j) on a LogGrid.
struct HalfLineSignal {
    LogGrid grid;
    cvec values;

    HalfLineSignal() = default;
    explicit HalfLineSignal(const LogGrid& g) : grid(g), values(g.n, cplx{}) {}
    HalfLineSignal(const LogGrid& g, cvec v) : grid(g), values(std::move(v)) {
        require(values.size() == grid.n, "HalfLineSignal: value count differs from grid size");
        for (const auto& z : values)
            require(std::isfinite(z.real()) && std::isfinite(z.imag()), "HalfLineSignal: non-finite sample");
    }

    std::size_t size() const { return values.size(); }
    cplx& operator[](std::size_t j) { return values[j]; }
    const cplx& operator[](std::size_t j) const { return values[j]; }
    double norm2() const {
        double s = 0.0;
        for (const auto& z : values) s += std::norm(z);
        return s * grid.dt;
    }
    double norm() const { return std::sqrt(norm2()); }
};

struct AffineGrid {
    double x_min = 0.0;
    double dx = 1.0;
    std::size_t nx = 1;
    LogGrid log_axis;

    AffineGrid() = default;
    AffineGrid(double x_min_, double dx_, std::size_t nx_, const LogGrid& la)
        : x_min(x_min_), dx(dx_), nx(nx_), log_axis(la) {
        require(std::isfinite(x_min) && std::isfinite(dx) && dx > 0.0, "AffineGrid: dx must be finite and positive");
        require(nx >= 1, "AffineGrid: nx must be positive");
    }

    double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx; }
    std::size_t nt() const { return log_axis.n; }
    std::size_t size() const { return nx * log_axis.n; }
    double cell() const { return dx * log_axis.dt; }

    bool operator==(const AffineGrid& o) const {
        return x_min == o.x_min && dx == o.dx && nx == o.nx && log_axis == o.log_axis;
    }
    bool operator!=(const AffineGrid& o) const { return !(*this == o); }
};

// Field on (x, log a); row-major with x outer: values[i * nt + j].
struct AffineMap {
    AffineGrid agrid;
    cvec values;

    AffineMap() = default;
    explicit AffineMap(const AffineGrid& g) : agrid(g), values(g.size(), cplx{}) {}
    AffineMap(const AffineGrid& g, cvec v) : agrid(g), values(std::move(v)) {
        require(values.size() == agrid.size(), "AffineMap: value count differs from grid size");
    }

    std::size_t nx() const { return agrid.nx; }
    std::size_t nt() const { return agrid.nt(); }
    cplx& operator()(std::size_t i, std::size_t j) { return values[i * agrid.nt() + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return values[i * agrid.nt() + j]; }

    double norm2() const {
        double s = 0.0;
        for (const auto& z : values) s += std::norm(z);
        return s * agrid.cell();
    }
    double norm() const { return std::sqrt(norm2()); }
    double max_abs() const {
        double m = 0.0;
        for (const auto& z : values) m = std::max(m, std::abs(z));
        return m;
    }
    double max_imag() const {
        double m = 0.0;
        for (const auto& z : values) m = std::max(m, std::abs(z.imag()));
        return m;
    }

    AffineMap& operator+=(const AffineMap& o) {
        require(agrid == o.agrid, "AffineMap: grid mismatch");
        for (std::size_t k = 0; k < values.size(); ++k) values[k] += o.values[k];
        return *this;
    }
    AffineMap& operator-=(const AffineMap& o) {
        require(agrid == o.agrid, "AffineMap: grid mismatch");
        for (std::size_t k = 0; k < values.size(); ++k) values[k] -= o.values[k];
        return *this;
    }
    AffineMap& operator*=(cplx c) {
        for (auto& z : values) z *= c;
        return *this;
    }
    void axpy(cplx c, const AffineMap& o) {
        require(agrid == o.agrid, "AffineMap: grid mismatch");
        for (std::size_t k = 0; k < values.size(); ++k) values[k] += c * o.values[k];
    }
};

inline AffineMap operator+(AffineMap a, const AffineMap& b) { return a += b; }
inline AffineMap operator-(AffineMap a, const AffineMap& b) { return a -= b; }
inline AffineMap operator*(cplx c, AffineMap a) { return a *= c; }

inline cplx inner_product_halfline(const HalfLineSignal& f, const HalfLineSignal& g) {
    require(f.grid == g.grid, "inner_product_halfline: grid mismatch");
    cplx s{};
    for (std::size_t j = 0; j < f.size(); ++j) s += f[j] * std::conj(g[j]);
    return s * f.grid.dt;
}

inline cplx inner_product_affine(const AffineMap& F, const AffineMap& G) {
    require(F.agrid == G.agrid, "inner_product_affine: grid mismatch");
    cplx s{};
    for (std::size_t k = 0; k < F.values.size(); ++k) s += F.values[k] * std::conj(G.values[k]);
    return s * F.agrid.cell();
}

// Four-point Lagrange stencil at fractional index p on [0, n-1].
// Taps falling outside the grid read as zero.
struct Stencil4 {
    std::ptrdiff_t i0 = 0;  // index of the first tap
    std::array<double, 4> w{0.0, 0.0, 0.0, 0.0};
    bool inside = false;
};

inline constexpr double node_snap = 1e-9;

inline Stencil4 lagrange4(double p, std::size_t n) {
    Stencil4 st;
    const double last = static_cast<double>(n - 1);
    if (!(p >= -node_snap && p <= last + node_snap)) return st;
    st.inside = true;
    const double r = std::round(p);
    if (std::abs(p - r) <= node_snap) {
        st.i0 = static_cast<std::ptrdiff_t>(r) - 1;
        st.w = {0.0, 1.0, 0.0, 0.0};
        return st;
    }
    const double fl = std::floor(p);
    const double s = p - fl;
    st.i0 = static_cast<std::ptrdiff_t>(fl) - 1;
    st.w[0] = -s * (s - 1.0) * (s - 2.0) / 6.0;
    st.w[1] = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
    st.w[2] = -(s + 1.0) * s * (s - 2.0) / 2.0;
    st.w[3] = (s + 1.0) * s * (s - 1.0) / 6.0;
    return st;
}

inline cplx apply(const Stencil4& st, const cplx* v, std::size_t n) {
    if (!st.inside) return {};
    cplx s{};
    for (int q = 0; q < 4; ++q) {
        const std::ptrdiff_t i = st.i0 + q;
        if (st.w[q] != 0.0 && i >= 0 && i < static_cast<std::ptrdiff_t>(n)) s += st.w[q] * v[i];
    }
    return s;
}

// Value of psi at log-coordinate s.
inline cplx resample_log(const HalfLineSignal& f, double s) {
    return apply(lagrange4(f.grid.position(s), f.grid.n), f.values.data(), f.size());
}

inline cvec resample(const HalfLineSignal& f, const std::vector<double>& targets) {
    cvec out(targets.size());
    for (std::size_t k = 0; k < targets.size(); ++k) {
        require(std::isfinite(targets[k]) && targets[k] > 0.0, "resample: targets must be finite and positive");
        out[k] = resample_log(f, std::log(targets[k]));
    }
    return out;
}

// Bilinear value of F at (x, log a = s); zero outside the grid.
inline cplx sample_affine_log(const AffineMap& F, double x, double s) {
    const AffineGrid& g = F.agrid;
    const std::size_t nx = g.nx, nt = g.nt();
    double px = (x - g.x_min) / g.dx;
    double pt = g.log_axis.position(s);
    auto clamp_node = [](double& p, std::size_t len) {
        const double r = std::round(p);
        if (std::abs(p - r) <= node_snap) p = r;
        return p >= 0.0 && p <= static_cast<double>(len - 1);
    };
    if (!clamp_node(px, nx) || !clamp_node(pt, nt)) return {};
    std::size_t i = static_cast<std::size_t>(px), j = static_cast<std::size_t>(pt);
    double fx = px - static_cast<double>(i), ft = pt - static_cast<double>(j);
    if (i == nx - 1 && nx > 1) { i -= 1; fx = 1.0; }
    if (j == nt - 1 && nt > 1) { j -= 1; ft = 1.0; }
    const std::size_t i1 = std::min(i + 1, nx - 1), j1 = std::min(j + 1, nt - 1);
    return (1.0 - fx) * ((1.0 - ft) * F(i, j) + ft * F(i, j1)) + fx * ((1.0 - ft) * F(i1, j) + ft * F(i1, j1));
}

inline cvec resample_affine(const AffineMap& F, const std::vector<std::pair<double, double>>& points) {
    cvec out(points.size());
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto [x, a] = points[k];
        require(std::isfinite(x) && std::isfinite(a) && a > 0.0, "resample_affine: points need finite x and a > 0");
        out[k] = sample_affine_log(F, x, std::log(a));
    }
    return out;
}

// Integer index shift equivalent to multiplying a by r, if log r is a whole number of steps.
inline std::ptrdiff_t commensurate_shift(const LogGrid& g, double r, const char* who) {
    require(std::isfinite(r) && r > 0.0, std::string(who) + ": ratio must be positive");
    const double k = std::log(r) / g.dt;
    const double kr = std::round(k);
    require(std::abs(k - kr) <= 1e-9 * std::max(1.0, std::abs(k)),
            std::string(who) + ": log ratio is not a whole number of grid steps");
    return static_cast<std::ptrdiff_t>(kr);
}

}  // namespace awig

#endif
