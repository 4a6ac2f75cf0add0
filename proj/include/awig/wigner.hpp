#ifndef AWIG_WIGNER_HPP
#define AWIG_WIGNER_HPP

#include <cmath>
#include <limits>
#include <random>

#include "fft.hpp"
#include "group.hpp"
#include "mellin.hpp"
#include "special.hpp"

namespace awig {

// u_k = (k - m/2) du on [-u_max, u_max); dual x-grid x_j = (j - m/2) dx, dx = 1/(m du).
struct UGrid {
    double u_max = 16.0;
    std::size_t m = 2048;

    UGrid() = default;
    UGrid(double u_max_, std::size_t m_) : u_max(u_max_), m(m_) {
        require(std::isfinite(u_max) && u_max > 0.0, "UGrid: u_max must be positive");
        require(m >= 2 && m % 2 == 0, "UGrid: m must be a positive even integer");
    }
    double du() const { return 2.0 * u_max / static_cast<double>(m); }
    double u(std::size_t k) const { return (static_cast<double>(k) - static_cast<double>(m / 2)) * du(); }
    double dx() const { return 1.0 / (static_cast<double>(m) * du()); }
    double x(std::size_t j) const { return (static_cast<double>(j) - static_cast<double>(m / 2)) * dx(); }
    AffineGrid affine_grid(const LogGrid& la) const { return AffineGrid(x(0), dx(), m, la); }

    bool operator==(const UGrid& o) const { return u_max == o.u_max && m == o.m; }
};

namespace detail {

// Stencil for reading psi at log a + shift, stored relative to the row index.
struct RelStencil {
    double shift = 0.0;     // in grid steps
    std::ptrdiff_t base = 0;  // first tap relative to the row
    std::array<double, 4> w{};
};

inline RelStencil rel_stencil(double shift) {
    RelStencil rs;
    rs.shift = shift;
    const double r = std::round(shift);
    if (std::abs(shift - r) <= node_snap) {
        rs.shift = r;
        rs.base = static_cast<std::ptrdiff_t>(r) - 1;
        rs.w = {0.0, 1.0, 0.0, 0.0};
        return rs;
    }
    // Weights depend only on the fractional part of the shift.
    const Stencil4 st = lagrange4(shift - std::floor(shift) + 1.0, 4);
    rs.base = static_cast<std::ptrdiff_t>(std::floor(shift)) - 1 + st.i0;
    rs.w = st.w;
    return rs;
}

inline cplx read(const RelStencil& rs, const cvec& v, std::size_t row) {
    const auto n = static_cast<std::ptrdiff_t>(v.size());
    const double p = static_cast<double>(row) + rs.shift;
    if (!(p >= -node_snap && p <= static_cast<double>(n - 1) + node_snap)) return {};
    const std::ptrdiff_t i0 = static_cast<std::ptrdiff_t>(row) + rs.base;
    cplx s{};
    for (int q = 0; q < 4; ++q) {
        const std::ptrdiff_t i = i0 + q;
        if (rs.w[q] != 0.0 && i >= 0 && i < n) s += rs.w[q] * v[i];
    }
    return s;
}

struct WignerKernel {
    std::vector<RelStencil> plus, minus;  // psi at a lambda(u_k), phi at a lambda(-u_k)
    RelStencil edge_plus, edge_minus;     // the same at u = +u_max

    WignerKernel(const LogGrid& g, const UGrid& ug) {
        plus.resize(ug.m);
        minus.resize(ug.m);
        for (std::size_t k = 0; k < ug.m; ++k) {
            const double u = ug.u(k);
            plus[k] = rel_stencil(log_lambda(u) / g.dt);
            minus[k] = rel_stencil(log_lambda(-u) / g.dt);
        }
        edge_plus = rel_stencil(log_lambda(ug.u_max) / g.dt);
        edge_minus = rel_stencil(log_lambda(-ug.u_max) / g.dt);
    }

    // Integrand psi(a lambda(u)) conj phi(a lambda(-u)) on the u-grid. The
    // unpaired sample at -u_max is averaged with its mirror at +u_max
    // (periodic trapezoid), which keeps the discrete transform Hermitian.
    void integrand(const cvec& psi, const cvec& phi, std::size_t row, cvec& h) const {
        const std::size_t m = plus.size();
        for (std::size_t k = 1; k < m; ++k) h[k] = read(plus[k], psi, row) * std::conj(read(minus[k], phi, row));
        const cplx lo = read(plus[0], psi, row) * std::conj(read(minus[0], phi, row));
        const cplx hi = read(edge_plus, psi, row) * std::conj(read(edge_minus, phi, row));
        h[0] = 0.5 * (lo + hi);
    }
};

inline bool same_signal(const HalfLineSignal& a, const HalfLineSignal& b) {
    return &a == &b || (a.grid == b.grid && a.values == b.values);
}

inline void make_real(AffineMap& W, const char* who) {
    double mx = 0.0;
    for (const auto& z : W.values) mx = std::max(mx, std::abs(z.real()));
    const double im = W.max_imag();
    if (im > 1e-10 * std::max(1.0, mx))
        throw numerical_error(std::string(who) + ": diagonal transform is not real (" + std::to_string(im) + ")");
    for (auto& z : W.values) z = cplx(z.real(), 0.0);
}

}  // namespace detail

// W^{psi,phi}(x, a) = int psi(a lambda(u)) conj phi(a lambda(-u)) e^{-2 pi i x u} du
inline AffineMap affine_wigner(const HalfLineSignal& psi, const HalfLineSignal& phi, const UGrid& ug = {}) {
    require(psi.grid == phi.grid, "affine_wigner: grid mismatch");
    const LogGrid& g = psi.grid;
    const detail::WignerKernel K(g, ug);
    const fft::CenteredDFT dft(ug.m, static_cast<long long>(ug.m / 2), static_cast<long long>(ug.m / 2), FFTW_FORWARD);
    const double du = ug.du();
    AffineMap W(ug.affine_grid(g));
    const std::size_t nt = g.n;
    parallel_for(nt, [&](std::size_t j) {
        cvec h(ug.m);
        K.integrand(psi.values, phi.values, j, h);
        dft(h);
        for (std::size_t i = 0; i < ug.m; ++i) W.values[i * nt + j] = du * h[i];
    });
    if (detail::same_signal(psi, phi)) detail::make_real(W, "affine_wigner");
    return W;
}

inline AffineMap affine_wigner(const HalfLineSignal& psi, const UGrid& ug = {}) { return affine_wigner(psi, psi, ug); }

// Direct quadrature of W^{psi,phi} at arbitrary (x, log a).
inline cplx affine_wigner_at(const HalfLineSignal& psi, const HalfLineSignal& phi, const UGrid& ug, double x,
                             double log_a) {
    require(psi.grid == phi.grid, "affine_wigner_at: grid mismatch");
    auto term = [&](double u) {
        return resample_log(psi, log_a + log_lambda(u)) * std::conj(resample_log(phi, log_a + log_lambda(-u))) *
               std::polar(1.0, -two_pi * x * u);
    };
    cplx s = 0.5 * (term(-ug.u_max) + term(ug.u_max));
    for (std::size_t k = 1; k < ug.m; ++k) s += term(ug.u(k));
    return s * ug.du();
}

inline cvec marginal_x(const AffineMap& W) {
    cvec out(W.nt(), cplx{});
    for (std::size_t i = 0; i < W.nx(); ++i)
        for (std::size_t j = 0; j < W.nt(); ++j) out[j] += W(i, j);
    for (auto& z : out) z *= W.agrid.dx;
    return out;
}

inline cvec marginal_a(const AffineMap& W) {
    cvec out(W.nx(), cplx{});
    for (std::size_t i = 0; i < W.nx(); ++i) {
        cplx s{};
        for (std::size_t j = 0; j < W.nt(); ++j) s += W(i, j);
        out[i] = s * W.agrid.log_axis.dt;
    }
    return out;
}

// Classical ambiguity of sampled log-pullbacks:
// A(x, tau) = int Psi(t + tau/2) conj Phi(t - tau/2) e^{-2 pi i x t} dt, tau = 2 q dt.
inline AffineMap classical_ambiguity(const cvec& Psi, const cvec& Phi, const LogGrid& g) {
    require(Psi.size() == g.n && Phi.size() == g.n, "classical_ambiguity: length mismatch");
    const std::size_t n = g.n;
    const auto Q = static_cast<std::ptrdiff_t>((n - 1) / 2);
    const std::size_t nq = static_cast<std::size_t>(2 * Q + 1);
    const MellinSpectrum dual = mellin_dual(g);
    const LogGrid tau_axis(-2.0 * static_cast<double>(Q) * g.dt, 2.0 * g.dt, nq);
    AffineMap A(AffineGrid(dual.x_min, dual.dx, n, tau_axis));
    const fft::CenteredDFT dft(n, 0, static_cast<long long>(n / 2), FFTW_FORWARD);
    cvec phase(n);
    for (std::size_t k = 0; k < n; ++k) phase[k] = g.dt * std::polar(1.0, -two_pi * dual.x(k) * g.t_min);
    parallel_for(nq, [&](std::size_t jq) {
        const std::ptrdiff_t q = static_cast<std::ptrdiff_t>(jq) - Q;
        cvec h(n, cplx{});
        const auto sn = static_cast<std::ptrdiff_t>(n);
        for (std::ptrdiff_t j = std::abs(q); j < sn - std::abs(q); ++j) h[j] = Psi[j + q] * std::conj(Phi[j - q]);
        dft(h);
        for (std::size_t k = 0; k < n; ++k) A.values[k * nq + jq] = h[k] * phase[k];
    });
    return A;
}

// A^{psi,phi}(x, a) = int psi(r sqrt a) conj phi(r / sqrt a) r^{-2 pi i x} dr/r
inline AffineMap affine_ambiguity(const HalfLineSignal& psi, const HalfLineSignal& phi) {
    require(psi.grid == phi.grid, "affine_ambiguity: grid mismatch");
    return classical_ambiguity(psi.values, phi.values, psi.grid);
}

inline AffineMap affine_ambiguity(const HalfLineSignal& psi) { return affine_ambiguity(psi, psi); }

struct ViaAmbiguityOptions {
    bool theta_one = false;  // replace the Theta multiplier by 1
    std::size_t oversample = 8;
};

// W = M_y^{-1} (x) M_b [Theta(y, b) A(y, b)], resampled onto the affine_wigner grid.
inline AffineMap wigner_via_ambiguity(const HalfLineSignal& psi, const HalfLineSignal& phi, const UGrid& ug = {},
                                      const ViaAmbiguityOptions& opt = {}) {
    require(psi.grid == phi.grid, "wigner_via_ambiguity: grid mismatch");
    const LogGrid& g = psi.grid;
    const std::size_t n = g.n;
    const AffineMap A = affine_ambiguity(psi, phi);
    const LogGrid& tau = A.agrid.log_axis;
    const std::size_t nq = tau.n;
    const auto Q = static_cast<long long>((nq - 1) / 2);

    // B(t_j, tau_q): inverse Mellin in y of Theta A.
    cvec B(n * nq);
    parallel_for(nq, [&](std::size_t jq) {
        MellinSpectrum S = mellin_dual(g);
        const double b = std::exp(tau.t(jq));
        for (std::size_t k = 0; k < n; ++k) {
            const cplx th = opt.theta_one ? cplx(1.0) : theta_eval(S.x(k), b);
            S.values[k] = th * A.values[k * nq + jq];
        }
        const HalfLineSignal col = mellin_inverse(S, g);
        for (std::size_t j = 0; j < n; ++j) B[j * nq + jq] = col[j];
    });

    // Forward Mellin in b on a zero-padded axis, then cubic interpolation in x.
    std::size_t P = 1;
    while (P < opt.oversample * nq) P <<= 1;
    const double dtau = tau.dt;
    const fft::CenteredDFT dft(P, Q, static_cast<long long>(P / 2), FFTW_FORWARD);
    AffineMap W(ug.affine_grid(g));
    parallel_for(n, [&](std::size_t j) {
        cvec v(P, cplx{});
        for (std::size_t q = 0; q < nq; ++q) v[q] = dtau * B[j * nq + q];
        dft(v);
        for (std::size_t i = 0; i < ug.m; ++i) {
            const double p = ug.x(i) * static_cast<double>(P) * dtau + static_cast<double>(P / 2);
            W.values[i * n + j] = apply(lagrange4(p, P), v.data(), P);
        }
    });
    return W;
}

// U(x, a) psi(r) = e^{2 pi i x r} psi(a r)
inline HalfLineSignal apply_U(const GroupElement& g, const HalfLineSignal& psi) {
    const std::ptrdiff_t k = commensurate_shift(psi.grid, g.a, "apply_U");
    const auto n = static_cast<std::ptrdiff_t>(psi.size());
    HalfLineSignal out(psi.grid);
    for (std::ptrdiff_t j = 0; j < n; ++j) {
        const std::ptrdiff_t src = j + k;
        if (src >= 0 && src < n) out[j] = std::polar(1.0, two_pi * g.x * psi.grid.a(j)) * psi[src];
    }
    return out;
}

// psi(r) e^{-2 pi i c log(r / f_r)}
inline HalfLineSignal hyperbolic_modulate(const HalfLineSignal& psi, double c, double f_r = 1.0) {
    require(f_r > 0.0, "hyperbolic_modulate: reference scale must be positive");
    HalfLineSignal out(psi.grid);
    for (std::size_t j = 0; j < psi.size(); ++j)
        out[j] = std::polar(1.0, -two_pi * c * (psi.grid.t(j) - std::log(f_r))) * psi[j];
    return out;
}

// |<phi, sqrt(a) U(x, a) psi>|^2 per point.
inline std::vector<double> scalogram_direct(const HalfLineSignal& phi, const HalfLineSignal& psi,
                                            const std::vector<GroupElement>& points) {
    require(phi.grid == psi.grid, "scalogram_direct: grid mismatch");
    const LogGrid& g = psi.grid;
    const auto n = static_cast<std::ptrdiff_t>(g.n);
    std::vector<double> out(points.size());
    parallel_for(points.size(), [&](std::size_t p) {
        const GroupElement& e = points[p];
        const std::ptrdiff_t k = commensurate_shift(g, e.a, "scalogram_direct");
        cplx s{};
        for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(0, -k); j < std::min(n, n - k); ++j)
            s += phi[j] * std::conj(std::polar(1.0, two_pi * e.x * g.a(j)) * psi[j + k]);
        out[p] = e.a * std::norm(s * g.dt);
    });
    return out;
}

// Right side of the scalogram theorem, [I(W^psi) * (Delta W^phi)](x/a, 1/a),
// on the affine_wigner grid. Nodes whose image leaves the grid are NaN.
inline AffineMap scalogram_via_convolution(const HalfLineSignal& phi, const HalfLineSignal& psi, const UGrid& ug = {}) {
    require(phi.grid == psi.grid, "scalogram_via_convolution: grid mismatch");
    const AffineMap Wpsi = affine_wigner(psi, psi, ug);
    AffineMap G = affine_wigner(phi, phi, ug);
    const AffineGrid& ag = G.agrid;
    for (std::size_t i = 0; i < ag.nx; ++i)
        for (std::size_t j = 0; j < ag.nt(); ++j) G(i, j) *= std::exp(-ag.log_axis.t(j));
    const AffineMap C = affine_convolve(involution(Wpsi), G);
    AffineMap S(ag);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double xlo = ag.x_min, xhi = ag.x(ag.nx - 1);
    const double tlo = ag.log_axis.t_min, thi = ag.log_axis.t_max();
    for (std::size_t i = 0; i < ag.nx; ++i)
        for (std::size_t j = 0; j < ag.nt(); ++j) {
            const double t = ag.log_axis.t(j);
            const double X = ag.x(i) * std::exp(-t), T = -t;
            const double tol = 1e-9;
            if (X < xlo - tol * ag.dx || X > xhi + tol * ag.dx || T < tlo - tol || T > thi + tol)
                S(i, j) = cplx(nan, nan);
            else
                S(i, j) = sample_affine_log(C, X, T);
        }
    return S;
}

struct ConcentrationReport {
    double fraction = 0.0;       // int_U |A|^2 dmu_r
    double measure = 0.0;        // grid measure of U: node count times cell size
    double haar_measure = 0.0;   // continuum measure of the box
    bool holds_p4 = false;       // measure >= 2 (1 - eps)^2
    bool holds_inf = false;      // measure >= 1 - eps
};

inline ConcentrationReport concentration_check(const AffineMap& A, const Box& U) {
    const AffineGrid& g = A.agrid;
    const double p0 = -g.x_min / g.dx, q0 = g.log_axis.position(0.0);
    require(std::abs(p0 - std::round(p0)) < 1e-9 && std::abs(q0 - std::round(q0)) < 1e-9 && p0 >= 0 && q0 >= 0 &&
                p0 < static_cast<double>(g.nx) && q0 < static_cast<double>(g.nt()),
            "concentration_check: grid does not contain the identity (0, 1)");
    const cplx peak = A(static_cast<std::size_t>(std::round(p0)), static_cast<std::size_t>(std::round(q0)));
    require(std::abs(peak - 1.0) <= 1e-6, "concentration_check: ambiguity map is not normalized at (0, 1)");
    ConcentrationReport rep;
    std::size_t count = 0;
    double mass = 0.0;
    for (std::size_t i = 0; i < g.nx; ++i) {
        const double x = g.x(i);
        if (x < U.x_lo || x > U.x_hi) continue;
        for (std::size_t j = 0; j < g.nt(); ++j) {
            const double a = std::exp(g.log_axis.t(j));
            if (!U.contains(x, a)) continue;
            ++count;
            mass += std::norm(A(i, j));
        }
    }
    rep.fraction = mass * g.cell();
    rep.measure = static_cast<double>(count) * g.cell();
    rep.haar_measure = haar_right_measure(U);
    // A box holding only the peak node has fraction equal to its measure up to rounding.
    const double slack = 1.0 + 1e-12;
    rep.holds_p4 = rep.measure * slack >= 2.0 * rep.fraction * rep.fraction;
    rep.holds_inf = rep.measure * slack >= rep.fraction;
    return rep;
}

// P(u) = u (1 - e^u) / (1 + u - e^u), P(0) = 2.
inline double gr_prefactor(double u) {
    if (std::abs(u) < 1e-2) {
        const double num = 1.0 + u / 2.0 + u * u / 6.0 + u * u * u / 24.0;
        const double den = 0.5 + u / 6.0 + u * u / 24.0 + u * u * u / 120.0;
        return num / den;
    }
    if (u > 30.0) {
        const double e = std::exp(-u);
        return u * (1.0 - e) / (1.0 - (1.0 + u) * e);
    }
    const double em = std::expm1(u);
    return -u * em / (u - em);
}

// (R(x, a) psi)(r) = e^{2 pi i x u} P(u) psi(r e^{-u}), u = lambda^{-1}(r / a)
inline HalfLineSignal grossmann_royer_apply(const GroupElement& g, const HalfLineSignal& psi) {
    const LogGrid& grid = psi.grid;
    HalfLineSignal out(grid);
    const double la = std::log(g.a);
    parallel_for(grid.n, [&](std::size_t j) {
        const double t = grid.t(j);
        const double u = lambda_inv(std::exp(t - la));
        out[j] = std::polar(gr_prefactor(u), two_pi * g.x * u) * resample_log(psi, t - u);
    });
    return out;
}

inline double support_ratio(const HalfLineSignal& psi, const GroupElement& g) {
    return grossmann_royer_apply(g, psi).norm() / psi.norm();
}

// Random smooth state supported in [1/k, k]: a bump in log a times a random
// low-degree complex polynomial.
template <class Rng>
HalfLineSignal random_supported_state(double k, const LogGrid& grid, Rng& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    std::array<cplx, 4> c;
    for (auto& z : c) z = cplx(nd(rng), nd(rng));
    const double h = std::log(k);
    HalfLineSignal f(grid);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double s = grid.t(j) / h;
        if (std::abs(s) >= 1.0) continue;
        const cplx poly = c[0] + s * (c[1] + s * (c[2] + s * c[3]));
        f[j] = std::exp(-1.0 / (1.0 - s * s)) * poly;
    }
    return f;
}

// Lower bound on the k-support constant: running max of ||R(x, a) psi|| / ||psi||.
inline double estimate_support_constant(double k, int trials, const LogGrid& grid, std::uint64_t seed = 0,
                                        int points_per_trial = 4) {
    require(k > 1.0, "estimate_support_constant: k must exceed 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(-1.0, 1.0), ut(-std::log(k), std::log(k));
    double best = 0.0;
    for (int tr = 0; tr < trials; ++tr) {
        const HalfLineSignal psi = random_supported_state(k, grid, rng);
        const double nrm = psi.norm();
        for (int p = 0; p < points_per_trial; ++p) {
            const GroupElement g(ux(rng), std::exp(ut(rng)));
            if (nrm > 0.0) best = std::max(best, grossmann_royer_apply(g, psi).norm() / nrm);
        }
    }
    return best;
}

}  // namespace awig

#endif
