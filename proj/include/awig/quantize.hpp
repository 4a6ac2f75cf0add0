#ifndef AWIG_QUANTIZE_HPP
#define AWIG_QUANTIZE_HPP

#include <Eigen/Dense>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>

#include "wigner.hpp"

namespace awig {

// Entries A_nm = <A_f L_m, L_n> in the Laguerre basis L_0..L_{k-1}.
struct OperatorMatrix {
    int k = 0;
    double alpha = 1.0;
    Eigen::MatrixXcd entries;

    OperatorMatrix() = default;
    OperatorMatrix(int k_, double alpha_) : k(k_), alpha(alpha_), entries(Eigen::MatrixXcd::Zero(k_, k_)) {}
    double hs_norm() const { return entries.norm(); }
};

struct ApproximationResult {
    double distance = 0.0;
    double lambda_max_plus = 0.0;
    int multiplicity = 0;          // size of the top eigenspace; 0 when the zero minimizer applies
    bool zero_minimizer = false;
    std::vector<HalfLineSignal> minimizers;
    std::vector<Eigen::VectorXcd> coefficients;
    Eigen::VectorXd eigenvalues;   // ascending
    double symbol_norm2 = 0.0;
    bool corollary_applies = false;  // lambda_max_plus equals the largest |eigenvalue|
    double corollary_distance = 0.0;
};

// Signature of the (signal grid, u-grid, alpha) triple that fixes every basis element.
inline std::string basis_signature(double alpha, const LogGrid& g, const UGrid& ug) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "alpha=%.17g;t_min=%.17g;dt=%.17g;n=%zu;u_max=%.17g;m=%zu", alpha, g.t_min, g.dt, g.n,
                  ug.u_max, ug.m);
    return buf;
}

// Basis elements W^{L_n, L_m} for n <= m, kept in memory up to a byte budget
// and optionally persisted as raw binary files in a directory.
class BasisCache {
public:
    explicit BasisCache(std::string dir = {}, std::size_t memory_budget = std::size_t(1) << 30)
        : dir_(std::move(dir)), budget_(memory_budget) {
        if (!dir_.empty()) std::filesystem::create_directories(dir_);
    }

    const std::string& directory() const { return dir_; }
    std::size_t hits() const { return hits_; }
    std::size_t misses() const { return misses_; }
    // Misses that were neither in memory nor on disk.
    std::size_t computed() const { return computed_; }

    // W^{L_n, L_m} for n <= m.
    std::shared_ptr<const AffineMap> upper(int n, int m, double alpha, const LogGrid& g, const UGrid& ug) {
        require(n >= 0 && m >= n, "BasisCache: expects 0 <= n <= m");
        const Key key{basis_signature(alpha, g, ug), n, m};
        {
            std::lock_guard<std::mutex> lk(mu_);
            auto it = mem_.find(key);
            if (it != mem_.end()) {
                ++hits_;
                return it->second;
            }
        }
        std::shared_ptr<const AffineMap> w = load(key, g, ug);
        if (!w) {
            const HalfLineSignal a = laguerre_state(LaguerreSpec(n, alpha), g);
            const HalfLineSignal b = laguerre_state(LaguerreSpec(m, alpha), g);
            w = std::make_shared<const AffineMap>(affine_wigner(a, b, ug));
            store(key, *w);
            std::lock_guard<std::mutex> lk(mu_);
            ++computed_;
        }
        std::lock_guard<std::mutex> lk(mu_);
        ++misses_;
        const std::size_t bytes = w->values.size() * sizeof(cplx);
        if (used_ + bytes <= budget_ && mem_.emplace(key, w).second) used_ += bytes;
        return w;
    }

    void clear_memory() {
        std::lock_guard<std::mutex> lk(mu_);
        mem_.clear();
        used_ = 0;
    }

    // Removes cached files; returns how many were deleted.
    std::size_t clear_disk() {
        std::size_t removed = 0;
        if (dir_.empty() || !std::filesystem::exists(dir_)) return 0;
        for (const auto& e : std::filesystem::directory_iterator(dir_)) {
            const auto name = e.path().filename().string();
            if (name.rfind("wb_", 0) == 0 && e.path().extension() == ".bin") {
                std::filesystem::remove(e.path());
                ++removed;
            }
        }
        return removed;
    }

private:
    using Key = std::tuple<std::string, int, int>;

    static std::uint64_t fnv1a(const std::string& s) {
        std::uint64_t h = 1469598103934665603ull;
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
        return h;
    }

    std::filesystem::path path_for(const Key& key) const {
        char buf[96];
        std::snprintf(buf, sizeof buf, "wb_%016llx_%d_%d.bin", static_cast<unsigned long long>(fnv1a(std::get<0>(key))),
                      std::get<1>(key), std::get<2>(key));
        return std::filesystem::path(dir_) / buf;
    }

    std::shared_ptr<const AffineMap> load(const Key& key, const LogGrid& g, const UGrid& ug) const {
        if (dir_.empty()) return nullptr;
        std::ifstream in(path_for(key), std::ios::binary);
        if (!in) return nullptr;
        std::uint64_t len = 0;
        in.read(reinterpret_cast<char*>(&len), sizeof len);
        if (!in || len > 4096) return nullptr;
        std::string sig(len, '\0');
        in.read(sig.data(), static_cast<std::streamsize>(len));
        if (!in || sig != std::get<0>(key)) return nullptr;
        AffineMap w(ug.affine_grid(g));
        in.read(reinterpret_cast<char*>(w.values.data()), static_cast<std::streamsize>(w.values.size() * sizeof(cplx)));
        if (!in) return nullptr;
        return std::make_shared<const AffineMap>(std::move(w));
    }

    void store(const Key& key, const AffineMap& w) const {
        if (dir_.empty()) return;
        const auto final_path = path_for(key);
        auto tmp = final_path;
        tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
        {
            std::ofstream out(tmp, std::ios::binary);
            if (!out) return;
            const std::string& sig = std::get<0>(key);
            const std::uint64_t len = sig.size();
            out.write(reinterpret_cast<const char*>(&len), sizeof len);
            out.write(sig.data(), static_cast<std::streamsize>(len));
            out.write(reinterpret_cast<const char*>(w.values.data()),
                      static_cast<std::streamsize>(w.values.size() * sizeof(cplx)));
        }
        std::error_code ec;
        std::filesystem::rename(tmp, final_path, ec);
        if (ec) std::filesystem::remove(tmp, ec);
    }

    std::string dir_;
    std::size_t budget_;
    std::size_t used_ = 0;
    std::size_t hits_ = 0, misses_ = 0, computed_ = 0;
    std::mutex mu_;
    std::map<Key, std::shared_ptr<const AffineMap>> mem_;
};

inline AffineMap conj_map(const AffineMap& F) {
    AffineMap out = F;
    for (auto& z : out.values) z = std::conj(z);
    return out;
}

inline AffineMap wigner_basis_element(int n, int m, double alpha, const LogGrid& grid, const UGrid& ug,
                                      BasisCache* cache = nullptr) {
    require(n >= 0 && m >= 0, "wigner_basis_element: orders must be non-negative");
    require(std::isfinite(alpha) && alpha > -1.0, "wigner_basis_element: alpha must exceed -1");
    const int lo = std::min(n, m), hi = std::max(n, m);
    AffineMap w;
    if (cache) {
        w = *cache->upper(lo, hi, alpha, grid, ug);
    } else {
        w = affine_wigner(laguerre_state(LaguerreSpec(lo, alpha), grid), laguerre_state(LaguerreSpec(hi, alpha), grid), ug);
    }
    return n <= m ? w : conj_map(w);
}

// The u-grid whose dual x-axis and log axis produced this map.
inline UGrid wigner_ugrid(const AffineGrid& ag) {
    require(ag.nx % 2 == 0, "symbol grid: x-axis length must be even");
    const UGrid ug(0.5 / ag.dx, ag.nx);
    const AffineGrid ref = ug.affine_grid(ag.log_axis);
    require(std::abs(ref.x_min - ag.x_min) <= 1e-9 * ag.dx && std::abs(ref.dx - ag.dx) <= 1e-12 * ag.dx,
            "symbol grid: x-axis is not the dual of a u-grid");
    return ug;
}

namespace detail {

// Visits every basis element once, fn(n, m, W^{L_n, L_m}) for n <= m, in a
// fixed order. Elements are built in parallel batches of threads() maps.
template <class Fn>
void for_each_basis_pair(int k, double alpha, const LogGrid& g, const UGrid& ug, BasisCache* cache, Fn&& fn) {
    std::vector<HalfLineSignal> L;
    if (!cache)
        for (int n = 0; n < k; ++n) L.push_back(laguerre_state(LaguerreSpec(n, alpha), g));
    std::vector<std::pair<int, int>> pairs;
    for (int n = 0; n < k; ++n)
        for (int m = n; m < k; ++m) pairs.emplace_back(n, m);
    const std::size_t batch = static_cast<std::size_t>(threads());
    std::vector<std::shared_ptr<const AffineMap>> maps;
    for (std::size_t p0 = 0; p0 < pairs.size(); p0 += batch) {
        const std::size_t cnt = std::min(batch, pairs.size() - p0);
        maps.assign(cnt, nullptr);
        parallel_for(cnt, [&](std::size_t q) {
            const auto [n, m] = pairs[p0 + q];
            maps[q] = cache ? cache->upper(n, m, alpha, g, ug)
                            : std::make_shared<const AffineMap>(affine_wigner(L[n], L[m], ug));
        });
        for (std::size_t q = 0; q < cnt; ++q) fn(pairs[p0 + q].first, pairs[p0 + q].second, *maps[q]);
    }
}

inline bool is_real_map(const AffineMap& f, double rel) {
    double im = 0.0;
    for (const auto& z : f.values) im += z.imag() * z.imag();
    return std::sqrt(im * f.agrid.cell()) <= rel * f.norm();
}

inline void enforce_hermitian(OperatorMatrix& M) {
    const double dev = (M.entries - M.entries.adjoint()).norm();
    if (dev > 1e-8 * std::max(M.entries.norm(), 1e-300))
        throw numerical_error("quantize_symbol: matrix of a real symbol is not Hermitian (" + std::to_string(dev) + ")");
    M.entries = 0.5 * (M.entries + M.entries.adjoint()).eval();
}

}  // namespace detail

// Quantizes several symbols on one grid in a single pass over the basis.
inline std::vector<OperatorMatrix> quantize_symbols(const std::vector<const AffineMap*>& fs, int k, double alpha,
                                                    BasisCache* cache = nullptr) {
    require(k >= 1, "quantize_symbol: k must be positive");
    require(!fs.empty(), "quantize_symbol: no symbols");
    const AffineGrid& ag = fs.front()->agrid;
    for (const auto* f : fs) require(f->agrid == ag, "quantize_symbol: symbols on different grids");
    const UGrid ug = wigner_ugrid(ag);
    std::vector<OperatorMatrix> out(fs.size(), OperatorMatrix(k, alpha));
    const double cell = ag.cell();
    detail::for_each_basis_pair(k, alpha, ag.log_axis, ug, cache, [&](int n, int m, const AffineMap& W) {
        for (std::size_t s = 0; s < fs.size(); ++s) {
            const cvec& f = fs[s]->values;
            cplx a{}, b{};
            for (std::size_t q = 0; q < f.size(); ++q) {
                a += f[q] * std::conj(W.values[q]);
                b += f[q] * W.values[q];
            }
            // W^{L_m, L_n} = conj W^{L_n, L_m}
            out[s].entries(n, m) = a * cell;
            out[s].entries(m, n) = b * cell;
        }
    });
    for (std::size_t s = 0; s < fs.size(); ++s)
        if (detail::is_real_map(*fs[s], 1e-12)) detail::enforce_hermitian(out[s]);
    return out;
}

inline OperatorMatrix quantize_symbol(const AffineMap& f, int k, double alpha = 1.0, BasisCache* cache = nullptr) {
    return quantize_symbols({&f}, k, alpha, cache).front();
}

inline AffineMap dequantize(const OperatorMatrix& M, const LogGrid& grid, const UGrid& ug, BasisCache* cache = nullptr) {
    AffineMap out(ug.affine_grid(grid));
    detail::for_each_basis_pair(M.k, M.alpha, grid, ug, cache, [&](int n, int m, const AffineMap& W) {
        const cplx c = M.entries(n, m), d = M.entries(m, n);
        if (n == m) {
            out.axpy(c, W);
        } else {
            for (std::size_t q = 0; q < W.values.size(); ++q)
                out.values[q] += c * W.values[q] + d * std::conj(W.values[q]);
        }
    });
    return out;
}

inline HalfLineSignal synthesize_signal(const Eigen::VectorXcd& c, double alpha, const LogGrid& grid) {
    HalfLineSignal out(grid);
    for (Eigen::Index n = 0; n < c.size(); ++n) {
        if (c(n) == cplx{}) continue;
        const HalfLineSignal L = laguerre_state(LaguerreSpec(static_cast<int>(n), alpha), grid);
        for (std::size_t j = 0; j < grid.n; ++j) out[j] += c(n) * L[j];
    }
    return out;
}

inline constexpr double zero_eigen_rel = 1e-8;

inline ApproximationResult wigner_approximation(const AffineMap& f, int k, double alpha = 1.0, BasisCache* cache = nullptr) {
    require(detail::is_real_map(f, 1e-8), "wigner_approximation: symbol must be real-valued");
    const OperatorMatrix M = quantize_symbol(f, k, alpha, cache);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M.entries);
    if (es.info() != Eigen::Success) throw numerical_error("wigner_approximation: eigensolver did not converge");
    const Eigen::VectorXd& lam = es.eigenvalues();
    const Eigen::MatrixXcd& V = es.eigenvectors();
    const double opnorm = lam.cwiseAbs().maxCoeff();
    for (int j = 0; j < k; ++j) {
        const double res = (M.entries * V.col(j) - lam(j) * V.col(j)).norm();
        if (res > 1e-10 * std::max(opnorm, 1e-300)) throw numerical_error("wigner_approximation: eigen residual too large");
    }

    ApproximationResult r;
    r.eigenvalues = lam;
    r.symbol_norm2 = f.norm2();
    // Eigenvalues within rounding of zero count as zero, so a negative
    // semi-definite symbol takes the zero-minimizer branch.
    const double top = lam(k - 1) > zero_eigen_rel * opnorm ? lam(k - 1) : 0.0;
    r.lambda_max_plus = top;
    r.distance = std::sqrt(std::max(r.symbol_norm2 - r.lambda_max_plus * r.lambda_max_plus, 0.0));
    if (r.lambda_max_plus <= 0.0) {
        r.zero_minimizer = true;
        r.multiplicity = 0;
        r.minimizers.emplace_back(f.agrid.log_axis);
    } else {
        const double scale = std::sqrt(r.lambda_max_plus);
        for (int j = k - 1; j >= 0 && std::abs(lam(j) - top) < 1e-6 * std::abs(top); --j) {
            Eigen::VectorXcd v = V.col(j);
            Eigen::Index big = 0;
            v.cwiseAbs().maxCoeff(&big);
            v *= std::polar(1.0, -std::arg(v(big)));
            v *= scale;
            r.minimizers.push_back(synthesize_signal(v, alpha, f.agrid.log_axis));
            r.coefficients.push_back(v);
            ++r.multiplicity;
        }
    }
    r.corollary_applies = r.lambda_max_plus > 0.0 && r.lambda_max_plus >= opnorm * (1.0 - 1e-12);
    if (r.corollary_applies) {
        const double hs2 = M.entries.squaredNorm();
        r.corollary_distance = std::sqrt(std::max(hs2 - opnorm * opnorm, 0.0));
    }
    return r;
}

struct TracePair {
    cplx trace;     // Tr(A_f A_g) in the truncated basis
    cplx integral;  // int f g dmu_r, no conjugation
};

inline TracePair trace_pair(const AffineMap& f, const AffineMap& g, int k, double alpha = 1.0,
                            BasisCache* cache = nullptr) {
    require(f.agrid == g.agrid, "trace_pair: grid mismatch");
    const auto M = quantize_symbols({&f, &g}, k, alpha, cache);
    TracePair tp;
    tp.trace = (M[0].entries * M[1].entries).trace();
    cplx s{};
    for (std::size_t q = 0; q < f.values.size(); ++q) s += f.values[q] * g.values[q];
    tp.integral = s * f.agrid.cell();
    return tp;
}

// r f(x, a / r) for grid-commensurate r.
inline AffineMap dilate_symbol(const AffineMap& f, double r) {
    const std::ptrdiff_t kr = commensurate_shift(f.agrid.log_axis, r, "dilate_symbol");
    const auto nt = static_cast<std::ptrdiff_t>(f.nt());
    AffineMap out(f.agrid);
    for (std::size_t i = 0; i < f.nx(); ++i)
        for (std::ptrdiff_t j = 0; j < nt; ++j) {
            const std::ptrdiff_t src = j - kr;
            if (src >= 0 && src < nt) out(i, static_cast<std::size_t>(j)) = r * f(i, static_cast<std::size_t>(src));
        }
    return out;
}

// Matrix of D_r in the truncated basis: D_nm = <D_r L_m, L_n>.
inline Eigen::MatrixXcd dilation_matrix(double r, int k, double alpha, const LogGrid& grid) {
    std::vector<HalfLineSignal> L;
    for (int n = 0; n < k; ++n) L.push_back(laguerre_state(LaguerreSpec(n, alpha), grid));
    Eigen::MatrixXcd D(k, k);
    for (int m = 0; m < k; ++m) {
        const HalfLineSignal d = dilate(L[m], r);
        for (int n = 0; n < k; ++n) D(n, m) = inner_product_halfline(d, L[n]);
    }
    return D;
}

// ||Q(r f(x, a/r)) - D_r Q(f) D_r^*||_HS / ||Q(f)||_HS
inline double dilation_covariance_residual(const AffineMap& f, double r, int k, double alpha = 1.0,
                                           BasisCache* cache = nullptr) {
    const AffineMap fr = dilate_symbol(f, r);
    const auto M = quantize_symbols({&f, &fr}, k, alpha, cache);
    const Eigen::MatrixXcd D = dilation_matrix(r, k, alpha, f.agrid.log_axis);
    const Eigen::MatrixXcd law = D * M[0].entries * D.adjoint();
    return (M[1].entries - law).norm() / M[0].entries.norm();
}

}  // namespace awig

#endif
