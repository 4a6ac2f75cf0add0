#ifndef AWIG_FFT_HPP
#define AWIG_FFT_HPP

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

#include "common.hpp"

namespace awig::fft {

namespace detail {

// FFTW planning is not thread-safe; execution on fresh arrays is.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache c;
        return c;
    }
    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard<std::mutex> lk(mu_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        fftw_complex* buf = fftw_alloc_complex(n);
        fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(buf);
        if (!p) throw numerical_error("fft: planning failed");
        plans_.emplace(key, p);
        return p;
    }
    ~PlanCache() {
        for (auto& kv : plans_) fftw_destroy_plan(kv.second);
    }

private:
    std::mutex mu_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

}  // namespace detail

// In place, unnormalized: v_k <- sum_j v_j exp(sign * 2 pi i j k / n).
inline void transform(cplx* v, std::size_t n, int sign) {
    fftw_plan p = detail::PlanCache::instance().get(n, sign);
    auto* z = reinterpret_cast<fftw_complex*>(v);
    fftw_execute_dft(p, z, z);
}

inline void forward(cvec& v) { transform(v.data(), v.size(), FFTW_FORWARD); }
inline void backward(cvec& v) { transform(v.data(), v.size(), FFTW_BACKWARD); }

// exp(2 pi i q / m) for integer q, reduced mod m before the trig call.
class Twiddle {
public:
    explicit Twiddle(std::size_t m) : m_(m), w_(m) {
        for (std::size_t q = 0; q < m; ++q) w_[q] = std::polar(1.0, two_pi * static_cast<double>(q) / static_cast<double>(m));
    }
    cplx operator()(long long q) const {
        long long r = q % static_cast<long long>(m_);
        if (r < 0) r += static_cast<long long>(m_);
        return w_[static_cast<std::size_t>(r)];
    }
    std::size_t size() const { return m_; }

private:
    std::size_t m_;
    cvec w_;
};

// H_j = sum_k h_k exp(sign 2 pi i (j - c_out)(k - c_in) / m), integer centers.
class CenteredDFT {
public:
    CenteredDFT(std::size_t m, long long c_in, long long c_out, int sign)
        : m_(m), sign_(sign), pre_(m), post_(m) {
        Twiddle tw(m);
        const long long s = sign;
        for (std::size_t k = 0; k < m; ++k) {
            const auto kk = static_cast<long long>(k);
            pre_[k] = tw(-s * c_out * kk);
            post_[k] = tw(-s * c_in * (kk - c_out));
        }
    }
    std::size_t size() const { return m_; }
    void operator()(cvec& h) const {
        for (std::size_t k = 0; k < m_; ++k) h[k] *= pre_[k];
        transform(h.data(), m_, sign_);
        for (std::size_t k = 0; k < m_; ++k) h[k] *= post_[k];
    }

private:
    std::size_t m_;
    int sign_;
    cvec pre_, post_;
};

}  // namespace awig::fft

#endif
