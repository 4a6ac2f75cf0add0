#ifndef AWIG_COMMON_HPP
#define AWIG_COMMON_HPP

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstddef>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace awig {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// Bad input: wrong grids, out-of-domain parameters, malformed files.
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A numerical contract was not met (non-convergence, broken symmetry).
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw validation_error(what);
}

namespace detail {
inline std::atomic<int>& thread_setting() {
    static std::atomic<int> n{1};
    return n;
}
// Nested parallel_for calls run serially inside a worker.
inline thread_local bool in_worker = false;
}  // namespace detail

inline void set_threads(int n) { detail::thread_setting() = std::max(1, n); }
inline int threads() { return detail::thread_setting(); }

// Runs body(i) for i in [0, n). Each index is visited exactly once, so
// bodies that write disjoint outputs give thread-count independent results.
template <class F>
void parallel_for(std::size_t n, F&& body) {
    const int nt = static_cast<int>(std::min<std::size_t>(threads(), n));
    if (nt <= 1 || detail::in_worker) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errs(nt);
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int w = 0; w < nt; ++w)
        pool.emplace_back([&, w] {
            detail::in_worker = true;
            try {
                for (std::size_t i; (i = next.fetch_add(1)) < n;) body(i);
            } catch (...) {
                errs[w] = std::current_exception();
                next = n;
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

}  // namespace awig

#endif
