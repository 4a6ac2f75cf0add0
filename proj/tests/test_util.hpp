#ifndef AWIG_TEST_UTIL_HPP
#define AWIG_TEST_UTIL_HPP

#include <gtest/gtest.h>

#include <awig/checks.hpp>

namespace awig::test {

inline void expect_near_c(cplx got, cplx want, double tol) {
    EXPECT_NEAR(got.real(), want.real(), tol);
    EXPECT_NEAR(got.imag(), want.imag(), tol);
}

inline HalfLineSignal normalized(const HalfLineSignal& f) { return checks::detail::normalized(f); }

// Coarse but well-resolved grids keep the unit tests fast.
inline LogGrid small_grid() { return LogGrid::from_range(-12.0, 8.0, 1024); }
inline UGrid small_ugrid() { return UGrid(16.0, 1024); }

}  // namespace awig::test

#endif
