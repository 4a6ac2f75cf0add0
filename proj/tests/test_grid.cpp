#include "test_util.hpp"

#include <random>

using namespace awig;
using awig::test::expect_near_c;

TEST(LogGridTest, StepIncludesBothEndpoints) {
    const LogGrid g = LogGrid::from_range(-12.0, 8.0, 2048);
    EXPECT_DOUBLE_EQ(g.dt, 20.0 / 2047.0);
    EXPECT_NEAR(g.t_max(), 8.0, 1e-12);
    EXPECT_NEAR(g.position(g.t(17)), 17.0, 1e-12);
}

TEST(LogGridTest, RejectsBadParameters) {
    EXPECT_THROW(LogGrid(0.0, 0.0, 8), validation_error);
    EXPECT_THROW(LogGrid(0.0, -1.0, 8), validation_error);
    EXPECT_THROW(LogGrid(0.0, 0.1, 0), validation_error);
    EXPECT_THROW(LogGrid::from_range(1.0, 1.0, 8), validation_error);
    EXPECT_THROW(AffineGrid(0.0, 0.0, 4, LogGrid(0.0, 0.1, 4)), validation_error);
}

TEST(HalfLineSignalTest, RejectsNonFiniteSamples) {
    const LogGrid g(0.0, 0.1, 3);
    EXPECT_THROW(HalfLineSignal(g, cvec{1.0, std::nan(""), 0.0}), validation_error);
    EXPECT_THROW(HalfLineSignal(g, cvec{1.0, 2.0}), validation_error);
}

TEST(InnerProductTest, IndicatorOfUnitLogIntervalHasUnitNorm) {
    const LogGrid g = LogGrid::from_range(-4.0, 4.0, 1024);
    HalfLineSignal f(g);
    for (std::size_t j = 0; j < g.n; ++j)
        if (g.t(j) >= 0.0 && g.t(j) <= 1.0) f[j] = 1.0;
    EXPECT_NEAR(inner_product_halfline(f, f).real(), 1.0, g.dt);
}

TEST(InnerProductTest, DisjointSupportsAreOrthogonal) {
    const LogGrid g = LogGrid::from_range(-4.0, 4.0, 1024);
    HalfLineSignal f(g), h(g);
    for (std::size_t j = 0; j < g.n; ++j) {
        if (g.t(j) >= 0.0 && g.t(j) <= 1.0) f[j] = 1.0;
        if (g.t(j) >= 2.0 && g.t(j) <= 3.0) h[j] = cplx(0.0, 2.0);
    }
    EXPECT_EQ(inner_product_halfline(f, h), cplx{});
}

TEST(InnerProductTest, MorseStatesOverlapOneThird) {
    const LogGrid g = LogGrid::from_range(-12.0, 8.0, 2048);
    const HalfLineSignal p1 = morse_state(1.0, g), p2 = morse_state(2.0, g);
    EXPECT_NEAR(inner_product_halfline(p1, p2).real(), 1.0 / 3.0, 1e-6);
    EXPECT_NEAR(p1.norm2(), 1.0, 1e-6);
    EXPECT_NEAR(p2.norm2(), 1.0 / 6.0, 1e-6);
}

TEST(InnerProductTest, ConjugateSymmetricAndPositive) {
    const LogGrid g(-3.0, 0.01, 600);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 20; ++trial) {
        HalfLineSignal f(g), h(g);
        for (std::size_t j = 0; j < g.n; ++j) {
            f[j] = cplx(nd(rng), nd(rng));
            h[j] = cplx(nd(rng), nd(rng));
        }
        EXPECT_EQ(inner_product_halfline(f, h), std::conj(inner_product_halfline(h, f)));
        EXPECT_GT(inner_product_halfline(f, f).real(), 0.0);
    }
    EXPECT_THROW(inner_product_halfline(HalfLineSignal(g), HalfLineSignal(LogGrid(-3.0, 0.02, 600))), validation_error);
}

TEST(ResampleTest, ReproducesNodesExactly) {
    const LogGrid g(-2.0, 0.05, 81);
    const HalfLineSignal f = morse_state(1.5, g);
    std::vector<double> targets;
    for (std::size_t j = 0; j < g.n; j += 7) targets.push_back(g.a(j));
    const cvec v = resample(f, targets);
    for (std::size_t q = 0; q < targets.size(); ++q) EXPECT_EQ(v[q], f[q * 7]);
}

TEST(ResampleTest, ZeroOutsideGrid) {
    const LogGrid g(-2.0, 0.05, 81);
    const HalfLineSignal f = morse_state(1.5, g);
    const cvec v = resample(f, {std::exp(-2.5), std::exp(2.5)});
    EXPECT_EQ(v[0], cplx{});
    EXPECT_EQ(v[1], cplx{});
    EXPECT_THROW(resample(f, {0.0}), validation_error);
    EXPECT_THROW(resample(f, {-1.0}), validation_error);
}

TEST(ResampleTest, ExactOnCubicsInLogCoordinate) {
    const LogGrid g(-2.0, 0.1, 41);
    HalfLineSignal f(g);
    auto p = [](double t) { return cplx(1.0 + t - 0.5 * t * t + 0.25 * t * t * t, 2.0 - t); };
    for (std::size_t j = 0; j < g.n; ++j) f[j] = p(g.t(j));
    for (double t : {-1.73, -0.05, 0.333, 1.71}) expect_near_c(resample_log(f, t), p(t), 1e-12);
}

TEST(ResampleTest, FourthOrderOnSmoothSignal) {
    auto err = [](double dt) {
        const LogGrid g(-6.0, dt, static_cast<std::size_t>(std::lround(12.0 / dt)) + 1);
        HalfLineSignal f(g);
        for (std::size_t j = 0; j < g.n; ++j) f[j] = std::exp(-g.t(j) * g.t(j));
        double e = 0.0;
        for (std::size_t j = 10; j + 10 < g.n; ++j) {
            const double t = g.t(j) + 0.5 * dt;
            e = std::max(e, std::abs(resample_log(f, t) - std::exp(-t * t)));
        }
        return e;
    };
    const double e1 = err(0.1), e2 = err(0.05);
    EXPECT_LT(e1, 1e-4);
    EXPECT_GT(e1 / e2, 12.0);
}

TEST(ResampleAffineTest, NodesExactAndOutsideZero) {
    const AffineGrid ag(-1.0, 0.1, 21, LogGrid(-1.0, 0.1, 21));
    AffineMap F(ag);
    for (std::size_t i = 0; i < ag.nx; ++i)
        for (std::size_t j = 0; j < ag.nt(); ++j) F(i, j) = cplx(ag.x(i), ag.log_axis.t(j));
    const cvec v = resample_affine(F, {{ag.x(3), ag.log_axis.a(5)}, {5.0, 1.0}, {0.0, 100.0}});
    EXPECT_EQ(v[0], F(3, 5));
    EXPECT_EQ(v[1], cplx{});
    EXPECT_EQ(v[2], cplx{});
    EXPECT_THROW(resample_affine(F, {{0.0, 0.0}}), validation_error);
}

TEST(ResampleAffineTest, BilinearIsExactOnBilinearFields) {
    const AffineGrid ag(-1.0, 0.1, 21, LogGrid(-1.0, 0.1, 21));
    AffineMap F(ag);
    auto f = [](double x, double t) { return cplx(1.0 + 2.0 * x - t + 0.5 * x * t, x * t); };
    for (std::size_t i = 0; i < ag.nx; ++i)
        for (std::size_t j = 0; j < ag.nt(); ++j) F(i, j) = f(ag.x(i), ag.log_axis.t(j));
    for (auto [x, t] : std::vector<std::pair<double, double>>{{0.03, 0.07}, {-0.91, 0.55}, {0.99, -0.99}})
        expect_near_c(sample_affine_log(F, x, t), f(x, t), 1e-12);
}

TEST(AffineMapTest, ArithmeticAndNorms) {
    const AffineGrid ag(0.0, 0.5, 4, LogGrid(0.0, 0.25, 3));
    AffineMap A(ag), B(ag);
    A(1, 1) = 2.0;
    B(1, 1) = cplx(0.0, 1.0);
    EXPECT_DOUBLE_EQ(A.norm2(), 4.0 * ag.cell());
    expect_near_c(inner_product_affine(A, B), cplx(0.0, -2.0) * ag.cell(), 1e-15);
    const AffineMap C = A + cplx(0.0, 2.0) * B;
    EXPECT_EQ(C(1, 1), cplx(0.0));
    EXPECT_THROW(A += AffineMap(AffineGrid(0.0, 0.5, 5, ag.log_axis)), validation_error);
}

TEST(CommensurateShiftTest, WholeStepsOnly) {
    const LogGrid g(0.0, 0.1, 10);
    EXPECT_EQ(commensurate_shift(g, std::exp(0.3), "t"), 3);
    EXPECT_EQ(commensurate_shift(g, std::exp(-0.2), "t"), -2);
    EXPECT_THROW(commensurate_shift(g, std::exp(0.15), "t"), validation_error);
    EXPECT_THROW(commensurate_shift(g, -1.0, "t"), validation_error);
}
