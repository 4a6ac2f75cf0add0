#include "test_util.hpp"

using namespace awig;
using awig::test::expect_near_c;

TEST(LambdaTest, ReferenceValues) {
    EXPECT_DOUBLE_EQ(lambda_eval(0.0), 1.0);
    EXPECT_NEAR(lambda_eval(std::log(2.0)), 1.38629436111989, 1e-13);
    EXPECT_NEAR(lambda_eval(-std::log(2.0)), 0.693147180559945, 1e-13);
}

TEST(LambdaTest, ReflectionIdentity) {
    for (double u : {-30.0, -5.0, -0.7, -1e-3, -1e-6, 1e-6, 2e-3, 0.4, 3.0, 25.0})
        EXPECT_NEAR(lambda_eval(u), std::exp(u) * lambda_eval(-u), 1e-13 * lambda_eval(u));
}

TEST(LambdaTest, ContinuousAcrossSeriesBranch) {
    for (double c : {1e-3, -1e-3}) {
        const double h = 1e-9 * std::abs(c);
        const double jump = lambda_eval(c + h) - lambda_eval(c - h) - 2.0 * h * lambda_eval(c) * dlog_lambda(c);
        EXPECT_NEAR(jump, 0.0, 1e-15);
    }
}

TEST(LambdaTest, StrictlyIncreasing) {
    double prev = lambda_eval(-40.0);
    for (double u = -39.9; u < 40.0; u += 0.1) {
        const double v = lambda_eval(u);
        EXPECT_GT(v, prev);
        prev = v;
    }
}

TEST(LambdaTest, LogFormMatchesDirect) {
    for (double u : {-12.0, -1.0, -1e-4, 0.0, 1e-4, 0.9, 15.0})
        EXPECT_NEAR(log_lambda(u), std::log(lambda_eval(u)), 1e-13 * std::max(1.0, std::abs(u)));
}

TEST(LambdaInverseTest, ReferenceValues) {
    EXPECT_NEAR(lambda_inv(0.1), -3.61495042708753, 1e-11);
    EXPECT_NEAR(lambda_inv(3.0), 2.82143937212208, 1e-11);
    EXPECT_NEAR(lambda_inv(10.0), 9.99954579444654, 1e-11);
    EXPECT_EQ(lambda_inv(1.0), 0.0);
}

TEST(LambdaInverseTest, RoundTrips) {
    for (double v : {1e-8, 1e-3, 0.2, 0.999, 1.001, 2.5, 40.0, 1e4}) {
        EXPECT_NEAR(lambda_eval(lambda_inv(v)), v, 1e-12 * std::max(1.0, v));
    }
    for (double u : {-20.0, -2.0, -1e-5, 1e-5, 0.3, 7.0, 50.0}) EXPECT_NEAR(lambda_inv(lambda_eval(u)), u, 1e-9);
}

TEST(LambdaInverseTest, RejectsNonPositive) {
    EXPECT_THROW(lambda_inv(0.0), validation_error);
    EXPECT_THROW(lambda_inv(-1.0), validation_error);
    EXPECT_THROW(lambda_inv(std::nan("")), validation_error);
}

TEST(ThetaTest, ReferenceValueAndInversionSymmetry) {
    const cplx want(0.996157015828094, -0.0875853858612667);
    expect_near_c(theta_eval(0.7, 2.0), want, 1e-13);
    expect_near_c(theta_eval(0.7, 0.5), want, 1e-13);
}

TEST(ThetaTest, UnimodularAndTrivialAtOne) {
    for (double y : {-3.0, 0.0, 0.25, 9.0})
        for (double b : {1e-3, 0.3, 1.0, 4.0, 1e3}) EXPECT_NEAR(std::abs(theta_eval(y, b)), 1.0, 1e-14);
    EXPECT_EQ(theta_eval(5.0, 1.0), cplx(1.0));
}

TEST(ThetaTest, BaseIsGeometricMeanOfLambda) {
    for (double b : {0.5, 2.0, 5.0}) {
        const double u = std::log(b);
        const double base = std::sqrt(b) * u / (b - 1.0);
        EXPECT_NEAR(base, std::sqrt(lambda_eval(u) * lambda_eval(-u)), 1e-14);
        expect_near_c(theta_eval(0.3, b), std::polar(1.0, two_pi * 0.3 * std::log(base)), 1e-13);
    }
    EXPECT_THROW(theta_eval(0.1, 0.0), validation_error);
}

TEST(LogGammaTest, ReferenceValues) {
    EXPECT_NEAR(log_gamma(0.5), 0.5723649429247001, 1e-13);
    EXPECT_NEAR(log_gamma(7.5), 7.534364236758733, 1e-12);
    EXPECT_NEAR(log_gamma(0.1), 2.252712651734206, 1e-13);
    EXPECT_NEAR(log_gamma(1.0), 0.0, 1e-14);
    EXPECT_NEAR(log_gamma(11.0), std::log(3628800.0), 1e-12);
}

TEST(LaguerreTest, ReferenceValues) {
    EXPECT_NEAR(laguerre_fn(LaguerreSpec(3, 1.0), 2.5), -0.395436308166408, 1e-13);
    EXPECT_NEAR(laguerre_fn(LaguerreSpec(5, 0.5), 7.25), -0.230008516928341, 1e-13);
    EXPECT_DOUBLE_EQ(laguerre_poly(0, 1.0, 3.0), 1.0);
    EXPECT_DOUBLE_EQ(laguerre_poly(1, 1.0, 3.0), -1.0);
    EXPECT_NEAR(laguerre_poly(2, 0.0, 1.5), 1.0 - 3.0 + 1.125, 1e-15);
}

TEST(LaguerreTest, RejectsInvalidParameters) {
    EXPECT_THROW(LaguerreSpec(-1, 1.0), validation_error);
    EXPECT_THROW(LaguerreSpec(2, -1.0), validation_error);
    EXPECT_THROW(laguerre_fn(LaguerreSpec(2, 1.0), 0.0), validation_error);
}

// int x^alpha e^-x L_n L_m dx = Gamma(n + alpha + 1) / n! delta_nm, on a log grid.
TEST(LaguerreTest, PolynomialsOrthogonalUnderEuclideanWeight) {
    const LogGrid g = LogGrid::from_range(-30.0, 5.0, 8192);
    for (double alpha : {0.0, 1.0})
        for (int n = 0; n < 3; ++n)
            for (int m = 0; m < 3; ++m) {
                double s = 0.0;
                for (std::size_t j = 0; j < g.n; ++j) {
                    const double x = g.a(j);
                    s += std::pow(x, alpha + 1.0) * std::exp(-x) * laguerre_poly(n, alpha, x) * laguerre_poly(m, alpha, x);
                }
                s *= g.dt;
                const double want = n == m ? std::exp(log_gamma(n + alpha + 1.0) - log_gamma(n + 1.0)) : 0.0;
                EXPECT_NEAR(s, want, 1e-9) << "alpha=" << alpha << " n=" << n << " m=" << m;
            }
}

TEST(LaguerreTest, StatesOrthonormalUnderHaarMeasure) {
    const LogGrid g = LogGrid::from_range(-14.0, 8.0, 4096);
    std::vector<HalfLineSignal> L;
    for (int n = 0; n < 16; ++n) L.push_back(laguerre_state(LaguerreSpec(n, 1.0), g));
    for (int n = 0; n < 16; ++n)
        for (int m = 0; m <= n; ++m)
            EXPECT_NEAR(std::abs(inner_product_halfline(L[n], L[m]) - cplx(n == m ? 1.0 : 0.0)), 0.0, 1e-6)
                << n << "," << m;
}

TEST(MorseTest, ValueAtTwo) {
    const double t0 = std::log(2.0);
    const LogGrid g(t0 - 1.0, 0.1, 30);
    EXPECT_NEAR(morse_state(1.0, g)[10].real(), 2.0 / std::exp(1.0), 1e-14);
    EXPECT_THROW(morse_state(0.0, g), validation_error);
}

TEST(KlauderTest, ReducesToMorse) {
    const LogGrid g = LogGrid::from_range(-6.0, 4.0, 200);
    for (double s : {1.0, 2.5}) {
        const HalfLineSignal k = klauder_state(1.0 / std::exp(log_gamma(2.0 * s)), cplx(0.0, s), cplx(0.0, 0.5), g);
        const HalfLineSignal m = morse_state(s, g);
        for (std::size_t j = 0; j < g.n; ++j) expect_near_c(k[j], m[j], 1e-12 * std::max(1.0, std::abs(m[j])));
    }
}

TEST(KlauderTest, ModulusAndLinearity) {
    const LogGrid g = LogGrid::from_range(-4.0, 3.0, 100);
    const cplx beta(0.8, 1.5), gamma(0.6, 0.5);
    const HalfLineSignal k1 = klauder_state(1.0, beta, gamma, g);
    const HalfLineSignal k2 = klauder_state(cplx(2.0, -1.0), beta, gamma, g);
    for (std::size_t j = 0; j < g.n; ++j) {
        const double r = g.a(j);
        EXPECT_NEAR(std::abs(k1[j]), std::pow(r, beta.imag()) * std::exp(-gamma.imag() * r), 1e-12);
        expect_near_c(k2[j], cplx(2.0, -1.0) * k1[j], 1e-12);
    }
    EXPECT_THROW(klauder_state(1.0, cplx(1.0, 0.0), gamma, g), validation_error);
    EXPECT_THROW(klauder_state(1.0, beta, cplx(1.0, -0.1), g), validation_error);
}

TEST(BumpTest, SupportedOnInterval) {
    const LogGrid g = LogGrid::from_range(-2.0, 3.0, 501);
    const HalfLineSignal b = bump_state(1.0, std::exp(1.0), g);
    for (std::size_t j = 0; j < g.n; ++j) {
        if (g.t(j) <= 0.0 || g.t(j) >= 1.0) EXPECT_EQ(b[j], cplx{});
        else EXPECT_GT(b[j].real(), 0.0);
    }
}
