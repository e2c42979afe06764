#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

// The oracles are only useful if they are right on cases with known answers.

TEST(Oracle, GridSearchRecoversExactCurve) {
    std::vector<double> ad{100, 250, 400, 700, 1200};
    std::vector<double> y;
    for (double a : ad) y.push_back(15.0 - 9.0 * std::exp(-a / 320.0));
    const auto f = oracle::grid_search_exp(ad, y);
    EXPECT_NEAR(f.x_sat, 15.0, 0.05);
    EXPECT_NEAR(f.amplitude, 9.0, 0.1);
    EXPECT_NEAR(f.tau, 320.0, 3.0);
    EXPECT_LT(f.sse, 1e-4);
}

TEST(Oracle, SquareWaveLimits) {
    // Always high: plain step response.
    EXPECT_NEAR(oracle::square_wave_elongation(300.0, 1000.0, 1000.0, 10.0, 300.0, 100.0),
                10.0 * (1.0 - std::exp(-1.0)), 1e-12);
    // Decay after the first pulse.
    const double e_high = 10.0 * (1.0 - std::exp(-2.0));
    EXPECT_NEAR(oracle::square_wave_elongation(700.0, 2000.0, 600.0, 10.0, 300.0, 100.0),
                e_high * std::exp(-1.0), 1e-12);
    // Continuity across the period boundary.
    const double before = oracle::square_wave_elongation(1999.999, 2000.0, 600.0, 10.0, 300.0, 100.0);
    const double after = oracle::square_wave_elongation(2000.0, 2000.0, 600.0, 10.0, 300.0, 100.0);
    EXPECT_NEAR(before, after, 1e-6);
}

TEST(Oracle, RingPeriodClosedForm) {
    EXPECT_NEAR(oracle::ring_period_from_zero(1, 1.0, 1.0, 2.0, 1.0, 1.0), 2.0 * std::log(2.0), 1e-12);
    EXPECT_NEAR(oracle::ring_period_from_zero(4, 1.0, 1.0, 2.0, 1.0, 1.0), 8.0 * std::log(2.0), 1e-12);
}

TEST(Oracle, PerfectAnchorStride) {
    EXPECT_DOUBLE_EQ(oracle::perfect_anchor_stride({1.0, 2.0, 3.5}), 6.5);
    EXPECT_DOUBLE_EQ(oracle::perfect_anchor_stride({}), 0.0);
}
