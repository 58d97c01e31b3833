#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "salab/rng.hpp"

using salab::RngStream;

TEST(Rng, StreamsAreReproducible) {
    RngStream a(42, 7), b(42, 7);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, StreamsDiffer) {
    std::set<std::uint64_t> firsts;
    for (std::uint64_t s = 0; s < 1000; ++s) firsts.insert(RngStream(42, s).next_u64());
    EXPECT_EQ(firsts.size(), 1000u);
    EXPECT_NE(RngStream(1, 0).next_u64(), RngStream(2, 0).next_u64());
}

TEST(Rng, UniformOpenIntervalAndMoments) {
    RngStream r(3, 0);
    const int N = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < N; ++i) {
        const double u = r.uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        s += u;
        s2 += u * u;
    }
    EXPECT_NEAR(s / N, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / N));
    EXPECT_NEAR(s2 / N, 1.0 / 3.0, 4.0 * std::sqrt(4.0 / 45.0 / N));
}
