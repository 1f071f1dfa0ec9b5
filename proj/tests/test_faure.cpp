#include "hsdet/faure.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace hsdet;

namespace {

// Exact star discrepancy in 2-D by checking every box anchored at point
// coordinates (and 1).
double star_discrepancy_2d(const std::vector<std::array<double, 2>>& pts) {
    std::vector<double> xs{1.0}, ys{1.0};
    for (const auto& p : pts) {
        xs.push_back(p[0]);
        ys.push_back(p[1]);
    }
    const double n = static_cast<double>(pts.size());
    double worst = 0.0;
    for (double x : xs)
        for (double y : ys) {
            int open = 0, closed = 0;
            for (const auto& p : pts) {
                if (p[0] < x && p[1] < y) ++open;
                if (p[0] <= x && p[1] <= y) ++closed;
            }
            worst = std::max({worst, x * y - open / n, closed / n - x * y});
        }
    return worst;
}

}  // namespace

TEST(Primes, SmallestAtLeast) {
    EXPECT_EQ(smallest_prime_at_least(1), 2U);
    EXPECT_EQ(smallest_prime_at_least(6), 7U);
    EXPECT_EQ(smallest_prime_at_least(7), 7U);
    EXPECT_EQ(smallest_prime_at_least(24), 29U);
    EXPECT_FALSE(is_prime(1));
}

TEST(Faure, VanDerCorput) {
    const FaureState s(1);
    EXPECT_EQ(s.base, 2U);
    EXPECT_DOUBLE_EQ(faure_point(s, 1)[0], 0.5);
    EXPECT_DOUBLE_EQ(faure_point(s, 2)[0], 0.25);
    EXPECT_DOUBLE_EQ(faure_point(s, 3)[0], 0.75);
    EXPECT_DOUBLE_EQ(faure_point(s, 0)[0], 0.0);
}

TEST(Faure, FirstBasePointsArePermutations) {
    for (unsigned d : {2U, 3U, 5U, 6U}) {
        const FaureState s(d);
        const unsigned b = s.base;
        for (unsigned j = 0; j < d; ++j) {
            std::vector<double> c;
            for (unsigned i = 0; i < b; ++i) c.push_back(faure_point(s, i)[j] * b);
            std::sort(c.begin(), c.end());
            for (unsigned i = 0; i < b; ++i) EXPECT_NEAR(c[i], i, 1e-12);
        }
    }
}

TEST(Faure, PointsInUnitCube) {
    FaureState s(6);
    for (int i = 0; i < 5000; ++i)
        for (double x : next_point(s)) {
            EXPECT_GE(x, 0.0);
            EXPECT_LT(x, 1.0);
        }
    EXPECT_EQ(s.index, 5000U);
}

TEST(Faure, Deterministic) {
    const FaureState a(4), b(4);
    EXPECT_EQ(faure_point(a, 12345), faure_point(b, 12345));
}

TEST(Faure, LowerDiscrepancyThanPseudoRandom) {
    const FaureState s(2);
    const unsigned n = s.base * s.base * 16;  // 64 points
    std::vector<std::array<double, 2>> q, r;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0, 1);
    for (unsigned i = 0; i < n; ++i) {
        const auto p = faure_point(s, i);
        q.push_back({p[0], p[1]});
        r.push_back({u(rng), u(rng)});
    }
    EXPECT_LT(star_discrepancy_2d(q), star_discrepancy_2d(r));
}

TEST(Faure, DigitOverflow) {
    const FaureState s(2);
    EXPECT_NO_THROW(faure_point(s, (std::uint64_t{1} << 32) - 1));
    EXPECT_THROW(faure_point(s, std::uint64_t{1} << 32), std::overflow_error);
    EXPECT_THROW(FaureState(0), std::invalid_argument);
}

TEST(Qmc, PolynomialIntegral) {
    // integral over [0,1]^3 of x y z = 1/8; over [-1,1]^2 of x^2 = 4/3
    EXPECT_NEAR(qmc_integrate([](const std::vector<double>& x) { return x[0] * x[1] * x[2]; }, {0, 0, 0}, {1, 1, 1},
                              20000),
                0.125, 1e-3);
    EXPECT_NEAR(qmc_integrate([](const std::vector<double>& x) { return x[0] * x[0]; }, {-1, -1}, {1, 1}, 20000),
                4.0 / 3.0, 1e-3);
    EXPECT_THROW(qmc_integrate([](const std::vector<double>&) { return 0.0; }, {0}, {1, 2}, 10), std::invalid_argument);
}
