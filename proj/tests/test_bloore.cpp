#include "hsdet/bloore.hpp"
#include "hsdet/sampling.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace hsdet;

TEST(Bloore, MaximallyMixed) {
    const auto c = to_bloore(maximally_mixed());
    EXPECT_EQ(c.z.z12, 0.0);
    EXPECT_EQ(c.z.z14, 0.0);
    EXPECT_EQ(c.mu, 1.0);
    EXPECT_EQ(c.xi(), 0.0);
}

TEST(Bloore, ExtremalStateMu) {
    const auto c = to_bloore(extremal_product_state());
    EXPECT_NEAR(c.mu, 0.5, 1e-15);
    EXPECT_NEAR(c.nu(), 0.25, 1e-15);
    EXPECT_NEAR(pt_det_polynomial(c), -(3 + 2 * std::sqrt(3.0)) / 576, 1e-12);
}

TEST(Bloore, ZeroDiagonalRejected) {
    RealDensity rho;
    rho.entries = Mat4<double>::diagonal({0.5, 0.5, 0.0, 0.0});
    EXPECT_THROW(to_bloore(rho), std::domain_error);
}

TEST(Bloore, RoundTrip) {
    Rng rng(1);
    for (int k = 0; k < 200; ++k) {
        const auto rho = sample_hs_real(rng);
        const auto back = from_bloore(to_bloore(rho));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) EXPECT_NEAR(back(i, j), rho(i, j), 1e-14);
    }
}

TEST(Bloore, PolynomialsMatchDeterminants) {
    Rng rng(2);
    for (int k = 0; k < 200; ++k) {
        const auto rho = sample_hs_real(rng);
        const auto c = to_bloore(rho);
        const double d0 = c.diagonal[0] * c.diagonal[1] * c.diagonal[2] * c.diagonal[3];
        EXPECT_NEAR(pt_det_polynomial(c), determinant(partial_transpose(rho.entries)), 1e-16);
        EXPECT_NEAR(d0 * corr_det_polynomial(c), determinant(rho), 1e-16);
        EXPECT_NEAR(minor3_polynomial(c), -principal_minor(partial_transpose(rho.entries), {1, 2, 3}), 1e-15);
    }
}

TEST(Bloore, TrivialPolynomialValues) {
    const Correlations zero{};
    EXPECT_DOUBLE_EQ(pt_polynomial(0.8, zero), 0.64);
    EXPECT_DOUBLE_EQ(corr_det_polynomial(zero), 1.0);
    EXPECT_DOUBLE_EQ(corr_det_polynomial(Correlations{1.0, 0, 0, 0, 0, 0}), 0.0);
    BlooreCoords c;
    c.diagonal = {0.1, 0.2, 0.3, 0.4};
    EXPECT_NEAR(minor3_polynomial(c), -0.1 * 0.2 * 0.3, 1e-18);
}

TEST(Vine, ZeroPartialsGiveLeadingTerms) {
    const auto v = partials_to_correlations(0.3, -0.4, 0.5, 0, 0, 0);
    EXPECT_DOUBLE_EQ(v.z13, 0.3 * -0.4);
    EXPECT_DOUBLE_EQ(v.z24, -0.4 * 0.5);
    EXPECT_DOUBLE_EQ(v.z14, 0.3 * -0.4 * 0.5);
}

TEST(Vine, ZeroChainGivesScaledPartials) {
    const double p = 0.3, q = -0.6, r = 0.7;
    const auto v = partials_to_correlations(0, 0, 0, p, q, r);
    EXPECT_DOUBLE_EQ(v.z13, p);
    EXPECT_DOUBLE_EQ(v.z24, q);
    EXPECT_NEAR(v.z14, r * std::sqrt(1 - p * p) * std::sqrt(1 - q * q), 1e-15);
}

TEST(Vine, CubeMapsIntoPsdCorrelations) {
    Rng rng(4);
    for (int k = 0; k < 20000; ++k) {
        double x[6];
        for (double& v : x) v = detail::uniform(rng, -1, 1);
        const auto v = partials_to_correlations(x[0], x[1], x[2], x[3], x[4], x[5]);
        const Correlations c{x[0], v.z13, v.z14, x[1], v.z24, x[2]};
        const double expected = (1 - x[0] * x[0]) * (1 - x[1] * x[1]) * (1 - x[2] * x[2]) * (1 - x[3] * x[3]) *
                                (1 - x[4] * x[4]) * (1 - x[5] * x[5]);
        EXPECT_NEAR(corr_det_polynomial(c), expected, 1e-12);
        EXPECT_GE(corr_det_polynomial(c), -1e-12);
    }
}

TEST(Vine, InverseRecoversPartials) {
    Rng rng(6);
    for (int k = 0; k < 2000; ++k) {
        double x[6];
        for (double& v : x) v = detail::uniform(rng, -0.99, 0.99);
        const auto v = partials_to_correlations(x[0], x[1], x[2], x[3], x[4], x[5]);
        const auto p = correlations_to_partials({x[0], v.z13, v.z14, x[1], v.z24, x[2]});
        EXPECT_NEAR(p.z13_2, x[3], 1e-10);
        EXPECT_NEAR(p.z24_3, x[4], 1e-10);
        EXPECT_NEAR(p.z14_23, x[5], 1e-9);
    }
}

TEST(Vine, ReflectionLeavesEvenFunctionalsInvariant) {
    // Coarse midpoint grid over the cube: the Jacobian-weighted integral of P
    // is unchanged when the three partials flip sign together.
    const int n = 6;
    const double mu = 0.9;
    double plain = 0.0, flipped = 0.0;
    auto mid = [&](int i) { return -1.0 + (2.0 * i + 1.0) / n; };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    for (int e = 0; e < n; ++e)
                        for (int f = 0; f < n; ++f) {
                            const double w = jacobian_weight(mid(a), mid(b), mid(c), mid(d), mid(e));
                            auto eval = [&](double s) {
                                const auto v = partials_to_correlations(mid(a), mid(b), mid(c), s * mid(d), s * mid(e), s * mid(f));
                                return pt_polynomial(mu, {mid(a), v.z13, v.z14, mid(b), v.z24, mid(c)});
                            };
                            plain += w * eval(1.0);
                            flipped += w * eval(-1.0);
                        }
    EXPECT_NEAR(plain, flipped, 1e-9 * std::fabs(plain));
}

TEST(Jacobian, Boundaries) {
    EXPECT_DOUBLE_EQ(jacobian_weight(0, 0, 0, 0, 0), 1.0);
    EXPECT_DOUBLE_EQ(jacobian_weight(1, 0.2, 0.1, 0.3, 0.4), 0.0);
    EXPECT_DOUBLE_EQ(jacobian_weight(0.2, 0.1, 0.3, -1, 0.4), 0.0);
    EXPECT_DOUBLE_EQ(jacobian_weight(0.2, 0.1, 0.3, 0.5, 1), 0.0);
}
