#include "hsdet/rational.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace hsdet;

TEST(Rational, FormatsAsFraction) {
    EXPECT_EQ(to_string(make_rational(-6, 4)), "-3/2");
    EXPECT_EQ(to_string(make_rational(8, 4)), "2");
    EXPECT_EQ(to_string(Rational(0)), "0");
}

TEST(Rational, ParseRoundTrip) {
    for (const char* s : {"-1/858", "27/2489344", "0", "-6102620963/240565904621616585139814400"})
        EXPECT_EQ(to_string(parse_rational(s)), s);
    EXPECT_EQ(parse_rational("4/6"), make_rational(2, 3));
}

TEST(Rational, ParseRejectsGarbage) {
    EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
    EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
    EXPECT_THROW(make_rational(1, 0), std::invalid_argument);
}

TEST(Rational, LongDoubleSurvivesHugeParts) {
    const Rational r = parse_rational("-6102620963/240565904621616585139814400");
    EXPECT_NEAR(static_cast<double>(to_long_double(r) / static_cast<long double>(to_double(r))), 1.0, 1e-15);
    EXPECT_LT(to_long_double(r), 0.0L);
    Rational tiny = pow(Rational(1, 10), 400);
    EXPECT_EQ(to_double(tiny), 0.0);
    EXPECT_NEAR(static_cast<double>(std::log10(to_long_double(tiny))), -400.0, 1e-9);
}

TEST(Rational, IntegerPowers) {
    EXPECT_EQ(pow(make_rational(2, 3), 3U), make_rational(8, 27));
    EXPECT_EQ(pow(make_rational(2, 3), -2), make_rational(9, 4));
    EXPECT_EQ(pow(Rational(5), 0U), 1);
    EXPECT_THROW(pow(Rational(0), -1), std::domain_error);
}

TEST(Rational, Combinatorics) {
    EXPECT_EQ(factorial(10), 3628800);
    EXPECT_EQ(binomial(9, 4), 126);
    EXPECT_EQ(binomial(4, 9), 0);
}

TEST(HalfGamma, IntegerAndHalfInteger) {
    const PiRational g5 = half_gamma(10);  // Gamma(5)
    EXPECT_EQ(g5.coefficient, 24);
    EXPECT_EQ(g5.half_pi_power, 0);
    const PiRational gh = half_gamma(1);  // Gamma(1/2) = sqrt(pi)
    EXPECT_EQ(gh.coefficient, 1);
    EXPECT_EQ(gh.half_pi_power, 1);
    const PiRational g72 = half_gamma(7);  // Gamma(7/2) = 15/8 sqrt(pi)
    EXPECT_EQ(g72.coefficient, make_rational(15, 8));
    EXPECT_THROW(half_gamma(0), std::domain_error);
}

TEST(HalfGamma, MatchesFloatingGamma) {
    for (int t = 1; t <= 40; ++t) {
        const PiRational g = half_gamma(t);
        const double v = to_double(g.coefficient) * std::pow(M_PI, g.half_pi_power / 2.0);
        EXPECT_NEAR(v / std::tgamma(t / 2.0), 1.0, 1e-13) << t;
    }
}

TEST(PiRational, PowersAddAndCheck) {
    const PiRational a{make_rational(1, 2), 1}, b{Rational(3), 3};
    const PiRational c = a * b;
    EXPECT_EQ(c.half_pi_power, 4);
    EXPECT_EQ(c.pi_exponent(), 2);
    EXPECT_THROW((void)a.pi_exponent(), std::logic_error);
    EXPECT_EQ((c / b).coefficient, a.coefficient);
    EXPECT_THROW(a / PiRational(Rational(0), 0), std::domain_error);
}
