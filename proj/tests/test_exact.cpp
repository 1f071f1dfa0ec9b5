#include "hsdet/bloore.hpp"
#include "hsdet/exact.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace hsdet;

namespace {

std::vector<Rational> parse_all(std::initializer_list<const char*> xs) {
    std::vector<Rational> out;
    for (const char* x : xs) out.push_back(parse_rational(x));
    return out;
}

// Midpoint rule after the substitution z = sin(t).
double wallis_numeric(int a, int b) {
    const int n = 20000;
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
        const double t = -M_PI / 2 + M_PI * (k + 0.5) / n;
        s += std::pow(std::sin(t), a) * std::pow(std::cos(t), b + 1);
    }
    return s * M_PI / n;
}

}  // namespace

TEST(Wallis, HandValues) {
    const auto semi = wallis_integral(0, 1);
    EXPECT_EQ(semi.coefficient, make_rational(1, 2));
    EXPECT_EQ(semi.pi_exponent(), 1);
    EXPECT_EQ(wallis_integral(1, 4).coefficient, 0);
    const auto w21 = wallis_integral(2, 1);
    EXPECT_EQ(w21.coefficient, make_rational(1, 8));
    EXPECT_EQ(w21.pi_exponent(), 1);
    EXPECT_EQ(wallis_integral(0, 0).coefficient, 2);
    EXPECT_EQ(wallis_integral(0, 0).pi_exponent(), 0);
}

TEST(Wallis, AgreesWithQuadrature) {
    for (int a = 0; a <= 8; a += 2)
        for (int b = 0; b <= 7; ++b) {
            const auto w = wallis_integral(a, b);
            const double v = to_double(w.coefficient) * std::pow(M_PI, w.pi_exponent());
            EXPECT_NEAR(v, wallis_numeric(a, b), 1e-8) << a << "," << b;
        }
}

TEST(Simplex, HandValues) {
    EXPECT_EQ(simplex_weight_integral({0, 0, 0, 0}).coefficient, make_rational(1, 6));
    EXPECT_EQ(simplex_weight_integral({2, 0, 0, 0}).coefficient, make_rational(1, 24));
    const auto d = simplex_weight_integral({3, 3, 3, 3});
    EXPECT_EQ(d.half_pi_power, 4);
    EXPECT_EQ(d.coefficient, make_rational(81, 256 * 362880));
    EXPECT_EQ(1 / d.coefficient, 1146880);
    EXPECT_THROW(simplex_weight_integral({-2, 0, 0, 0}), std::domain_error);
}

TEST(Intermediate, PtDetFirstThree) {
    EXPECT_EQ(intermediate_function(1, MomentKind::PtDet).coefficients,
              parse_all({"-1/5", "0", "34/125", "0", "-1/5"}));
    const auto i2 = intermediate_function(2, MomentKind::PtDet);
    EXPECT_EQ(i2.coefficients, parse_all({"3/35", "0", "-12/875", "0", "20898/42875", "0", "-12/875", "0", "3/35"}));
    const auto i3 = intermediate_function(3, MomentKind::PtDet);
    EXPECT_EQ(i3.degree(), 12);
    const auto pub = published_intermediate_function(3);
    EXPECT_EQ(i3.coefficients, pub.coefficients);
}

TEST(Intermediate, ProductFirstTwo) {
    EXPECT_EQ(intermediate_function(1, MomentKind::Product).coefficients,
              parse_all({"-24/875", "0", "3888/42875", "0", "-24/875"}));
    const auto i2 = intermediate_function(2, MomentKind::Product);
    EXPECT_EQ(i2.coefficient(0), parse_rational("192/94325"));
    EXPECT_EQ(i2.coefficient(2), parse_rational("-12032/1528065"));
    EXPECT_EQ(i2.coefficient(4), parse_rational("5561984/184895865"));
    EXPECT_EQ(i2.coefficient(8), i2.coefficient(0));
}

TEST(Intermediate, Minor3Displays) {
    EXPECT_EQ(intermediate_function(1, MomentKind::Minor3).coefficients, parse_all({"-3/5", "0", "1/5"}));
    // (75 mu^4 - 182 mu^2 + 395) / 875 and (125 mu^6 - 297 mu^4 + 675 mu^2 - 935) / 2625
    EXPECT_EQ(intermediate_function(2, MomentKind::Minor3).coefficients,
              parse_all({"395/875", "0", "-182/875", "0", "75/875"}));
    EXPECT_EQ(intermediate_function(3, MomentKind::Minor3).coefficients,
              parse_all({"-935/2625", "0", "675/2625", "0", "-297/2625", "0", "125/2625"}));
}

TEST(Intermediate, PalindromicForSymmetricKinds) {
    for (auto kind : {MomentKind::PtDet, MomentKind::Product}) {
        const auto f = intermediate_function(2, kind);
        for (int i = 0; i <= f.degree(); ++i) EXPECT_EQ(f.coefficient(i), f.coefficient(f.degree() - i));
    }
}

TEST(Intermediate, RejectsUnsupportedOrder) {
    EXPECT_THROW(intermediate_function(0, MomentKind::PtDet), std::invalid_argument);
    EXPECT_THROW(intermediate_function(max_supported_order(MomentKind::Product) + 1, MomentKind::Product),
                 std::invalid_argument);
}

TEST(Intermediate, MatchesMonteCarloOverHypercube) {
    // I_1(mu) for pt-det as an expectation over the cube, weighted by the Jacobian.
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double mu = 0.7;
    double num = 0.0;
    const int n = 400000;
    for (int k = 0; k < n; ++k) {
        const double z12 = u(rng), z23 = u(rng), z34 = u(rng), p = u(rng), q = u(rng), r = u(rng);
        const auto v = partials_to_correlations(z12, z23, z34, p, q, r);
        const Correlations c{z12, v.z13, v.z14, z23, v.z24, z34};
        num += jacobian_weight(z12, z23, z34, p, q) * pt_polynomial(mu, c);
    }
    // cube volume 64, normalisation 27/(32 pi^2)
    const double est = 64.0 * num / n * 27.0 / (32.0 * M_PI * M_PI);
    EXPECT_NEAR(est, intermediate_function(1, MomentKind::PtDet).evaluate(mu), 5e-3);
}

TEST(Moments, PtDet) {
    EXPECT_EQ(exact_moment(1, MomentKind::PtDet).value, parse_rational("-1/858"));
    EXPECT_EQ(exact_moment(2, MomentKind::PtDet).value, parse_rational("27/2489344"));
    EXPECT_EQ(exact_moment(3, MomentKind::PtDet).value, parse_rational("-8363/66216550400"));
}

TEST(Moments, Product) {
    EXPECT_EQ(exact_moment(1, MomentKind::Product).value, 0);
    EXPECT_EQ(exact_moment(2, MomentKind::Product).value, parse_rational("7/5696343244800"));
    EXPECT_EQ(product_moment_ratio(1), 0);
    EXPECT_EQ(product_moment_ratio(2), parse_rational("77/54"));
    EXPECT_EQ(product_moment_ratio(5, false), parse_rational("598/833"));
    EXPECT_THROW(product_moment_ratio(7, false), std::out_of_range);
}

TEST(Moments, Minor3) {
    EXPECT_EQ(exact_moment(1, MomentKind::Minor3).value, parse_rational("-1/264"));
    EXPECT_EQ(exact_moment(2, MomentKind::Minor3).value, parse_rational("7/74880"));
    EXPECT_EQ(exact_moment(3, MomentKind::Minor3).value, 0);
}

TEST(Moments, SignAlternation) {
    const auto g = golden_moment_table();
    for (int m = 1; m <= 9; ++m) EXPECT_EQ(sgn(g[static_cast<std::size_t>(m)]), m % 2 ? -1 : 1) << m;
}

TEST(Moments, GoldenTableFromPublishedIntermediates) {
    const auto g = golden_moment_table();
    for (int m = 1; m <= 9; ++m) EXPECT_EQ(assemble_moment(published_intermediate_function(m)).value, g[static_cast<std::size_t>(m)]) << m;
}

TEST(Moments, GoldenTableFromEngineStretch) {
    const auto g = golden_moment_table();
    EXPECT_EQ(exact_moment(4, MomentKind::PtDet).value, g[4]);
}

TEST(Coefficients, HandValues) {
    EXPECT_EQ(coefficient_C(0, 1), make_rational(-1, 5));
    EXPECT_EQ(coefficient_C(2, 1), make_rational(34, 125));
    EXPECT_EQ(coefficient_C(4, 2), parse_rational("20898/42875"));
}

TEST(Coefficients, MatchEngineForSmallOrders) {
    for (int m = 1; m <= 3; ++m) {
        const auto f = intermediate_function(m, MomentKind::PtDet);
        for (int i = 0; i <= 6; i += 2) {
            if (i > f.degree()) continue;
            EXPECT_EQ(coefficient_C(i, m), f.coefficient(i)) << "i=" << i << " m=" << m;
        }
    }
}

TEST(Coefficients, MatchPublishedIntermediates) {
    for (int m = 4; m <= 9; ++m) {
        const auto f = published_intermediate_function(m);
        for (int i = 0; i <= 6; i += 2) EXPECT_EQ(coefficient_C(i, m), f.coefficient(i)) << "i=" << i << " m=" << m;
    }
}

TEST(Coefficients, DenominatorIsPochhammer) {
    // (-1)^m C_i(m) Poch(i, m) is a polynomial in m of degree 3i/2:
    // its finite difference of that order + 1 vanishes.
    for (int i = 0; i <= 6; i += 2) {
        const int deg = 3 * i / 2;
        std::vector<Rational> v;
        for (int m = 1; m <= deg + 3; ++m) {
            const Rational mm(m);
            const Rational sign = m % 2 ? Rational(-1) : Rational(1);
            v.push_back(sign * coefficient_C(i, m) * pochhammer_denominator(i, mm));
        }
        for (int d = 0; d <= deg; ++d)
            for (std::size_t k = 0; k + 1 < v.size(); ++k) v[k] = v[k + 1] - v[k];
        v.resize(v.size() - static_cast<std::size_t>(deg) - 1);
        for (const auto& x : v) EXPECT_EQ(x, 0) << i;
    }
}

TEST(Coefficients, PochhammerGammaForm) {
    // Gamma(m + 5/2) / Gamma(m + 1/2 - i/2) = 2^(i/2 + 2) (2m+3)!! / (2m-1-i)!! for 2m-1-i >= -1
    auto dfact = [](int n) {
        Integer r(1);
        for (int k = n; k > 1; k -= 2) r *= k;
        return r;
    };
    for (int i = 0; i <= 6; i += 2)
        for (int m = (i + 1) / 2 + 1; m <= 8; ++m) {
            const Rational lhs = pochhammer_denominator(i, Rational(m));
            Rational rhs(dfact(2 * m + 3), dfact(2 * m - 1 - i));
            rhs /= pow(Rational(2), i / 2 + 2);
            rhs.canonicalize();
            EXPECT_EQ(lhs, rhs) << i << "," << m;
        }
}

TEST(Coefficients, Errors) {
    EXPECT_THROW(coefficient_C(8, 1), std::invalid_argument);
    EXPECT_THROW(coefficient_C(2, Rational(-3, 2)), std::domain_error);
    EXPECT_THROW(coefficient_C(2, Rational(1, 3)), std::domain_error);
}

TEST(ClosedForm, DetMoments) {
    EXPECT_EQ(det_moment_closed_form(0, Ensemble::Real), 1);
    EXPECT_EQ(det_moment_closed_form(1, Ensemble::Real), make_rational(1, 2288));
    EXPECT_EQ(det_moment_closed_form(2, Ensemble::Real), make_rational(1, 2489344));
    EXPECT_EQ(det_moment_closed_form(1, Ensemble::Complex), make_rational(1, 3876));
    EXPECT_EQ(det_moment_closed_form(0, Ensemble::Complex), 1);
}

TEST(Kinds, NamesRoundTrip) {
    for (auto k : {MomentKind::PtDet, MomentKind::Product, MomentKind::Minor3}) EXPECT_EQ(parse_kind(kind_name(k)), k);
    EXPECT_THROW(parse_kind("nope"), std::invalid_argument);
}
