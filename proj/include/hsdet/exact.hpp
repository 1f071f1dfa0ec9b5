#pragma once
/**
 * @file exact.hpp
 * @brief Exact two-stage moment engine: hypercube integration of powers of
 * the vine-substituted polynomials (intermediate functions I_m(mu)), then
 * Dirichlet integration over the diagonal simplex.
 */
#include "hsdet/poly.hpp"
#include "hsdet/rational.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hsdet {

enum class MomentKind { PtDet, Product, Minor3 };

inline std::string_view kind_name(MomentKind k) {
    switch (k) {
        case MomentKind::PtDet: return "pt-det";
        case MomentKind::Product: return "product";
        case MomentKind::Minor3: return "minor3";
    }
    return "unknown";
}

inline MomentKind parse_kind(std::string_view s) {
    if (s == "pt-det" || s == "ptdet" || s == "detPT") return MomentKind::PtDet;
    if (s == "product") return MomentKind::Product;
    if (s == "minor3") return MomentKind::Minor3;
    throw std::invalid_argument("unknown moment kind: " + std::string(s));
}

/// Largest order the expansion engine accepts per kind.
inline int max_supported_order(MomentKind k) {
    switch (k) {
        case MomentKind::PtDet: return 5;
        case MomentKind::Product: return 3;
        case MomentKind::Minor3: return 5;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// one-dimensional and simplex integrals

/// Integral over [-1, 1] of z^a (1 - z^2)^(b/2), as q * pi^(0 or 1).
inline PiRational wallis_integral(int a, int b) {
    if (a < 0 || b < 0) throw std::domain_error("wallis_integral: exponents must be nonnegative");
    if (a % 2 != 0) return {Rational(0), 0};
    return half_gamma(a + 1) * half_gamma(b + 2) / half_gamma(a + b + 3);
}

/// Dirichlet integral of prod x_k^(e_k) over the unit 3-simplex
/// {x1 + x2 + x3 + x4 = 1}, exponents given doubled (e_k = twice[k] / 2).
inline PiRational simplex_weight_integral(const std::array<int, 4>& twice_exponents) {
    int total = 0;
    PiRational num{Rational(1), 0};
    for (int t : twice_exponents) {
        if (t <= -2) throw std::domain_error("simplex_weight_integral: exponents must exceed -1");
        num = num * half_gamma(t + 2);
        total += t;
    }
    return num / half_gamma(total + 8);
}

// ---------------------------------------------------------------------------
// integrands

/// Variable slots of the hypercube polynomials.
namespace var {
inline constexpr int mu = 0;
inline constexpr int z12 = 1, z23 = 2, z34 = 3, p13 = 4, p24 = 5, p14 = 6;
inline constexpr int s12 = 7, s23 = 8, s34 = 9, sp13 = 10, sp24 = 11;
}  // namespace var

template <class C>
struct VineIntegrands {
    using Poly = SparsePoly<C>;
    Poly pt;       ///< P with the vine substitution
    Poly corr_det; ///< det Z with the vine substitution
    Poly minor3;   ///< Q with the vine substitution

    VineIntegrands() {
        const std::vector<std::pair<int, int>> pairs{
            {var::z12, var::s12}, {var::z23, var::s23}, {var::z34, var::s34}, {var::p13, var::sp13}, {var::p24, var::sp24}};
        auto v = [&](int i) {
            Poly p = Poly::variable(i);
            p.set_root_pairs(pairs);
            return p;
        };
        auto k = [&](long c) {
            Poly p{C(c)};
            p.set_root_pairs(pairs);
            return p;
        };
        const Poly mu = v(var::mu), z12 = v(var::z12), z23 = v(var::z23), z34 = v(var::z34);
        const Poly p = v(var::p13), q = v(var::p24), r = v(var::p14);
        const Poly s12 = v(var::s12), s23 = v(var::s23), s34 = v(var::s34), sp = v(var::sp13), sq = v(var::sp24);
        const Poly one = k(1), two = k(2);

        const Poly z13 = z12 * z23 + s12 * s23 * p;
        const Poly z24 = z23 * z34 + s23 * s34 * q;
        const Poly z14 = z12 * z23 * z34 + s12 * s23 * p * z34 + z12 * s23 * s34 * q + s12 * s34 * sp * sq * r -
                         s12 * z23 * s34 * p * q;

        const Poly vv = (z34 * z34 - one) * z12 * z12 - two * (z14 * z23 + z13 * z24) * z34 * z12 +
                        z14 * z14 * z23 * z23 - z24 * z24 - z34 * z34;
        const Poly ww = k(0) - two * z13 * z14 * z23 * z24 + z13 * z13 * (z24 * z24 - one) + one;
        const Poly mu2 = mu * mu;
        pt = k(0) - z14 * z14 * mu2 * mu2 + two * z14 * (z12 * z13 + z24 * z34) * mu2 * mu + (vv + ww) * mu2 +
             two * z23 * (z12 * z24 + z13 * z34) * mu - z23 * z23;
        corr_det = (one - z12 * z12) * (one - z23 * z23) * (one - z34 * z34) * (one - p * p) * (one - q * q) *
                   (one - r * r);
        minor3 = mu2 * z14 * z14 - two * mu * z12 * z13 * z14 + z13 * z13 + z12 * z12 - one;
    }

    [[nodiscard]] Poly base(MomentKind kind) const {
        switch (kind) {
            case MomentKind::PtDet: return pt;
            case MomentKind::Product: return corr_det * pt;
            case MomentKind::Minor3: return minor3;
        }
        return pt;
    }
};

// ---------------------------------------------------------------------------
// intermediate functions

struct IntermediateFunction {
    int m{1};
    MomentKind kind{MomentKind::PtDet};
    std::vector<Rational> coefficients;  ///< coefficients[i] multiplies mu^i

    [[nodiscard]] int degree() const { return static_cast<int>(coefficients.size()) - 1; }
    [[nodiscard]] Rational coefficient(int i) const {
        if (i < 0 || i > degree()) return Rational(0);
        return coefficients[static_cast<std::size_t>(i)];
    }
    [[nodiscard]] double evaluate(double mu) const {
        double acc = 0.0;
        for (int i = degree(); i >= 0; --i) acc = acc * mu + to_double(coefficients[static_cast<std::size_t>(i)]);
        return acc;
    }
};

inline int intermediate_degree(MomentKind kind, int m) { return kind == MomentKind::Minor3 ? 2 * m : 4 * m; }

namespace detail {

/// Wallis values for every exponent pair that can occur; indexed [a][b].
inline const std::vector<std::vector<PiRational>>& wallis_table() {
    static const std::vector<std::vector<PiRational>> table = [] {
        std::vector<std::vector<PiRational>> t(kMaxExponent + 3, std::vector<PiRational>(kMaxExponent + 4));
        for (int a = 0; a <= static_cast<int>(kMaxExponent) + 2; ++a)
            for (int b = 0; b <= static_cast<int>(kMaxExponent) + 3; ++b)
                t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = wallis_integral(a, b);
        return t;
    }();
    return table;
}

/// Integrates every monomial against the jacobian over [-1,1]^6 and
/// collects the result by power of mu. Odd powers of an integration
/// variable vanish; every surviving term must carry exactly pi^2.
template <class C>
std::map<int, Rational> integrate_hypercube(const SparsePoly<C>& poly) {
    static constexpr std::array<int, 6> z_vars{var::z12, var::z23, var::z34, var::p13, var::p24, var::p14};
    static constexpr std::array<int, 6> s_vars{var::s12, var::s23, var::s34, var::sp13, var::sp24, -1};
    static constexpr std::array<int, 6> jac_b{2, 2, 2, 1, 1, 0};
    const auto& table = wallis_table();

    // Group by the integration signature first so each distinct wallis
    // product is formed once.
    std::map<std::pair<int, Monomial>, Rational> grouped;
    for (const auto& [mono, coeff] : poly.terms()) {
        bool vanishes = false;
        for (int zv : z_vars)
            if (exponent_of(mono, zv) % 2 != 0) {
                vanishes = true;
                break;
            }
        if (vanishes) continue;
        const int mu_power = static_cast<int>(exponent_of(mono, var::mu));
        const Monomial rest = with_exponent(mono, var::mu, 0);
        auto [it, inserted] = grouped.try_emplace({mu_power, rest}, Rational(0));
        if constexpr (std::is_integral_v<C>) it->second += Rational(static_cast<long>(coeff));
        else it->second += Rational(coeff);
    }

    std::map<int, Rational> by_mu;
    for (const auto& [key, coeff] : grouped) {
        if (coeff == 0) continue;
        PiRational w{Rational(1), 0};
        for (std::size_t k = 0; k < z_vars.size(); ++k) {
            const int a = static_cast<int>(exponent_of(key.second, z_vars[k]));
            const int b = (s_vars[k] >= 0 ? static_cast<int>(exponent_of(key.second, s_vars[k])) : 0) + jac_b[k];
            w = w * table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
        }
        if (w.is_zero()) continue;
        if (w.half_pi_power + 2 * poly.pi_power != 4)
            throw std::logic_error("intermediate_function: pi exponent mismatch in hypercube integral");
        by_mu[key.first] += coeff * w.coefficient;
    }
    return by_mu;
}

template <class C>
IntermediateFunction intermediate_function_with(MomentKind kind, int m) {
    const VineIntegrands<C> integrands;
    const auto base = integrands.base(kind);
    const auto power = base.pow(static_cast<unsigned>(m));
    auto by_mu = integrate_hypercube(power);
    IntermediateFunction out;
    out.m = m;
    out.kind = kind;
    out.coefficients.assign(static_cast<std::size_t>(intermediate_degree(kind, m)) + 1, Rational(0));
    // normalization 27 / (32 pi^2); the pi^2 cancels the hypercube's
    const Rational norm(27, 32);
    for (auto& [i, c] : by_mu) {
        if (i < 0 || i > out.degree()) throw std::logic_error("intermediate_function: unexpected mu power");
        if (i % 2 != 0 && c != 0) throw std::logic_error("intermediate_function: odd power of mu survived");
        out.coefficients[static_cast<std::size_t>(i)] = c * norm;
    }
    return out;
}

}  // namespace detail

/// I_m(mu) for the given kind, by exact expansion and integration.
inline IntermediateFunction intermediate_function(int m, MomentKind kind) {
    if (m < 1 || m > max_supported_order(kind))
        throw std::invalid_argument("intermediate_function: unsupported order " + std::to_string(m) + " for " +
                                    std::string(kind_name(kind)));
    try {
        return detail::intermediate_function_with<std::int64_t>(kind, m);
    } catch (const std::overflow_error&) {
        return detail::intermediate_function_with<Integer>(kind, m);
    }
}

// ---------------------------------------------------------------------------
// closed-form coefficients

/// prod_{k = -2, 0, ..., i} (m + (1 - k)/2)
inline Rational pochhammer_denominator(int i, const Rational& m) {
    if (i < 0 || i % 2 != 0) throw std::invalid_argument("pochhammer_denominator: i must be even and >= 0");
    Rational out(1);
    for (int k = -2; k <= i; k += 2) out *= m + Rational(1 - k, 2);
    return out;
}

/// Closed-form C_i(m) for i in {0, 2, 4, 6}.
inline Rational coefficient_C(int i, const Rational& m) {
    if (!(i == 0 || i == 2 || i == 4 || i == 6))
        throw std::invalid_argument("coefficient_C: closed forms exist for i = 0, 2, 4, 6 only");
    const Rational den = pochhammer_denominator(i, m);
    if (den == 0) throw std::domain_error("coefficient_C: m is a pole");
    Rational sign(1);
    if (is_integer(m)) {
        if (mpz_odd_p(m.get_num_mpz_t())) sign = -1;
    } else {
        throw std::domain_error("coefficient_C: (-1)^m needs integer m");
    }
    Rational num;
    switch (i) {
        case 0: num = Rational(3, 4); break;
        case 2: num = Rational(3, 100) * m * (2 * m * (4 * m - 5) - 15); break;
        case 4:
            num = Rational(3, 19600) * m * (2 * m * (2 * m * (2 * m * (8 * m * (6 * m - 7) + 155) - 13) - 1017) - 315);
            break;
        case 6:
            num = Rational(1, 529200) * (m - 1) * m *
                  (4 * m * (2 * m * (2 * m * (m * (4 * m * (20 * m * (4 * m - 11) + 173) - 4303) + 4733) + 14911) - 9165) -
                   4725);
            break;
        default: break;
    }
    return sign * num / den;
}

inline Rational coefficient_C(int i, int m) { return coefficient_C(i, Rational(m)); }

// ---------------------------------------------------------------------------
// assembly over the simplex

/// Doubled Dirichlet exponents (rho11, rho22, rho33, rho44) of the mu^i term.
inline std::array<int, 4> simplex_exponents(MomentKind kind, int m, int i) {
    switch (kind) {
        case MomentKind::PtDet: return {3 + i, 3 + 4 * m - i, 3 + 4 * m - i, 3 + i};
        case MomentKind::Product: return {3 + 2 * m + i, 3 + 6 * m - i, 3 + 6 * m - i, 3 + 2 * m + i};
        case MomentKind::Minor3: return {3 + 2 * m + i, 3 + 2 * m - i, 3 + 2 * m - i, 3 + i};
    }
    return {};
}

struct MomentValue {
    int m{0};
    MomentKind kind{MomentKind::PtDet};
    Rational value;
};

/// zeta'_m = (1146880 / pi^2) sum_i C_i(m) D(exponents of mu^i).
inline MomentValue assemble_moment(const IntermediateFunction& f) {
    Rational total(0);
    for (int i = 0; i <= f.degree(); ++i) {
        const Rational& c = f.coefficients[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        if (i % 2 != 0) throw std::logic_error("assemble_moment: odd power of mu");
        const PiRational d = simplex_weight_integral(simplex_exponents(f.kind, f.m, i));
        if (d.half_pi_power != 4) throw std::logic_error("assemble_moment: pi exponent mismatch");
        total += c * d.coefficient;
    }
    return {f.m, f.kind, total * 1146880};
}

inline MomentValue exact_moment(int m, MomentKind kind) { return assemble_moment(intermediate_function(m, kind)); }

// ---------------------------------------------------------------------------
// determinant moments and tables

enum class Ensemble { Real, Complex };

/// E[det(rho)^m] under HS measure.
inline Rational det_moment_closed_form(int m, Ensemble e) {
    if (m < 0) throw std::invalid_argument("det_moment_closed_form: m must be >= 0");
    const unsigned um = static_cast<unsigned>(m);
    if (e == Ensemble::Real) {
        Rational four_pow = pow(Rational(4), 3 - 2 * m);
        return Rational(945) * four_pow * Rational(factorial(2 * um + 1) * factorial(2 * um + 3)) /
               Rational(factorial(4 * um + 9));
    }
    Rational r(Integer("108972864000"));
    r *= Rational(factorial(um) * factorial(um + 1) * factorial(um + 2) * factorial(um + 3));
    r /= Rational(factorial(4 * um + 15));
    return r;
}

/// E[(det rho det rho^PT)^m] / E[det(rho)^(2m)] for m = 1..6 as tabulated.
inline const std::vector<Rational>& product_ratio_table() {
    static const std::vector<Rational> t{parse_rational("0"),       parse_rational("77/54"),
                                         parse_rational("24/55"),   parse_rational("209/175"),
                                         parse_rational("598/833"), parse_rational("3929/3724")};
    return t;
}

/// Ratio from the engine for m <= max_supported_order(Product), else from the table.
inline Rational product_moment_ratio(int m, bool use_engine = true) {
    if (m < 1) throw std::invalid_argument("product_moment_ratio: m must be >= 1");
    if (use_engine && m <= 2) return exact_moment(m, MomentKind::Product).value / det_moment_closed_form(2 * m, Ensemble::Real);
    if (m <= static_cast<int>(product_ratio_table().size())) return product_ratio_table()[static_cast<std::size_t>(m - 1)];
    throw std::out_of_range("product_moment_ratio: order not available");
}

/// Raw moments zeta'_1..zeta'_9 of det(rho^PT), index 0 holds zeta'_0 = 1.
inline std::vector<Rational> golden_moment_table() {
    static const char* const text[] = {"1",
                                       "-1/858",
                                       "27/2489344",
                                       "-8363/66216550400",
                                       "21859/10443295948800",
                                       "-23071/539633583390720",
                                       "3317321/3253917653076541440",
                                       "-419856257/15366774022001834065920",
                                       "16945249/21117403549591928832000",
                                       "-6102620963/240565904621616585139814400"};
    std::vector<Rational> out;
    for (const char* t : text) out.push_back(parse_rational(t));
    return out;
}

/// Published upper-half coefficients of I_m for pt-det, m = 1..9: entry j
/// holds C_{4m-2j}(m), j = 0..m (m = 1 also lists the mu^0 coefficient).
inline IntermediateFunction published_intermediate_function(int m) {
    static const std::vector<std::vector<const char*>> text{
        {"-1/5", "34/125", "-1/5"},
        {"3/35", "-12/875", "20898/42875"},
        {"-1/21", "-54/875", "-27873/42875", "-466876/1157625"},
        {"1/33", "584/5775", "278884/282975", "8984/4851", "65788454/20543985"},
        {"-3/143", "-18/143", "-70881/49049", "-2178728/441441", "-59472398/4855851", "-4103383444/273546273"},
        {"1/65", "2556/17875", "5454/2695", "3359372/315315", "3273117/86515", "597414184/7872865",
         "173821048732/1771394625"},
        {"-1/85", "-4298/27625", "-826637/303875", "-165865636/8204625", "-71226035/722007",
         "-1947049760374/6711055065", "-93373201818911/167776376625", "-33225665966177656/48487372844625"},
        {"3/323", "6672/40375", "12986136/3674125", "4250871568/121246125", "3319251741068/14670781125",
         "755365923834768/826454003375", "2024301386770232/826454003375", "61510285844520752/14049718057375",
         "3853435310162220966/724564031244625"},
        {"-1/133", "-9774/56525", "-651051/145775", "-8355664/146965", "-18384996780/39122083",
         "-4848288282648/1944597655", "-133915228926036/15026436425", "-61222919937476688/2809943611475",
         "-396008663496240078/10677785723605", "-2103161056387491292/47564681859695"},
    };
    if (m < 1 || m > 9) throw std::out_of_range("published_intermediate_function: m must be in 1..9");
    IntermediateFunction f;
    f.m = m;
    f.kind = MomentKind::PtDet;
    f.coefficients.assign(static_cast<std::size_t>(4 * m) + 1, Rational(0));
    const auto& row = text[static_cast<std::size_t>(m - 1)];
    for (std::size_t j = 0; j <= static_cast<std::size_t>(m) && j < row.size(); ++j) {
        const Rational c = parse_rational(row[j]);
        const std::size_t hi = static_cast<std::size_t>(4 * m) - 2 * j;
        f.coefficients[hi] = c;
        f.coefficients[static_cast<std::size_t>(4 * m) - hi] = c;
    }
    return f;
}

}  // namespace hsdet
