#pragma once
/**
 * @file recon.hpp
 * @brief Density and tail-probability reconstruction from raw moments on a
 * bounded support: beta and Libby-Novick fits, one-sided Chebyshev bound,
 * Mnatsakanov CDF, Provost-Ha adjusted densities, degree-K polynomial
 * densities, and summary statistics.
 */
#include "hsdet/rational.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsdet {

struct Interval {
    Rational lo;
    Rational hi;
};

inline Interval pt_det_support() { return {Rational(-1, 16), Rational(1, 256)}; }
inline Interval product_support() { return {Rational(-1, 110592), Rational(1, 65536)}; }
/// Range of the {1,2,3} principal minor of rho^PT.
inline Interval minor3_support() { return {Rational(-1, 8), Rational(1, 27)}; }

struct MomentSequence {
    Interval support{Rational(0), Rational(1)};
    std::vector<Rational> moments{Rational(1)};  ///< moments[k] = E[X^k], moments[0] = 1
    bool exact{true};
    std::string kind;

    [[nodiscard]] int order() const { return static_cast<int>(moments.size()) - 1; }
};

inline MomentSequence make_sequence(Interval support, std::vector<Rational> moments, bool exact = true,
                                    std::string kind = {}) {
    if (moments.empty() || moments[0] != 1) throw std::invalid_argument("moment sequence must start with 1");
    return {std::move(support), std::move(moments), exact, std::move(kind)};
}

/// Statistical moments enter as the exact binary values of the doubles.
inline MomentSequence make_sequence(Interval support, const std::vector<double>& moments, std::string kind = {}) {
    std::vector<Rational> r;
    r.reserve(moments.size());
    for (double m : moments) r.emplace_back(m);
    if (!r.empty()) r[0] = 1;
    return make_sequence(std::move(support), std::move(r), false, std::move(kind));
}

inline Rational map_point(const Interval& s, const Rational& x) { return (x - s.lo) / (s.hi - s.lo); }

/// Moments of y = (x - lo) / (hi - lo), exactly.
inline MomentSequence affine_map_moments(const MomentSequence& seq) {
    const Rational w = seq.support.hi - seq.support.lo;
    if (w <= 0) throw std::invalid_argument("affine_map_moments: degenerate support");
    const Rational shift = -seq.support.lo;
    MomentSequence out{{Rational(0), Rational(1)}, {}, seq.exact, seq.kind};
    for (int k = 0; k <= seq.order(); ++k) {
        Rational s(0);
        for (int j = 0; j <= k; ++j)
            s += Rational(binomial(static_cast<unsigned>(k), static_cast<unsigned>(j))) * seq.moments[static_cast<std::size_t>(j)] *
                 pow(shift, k - j);
        out.moments.push_back(s / pow(w, k));
    }
    return out;
}

/// Inverse of affine_map_moments back onto `target`.
inline MomentSequence unmap_moments(const MomentSequence& mapped, const Interval& target) {
    const Rational w = target.hi - target.lo;
    if (w <= 0) throw std::invalid_argument("unmap_moments: degenerate support");
    MomentSequence out{target, {}, mapped.exact, mapped.kind};
    for (int k = 0; k <= mapped.order(); ++k) {
        Rational s(0);
        for (int j = 0; j <= k; ++j)
            s += Rational(binomial(static_cast<unsigned>(k), static_cast<unsigned>(j))) * pow(w, j) *
                 mapped.moments[static_cast<std::size_t>(j)] * pow(target.lo, k - j);
        out.moments.push_back(s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Hankel positivity

/// PSD test of a symmetric rational matrix by exact LDL^T with symmetric pivoting on zeros.
inline bool is_psd_exact(std::vector<std::vector<Rational>> a) {
    const std::size_t n = a.size();
    std::vector<bool> done(n, false);
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t p = n;
        for (std::size_t i = 0; i < n; ++i)
            if (!done[i] && a[i][i] != 0) {
                p = i;
                break;
            }
        if (p == n) {
            // every remaining diagonal is zero: PSD iff the remaining block is zero
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (!done[i] && !done[j] && a[i][j] != 0) return false;
            return true;
        }
        if (a[p][p] < 0) return false;
        done[p] = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i] || a[i][p] == 0) continue;
            const Rational f = a[i][p] / a[p][p];
            for (std::size_t j = 0; j < n; ++j)
                if (!done[j]) a[i][j] -= f * a[p][j];
        }
    }
    return true;
}

/// Hausdorff conditions on [0,1] up to the available order: the Hankel
/// matrices [t_{i+j}], [t_{i+j+1}] and [t_{i+j} - t_{i+j+1}] are PSD.
inline bool hankel_psd(const MomentSequence& mapped) {
    const int k = mapped.order();
    auto t = [&](int i) { return mapped.moments[static_cast<std::size_t>(i)]; };
    auto build = [&](int n, auto&& entry) {
        std::vector<std::vector<Rational>> h(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = entry(i + j);
        return h;
    };
    const int n0 = k / 2 + 1;
    if (!is_psd_exact(build(n0, [&](int s) { return t(s); }))) return false;
    const int n1 = (k - 1) / 2 + 1;
    if (k >= 1) {
        if (!is_psd_exact(build(n1, [&](int s) { return t(s + 1); }))) return false;
        if (!is_psd_exact(build(n1, [&](int s) { return Rational(t(s) - t(s + 1)); }))) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// fits

enum class Family { Beta, LibbyNovick, Poly };

struct FitResult {
    Family family{Family::Beta};
    double a{1}, b{1}, lambda{1};
    std::optional<Rational> exact_a, exact_b;
    Interval support{Rational(0), Rational(1)};
    std::vector<Rational> poly_coefficients;  ///< Family::Poly, density = sum c_j x^j on support
    std::vector<double> moment_ratios;        ///< target moment / fitted moment, k = 1..K
    double separability_estimate{0};
    bool converged{true};
    int iterations{0};
};

inline double log_beta_fn(double a, double b) {
    return boost::math::lgamma(a) + boost::math::lgamma(b) - boost::math::lgamma(a + b);
}

/// Method-of-moments beta fit to the first two mapped moments.
inline FitResult beta_fit_two_moments(const MomentSequence& mapped) {
    if (mapped.order() < 2) throw std::invalid_argument("beta_fit_two_moments: need two moments");
    const Rational mean = mapped.moments[1];
    const Rational var = mapped.moments[2] - mean * mean;
    if (!(mean > 0 && mean < 1)) throw std::domain_error("beta_fit_two_moments: mean outside (0, 1)");
    if (!(var > 0 && var < mean * (1 - mean))) throw std::domain_error("beta_fit_two_moments: variance out of range");
    const Rational t = mean * (1 - mean) / var - 1;
    FitResult f;
    f.family = Family::Beta;
    f.exact_a = Rational(mean * t);
    f.exact_b = Rational((1 - mean) * t);
    f.a = to_double(*f.exact_a);
    f.b = to_double(*f.exact_b);
    return f;
}

/// E[Y^k] for Y ~ Beta(a, b), exactly.
inline Rational beta_moment_exact(const Rational& a, const Rational& b, int k) {
    Rational r(1);
    for (int j = 0; j < k; ++j) r *= (a + j) / (a + b + j);
    return r;
}

inline double beta_moment(double a, double b, int k) {
    double r = 1.0;
    for (int j = 0; j < k; ++j) r *= (a + j) / (a + b + j);
    return r;
}

inline double beta_pdf(double a, double b, double y) {
    if (y <= 0.0 || y >= 1.0) return 0.0;
    return std::exp((a - 1) * std::log(y) + (b - 1) * std::log1p(-y) - log_beta_fn(a, b));
}

inline double libby_novick(double a, double b, double lambda, double y) {
    if (!(a > 0 && b > 0 && lambda > 0)) throw std::domain_error("libby_novick: parameters must be positive");
    if (y <= 0.0 || y >= 1.0) return 0.0;
    return std::exp(a * std::log(lambda) + (a - 1) * std::log(y) + (b - 1) * std::log1p(-y) - log_beta_fn(a, b) -
                    (a + b) * std::log1p(-(1 - lambda) * y));
}

/// x = lambda y / (1 - (1 - lambda) y) carries a Libby-Novick variate to Beta(a, b).
inline double ln_to_beta(double lambda, double y) { return lambda * y / (1 - (1 - lambda) * y); }
inline double beta_to_ln(double lambda, double x) { return x / (lambda + (1 - lambda) * x); }

namespace detail {

/// Integral over [0,1] of g(x) Beta(a,b)(x) dx, split at beta quantiles so the
/// adaptive rule sees the peak.
template <class G>
double beta_expectation(double a, double b, G&& g) {
    static constexpr std::array<double, 11> probs{0.0, 1e-8, 1e-4, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.9999};
    auto quantile = [&](double p) -> std::optional<double> {
        try {
            return boost::math::ibeta_inv(a, b, p);
        } catch (const std::exception&) {
            return std::nullopt;  // extreme shapes; the neighbouring cuts still apply
        }
    };
    std::vector<double> cuts{0.0, 1.0};
    for (double p : probs)
        if (p > 0.0)
            if (auto q = quantile(p)) cuts.push_back(*q);
    std::sort(cuts.begin(), cuts.end());
    const double median = quantile(0.5).value_or(a / (a + b));
    if (std::find(cuts.begin(), cuts.end(), median) == cuts.end())
        cuts.insert(std::upper_bound(cuts.begin(), cuts.end(), median), median);
    const double lb = log_beta_fn(a, b);
    auto gk = [](auto&& f, double lo, double hi) {
        return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 8, 1e-11);
    };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        if (hi <= lo) continue;
        if (a < 1 && hi <= median) {
            // t = x^a absorbs the pole at 0
            total += gk(
                [&](double t) {
                    if (t <= 0.0) return 0.0;
                    const double x = std::pow(t, 1 / a);
                    return g(x) * std::exp((b - 1) * std::log1p(-x) - lb) / a;
                },
                std::pow(lo, a), std::pow(hi, a));
        } else if (b < 1 && lo >= median) {
            // u = (1-x)^b absorbs the pole at 1
            total += gk(
                [&](double u) {
                    if (u <= 0.0) return 0.0;
                    const double w = std::pow(u, 1 / b);
                    const double x = 1 - w;
                    return g(x) * std::exp((a - 1) * std::log1p(-w) - lb) / b;
                },
                std::pow(1 - hi, b), std::pow(1 - lo, b));
        } else {
            total += gk(
                [&](double x) {
                    if (x <= 0.0 || x >= 1.0) return 0.0;
                    return g(x) * std::exp((a - 1) * std::log(x) + (b - 1) * std::log1p(-x) - lb);
                },
                lo, hi);
        }
    }
    return total;
}

}  // namespace detail

inline double libby_novick_moment(double a, double b, double lambda, int k) {
    if (k == 0) return 1.0;
    return detail::beta_expectation(a, b, [&](double x) { return std::pow(beta_to_ln(lambda, x), k); });
}

/// Moments of a fitted density on its own support.
inline std::vector<double> fitted_moments(const FitResult& f, int count) {
    std::vector<double> out;
    for (int k = 0; k <= count; ++k) {
        switch (f.family) {
            case Family::Beta:
                out.push_back(f.exact_a && f.exact_b ? to_double(beta_moment_exact(*f.exact_a, *f.exact_b, k))
                                                     : beta_moment(f.a, f.b, k));
                break;
            case Family::LibbyNovick: out.push_back(libby_novick_moment(f.a, f.b, f.lambda, k)); break;
            case Family::Poly: {
                Rational s(0);
                for (std::size_t j = 0; j < f.poly_coefficients.size(); ++j) {
                    const int e = static_cast<int>(j) + k + 1;
                    s += f.poly_coefficients[j] * (pow(f.support.hi, e) - pow(f.support.lo, e)) / e;
                }
                out.push_back(to_double(s));
                break;
            }
        }
    }
    return out;
}

inline std::vector<double> moment_ratios(const MomentSequence& target, const FitResult& f) {
    const auto fm = fitted_moments(f, target.order());
    std::vector<double> r;
    for (int k = 1; k <= target.order(); ++k)
        r.push_back(to_double(target.moments[static_cast<std::size_t>(k)]) / fm[static_cast<std::size_t>(k)]);
    return r;
}

/// P(Y >= threshold) for a beta or Libby-Novick fit on [0,1].
inline double tail_probability(const FitResult& f, double threshold) {
    if (threshold < 0.0 || threshold > 1.0) throw std::domain_error("tail_probability: threshold outside [0, 1]");
    switch (f.family) {
        case Family::Beta: return boost::math::ibetac(f.a, f.b, threshold);
        case Family::LibbyNovick: return boost::math::ibetac(f.a, f.b, ln_to_beta(f.lambda, threshold));
        case Family::Poly: {
            const Rational t(threshold);
            Rational s(0);
            for (std::size_t j = 0; j < f.poly_coefficients.size(); ++j) {
                const int e = static_cast<int>(j) + 1;
                s += f.poly_coefficients[j] * (pow(f.support.hi, e) - pow(t, e)) / e;
            }
            return to_double(s);
        }
    }
    return 0.0;
}

inline double tail_probability(const FitResult& f, const Rational& threshold) {
    if (f.family == Family::Poly) {
        Rational s(0);
        for (std::size_t j = 0; j < f.poly_coefficients.size(); ++j) {
            const int e = static_cast<int>(j) + 1;
            s += f.poly_coefficients[j] * (pow(f.support.hi, e) - pow(threshold, e)) / e;
        }
        return to_double(s);
    }
    return tail_probability(f, to_double(threshold));
}

/// Mass of the fitted density over its support, by quadrature.
inline double total_mass(const FitResult& f) {
    if (f.family == Family::Poly) return tail_probability(f, f.support.lo);
    if (f.family == Family::Beta) return detail::beta_expectation(f.a, f.b, [](double) { return 1.0; });
    // change of variables y -> x removes the Libby-Novick denominator
    return detail::beta_expectation(f.a, f.b, [](double) { return 1.0; });
}

struct LibbyNovickOptions {
    int max_iterations{60};
    double tolerance{1e-12};
};

/// Matches the first three mapped moments with a Libby-Novick law by damped
/// Gauss-Newton in (log a, log b, log lambda), starting at the beta fit with
/// lambda = 1.
inline FitResult libby_novick_fit(const MomentSequence& mapped, LibbyNovickOptions opt = {}) {
    if (mapped.order() < 3) throw std::invalid_argument("libby_novick_fit: need three moments");
    const FitResult start = beta_fit_two_moments(mapped);
    std::array<double, 3> target{};
    for (int k = 0; k < 3; ++k) target[static_cast<std::size_t>(k)] = to_double(mapped.moments[static_cast<std::size_t>(k + 1)]);
    std::array<double, 3> x{std::log(start.a), std::log(start.b), 0.0};

    auto residual = [&](const std::array<double, 3>& p) {
        std::array<double, 3> r{};
        for (int k = 0; k < 3; ++k) {
            const double m = libby_novick_moment(std::exp(p[0]), std::exp(p[1]), std::exp(p[2]), k + 1);
            r[static_cast<std::size_t>(k)] = m / target[static_cast<std::size_t>(k)] - 1.0;
        }
        return r;
    };
    auto norm2 = [](const std::array<double, 3>& r) { return r[0] * r[0] + r[1] * r[1] + r[2] * r[2]; };

    FitResult f;
    f.family = Family::LibbyNovick;
    f.converged = false;
    auto r = residual(x);
    double cost = norm2(r);
    for (int it = 0; it < opt.max_iterations; ++it) {
        f.iterations = it + 1;
        if (std::sqrt(cost) < opt.tolerance) {
            f.converged = true;
            break;
        }
        std::array<std::array<double, 3>, 3> jac{};
        for (int j = 0; j < 3; ++j) {
            auto xp = x;
            const double h = 1e-6;
            xp[static_cast<std::size_t>(j)] += h;
            const auto rp = residual(xp);
            for (int i = 0; i < 3; ++i)
                jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    (rp[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(i)]) / h;
        }
        // solve J dx = -r (3x3, partial pivoting)
        std::array<std::array<double, 4>, 3> m{};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            m[static_cast<std::size_t>(i)][3] = -r[static_cast<std::size_t>(i)];
        }
        for (int c = 0; c < 3; ++c) {
            int piv = c;
            for (int i = c + 1; i < 3; ++i)
                if (std::fabs(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]) > std::fabs(m[static_cast<std::size_t>(piv)][static_cast<std::size_t>(c)])) piv = i;
            std::swap(m[static_cast<std::size_t>(c)], m[static_cast<std::size_t>(piv)]);
            const double d = m[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
            if (d == 0.0) break;
            for (int i = 0; i < 3; ++i) {
                if (i == c) continue;
                const double g = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] / d;
                for (int j = c; j < 4; ++j) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -= g * m[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)];
            }
        }
        std::array<double, 3> dx{};
        for (int i = 0; i < 3; ++i) {
            const double d = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
            dx[static_cast<std::size_t>(i)] = d == 0.0 ? 0.0 : m[static_cast<std::size_t>(i)][3] / d;
        }
        double step = 1.0;
        bool improved = false;
        for (int half = 0; half < 30; ++half, step *= 0.5) {
            std::array<double, 3> xn{x[0] + step * dx[0], x[1] + step * dx[1], x[2] + step * dx[2]};
            const auto rn = residual(xn);
            const double cn = norm2(rn);
            if (std::isfinite(cn) && cn < cost) {
                x = xn;
                r = rn;
                cost = cn;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    if (std::sqrt(cost) < opt.tolerance) f.converged = true;
    f.a = std::exp(x[0]);
    f.b = std::exp(x[1]);
    f.lambda = std::exp(x[2]);
    return f;
}

inline FitResult libby_novick_params(double a, double b, double lambda) {
    if (!(a > 0 && b > 0 && lambda > 0)) throw std::domain_error("libby_novick: parameters must be positive");
    FitResult f;
    f.family = Family::LibbyNovick;
    f.a = a;
    f.b = b;
    f.lambda = lambda;
    return f;
}

// ---------------------------------------------------------------------------
// bounds and nonparametric reconstructions

/// One-sided Chebyshev bound on P(X >= 0) = sigma^2 / (sigma^2 + mean^2) for mean < 0.
inline Rational chebyshev_upper_bound(const MomentSequence& seq) {
    if (seq.order() < 2) throw std::invalid_argument("chebyshev_upper_bound: need two moments");
    const Rational mean = seq.moments[1];
    const Rational var = seq.moments[2] - mean * mean;
    if (mean >= 0) {
        if (mean == 0 && var == 0) throw std::domain_error("chebyshev_upper_bound: degenerate distribution");
        return Rational(1);
    }
    return var / (var + mean * mean);
}

/// Mnatsakanov's binomial-sum CDF approximant at x from K mapped moments, exactly.
inline Rational mnatsakanov_cdf_exact(const MomentSequence& mapped, const Rational& x, int K) {
    if (K < 1) throw std::invalid_argument("mnatsakanov_cdf: K must be >= 1");
    if (K > mapped.order()) throw std::invalid_argument("mnatsakanov_cdf: K exceeds available moments");
    if (x < 0 || x > 1) throw std::domain_error("mnatsakanov_cdf: x outside [0, 1]");
    Rational xk = x * K;
    const Integer upper = xk.get_num() / xk.get_den();  // floor, x >= 0
    const long kmax = upper.get_si();
    Rational total(0);
    for (long k = 0; k <= kmax; ++k) {
        for (long j = k; j <= K; ++j) {
            Rational term = Rational(binomial(static_cast<unsigned>(K), static_cast<unsigned>(j)) *
                                     binomial(static_cast<unsigned>(j), static_cast<unsigned>(k))) *
                            mapped.moments[static_cast<std::size_t>(j)];
            if ((j - k) % 2 != 0) total -= term;
            else total += term;
        }
    }
    return total;
}

inline double mnatsakanov_cdf(const MomentSequence& mapped, const Rational& x, int K) {
    return to_double(mnatsakanov_cdf_exact(mapped, x, K));
}

struct ProvostHaResult {
    std::vector<Rational> lambda;        ///< coefficients on the monic orthogonal polynomials p_0..p_K
    std::vector<Rational> power_coeffs;  ///< density = baseline(y) * sum c_k y^k
    double separability_estimate{0};
};

/// Provost-Ha adjustment of a beta baseline by K orthogonal polynomials:
/// density = w(y) sum_j lambda_j p_j(y) with p_j monic orthogonal under w and
/// lambda_j = E_target[p_j] / E_w[p_j^2]. Exact when the baseline and the
/// moments are rational.
inline ProvostHaResult provost_ha_density(const MomentSequence& mapped, const FitResult& baseline, int K,
                                          const Rational& threshold) {
    if (K < 0) throw std::invalid_argument("provost_ha_density: K must be >= 0");
    if (K > 12) throw std::invalid_argument("provost_ha_density: Gram system ill-conditioned beyond K = 12; use fewer moments");
    if (K > mapped.order()) throw std::invalid_argument("provost_ha_density: K exceeds available moments");
    if (baseline.family == Family::Poly) throw std::invalid_argument("provost_ha_density: baseline must be beta or Libby-Novick");

    std::vector<Rational> w;  // baseline moments 0..2K
    for (int k = 0; k <= 2 * K; ++k) {
        if (baseline.family == Family::Beta) {
            const Rational a = baseline.exact_a ? *baseline.exact_a : Rational(baseline.a);
            const Rational b = baseline.exact_b ? *baseline.exact_b : Rational(baseline.b);
            w.push_back(beta_moment_exact(a, b, k));
        } else {
            w.emplace_back(libby_novick_moment(baseline.a, baseline.b, baseline.lambda, k));
        }
    }
    auto inner_w = [&](const std::vector<Rational>& p, const std::vector<Rational>& q) {
        Rational s(0);
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t j = 0; j < q.size(); ++j) s += p[i] * q[j] * w[i + j];
        return s;
    };
    // monic orthogonal polynomials by Gram-Schmidt on monomials
    std::vector<std::vector<Rational>> polys;
    std::vector<Rational> norms;
    for (int j = 0; j <= K; ++j) {
        std::vector<Rational> p(static_cast<std::size_t>(j) + 1, Rational(0));
        p[static_cast<std::size_t>(j)] = 1;
        for (int i = 0; i < j; ++i) {
            std::vector<Rational> mono(static_cast<std::size_t>(j) + 1, Rational(0));
            mono[static_cast<std::size_t>(j)] = 1;
            const Rational proj = inner_w(mono, polys[static_cast<std::size_t>(i)]) / norms[static_cast<std::size_t>(i)];
            for (std::size_t c = 0; c < polys[static_cast<std::size_t>(i)].size(); ++c) p[c] -= proj * polys[static_cast<std::size_t>(i)][c];
        }
        const Rational nn = inner_w(p, p);
        if (nn <= 0) throw std::domain_error("provost_ha_density: singular Gram matrix");
        polys.push_back(std::move(p));
        norms.push_back(nn);
    }
    ProvostHaResult out;
    out.power_coeffs.assign(static_cast<std::size_t>(K) + 1, Rational(0));
    for (int j = 0; j <= K; ++j) {
        Rational e(0);
        for (std::size_t c = 0; c < polys[static_cast<std::size_t>(j)].size(); ++c) e += polys[static_cast<std::size_t>(j)][c] * mapped.moments[c];
        const Rational lam = e / norms[static_cast<std::size_t>(j)];
        out.lambda.push_back(lam);
        for (std::size_t c = 0; c < polys[static_cast<std::size_t>(j)].size(); ++c) out.power_coeffs[c] += lam * polys[static_cast<std::size_t>(j)][c];
    }
    const double t = to_double(threshold);
    double tail = 0.0;
    for (int k = 0; k <= K; ++k) {
        const double c = to_double(out.power_coeffs[static_cast<std::size_t>(k)]);
        if (c == 0.0) continue;
        if (baseline.family == Family::Beta) {
            // y^k Beta(a,b)(y) = m_k Beta(a+k, b)(y)
            tail += c * to_double(w[static_cast<std::size_t>(k)]) * boost::math::ibetac(baseline.a + k, baseline.b, t);
        } else {
            const double xt = ln_to_beta(baseline.lambda, t);
            tail += c * detail::beta_expectation(baseline.a, baseline.b, [&](double x) {
                        return x >= xt ? std::pow(beta_to_ln(baseline.lambda, x), k) : 0.0;
                    });
        }
    }
    out.separability_estimate = tail;
    return out;
}

inline double provost_ha_pdf(const ProvostHaResult& r, const FitResult& baseline, double y) {
    double poly = 0.0;
    for (std::size_t k = r.power_coeffs.size(); k-- > 0;) poly = poly * y + to_double(r.power_coeffs[k]);
    const double base = baseline.family == Family::Beta ? beta_pdf(baseline.a, baseline.b, y)
                                                        : libby_novick(baseline.a, baseline.b, baseline.lambda, y);
    return base * poly;
}

/// Exact solve of a rational linear system by Gauss-Jordan elimination.
inline std::vector<Rational> solve_rational(std::vector<std::vector<Rational>> a, std::vector<Rational> rhs) {
    const std::size_t n = a.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv][c] == 0) ++piv;
        if (piv == n) throw std::domain_error("solve_rational: singular system");
        std::swap(a[c], a[piv]);
        std::swap(rhs[c], rhs[piv]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a[i][c] == 0) continue;
            const Rational f = a[i][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
            rhs[i] -= f * rhs[c];
        }
    }
    for (std::size_t i = 0; i < n; ++i) rhs[i] /= a[i][i];
    return rhs;
}

/// Polynomial density of degree K = order() on the sequence's support whose
/// moments 0..K match the sequence exactly; no positivity constraint.
inline FitResult naive_polynomial_density(const MomentSequence& seq) {
    const int n = seq.order() + 1;
    if (n < 2) throw std::invalid_argument("naive_polynomial_density: need at least one moment");
    const Rational& lo = seq.support.lo;
    const Rational& hi = seq.support.hi;
    std::vector<std::vector<Rational>> a(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            const int e = k + j + 1;
            a[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = (pow(hi, e) - pow(lo, e)) / e;
        }
    FitResult f;
    f.family = Family::Poly;
    f.support = seq.support;
    f.poly_coefficients = solve_rational(std::move(a), seq.moments);
    return f;
}

inline double polynomial_pdf(const FitResult& f, double x) {
    double acc = 0.0;
    for (std::size_t k = f.poly_coefficients.size(); k-- > 0;) acc = acc * x + to_double(f.poly_coefficients[k]);
    return acc;
}

// ---------------------------------------------------------------------------
// summary statistics

struct SummaryStats {
    Rational variance;
    double skewness{0};
    double kurtosis_raw{0};     ///< mu4 / sigma^4
    double kurtosis_excess{0};  ///< mu4 / sigma^4 - 3
    std::array<double, 2> mode_interval{0, 0};
};

inline SummaryStats summary_stats(const MomentSequence& seq) {
    if (seq.order() < 2) throw std::invalid_argument("summary_stats: need at least two moments");
    const auto& z = seq.moments;
    const Rational m1 = z[1];
    SummaryStats s;
    s.variance = z[2] - m1 * m1;
    const double sigma = std::sqrt(to_double(s.variance));
    const double half_width = std::sqrt(3.0) * sigma;
    s.mode_interval = {to_double(m1) - half_width, to_double(m1) + half_width};
    if (seq.order() >= 4) {
        const Rational c3 = z[3] - 3 * m1 * z[2] + 2 * m1 * m1 * m1;
        const Rational c4 = z[4] - 4 * m1 * z[3] + 6 * m1 * m1 * z[2] - 3 * m1 * m1 * m1 * m1;
        s.skewness = to_double(c3) / std::pow(sigma, 3);
        s.kurtosis_raw = to_double(c4 / (s.variance * s.variance));
        s.kurtosis_excess = s.kurtosis_raw - 3.0;
    }
    return s;
}

/// Pearson correlation from first/second moments and the cross moment E[XY].
inline double correlation(const Rational& ex, const Rational& exx, const Rational& ey, const Rational& eyy,
                          const Rational& exy) {
    const Rational vx = exx - ex * ex;
    const Rational vy = eyy - ey * ey;
    if (vx <= 0 || vy <= 0) throw std::domain_error("correlation: zero variance");
    return to_double(exy - ex * ey) / std::sqrt(to_double(vx) * to_double(vy));
}

/// Squared correlation, exactly.
inline Rational correlation_squared(const Rational& ex, const Rational& exx, const Rational& ey, const Rational& eyy,
                                    const Rational& exy) {
    const Rational cov = exy - ex * ey;
    return cov * cov / ((exx - ex * ex) * (eyy - ey * ey));
}

inline double beta_mode(double a, double b) {
    if (!(a > 1 && b > 1)) throw std::domain_error("beta_mode: needs a, b > 1");
    return (a - 1) / (a + b - 2);
}

}  // namespace hsdet
