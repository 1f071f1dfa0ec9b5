#pragma once
/**
 * @file commands.hpp
 * @brief Payload builders behind the command-line tool. Each function is a
 * pure function of its arguments and returns JSON or a CSV table.
 */
#include "hsdet/acceptance.hpp"
#include "hsdet/json_io.hpp"

#include <string>
#include <vector>

namespace hsdet {

/// Exact moment sequence for a kind, zeta'_0..zeta'_order.
/// pt-det uses the tabulated constants (engine-checked through m = 5), product
/// uses the engine for m <= 2 and the ratio table for m <= 6, minor3 uses the engine.
inline MomentSequence default_sequence(MomentKind kind, int order) {
    if (order < 1) throw std::invalid_argument("moment order must be >= 1");
    std::vector<Rational> z{Rational(1)};
    switch (kind) {
        case MomentKind::PtDet: {
            if (order > 9) throw std::invalid_argument("pt-det: only 9 exact moments are available");
            const auto g = golden_moment_table();
            z.assign(g.begin(), g.begin() + order + 1);
            return make_sequence(pt_det_support(), z, true, "pt-det");
        }
        case MomentKind::Product:
            if (order > 6) throw std::invalid_argument("product: only 6 exact moments are available");
            for (int m = 1; m <= order; ++m)
                z.push_back(product_moment_ratio(m) * det_moment_closed_form(2 * m, Ensemble::Real));
            return make_sequence(product_support(), z, true, "product");
        case MomentKind::Minor3:
            if (order > max_supported_order(MomentKind::Minor3))
                throw std::invalid_argument("minor3: engine supports m <= " +
                                            std::to_string(max_supported_order(MomentKind::Minor3)));
            for (int m = 1; m <= order; ++m) z.push_back(exact_moment(m, MomentKind::Minor3).value);
            // the engine's minor carries the displayed sign, the negated {1,2,3} minor of rho^PT
            return make_sequence({-minor3_support().hi, -minor3_support().lo}, z, true, "minor3");
    }
    throw std::invalid_argument("unknown kind");
}

inline Json exact_payload(MomentKind kind, int m) {
    if (m < 1 || m > max_supported_order(kind))
        throw std::invalid_argument("--m must be in 1.." + std::to_string(max_supported_order(kind)) + " for " +
                                    std::string(kind_name(kind)));
    const auto f = intermediate_function(m, kind);
    return to_json(f, assemble_moment(f));
}

enum class ReconMethod { Mnatsakanov, ProvostHa, Poly };

inline ReconMethod parse_recon_method(std::string_view s) {
    if (s == "mnatsakanov") return ReconMethod::Mnatsakanov;
    if (s == "provost-ha") return ReconMethod::ProvostHa;
    if (s == "poly9" || s == "poly") return ReconMethod::Poly;
    throw std::invalid_argument("unknown method: " + std::string(s));
}

inline std::string_view recon_method_name(ReconMethod m) {
    switch (m) {
        case ReconMethod::Mnatsakanov: return "mnatsakanov";
        case ReconMethod::ProvostHa: return "provost-ha";
        case ReconMethod::Poly: return "poly9";
    }
    return "unknown";
}

inline MomentSequence truncate(const MomentSequence& s, int K) {
    if (K > s.order()) throw std::invalid_argument("K = " + std::to_string(K) + " exceeds the " +
                                                   std::to_string(s.order()) + " available moments");
    MomentSequence t = s;
    t.moments.resize(static_cast<std::size_t>(K) + 1);
    return t;
}

/// {method, K, estimate, params, moment_ratios}; estimate is P(X >= 0).
inline Json recon_payload(const MomentSequence& seq, ReconMethod method, int K) {
    if (K < 1) throw std::invalid_argument("K must be >= 1");
    const auto s = truncate(seq, K);
    const auto mapped = affine_map_moments(s);
    const Rational x0 = map_point(s.support, Rational(0));
    Json out{{"method", std::string(recon_method_name(method))}, {"K", K}};
    switch (method) {
        case ReconMethod::Mnatsakanov: {
            const Rational cdf = mnatsakanov_cdf_exact(mapped, x0, K);
            out["estimate"] = to_double(1 - cdf);
            out["params"] = {{"cdf_at_zero", to_string(cdf)}, {"threshold", to_string(x0)}};
            out["moment_ratios"] = Json::array();
            break;
        }
        case ReconMethod::ProvostHa: {
            if (K < 2) throw std::invalid_argument("provost-ha needs K >= 2");
            const auto base = beta_fit_two_moments(mapped);
            const auto r = provost_ha_density(mapped, base, K, x0);
            out["estimate"] = r.separability_estimate;
            Json p = params_json(base);
            p["lambda"] = rationals_to_json(r.lambda);
            p["power_coefficients"] = rationals_to_json(r.power_coeffs);
            out["params"] = p;
            out["moment_ratios"] = moment_ratios(mapped, base);
            break;
        }
        case ReconMethod::Poly: {
            const auto f = naive_polynomial_density(s);
            out["estimate"] = tail_probability(f, Rational(0));
            out["params"] = params_json(f);
            out["moment_ratios"] = Json::array();
            break;
        }
    }
    return out;
}

/// Fit of a two- or three-parameter family; `ln_params` (a, b, lambda) skips the fit.
inline FitResult fit_family(const MomentSequence& seq, Family family, const std::vector<double>& ln_params = {}) {
    const auto mapped = affine_map_moments(seq);
    if (family == Family::Beta) return beta_fit_two_moments(mapped);
    if (family == Family::LibbyNovick) {
        if (ln_params.empty()) return libby_novick_fit(mapped);
        if (ln_params.size() != 3) throw std::invalid_argument("--params needs a,b,lambda");
        return libby_novick_params(ln_params[0], ln_params[1], ln_params[2]);
    }
    return naive_polynomial_density(seq);
}

inline Json fit_payload(const MomentSequence& seq, const FitResult& f) {
    const auto mapped = affine_map_moments(seq);
    Json out{{"family", std::string(family_name(f.family))}, {"K", seq.order()}, {"params", params_json(f)}};
    if (f.family == Family::Poly) {
        out["estimate"] = tail_probability(f, Rational(0));
        out["moment_ratios"] = Json::array();
    } else {
        out["estimate"] = tail_probability(f, map_point(seq.support, Rational(0)));
        out["moment_ratios"] = moment_ratios(mapped, f);
        if (f.family == Family::Beta && f.a > 1 && f.b > 1) out["mode"] = beta_mode(f.a, f.b);
    }
    return out;
}

inline Json rows_to_json(const std::vector<CheckRow>& rows) {
    Json a = Json::array();
    for (const auto& r : rows)
        a.push_back({{"criterion", r.criterion},
                     {"name", r.name},
                     {"expected", r.expected},
                     {"computed", r.computed},
                     {"pass", r.pass},
                     {"primary", r.primary}});
    return a;
}

inline Json report_to_json(const std::vector<EstimateReport>& reports) {
    Json a = Json::array();
    for (const auto& r : reports) a.push_back(to_json(r));
    return a;
}

inline CsvTable reports_to_csv(const std::vector<EstimateReport>& reports) {
    CsvTable t;
    t.header = {"functional", "k", "raw_moment", "standard_error", "sample_count", "acceptance_rate"};
    for (const auto& r : reports)
        for (std::size_t k = 0; k < r.raw_moments.size(); ++k)
            t.add({r.functional, std::to_string(k), format_double(r.raw_moments[k]), format_double(r.moment_errors[k]),
                   std::to_string(r.sample_count), format_double(r.acceptance_rate)});
    return t;
}

// ---------------------------------------------------------------------------
// figure data

inline constexpr int kGridPoints = 1001;

inline CsvTable figure_table(int fig) {
    const auto seq = default_sequence(MomentKind::PtDet, 9);
    const auto mapped = affine_map_moments(seq);
    const auto beta = beta_fit_two_moments(mapped);
    CsvTable t;
    auto grid = [](int i) { return static_cast<double>(i) / (kGridPoints - 1); };
    switch (fig) {
        case 1:
            t.header = {"y", "pdf"};
            for (int i = 0; i < kGridPoints; ++i)
                t.add({format_double(grid(i)), format_double(beta_pdf(beta.a, beta.b, grid(i)))});
            return t;
        case 2: {
            t.header = {"m", "ratio"};
            const auto r = moment_ratios(mapped, beta);
            for (std::size_t k = 0; k < r.size(); ++k) t.add({std::to_string(k + 1), format_double(r[k])});
            return t;
        }
        case 3: {
            t.header = {"K", "mnatsakanov", "provost_ha"};
            const Rational x0 = map_point(seq.support, Rational(0));
            for (int K = 2; K <= seq.order(); ++K) {
                const auto s = truncate(mapped, K);
                t.add({std::to_string(K), format_double(1.0 - mnatsakanov_cdf(s, x0, K)),
                       format_double(provost_ha_density(s, beta, K, x0).separability_estimate)});
            }
            return t;
        }
        case 4: {
            t.header = {"y", "beta_pdf", "ln_pdf"};
            const auto ln = libby_novick_params(3.7141606, 359.577737, 0.00064805);
            for (int i = 0; i < kGridPoints; ++i) {
                const double y = grid(i);
                t.add({format_double(y), format_double(beta_pdf(beta.a, beta.b, y)),
                       format_double(libby_novick(ln.a, ln.b, ln.lambda, y))});
            }
            return t;
        }
        case 5: {
            t.header = {"x", "pdf"};
            const auto f = naive_polynomial_density(seq);
            const double lo = to_double(seq.support.lo), hi = to_double(seq.support.hi);
            for (int i = 0; i < kGridPoints; ++i) {
                const double x = lo + (hi - lo) * grid(i);
                t.add({format_double(x), format_double(polynomial_pdf(f, x))});
            }
            return t;
        }
        default: throw std::invalid_argument("figure must be fig1..fig5");
    }
}

}  // namespace hsdet
