#pragma once
/**
 * @file bloore.hpp
 * @brief Correlation (Bloore) coordinates of real two-rebit states, the
 * D-vine partial-correlation map, and the polynomials behind det(rho^PT),
 * det(rho) and the {1,2,3} minor of rho^PT.
 */
#include "hsdet/density.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace hsdet {

struct Correlations {
    double z12{0}, z13{0}, z14{0}, z23{0}, z24{0}, z34{0};
};

struct PartialCorrelations {
    double z13_2{0}, z24_3{0}, z14_23{0};
};

struct BlooreCoords {
    std::array<double, 4> diagonal{0.25, 0.25, 0.25, 0.25};
    Correlations z;
    PartialCorrelations partial;
    double mu{1.0};

    [[nodiscard]] double nu() const { return mu * mu; }
    [[nodiscard]] double xi() const { return std::log(mu); }
};

inline double mu_of(const std::array<double, 4>& d) { return std::sqrt(d[0] * d[3] / (d[1] * d[2])); }

namespace detail {
inline double comp(double z) { return std::sqrt(std::max(0.0, 1.0 - z * z)); }
inline double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }
}  // namespace detail

struct VineImage {
    double z13, z24, z14;
};

/// D-vine on the path 1-2-3-4 with s(z) = +sqrt(1 - z^2). Relative to the
/// form with sqrt(z^2 - 1) factors, this is the same map after the
/// reflection (z13|2, z24|3) -> (-z13|2, -z24|3).
inline VineImage partials_to_correlations(double z12, double z23, double z34, double p13, double p24, double p14) {
    using detail::comp;
    const double s12 = comp(z12), s23 = comp(z23), s34 = comp(z34);
    VineImage out{};
    out.z13 = z12 * z23 + s12 * s23 * p13;
    out.z24 = z23 * z34 + s23 * s34 * p24;
    out.z14 = z12 * z23 * z34 + s12 * s23 * p13 * z34 + z12 * s23 * s34 * p24 +
              s12 * s34 * comp(p13) * comp(p24) * p14 - s12 * z23 * s34 * p13 * p24;
    return out;
}

inline PartialCorrelations correlations_to_partials(const Correlations& z) {
    using detail::comp;
    using detail::safe_div;
    const double s12 = comp(z.z12), s23 = comp(z.z23), s34 = comp(z.z34);
    PartialCorrelations p;
    p.z13_2 = safe_div(z.z13 - z.z12 * z.z23, s12 * s23);
    p.z24_3 = safe_div(z.z24 - z.z23 * z.z34, s23 * s34);
    const double rest = z.z12 * z.z23 * z.z34 + s12 * s23 * p.z13_2 * z.z34 + z.z12 * s23 * s34 * p.z24_3 -
                        s12 * z.z23 * s34 * p.z13_2 * p.z24_3;
    p.z14_23 = safe_div(z.z14 - rest, s12 * s34 * comp(p.z13_2) * comp(p.z24_3));
    return p;
}

inline BlooreCoords to_bloore(const RealDensity& rho) {
    BlooreCoords c;
    for (int i = 0; i < 4; ++i) {
        c.diagonal[static_cast<std::size_t>(i)] = rho(i, i);
        if (!(rho(i, i) > 0.0)) throw std::domain_error("to_bloore: diagonal entry must be positive");
    }
    auto corr = [&](int i, int j) {
        return rho(i, j) / std::sqrt(rho(i, i) * rho(j, j));
    };
    c.z = {corr(0, 1), corr(0, 2), corr(0, 3), corr(1, 2), corr(1, 3), corr(2, 3)};
    c.partial = correlations_to_partials(c.z);
    c.mu = mu_of(c.diagonal);
    return c;
}

inline RealDensity from_bloore(const BlooreCoords& c) {
    RealDensity rho;
    const auto& d = c.diagonal;
    const std::array<std::array<double, 4>, 4> zm{{{1.0, c.z.z12, c.z.z13, c.z.z14},
                                                   {c.z.z12, 1.0, c.z.z23, c.z.z24},
                                                   {c.z.z13, c.z.z23, 1.0, c.z.z34},
                                                   {c.z.z14, c.z.z24, c.z.z34, 1.0}}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            rho(i, j) = i == j ? d[static_cast<std::size_t>(i)]
                               : zm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                                     std::sqrt(d[static_cast<std::size_t>(i)] * d[static_cast<std::size_t>(j)]);
    rho.scenario = Scenario::Real9;
    return rho;
}

/// Coordinates from a diagonal point and vine partials.
inline BlooreCoords bloore_from_partials(const std::array<double, 4>& diagonal, double z12, double z23, double z34,
                                         const PartialCorrelations& p) {
    BlooreCoords c;
    c.diagonal = diagonal;
    const auto v = partials_to_correlations(z12, z23, z34, p.z13_2, p.z24_3, p.z14_23);
    c.z = {z12, v.z13, v.z14, z23, v.z24, z34};
    c.partial = p;
    c.mu = mu_of(diagonal);
    return c;
}

/// P(mu, z) with det(rho^PT) = (rho22 rho33)^2 P.
inline double pt_polynomial(double mu, const Correlations& c) {
    const double z12 = c.z12, z13 = c.z13, z14 = c.z14, z23 = c.z23, z24 = c.z24, z34 = c.z34;
    const double v = (z34 * z34 - 1) * z12 * z12 - 2 * (z14 * z23 + z13 * z24) * z34 * z12 + z14 * z14 * z23 * z23 -
                     z24 * z24 - z34 * z34;
    const double w = -2 * z13 * z14 * z23 * z24 + z13 * z13 * (z24 * z24 - 1) + 1;
    const double mu2 = mu * mu;
    return -z14 * z14 * mu2 * mu2 + 2 * z14 * (z12 * z13 + z24 * z34) * mu2 * mu + (v + w) * mu2 +
           2 * z23 * (z12 * z24 + z13 * z34) * mu - z23 * z23;
}

inline double pt_det_polynomial(const BlooreCoords& c) {
    const double d23 = c.diagonal[1] * c.diagonal[2];
    return d23 * d23 * pt_polynomial(c.mu, c.z);
}

/// det of the unit-diagonal correlation matrix.
inline double corr_det_polynomial(const Correlations& c) {
    Mat4<double> z = Mat4<double>::identity();
    auto put = [&](int i, int j, double v) { z(i, j) = z(j, i) = v; };
    put(0, 1, c.z12);
    put(0, 2, c.z13);
    put(0, 3, c.z14);
    put(1, 2, c.z23);
    put(1, 3, c.z24);
    put(2, 3, c.z34);
    return det4(z);
}

inline double corr_det_polynomial(const BlooreCoords& c) { return corr_det_polynomial(c.z); }

/// |Jacobian| of the partial-correlation change of variables; z14|23 does not enter.
inline double jacobian_weight(double z12, double z23, double z34, double p13, double p24) {
    using detail::comp;
    return (1 - z12 * z12) * (1 - z23 * z23) * (1 - z34 * z34) * comp(p13) * comp(p24);
}

/// Q(mu, z) = mu^2 z14^2 - 2 mu z12 z13 z14 + z13^2 + z12^2 - 1.
inline double minor3_q(double mu, const Correlations& c) {
    return mu * mu * c.z14 * c.z14 - 2 * mu * c.z12 * c.z13 * c.z14 + c.z13 * c.z13 + c.z12 * c.z12 - 1;
}

/// rho11 rho22 rho33 Q; equals minus the {1,2,3} principal minor of rho^PT.
inline double minor3_polynomial(const BlooreCoords& c) {
    return c.diagonal[0] * c.diagonal[1] * c.diagonal[2] * minor3_q(c.mu, c.z);
}

}  // namespace hsdet
