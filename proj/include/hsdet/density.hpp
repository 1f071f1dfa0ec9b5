#pragma once
/**
 * @file density.hpp
 * @brief 4x4 two-qubit / two-rebit density-matrix primitives.
 *
 * Everything here is templated on the entry type so the same code runs on
 * double (sampling), std::complex<double> (complex scenarios) and Rational
 * (exact golden checks). Subsystem ordering is |a alpha> with index
 * 2*a + alpha; the partial transpose acts on the second factor, i.e. it
 * transposes each 2x2 block in place.
 */
#include "hsdet/rational.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace hsdet {

enum class Scenario {
    Real9,          ///< generic two-rebit set, 9-dim
    Real8Rho34Zero, ///< rho_34 = rho_43 = 0, 8-dim
    Mixed10,        ///< real except rho_34 = conj(rho_43) complex, 10-dim
    Complex15,      ///< generic two-qubit set, 15-dim
    BoundaryRank3,  ///< rank-3 two-rebit boundary states, 8-dim
};

inline std::string_view scenario_name(Scenario s) {
    switch (s) {
        case Scenario::Real9: return "real-9d";
        case Scenario::Real8Rho34Zero: return "real-8d";
        case Scenario::Mixed10: return "mixed-10d";
        case Scenario::Complex15: return "complex-15d";
        case Scenario::BoundaryRank3: return "boundary-rank3";
    }
    return "unknown";
}

inline Scenario parse_scenario(std::string_view name) {
    for (auto s : {Scenario::Real9, Scenario::Real8Rho34Zero, Scenario::Mixed10,
                   Scenario::Complex15, Scenario::BoundaryRank3}) {
        if (scenario_name(s) == name) return s;
    }
    if (name == "real-8d-rho34=0") return Scenario::Real8Rho34Zero;
    if (name == "mixed-10d-rho34-complex") return Scenario::Mixed10;
    throw std::invalid_argument("unknown scenario: " + std::string(name));
}

inline bool scenario_is_complex(Scenario s) {
    return s == Scenario::Mixed10 || s == Scenario::Complex15;
}

template <class T> struct is_complex : std::false_type {};
template <class T> struct is_complex<std::complex<T>> : std::true_type {};
template <class T> inline constexpr bool is_complex_v = is_complex<T>::value;

template <class T> T conj_of(const T& x) {
    if constexpr (is_complex_v<T>) return std::conj(x);
    else return x;
}

template <class T> auto real_of(const T& x) {
    if constexpr (is_complex_v<T>) return x.real();
    else return x;
}

template <class T> double magnitude(const T& x) {
    if constexpr (is_complex_v<T>) return std::abs(x);
    else if constexpr (std::is_same_v<T, Rational>) return std::fabs(to_double(x));
    else return std::fabs(static_cast<double>(x));
}

/// Dense row-major 4x4 matrix.
template <class T>
struct Mat4 {
    std::array<T, 16> a{};

    T& operator()(int i, int j) { return a[static_cast<std::size_t>(4 * i + j)]; }
    const T& operator()(int i, int j) const { return a[static_cast<std::size_t>(4 * i + j)]; }

    static Mat4 identity() {
        Mat4 m;
        for (int i = 0; i < 4; ++i) m(i, i) = T(1);
        return m;
    }

    static Mat4 diagonal(const std::array<T, 4>& d) {
        Mat4 m;
        for (int i = 0; i < 4; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
        return m;
    }

    friend Mat4 operator*(const Mat4& x, const Mat4& y) {
        Mat4 r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                T s = T(0);
                for (int k = 0; k < 4; ++k) s += x(i, k) * y(k, j);
                r(i, j) = s;
            }
        return r;
    }
    friend Mat4 operator-(const Mat4& x, const Mat4& y) {
        Mat4 r;
        for (std::size_t k = 0; k < 16; ++k) r.a[k] = x.a[k] - y.a[k];
        return r;
    }
    friend Mat4 operator+(const Mat4& x, const Mat4& y) {
        Mat4 r;
        for (std::size_t k = 0; k < 16; ++k) r.a[k] = x.a[k] + y.a[k];
        return r;
    }
    friend Mat4 operator*(const Mat4& x, const T& s) {
        Mat4 r = x;
        for (auto& v : r.a) v *= s;
        return r;
    }
    friend bool operator==(const Mat4& x, const Mat4& y) { return x.a == y.a; }

    [[nodiscard]] Mat4 adjoint() const {
        Mat4 r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) r(i, j) = conj_of((*this)(j, i));
        return r;
    }

    [[nodiscard]] T trace() const { return a[0] + a[5] + a[10] + a[15]; }
};

/// Determinant of a k x k principal submatrix by Laplace expansion (k <= 4).
template <class T>
T principal_determinant(const Mat4<T>& m, std::span<const int> idx) {
    const std::size_t k = idx.size();
    if (k == 1) return m(idx[0], idx[0]);
    if (k == 2) return m(idx[0], idx[0]) * m(idx[1], idx[1]) - m(idx[0], idx[1]) * m(idx[1], idx[0]);
    T det = T(0);
    std::array<int, 4> rest{};
    for (std::size_t c = 0; c < k; ++c) {
        // minor on rows idx[1..], columns idx without c
        // general (non-principal) cofactor: build column set
        std::size_t n = 0;
        for (std::size_t j = 0; j < k; ++j)
            if (j != c) rest[n++] = idx[j];
        T sub;
        if (k == 3) {
            sub = m(idx[1], rest[0]) * m(idx[2], rest[1]) - m(idx[1], rest[1]) * m(idx[2], rest[0]);
        } else {
            // k == 4: 3x3 determinant on rows idx[1..3], columns rest[0..2]
            const int r1 = idx[1], r2 = idx[2], r3 = idx[3];
            sub = m(r1, rest[0]) * (m(r2, rest[1]) * m(r3, rest[2]) - m(r2, rest[2]) * m(r3, rest[1])) -
                  m(r1, rest[1]) * (m(r2, rest[0]) * m(r3, rest[2]) - m(r2, rest[2]) * m(r3, rest[0])) +
                  m(r1, rest[2]) * (m(r2, rest[0]) * m(r3, rest[1]) - m(r2, rest[1]) * m(r3, rest[0]));
        }
        T term = m(idx[0], idx[c]) * sub;
        if (c % 2 == 0) det += term;
        else det -= term;
    }
    return det;
}

/// Full 4x4 determinant by cofactor expansion; exact for Rational entries.
template <class T>
T det4(const Mat4<T>& m) {
    static constexpr std::array<int, 4> all{0, 1, 2, 3};
    return principal_determinant(m, std::span<const int>(all));
}

/// A 4x4 Hermitian unit-trace matrix tagged with the scenario it belongs to.
template <class T>
struct BasicDensityMatrix {
    Mat4<T> entries;
    Scenario scenario{Scenario::Real9};

    T& operator()(int i, int j) { return entries(i, j); }
    const T& operator()(int i, int j) const { return entries(i, j); }
};

using RealDensity = BasicDensityMatrix<double>;
using ComplexDensity = BasicDensityMatrix<std::complex<double>>;
using ExactDensity = BasicDensityMatrix<Rational>;

template <class T>
bool is_hermitian(const Mat4<T>& m, double tol = 1e-12) {
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j)
            if (magnitude(T(m(i, j) - conj_of(m(j, i)))) > tol) return false;
    return true;
}

/// Checks the structural invariants (Hermitian, unit trace, scenario zeros).
template <class T>
void validate(const BasicDensityMatrix<T>& rho, double tol = 1e-12) {
    if (!is_hermitian(rho.entries, tol)) throw std::invalid_argument("density matrix is not Hermitian");
    if (magnitude(T(rho.entries.trace() - T(1))) > tol)
        throw std::invalid_argument("density matrix trace differs from 1");
    if (rho.scenario == Scenario::Real8Rho34Zero && (rho(2, 3) != T(0) || rho(3, 2) != T(0)))
        throw std::invalid_argument("real-8d state with nonzero rho_34");
}

template <class T>
Mat4<T> partial_transpose(const Mat4<T>& m) {
    Mat4<T> r;
    for (int a = 0; a < 2; ++a)
        for (int al = 0; al < 2; ++al)
            for (int b = 0; b < 2; ++b)
                for (int be = 0; be < 2; ++be) r(2 * a + al, 2 * b + be) = m(2 * a + be, 2 * b + al);
    return r;
}

template <class T>
BasicDensityMatrix<T> partial_transpose(const BasicDensityMatrix<T>& rho) {
    return {partial_transpose(rho.entries), rho.scenario};
}

/// Real part of det(rho); the imaginary part of a Hermitian determinant is
/// round-off.
template <class T>
auto determinant(const Mat4<T>& m) {
    return real_of(det4(m));
}

template <class T>
auto determinant(const BasicDensityMatrix<T>& rho) {
    return determinant(rho.entries);
}

/// 1-based row set, as in rho_{ij} notation; must be nonempty and duplicate-free.
template <class T>
auto principal_minor(const Mat4<T>& m, std::initializer_list<int> rows_one_based) {
    std::array<int, 4> idx{};
    std::size_t n = 0;
    for (int r : rows_one_based) {
        if (r < 1 || r > 4) throw std::invalid_argument("principal_minor: index out of range");
        if (n == 4) throw std::invalid_argument("principal_minor: too many indices");
        for (std::size_t k = 0; k < n; ++k)
            if (idx[k] == r - 1) throw std::invalid_argument("principal_minor: duplicate index");
        idx[n++] = r - 1;
    }
    if (n == 0) throw std::invalid_argument("principal_minor: empty index set");
    std::sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n));
    return real_of(principal_determinant(m, std::span<const int>(idx.data(), n)));
}

template <class T>
auto principal_minor(const BasicDensityMatrix<T>& rho, std::initializer_list<int> rows_one_based) {
    return principal_minor(rho.entries, rows_one_based);
}

template <class T>
auto commutator_determinant(const BasicDensityMatrix<T>& rho) {
    const auto pt = partial_transpose(rho.entries);
    return determinant(Mat4<T>(rho.entries * pt - pt * rho.entries));
}

struct Purity {
    double purity;
    double participation_ratio;
};

/// Tr(rho^2) and its reciprocal.
template <class T>
Purity purity(const BasicDensityMatrix<T>& rho) {
    double p = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const T& x = rho(i, j);
            if constexpr (is_complex_v<T>) p += std::norm(x);
            else if constexpr (std::is_same_v<T, Rational>) p += to_double(x * x);
            else p += x * x;
        }
    return {p, 1.0 / p};
}

template <class T>
auto exact_purity(const BasicDensityMatrix<T>& rho) {
    T p = T(0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) p += rho(i, j) * conj_of(rho(j, i));
    return p;
}

/// Builds a density matrix from a row-major list of 16 entries.
template <class T>
BasicDensityMatrix<T> make_density(std::span<const T> values, Scenario scenario) {
    if (values.size() != 16) throw std::invalid_argument("make_density: need 16 entries");
    BasicDensityMatrix<T> rho;
    std::copy(values.begin(), values.end(), rho.entries.a.begin());
    rho.scenario = scenario;
    return rho;
}

inline RealDensity maximally_mixed() {
    RealDensity rho;
    rho.entries = Mat4<double>::diagonal({0.25, 0.25, 0.25, 0.25});
    return rho;
}

inline ExactDensity maximally_mixed_exact() {
    ExactDensity rho;
    const Rational q(1, 4);
    rho.entries = Mat4<Rational>::diagonal({q, q, q, q});
    return rho;
}

/// Real Bell projector |Phi+><Phi+|.
inline RealDensity bell_phi_plus() {
    RealDensity rho;
    rho(0, 0) = rho(0, 3) = rho(3, 0) = rho(3, 3) = 0.5;
    return rho;
}

inline ExactDensity bell_phi_plus_exact() {
    ExactDensity rho;
    const Rational h(1, 2);
    rho(0, 0) = rho(0, 3) = rho(3, 0) = rho(3, 3) = h;
    return rho;
}

/// The two-rebit state minimising det(rho) det(rho^PT) = -1/110592.
inline RealDensity extremal_product_state() {
    const double s2 = std::sqrt(2.0);
    const double s3 = std::sqrt(3.0);
    const double off = 1.0 / (6.0 * s2);
    RealDensity rho;
    const double v[16] = {
        1.0 / 6, -off, off, (s3 - 1.0) / 12,
        -off, 1.0 / 3, (-1.0 - s3) / 12, -off,
        off, (-1.0 - s3) / 12, 1.0 / 3, off,
        (s3 - 1.0) / 12, -off, off, 1.0 / 6,
    };
    std::copy(std::begin(v), std::end(v), rho.entries.a.begin());
    return rho;
}

// ---------------------------------------------------------------------------
// Spectral decomposition (cyclic Jacobi; Hermitian rotations for complex data)

struct SpectralData {
    std::array<double, 4> eigenvalues{};  ///< descending
    double determinant{0};
    double rank3_product{0};  ///< product of the three largest eigenvalues
};

template <class T>
struct EigenSystem {
    std::array<double, 4> values{};  ///< descending
    Mat4<T> vectors;                 ///< column k belongs to values[k]
};

/// Cyclic Jacobi diagonalisation of a Hermitian 4x4 matrix.
template <class T>
EigenSystem<T> eigen_hermitian(const Mat4<T>& input, double tol = 1e-12) {
    if (!is_hermitian(input, 1e-9)) throw std::invalid_argument("eigen_hermitian: input is not Hermitian");
    Mat4<T> a = input;
    Mat4<T> v = Mat4<T>::identity();
    double scale = 0.0;
    for (const auto& x : a.a) scale = std::max(scale, magnitude(x));
    if (scale == 0.0) scale = 1.0;

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) off += magnitude(a(p, q)) * magnitude(a(p, q));
        if (std::sqrt(off) <= tol * 1e-3 * scale) break;

        for (int p = 0; p < 3; ++p) {
            for (int q = p + 1; q < 4; ++q) {
                const double apq_abs = magnitude(a(p, q));
                if (apq_abs <= 1e-300 || apq_abs <= 1e-18 * scale) continue;
                const double app = real_of(a(p, p));
                const double aqq = real_of(a(q, q));
                // phase so the rotated pivot is real: a_pq = |a_pq| e^{i phi}
                T phase = T(1);
                if constexpr (is_complex_v<T>) phase = a(p, q) / apq_abs;
                else phase = a(p, q) > 0 ? 1.0 : -1.0;
                const double theta = (aqq - app) / (2.0 * apq_abs);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // G acts on columns p, q: [c, s*phase; -s*conj(phase), c]
                const T sp = phase * s;
                const T spc = conj_of(phase) * s;
                for (int k = 0; k < 4; ++k) {
                    const T akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * c - akq * spc;
                    a(k, q) = akp * sp + akq * c;
                }
                for (int k = 0; k < 4; ++k) {
                    const T apk = a(p, k), aqk = a(q, k);
                    a(p, k) = apk * c - aqk * sp;
                    a(q, k) = apk * spc + aqk * c;
                }
                a(p, q) = T(0);
                a(q, p) = T(0);
                for (int k = 0; k < 4; ++k) {
                    const T vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * c - vkq * spc;
                    v(k, q) = vkp * sp + vkq * c;
                }
            }
        }
    }

    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return real_of(a(x, x)) > real_of(a(y, y)); });
    EigenSystem<T> out;
    for (int k = 0; k < 4; ++k) {
        out.values[static_cast<std::size_t>(k)] = real_of(a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]));
        for (int r = 0; r < 4; ++r) out.vectors(r, k) = v(r, order[static_cast<std::size_t>(k)]);
    }
    return out;
}

template <class T>
std::array<double, 4> eigenvalues(const Mat4<T>& m) {
    return eigen_hermitian(m).values;
}

template <class T>
SpectralData eigenvalues_sym4(const BasicDensityMatrix<T>& rho) {
    SpectralData s;
    s.eigenvalues = eigenvalues(rho.entries);
    s.determinant = s.eigenvalues[0] * s.eigenvalues[1] * s.eigenvalues[2] * s.eigenvalues[3];
    s.rank3_product = s.eigenvalues[0] * s.eigenvalues[1] * s.eigenvalues[2];
    return s;
}

inline constexpr double kPsdTolerance = 1e-10;

template <class T>
bool is_psd(const Mat4<T>& m, double tol = kPsdTolerance) {
    return eigenvalues(m)[3] >= -tol;
}

template <class T>
bool is_psd(const BasicDensityMatrix<T>& rho, double tol = kPsdTolerance) {
    return is_psd(rho.entries, tol);
}

/// Peres-Horodecki: separable iff rho^PT has no negative eigenvalue.
template <class T>
bool ppt_separable(const BasicDensityMatrix<T>& rho, double tol = kPsdTolerance) {
    return is_psd(partial_transpose(rho.entries), tol);
}

/// Determinant form of the PPT test; for 4x4 states rho^PT has at most one
/// negative eigenvalue, so the sign of its determinant decides separability.
template <class T>
bool ppt_separable_by_determinant(const BasicDensityMatrix<T>& rho, double tol = kPsdTolerance) {
    return determinant(partial_transpose(rho.entries)) >= -tol;
}

/// Fast PSD test for real symmetric / Hermitian 4x4 by pivoted LDL^H;
/// strict positivity is not required, zero pivots with zero columns pass.
template <class T>
bool is_psd_ldl(const Mat4<T>& m, double tol = 1e-14) {
    Mat4<T> a = m;
    for (int k = 0; k < 4; ++k) {
        const double d = real_of(a(k, k));
        if (d < -tol) return false;
        if (d <= tol) {
            for (int j = k + 1; j < 4; ++j)
                if (magnitude(a(j, k)) > std::sqrt(tol)) return false;
            continue;
        }
        for (int i = k + 1; i < 4; ++i) {
            const T l = a(i, k) / d;
            for (int j = k + 1; j <= i; ++j) a(i, j) -= l * conj_of(a(j, k));
        }
        for (int i = k + 1; i < 4; ++i)
            for (int j = k + 1; j < i; ++j) a(j, i) = conj_of(a(i, j));
    }
    return true;
}

}  // namespace hsdet
