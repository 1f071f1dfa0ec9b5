#pragma once
/**
 * @file faure.hpp
 * @brief Plain (unscrambled) Faure low-discrepancy sequence and a QMC
 * integrator over boxes.
 */
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace hsdet {

inline bool is_prime(unsigned n) {
    if (n < 2) return false;
    for (unsigned p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

inline unsigned smallest_prime_at_least(unsigned n) {
    unsigned p = n < 2 ? 2 : n;
    while (!is_prime(p)) ++p;
    return p;
}

inline constexpr int kFaureDigits = 32;

struct FaureState {
    unsigned dimension{1};
    unsigned base{2};
    std::uint64_t index{0};
    std::vector<std::vector<std::uint64_t>> pascal_mod;  ///< C(k, i) mod base, k,i < kFaureDigits

    explicit FaureState(unsigned d) : dimension(d), base(smallest_prime_at_least(d)) {
        if (d == 0) throw std::invalid_argument("FaureState: dimension must be >= 1");
        pascal_mod.assign(kFaureDigits, std::vector<std::uint64_t>(kFaureDigits, 0));
        for (int k = 0; k < kFaureDigits; ++k) {
            pascal_mod[k][0] = 1;
            for (int i = 1; i <= k; ++i)
                pascal_mod[k][i] = (pascal_mod[k - 1][i - 1] + (i < k ? pascal_mod[k - 1][i] : 0)) % base;
        }
    }
};

/// Point number `index` of the sequence. Coordinate j applies the j-th power
/// of the Pascal matrix (entries C(k,i) j^(k-i) mod base) to the base-b
/// digits of the index before the radical inverse.
inline std::vector<double> faure_point(const FaureState& state, std::uint64_t index) {
    const std::uint64_t b = state.base;
    std::array<std::uint64_t, kFaureDigits> digits{};
    int n_digits = 0;
    for (std::uint64_t v = index; v > 0; v /= b) {
        if (n_digits == kFaureDigits) throw std::overflow_error("faure_point: index exceeds digit buffer");
        digits[static_cast<std::size_t>(n_digits++)] = v % b;
    }
    std::vector<double> point(state.dimension, 0.0);
    const double inv_b = 1.0 / static_cast<double>(b);
    for (unsigned j = 0; j < state.dimension; ++j) {
        double scale = inv_b;
        double x = 0.0;
        for (int i = 0; i < n_digits; ++i) {
            std::uint64_t y = 0;
            std::uint64_t jpow = 1;  // j^(k-i) mod b
            for (int k = i; k < n_digits; ++k) {
                y = (y + state.pascal_mod[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] * jpow % b *
                             digits[static_cast<std::size_t>(k)]) % b;
                jpow = jpow * j % b;
            }
            x += static_cast<double>(y) * scale;
            scale *= inv_b;
        }
        point[j] = x;
    }
    return point;
}

/// Advances the state's counter and returns the next point.
inline std::vector<double> next_point(FaureState& state) { return faure_point(state, state.index++); }

/// QMC estimate of the integral of f over the box [lo_j, hi_j] from points
/// skip .. skip+n-1 of the Faure sequence.
inline double qmc_integrate(const std::function<double(const std::vector<double>&)>& f,
                            const std::vector<double>& lo, const std::vector<double>& hi, std::uint64_t n,
                            std::uint64_t skip = 1) {
    if (lo.size() != hi.size() || lo.empty()) throw std::invalid_argument("qmc_integrate: bad box");
    if (n == 0) throw std::invalid_argument("qmc_integrate: need at least one point");
    FaureState state(static_cast<unsigned>(lo.size()));
    double volume = 1.0;
    for (std::size_t j = 0; j < lo.size(); ++j) volume *= hi[j] - lo[j];
    double sum = 0.0, comp = 0.0;
    std::vector<double> x(lo.size());
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto u = faure_point(state, skip + i);
        for (std::size_t j = 0; j < x.size(); ++j) x[j] = lo[j] + (hi[j] - lo[j]) * u[j];
        const double v = f(x);
        const double t = sum + v;
        comp += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    return volume * (sum + comp) / static_cast<double>(n);
}

}  // namespace hsdet
