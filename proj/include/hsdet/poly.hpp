#pragma once
/**
 * @file poly.hpp
 * @brief Sparse multivariate polynomials over up to 12 variables with
 * exponents packed 5 bits each into a 64-bit key.
 *
 * Variables may be paired as (z, s) with s standing for sqrt(1 - z^2);
 * normalize_roots() rewrites s^2 as 1 - z^2 so every s exponent is 0 or 1.
 */
#include "hsdet/rational.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hsdet {

inline constexpr int kPolyVars = 12;
inline constexpr int kExpBits = 5;
inline constexpr unsigned kMaxExponent = (1U << kExpBits) - 1U;

using Monomial = std::uint64_t;

inline unsigned exponent_of(Monomial m, int var) {
    return static_cast<unsigned>((m >> (kExpBits * var)) & kMaxExponent);
}

inline Monomial monomial_var(int var, unsigned power = 1) {
    if (var < 0 || var >= kPolyVars) throw std::out_of_range("monomial_var: variable index");
    if (power > kMaxExponent) throw std::overflow_error("monomial_var: exponent too large");
    return static_cast<Monomial>(power) << (kExpBits * var);
}

inline Monomial with_exponent(Monomial m, int var, unsigned power) {
    const Monomial mask = static_cast<Monomial>(kMaxExponent) << (kExpBits * var);
    return (m & ~mask) | monomial_var(var, power);
}

/// Overflow-checked coefficient arithmetic for built-in integers; GMP types pass through.
template <class C>
struct CoeffOps {
    static C add(const C& a, const C& b) { return a + b; }
    static C mul(const C& a, const C& b) { return a * b; }
    static bool is_zero(const C& a) { return a == 0; }
};

template <class C>
    requires std::is_integral_v<C>
struct CoeffOps<C> {
    static C add(C a, C b) {
        C r;
        if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("SparsePoly: coefficient overflow");
        return r;
    }
    static C mul(C a, C b) {
        C r;
        if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("SparsePoly: coefficient overflow");
        return r;
    }
    static bool is_zero(C a) { return a == 0; }
};

template <class Coeff>
class SparsePoly {
public:
    using Ops = CoeffOps<Coeff>;
    using TermMap = std::unordered_map<Monomial, Coeff>;

    SparsePoly() = default;
    explicit SparsePoly(const Coeff& constant) { add_term(0, constant); }

    static SparsePoly variable(int var) {
        SparsePoly p;
        p.add_term(monomial_var(var), Coeff(1));
        return p;
    }

    /// Declares var_s as the square-root companion sqrt(1 - var_z^2).
    void set_root_pairs(std::vector<std::pair<int, int>> pairs) { root_pairs_ = std::move(pairs); }
    [[nodiscard]] const std::vector<std::pair<int, int>>& root_pairs() const { return root_pairs_; }

    /// Power of pi attached to the whole polynomial.
    int pi_power{0};

    [[nodiscard]] const TermMap& terms() const { return terms_; }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }
    [[nodiscard]] bool empty() const { return terms_.empty(); }

    void add_term(Monomial m, const Coeff& c) {
        if (Ops::is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second = Ops::add(it->second, c);
            if (Ops::is_zero(it->second)) terms_.erase(it);
        }
    }

    [[nodiscard]] Coeff coefficient(Monomial m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Coeff(0) : it->second;
    }

    [[nodiscard]] std::array<unsigned, kPolyVars> max_exponents() const {
        std::array<unsigned, kPolyVars> mx{};
        for (const auto& [m, c] : terms_)
            for (int v = 0; v < kPolyVars; ++v) mx[static_cast<std::size_t>(v)] = std::max(mx[static_cast<std::size_t>(v)], exponent_of(m, v));
        return mx;
    }

    friend SparsePoly operator+(const SparsePoly& a, const SparsePoly& b) {
        if (!a.empty() && !b.empty() && a.pi_power != b.pi_power)
            throw std::logic_error("SparsePoly: adding terms with different powers of pi");
        SparsePoly r = a;
        if (r.empty()) r.pi_power = b.pi_power;
        r.adopt_pairs(b);
        for (const auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }

    friend SparsePoly operator-(const SparsePoly& a, const SparsePoly& b) {
        if (!a.empty() && !b.empty() && a.pi_power != b.pi_power)
            throw std::logic_error("SparsePoly: adding terms with different powers of pi");
        SparsePoly r = a;
        if (r.empty()) r.pi_power = b.pi_power;
        r.adopt_pairs(b);
        for (const auto& [m, c] : b.terms_) r.add_term(m, Ops::mul(c, Coeff(-1)));
        return r;
    }

    friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
        const auto ma = a.max_exponents();
        const auto mb = b.max_exponents();
        for (int v = 0; v < kPolyVars; ++v)
            if (ma[static_cast<std::size_t>(v)] + mb[static_cast<std::size_t>(v)] > kMaxExponent)
                throw std::overflow_error("SparsePoly: exponent exceeds packed field");
        SparsePoly r;
        r.root_pairs_ = a.root_pairs_.empty() ? b.root_pairs_ : a.root_pairs_;
        r.pi_power = a.pi_power + b.pi_power;
        r.terms_.reserve(a.size() * b.size() / 4 + 16);
        // fields cannot carry into each other after the check above, so keys add
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) r.add_term(ka + kb, Ops::mul(ca, cb));
        r.normalize_roots();
        return r;
    }

    friend SparsePoly operator*(const SparsePoly& a, const Coeff& k) {
        SparsePoly r;
        r.root_pairs_ = a.root_pairs_;
        r.pi_power = a.pi_power;
        for (const auto& [m, c] : a.terms_) r.add_term(m, Ops::mul(c, k));
        return r;
    }

    friend bool operator==(const SparsePoly& a, const SparsePoly& b) { return a.terms_ == b.terms_; }

    /// Rewrites s^2 -> 1 - z^2 for every registered (z, s) pair until all s
    /// exponents are 0 or 1.
    void normalize_roots() {
        if (root_pairs_.empty()) return;
        bool dirty = true;
        while (dirty) {
            dirty = false;
            TermMap next;
            next.reserve(terms_.size());
            auto put = [&](Monomial m, const Coeff& c) {
                if (Ops::is_zero(c)) return;
                auto [it, inserted] = next.try_emplace(m, c);
                if (!inserted) {
                    it->second = Ops::add(it->second, c);
                    if (Ops::is_zero(it->second)) next.erase(it);
                }
            };
            for (const auto& [m, c] : terms_) {
                bool rewritten = false;
                for (const auto& [zv, sv] : root_pairs_) {
                    const unsigned se = exponent_of(m, sv);
                    if (se < 2) continue;
                    const unsigned ze = exponent_of(m, zv);
                    if (ze + 2 > kMaxExponent) throw std::overflow_error("SparsePoly: exponent exceeds packed field");
                    const Monomial base = with_exponent(m, sv, se - 2);
                    put(base, c);
                    put(with_exponent(base, zv, ze + 2), Ops::mul(c, Coeff(-1)));
                    rewritten = true;
                    dirty = true;
                    break;
                }
                if (!rewritten) put(m, c);
            }
            terms_ = std::move(next);
        }
    }

    [[nodiscard]] SparsePoly pow(unsigned e) const {
        SparsePoly r(Coeff(1));
        r.root_pairs_ = root_pairs_;
        for (unsigned i = 0; i < e; ++i) r = r * *this;
        return r;
    }

    /// Numeric evaluation at a point given as 12 variable values.
    [[nodiscard]] double evaluate(const std::array<double, kPolyVars>& x) const {
        double total = 0.0;
        for (const auto& [m, c] : terms_) {
            double t = coeff_to_double(c);
            for (int v = 0; v < kPolyVars; ++v) {
                const unsigned e = exponent_of(m, v);
                for (unsigned k = 0; k < e; ++k) t *= x[static_cast<std::size_t>(v)];
            }
            total += t;
        }
        return total;
    }

    template <class To>
    [[nodiscard]] SparsePoly<To> convert() const {
        SparsePoly<To> r;
        r.set_root_pairs(root_pairs_);
        r.pi_power = pi_power;
        for (const auto& [m, c] : terms_) {
            if constexpr (std::is_integral_v<Coeff> && !std::is_arithmetic_v<To>)
                r.add_term(m, To(static_cast<long>(c)));
            else
                r.add_term(m, To(c));
        }
        return r;
    }

private:
    static double coeff_to_double(const Coeff& c) {
        if constexpr (std::is_arithmetic_v<Coeff>) return static_cast<double>(c);
        else return c.get_d();
    }

    void adopt_pairs(const SparsePoly& other) {
        if (root_pairs_.empty()) root_pairs_ = other.root_pairs_;
    }

    TermMap terms_;
    std::vector<std::pair<int, int>> root_pairs_;
};

}  // namespace hsdet
