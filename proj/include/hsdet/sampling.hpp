#pragma once
/**
 * @file sampling.hpp
 * @brief Random density matrices under Hilbert-Schmidt, Bures, boundary and
 * flat (restricted-slice) measures, and streaming moment estimators.
 *
 * Determinism contract: the sample stream is cut into fixed-size blocks and
 * block b draws from an engine seeded by (seed, b) only. Threads pick up
 * whole blocks and partial sums are merged in block order, so the report is
 * bit-identical for any thread count.
 */
#include "hsdet/density.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace hsdet {

using Rng = std::mt19937_64;

enum class Measure { HilbertSchmidt, Bures, FlatRejection };

inline std::string_view measure_name(Measure m) {
    switch (m) {
        case Measure::HilbertSchmidt: return "hs";
        case Measure::Bures: return "bures";
        case Measure::FlatRejection: return "flat-rejection";
    }
    return "unknown";
}

inline Measure parse_measure(std::string_view name) {
    if (name == "hs" || name == "HS") return Measure::HilbertSchmidt;
    if (name == "bures" || name == "Bures") return Measure::Bures;
    if (name == "flat-rejection" || name == "flat") return Measure::FlatRejection;
    throw std::invalid_argument("unknown measure: " + std::string(name));
}

enum class Functional {
    Det,
    DetPT,
    Product,        ///< det(rho) det(rho^PT)
    CommutatorDet,  ///< det(rho rho^PT - rho^PT rho)
    Minor3,         ///< -(principal {1,2,3} minor of rho^PT); sign matches the exact engine
    Rank3Product,   ///< product of the three largest eigenvalues
    Rank3ProductDetPT,
    PptIndicator,
    One,
};

inline std::string_view functional_name(Functional f) {
    switch (f) {
        case Functional::Det: return "det";
        case Functional::DetPT: return "detPT";
        case Functional::Product: return "product";
        case Functional::CommutatorDet: return "commutator_det";
        case Functional::Minor3: return "minor3";
        case Functional::Rank3Product: return "rank3_product";
        case Functional::Rank3ProductDetPT: return "rank3_product_detPT";
        case Functional::PptIndicator: return "ppt";
        case Functional::One: return "one";
    }
    return "unknown";
}

inline Functional parse_functional(std::string_view name) {
    for (auto f : {Functional::Det, Functional::DetPT, Functional::Product, Functional::CommutatorDet,
                   Functional::Minor3, Functional::Rank3Product, Functional::Rank3ProductDetPT,
                   Functional::PptIndicator, Functional::One}) {
        if (functional_name(f) == name) return f;
    }
    throw std::invalid_argument("unknown functional: " + std::string(name));
}

struct SamplerConfig {
    Scenario scenario{Scenario::Real9};
    Measure measure{Measure::HilbertSchmidt};
    std::uint64_t seed{1};
    std::uint64_t sample_count{1000};
    unsigned thread_count{1};
};

struct EstimateReport {
    std::string functional;
    double mean{0};
    double standard_error{0};
    std::vector<double> raw_moments;      ///< index k holds E[X^k], k = 0..M
    std::vector<double> moment_errors;    ///< standard error of each raw moment
    std::uint64_t sample_count{0};
    double acceptance_rate{1.0};          ///< accepted / proposed for rejection samplers
};

// ---------------------------------------------------------------------------
// building blocks

namespace detail {

inline double normal(Rng& rng) {
    // Box-Muller keeps the draw count per normal fixed, unlike the cached
    // std::normal_distribution, which simplifies stream bookkeeping.
    constexpr double two_pi = 6.283185307179586476925286766559;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double u1 = u(rng);
    while (u1 <= 0.0) u1 = u(rng);
    const double u2 = u(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

inline double uniform(Rng& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    return u(rng);
}

template <std::size_t N>
std::array<double, N> dirichlet(Rng& rng, const std::array<double, N>& alpha) {
    std::array<double, N> x{};
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        std::gamma_distribution<double> g(alpha[i], 1.0);
        x[i] = g(rng);
        s += x[i];
    }
    for (auto& v : x) v /= s;
    return x;
}

/// Haar-random orthogonal matrix: Gram-Schmidt on a Gaussian matrix, which
/// equals QR with a positive diagonal in R.
inline Mat4<double> haar_orthogonal(Rng& rng) {
    Mat4<double> q;
    for (auto& v : q.a) v = normal(rng);
    for (int j = 0; j < 4; ++j) {
        for (int k = 0; k < j; ++k) {
            double d = 0.0;
            for (int i = 0; i < 4; ++i) d += q(i, j) * q(i, k);
            for (int i = 0; i < 4; ++i) q(i, j) -= d * q(i, k);
        }
        double n = 0.0;
        for (int i = 0; i < 4; ++i) n += q(i, j) * q(i, j);
        n = std::sqrt(n);
        for (int i = 0; i < 4; ++i) q(i, j) /= n;
    }
    return q;
}

template <class T>
void normalize_trace(Mat4<T>& m) {
    const double t = real_of(m.trace());
    for (auto& v : m.a) v /= t;
}

}  // namespace detail

/// Largest value of prod_{i<j} |l_i - l_j| / sqrt(l_i + l_j) on the simplex,
/// rounded up; bounds the acceptance ratio of the Bures eigenvalue sampler.
inline constexpr double kBuresWeightBound = 0.0121;

inline double bures_eigen_weight(const std::array<double, 4>& l) {
    double w = 1.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) w *= std::fabs(l[i] - l[j]) / std::sqrt(l[i] + l[j]);
    return w;
}

/// Flat (Hilbert-Schmidt) draw. Real: rho = G G^T / Tr with G a 4x5 real
/// Gaussian matrix (Wishart exponent (5-4-1)/2 = 0). Complex: G square 4x4
/// complex Gaussian.
inline RealDensity sample_hs_real(Rng& rng) {
    double g[4][5];
    for (auto& row : g)
        for (auto& v : row) v = detail::normal(rng);
    RealDensity rho;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k < 5; ++k) s += g[i][k] * g[j][k];
            rho(i, j) = rho(j, i) = s;
        }
    detail::normalize_trace(rho.entries);
    rho.scenario = Scenario::Real9;
    return rho;
}

inline ComplexDensity sample_hs_complex(Rng& rng) {
    std::complex<double> g[4][4];
    for (auto& row : g)
        for (auto& v : row) v = {detail::normal(rng), detail::normal(rng)};
    ComplexDensity rho;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            std::complex<double> s = 0.0;
            for (int k = 0; k < 4; ++k) s += g[i][k] * std::conj(g[j][k]);
            rho(i, j) = s;
            rho(j, i) = std::conj(s);
        }
    for (int i = 0; i < 4; ++i) rho(i, i) = rho(i, i).real();
    detail::normalize_trace(rho.entries);
    rho.scenario = Scenario::Complex15;
    return rho;
}

/// Real Bures draw: eigenvalues by rejection from Dirichlet(1/2,...) against
/// prod |l_i - l_j| / sqrt(l_i + l_j), eigenvectors Haar-orthogonal.
inline RealDensity sample_bures_real(Rng& rng, std::uint64_t* proposals = nullptr) {
    static constexpr std::array<double, 4> half{0.5, 0.5, 0.5, 0.5};
    std::array<double, 4> l{};
    for (;;) {
        if (proposals) ++*proposals;
        l = detail::dirichlet(rng, half);
        const double w = bures_eigen_weight(l);
        if (w > kBuresWeightBound) throw std::logic_error("Bures weight exceeds rejection bound");
        if (detail::uniform(rng, 0.0, kBuresWeightBound) < w) break;
    }
    const auto q = detail::haar_orthogonal(rng);
    RealDensity rho;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += q(i, k) * l[static_cast<std::size_t>(k)] * q(j, k);
            rho(i, j) = rho(j, i) = s;
        }
    rho.scenario = Scenario::Real9;
    return rho;
}

/// Rank-3 boundary draw with the flat surface measure: a 3x3 real Wishart
/// matrix with six degrees of freedom (eigenvalue density prod l |Delta|)
/// placed on a Haar-random 3-plane of R^4.
inline RealDensity sample_boundary_rank3(Rng& rng) {
    double h[3][6];
    for (auto& row : h)
        for (auto& v : row) v = detail::normal(rng);
    double w[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 6; ++k) s += h[i][k] * h[j][k];
            w[i][j] = s;
        }
    const auto q = detail::haar_orthogonal(rng);
    RealDensity rho;
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            double s = 0.0;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) s += q(i, a) * w[a][b] * q(j, b);
            rho(i, j) = rho(j, i) = s;
        }
    detail::normalize_trace(rho.entries);
    rho.scenario = Scenario::BoundaryRank3;
    return rho;
}

template <class T>
struct FlatDraw {
    BasicDensityMatrix<T> rho;
    std::uint64_t proposals{0};
    [[nodiscard]] double acceptance_rate() const { return 1.0 / static_cast<double>(proposals); }
};

/// Uniform (Lebesgue) draw on a slice of the state space. Writing
/// rho_ij = z_ij sqrt(rho_ii rho_jj) turns the flat measure into
/// Dirichlet(1 + k_i/2) on the diagonal (k_i = free real off-diagonal
/// parameters touching index i) times uniform correlations on the cube,
/// restricted to PSD correlation matrices.
template <class T>
FlatDraw<T> sample_flat_rejection(Scenario scenario, Rng& rng) {
    std::array<double, 4> alpha{};
    switch (scenario) {
        case Scenario::Real9: alpha = {2.5, 2.5, 2.5, 2.5}; break;
        case Scenario::Real8Rho34Zero: alpha = {2.5, 2.5, 2.0, 2.0}; break;
        case Scenario::Mixed10: alpha = {2.5, 2.5, 3.0, 3.0}; break;
        default: throw std::invalid_argument("sample_flat_rejection: unsupported scenario");
    }
    if (scenario == Scenario::Mixed10 && !is_complex_v<T>)
        throw std::invalid_argument("sample_flat_rejection: mixed-10d needs complex entries");

    FlatDraw<T> out;
    Mat4<T> z;
    for (;;) {
        ++out.proposals;
        z = Mat4<T>::identity();
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                T v;
                if (i == 2 && j == 3) {
                    if (scenario == Scenario::Real8Rho34Zero) {
                        v = T(0);
                    } else if constexpr (is_complex_v<T>) {
                        if (scenario == Scenario::Mixed10) {
                            const double re = detail::uniform(rng, -1.0, 1.0);
                            const double im = detail::uniform(rng, -1.0, 1.0);
                            v = T(re, im);
                        } else {
                            v = T(detail::uniform(rng, -1.0, 1.0));
                        }
                    } else {
                        v = T(detail::uniform(rng, -1.0, 1.0));
                    }
                } else {
                    v = T(detail::uniform(rng, -1.0, 1.0));
                }
                z(i, j) = v;
                z(j, i) = conj_of(v);
            }
        if (is_psd_ldl(z, 0.0)) break;
    }
    const auto d = detail::dirichlet(rng, alpha);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out.rho(i, j) = z(i, j) * std::sqrt(d[static_cast<std::size_t>(i)] * d[static_cast<std::size_t>(j)]);
    out.rho.scenario = scenario;
    return out;
}

/// HS draw for the scenarios with a direct Ginibre construction.
inline RealDensity sample_hs(Scenario scenario, Rng& rng) {
    switch (scenario) {
        case Scenario::Real9: return sample_hs_real(rng);
        case Scenario::BoundaryRank3: return sample_boundary_rank3(rng);
        default: throw std::invalid_argument("sample_hs: use sample_hs_complex for complex scenarios");
    }
}

// ---------------------------------------------------------------------------
// functionals

template <class T>
double evaluate_functional(Functional f, const BasicDensityMatrix<T>& rho) {
    switch (f) {
        case Functional::Det: return determinant(rho);
        case Functional::DetPT: return determinant(partial_transpose(rho.entries));
        case Functional::Product: return determinant(rho) * determinant(partial_transpose(rho.entries));
        case Functional::CommutatorDet: return commutator_determinant(rho);
        case Functional::Minor3: return -principal_minor(partial_transpose(rho.entries), {1, 2, 3});
        case Functional::Rank3Product: return eigenvalues_sym4(rho).rank3_product;
        case Functional::Rank3ProductDetPT:
            return eigenvalues_sym4(rho).rank3_product * determinant(partial_transpose(rho.entries));
        case Functional::PptIndicator: return ppt_separable(rho) ? 1.0 : 0.0;
        case Functional::One: return 1.0;
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// streaming estimation

/// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum{0};
    double comp{0};
    void add(double x) {
        const double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x)) comp += (sum - t) + x;
        else comp += (x - t) + sum;
        sum = t;
    }
    [[nodiscard]] double value() const { return sum + comp; }
};

/// Mergeable power-sum accumulator (count, sum x^k for k = 1..2M).
struct MomentAccumulator {
    std::uint64_t count{0};
    std::uint64_t proposals{0};
    std::vector<CompensatedSum> power_sums;

    explicit MomentAccumulator(int max_order = 2) : power_sums(static_cast<std::size_t>(2 * max_order + 1)) {}

    void add(double x) {
        ++count;
        double p = 1.0;
        for (std::size_t k = 1; k < power_sums.size(); ++k) {
            p *= x;
            power_sums[k].add(p);
        }
    }

    void merge(const MomentAccumulator& other) {
        count += other.count;
        proposals += other.proposals;
        for (std::size_t k = 1; k < power_sums.size(); ++k) power_sums[k].add(other.power_sums[k].value());
    }
};

inline constexpr std::uint64_t kSamplesPerBlock = 4096;

inline Rng block_engine(std::uint64_t seed, std::uint64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32), 0x68736474u};
    return Rng(seq);
}

/// One draw of the configured (scenario, measure), handed to `visit` with its
/// concrete entry type; returns the number of proposals consumed.
template <class Visitor>
std::uint64_t draw_and_visit(const SamplerConfig& cfg, Rng& rng, Visitor&& visit) {
    switch (cfg.measure) {
        case Measure::HilbertSchmidt:
            if (cfg.scenario == Scenario::Complex15) {
                visit(sample_hs_complex(rng));
                return 1;
            }
            if (cfg.scenario == Scenario::Real9 || cfg.scenario == Scenario::BoundaryRank3) {
                visit(sample_hs(cfg.scenario, rng));
                return 1;
            }
            [[fallthrough]];
        case Measure::FlatRejection: {
            if (cfg.scenario == Scenario::Mixed10) {
                auto draw = sample_flat_rejection<std::complex<double>>(cfg.scenario, rng);
                visit(draw.rho);
                return draw.proposals;
            }
            auto draw = sample_flat_rejection<double>(cfg.scenario, rng);
            visit(draw.rho);
            return draw.proposals;
        }
        case Measure::Bures: {
            if (cfg.scenario != Scenario::Real9) throw std::invalid_argument("Bures sampling supports real-9d only");
            std::uint64_t proposals = 0;
            visit(sample_bures_real(rng, &proposals));
            return proposals;
        }
    }
    return 1;
}

inline void check_config(const SamplerConfig& cfg) {
    if (cfg.sample_count < 1) throw std::invalid_argument("sample_count must be >= 1");
    if (cfg.thread_count < 1) throw std::invalid_argument("thread_count must be >= 1");
    if (cfg.measure == Measure::FlatRejection &&
        !(cfg.scenario == Scenario::Real9 || cfg.scenario == Scenario::Real8Rho34Zero || cfg.scenario == Scenario::Mixed10))
        throw std::invalid_argument("flat-rejection supports real-9d, real-8d, mixed-10d");
    if (cfg.measure == Measure::Bures && cfg.scenario != Scenario::Real9)
        throw std::invalid_argument("Bures sampling supports real-9d only");
}

/// Runs `per_sample(rho)` -> vector of values for every draw and accumulates
/// each output channel separately. Used by estimate_moments and by callers
/// that need several functionals of the same samples.
template <class PerSample>
std::vector<MomentAccumulator> accumulate(const SamplerConfig& cfg, std::size_t channels, int max_order,
                                          PerSample&& per_sample) {
    check_config(cfg);
    const std::uint64_t blocks = (cfg.sample_count + kSamplesPerBlock - 1) / kSamplesPerBlock;
    std::vector<std::vector<MomentAccumulator>> per_block(
        blocks, std::vector<MomentAccumulator>(channels, MomentAccumulator(max_order)));
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        try {
            for (;;) {
                const std::uint64_t b = next.fetch_add(1);
                if (b >= blocks || failed.load()) return;
                Rng rng = block_engine(cfg.seed, b);
                const std::uint64_t begin = b * kSamplesPerBlock;
                const std::uint64_t end = std::min(cfg.sample_count, begin + kSamplesPerBlock);
                auto& acc = per_block[b];
                for (std::uint64_t n = begin; n < end; ++n) {
                    const std::uint64_t used = draw_and_visit(cfg, rng, [&](const auto& rho) {
                        if (n % 100 == 0) {
                            validate(rho, 1e-10);
                            if (!is_psd(rho)) throw std::logic_error("sampler emitted a non-PSD matrix");
                        }
                        const auto values = per_sample(rho);
                        for (std::size_t c = 0; c < channels; ++c) acc[c].add(values[c]);
                    });
                    acc[0].proposals += used;
                }
            }
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            failed = true;
            failure = e.what();
        }
    };

    const unsigned threads = static_cast<unsigned>(std::min<std::uint64_t>(cfg.thread_count, blocks));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failed) throw std::runtime_error("sampling failed: " + failure);

    std::vector<MomentAccumulator> total(channels, MomentAccumulator(max_order));
    for (const auto& blk : per_block)
        for (std::size_t c = 0; c < channels; ++c) total[c].merge(blk[c]);
    return total;
}

inline EstimateReport make_report(std::string name, const MomentAccumulator& acc, int max_order,
                                  std::uint64_t proposals) {
    EstimateReport r;
    r.functional = std::move(name);
    r.sample_count = acc.count;
    const double n = static_cast<double>(acc.count);
    auto raw = [&](int k) { return k == 0 ? 1.0 : acc.power_sums[static_cast<std::size_t>(k)].value() / n; };
    r.raw_moments.resize(static_cast<std::size_t>(max_order) + 1);
    r.moment_errors.resize(static_cast<std::size_t>(max_order) + 1);
    for (int k = 0; k <= max_order; ++k) {
        r.raw_moments[static_cast<std::size_t>(k)] = raw(k);
        if (k == 0 || acc.count < 2) continue;
        const double var = std::max(0.0, raw(2 * k) - raw(k) * raw(k)) * n / (n - 1.0);
        r.moment_errors[static_cast<std::size_t>(k)] = std::sqrt(var / n);
    }
    r.mean = max_order >= 1 ? r.raw_moments[1] : raw(1);
    r.standard_error = max_order >= 1 ? r.moment_errors[1] : 0.0;
    r.acceptance_rate = proposals ? n / static_cast<double>(proposals) : 1.0;
    return r;
}

inline EstimateReport estimate_moments(const SamplerConfig& cfg, Functional functional, int max_order = 2) {
    if (max_order < 1 || max_order > 10) throw std::invalid_argument("max_order must be in [1, 10]");
    auto totals = accumulate(cfg, 1, max_order, [&](const auto& rho) {
        return std::array<double, 1>{evaluate_functional(functional, rho)};
    });
    return make_report(std::string(functional_name(functional)), totals[0], max_order, totals[0].proposals);
}

/// Several functionals of one sample stream (shared draws).
inline std::vector<EstimateReport> estimate_many(const SamplerConfig& cfg, const std::vector<Functional>& fs,
                                                 int max_order = 2) {
    if (max_order < 1 || max_order > 10) throw std::invalid_argument("max_order must be in [1, 10]");
    auto totals = accumulate(cfg, fs.size(), max_order, [&](const auto& rho) {
        std::vector<double> v(fs.size());
        for (std::size_t i = 0; i < fs.size(); ++i) v[i] = evaluate_functional(fs[i], rho);
        return v;
    });
    std::vector<EstimateReport> out;
    for (std::size_t i = 0; i < fs.size(); ++i)
        out.push_back(make_report(std::string(functional_name(fs[i])), totals[i], max_order, totals[0].proposals));
    return out;
}

struct ProbabilityEstimate {
    double probability;
    double standard_error;
};

inline ProbabilityEstimate ppt_probability(const SamplerConfig& cfg) {
    const auto r = estimate_moments(cfg, Functional::PptIndicator, 1);
    return {r.mean, r.standard_error};
}

}  // namespace hsdet
