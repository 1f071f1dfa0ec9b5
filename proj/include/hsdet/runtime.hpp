#pragma once
/**
 * @file runtime.hpp
 * @brief Library version, report schema and environment defaults.
 */
#include <cstdint>
#include <cstdlib>
#include <string>
#include <string_view>
#include <thread>

namespace hsdet {

inline constexpr std::string_view kLibraryVersion = "1.0.0";
inline constexpr int kReportSchema = 1;
inline constexpr const char* kThreadsEnv = "HSDET_THREADS";

/// Thread count from HSDET_THREADS, else the hardware concurrency (>= 1).
inline unsigned default_thread_count() {
    if (const char* v = std::getenv(kThreadsEnv)) {
        char* end = nullptr;
        const unsigned long n = std::strtoul(v, &end, 10);
        if (end != v && *end == '\0' && n >= 1 && n <= 4096) return static_cast<unsigned>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1U : hw;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace hsdet
