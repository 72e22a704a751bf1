#pragma once

#include <cstdint>
#include <random>

namespace convseq {

// Unbiased draw from {0, ..., bound-1} via rejection sampling. mt19937_64 has a
// portable output sequence, and this mapping is fixed here, so seeded draws are
// identical across platforms (std::uniform_int_distribution is not).
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
        std::uint64_t x = gen();
        if (x >= threshold) return x % bound;
    }
}

// Uniform draw from {lo, ..., hi} inclusive; requires lo <= hi and hi - lo < 2^64 - 1.
inline std::uint64_t uniform_range(std::mt19937_64& gen, std::uint64_t lo, std::uint64_t hi) {
    return lo + uniform_below(gen, hi - lo + 1);
}

}  // namespace convseq
