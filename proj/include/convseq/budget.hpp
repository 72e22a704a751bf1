#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

#include "convseq/errors.hpp"
#include "convseq/scalar.hpp"

namespace convseq {

// Work guard shared by all heavy entry points. One unit of work corresponds to
// one generated tuple / coefficient slot; the default keeps any single call in
// the region of a few minutes on one core.
struct Budget {
    std::uint64_t work = 1'000'000'000ULL;

    // Reads CE_BUDGET once; malformed or non-positive values fall back to the default.
    static const Budget& from_env() {
        static const Budget cached = [] {
            Budget b;
            if (const char* raw = std::getenv("CE_BUDGET")) {
                char* end = nullptr;
                unsigned long long v = std::strtoull(raw, &end, 10);
                if (end && *end == '\0' && v > 0) b.work = v;
            }
            return b;
        }();
        return cached;
    }
};

// Throws resource_error when `cost` exceeds the budget. `what` should name the
// operation and its parameters (e.g. "sumset N=4096 d=3").
inline void require_work(const Scalar& cost, const Budget& budget, const std::string& what) {
    if (cost > budget.work)
        throw resource_error(what + ": required work " + cost.str() +
                             " exceeds budget " + std::to_string(budget.work));
}

}  // namespace convseq
