#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "convseq/errors.hpp"
#include "convseq/rng.hpp"
#include "convseq/scalar.hpp"

namespace convseq {

enum class SequenceTag { power, sqrt_squarefree, random_convex, custom };

// Generator identity: which family a sequence came from plus its parameters.
// Carried through to output metadata so result files are self-describing.
struct SequenceKind {
    SequenceTag tag = SequenceTag::power;
    unsigned power_k = 2;        // power: exponent k >= 1
    unsigned precision = 30;     // sqrt_squarefree: decimal digits kept after quantization
    std::uint64_t seed = 42;     // random_convex
    std::string path;            // custom

    // Text forms: "power:k", "sqrt:p" (alias "sqrt-squarefree:p"), "random", "custom:PATH".
    static SequenceKind parse(const std::string& text) {
        SequenceKind k;
        auto colon = text.find(':');
        std::string head = text.substr(0, colon);
        std::string arg = colon == std::string::npos ? std::string() : text.substr(colon + 1);
        if (head == "power") {
            k.tag = SequenceTag::power;
            if (!arg.empty()) {
                Scalar v = parse_integer(arg);
                if (v < 1 || v > 64) throw domain_error("power exponent out of range [1,64]: " + arg);
                k.power_k = v.convert_to<unsigned>();
            }
        } else if (head == "sqrt" || head == "sqrt-squarefree") {
            k.tag = SequenceTag::sqrt_squarefree;
            if (!arg.empty()) {
                Scalar v = parse_integer(arg);
                if (v < 1 || v > 10000) throw domain_error("sqrt precision out of range [1,10000]: " + arg);
                k.precision = v.convert_to<unsigned>();
            }
        } else if (head == "random") {
            k.tag = SequenceTag::random_convex;
            if (!arg.empty()) k.seed = parse_integer(arg).convert_to<std::uint64_t>();
        } else if (head == "custom") {
            k.tag = SequenceTag::custom;
            if (arg.empty()) throw domain_error("custom sequence needs a path: custom:FILE");
            k.path = arg;
        } else {
            throw domain_error("unknown sequence kind '" + text + "'");
        }
        return k;
    }

    std::string describe() const {
        switch (tag) {
            case SequenceTag::power: return "power:" + std::to_string(power_k);
            case SequenceTag::sqrt_squarefree: return "sqrt:" + std::to_string(precision);
            case SequenceTag::random_convex: return "random:" + std::to_string(seed);
            case SequenceTag::custom: return "custom:" + path;
        }
        return "?";
    }
};

struct SequenceMeta {
    SequenceKind kind;
    // Stored values equal round(true value * 10^scale_pow10); 0 means plain integers.
    unsigned scale_pow10 = 0;
};

// Finite increasing sequence b_1 < ... < b_N of exact integers (0-based storage).
// Monotonicity is enforced at construction; strict convexity is a separate check
// because degenerate inputs (e.g. linear sequences) are useful as contrasts.
class ConvexSequence {
public:
    ConvexSequence(std::vector<Scalar> values, SequenceMeta meta = {})
        : values_(std::move(values)), meta_(std::move(meta)) {
        if (values_.empty()) throw domain_error("sequence must be non-empty");
        for (std::size_t i = 1; i < values_.size(); ++i)
            if (values_[i] <= values_[i - 1])
                throw validation_error("sequence not strictly increasing", i + 1);
    }

    std::size_t size() const { return values_.size(); }
    const Scalar& operator[](std::size_t i) const { return values_[i]; }
    const std::vector<Scalar>& values() const { return values_; }
    const SequenceMeta& meta() const { return meta_; }
    const Scalar& front() const { return values_.front(); }
    const Scalar& back() const { return values_.back(); }
    Scalar span() const { return values_.back() - values_.front(); }

private:
    std::vector<Scalar> values_;
    SequenceMeta meta_;
};

struct ConvexityCheck {
    bool ok = true;
    // When !ok: 1-based index i of the first triple (b_i, b_{i+1}, b_{i+2})
    // whose second difference is not positive.
    std::size_t first_violation = 0;
};

inline ConvexityCheck check_strict_convexity(const ConvexSequence& seq) {
    const auto& b = seq.values();
    for (std::size_t i = 0; i + 2 < b.size(); ++i)
        if (b[i + 2] - b[i + 1] <= b[i + 1] - b[i]) return {false, i + 1};
    return {true, 0};
}

inline ConvexSequence gen_power(unsigned k, std::size_t n) {
    if (k == 0) throw domain_error("gen_power: exponent must be >= 1");
    if (n == 0) throw domain_error("gen_power: n must be >= 1");
    std::vector<Scalar> values;
    values.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) values.push_back(ipow(i, k));
    SequenceMeta meta;
    meta.kind.tag = SequenceTag::power;
    meta.kind.power_k = k;
    return ConvexSequence(std::move(values), std::move(meta));
}

// First `count` squarefree integers >= 2, by sieving squares of 2..sqrt(x).
inline std::vector<std::uint64_t> first_squarefree(std::size_t count) {
    std::vector<std::uint64_t> out;
    out.reserve(count);
    for (std::uint64_t x = 2; out.size() < count; ++x) {
        bool squarefree = true;
        for (std::uint64_t p = 2; p * p <= x; ++p)
            if (x % (p * p) == 0) {
                squarefree = false;
                break;
            }
        if (squarefree) out.push_back(x);
    }
    return out;
}

// b_j = round(10^p * sqrt(k_j)) over the first n squarefree k_j >= 2. The map
// is monotone, and for the default p = 30 it is strict and collision-free far
// beyond desk-scale n, since consecutive gaps sqrt(k') - sqrt(k) >= 1/(2*sqrt(k'))
// stay well above 10^-p.
inline ConvexSequence gen_sqrt_squarefree(unsigned precision, std::size_t n) {
    if (precision == 0) throw domain_error("gen_sqrt_squarefree: precision must be >= 1");
    if (n == 0) throw domain_error("gen_sqrt_squarefree: n must be >= 1");
    const Scalar scale2 = pow10(2 * precision);
    std::vector<Scalar> values;
    values.reserve(n);
    for (std::uint64_t k : first_squarefree(n)) values.push_back(sqrt_rounded(k * scale2));
    SequenceMeta meta;
    meta.kind.tag = SequenceTag::sqrt_squarefree;
    meta.kind.precision = precision;
    meta.scale_pow10 = precision;
    return ConvexSequence(std::move(values), std::move(meta));
}

// Gap law g_i = max(i + u_i, g_{i-1} + 1) with u_i uniform on {0, ..., i};
// the clamp guarantees strictly increasing gaps, hence strict convexity,
// even on the rare draws where i + u_i fails to grow.
inline ConvexSequence gen_random_convex(std::uint64_t seed, std::size_t n) {
    if (n == 0) throw domain_error("gen_random_convex: n must be >= 1");
    std::mt19937_64 gen(seed);
    std::vector<Scalar> values;
    values.reserve(n);
    Scalar b(1);
    values.push_back(b);
    std::uint64_t prev_gap = 0;
    for (std::uint64_t i = 1; i < n; ++i) {
        std::uint64_t gap = i + uniform_below(gen, i + 1);
        if (gap <= prev_gap) gap = prev_gap + 1;
        b += gap;
        values.push_back(b);
        prev_gap = gap;
    }
    SequenceMeta meta;
    meta.kind.tag = SequenceTag::random_convex;
    meta.kind.seed = seed;
    return ConvexSequence(std::move(values), std::move(meta));
}

// File format: one integer per line; optional leading "#scale 10^p" header
// declaring that values are quantized at 10^p; other '#' lines and blank
// lines are ignored.
inline ConvexSequence load_sequence(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open sequence file '" + path + "'");
    std::vector<Scalar> values;
    SequenceMeta meta;
    meta.kind.tag = SequenceTag::custom;
    meta.kind.path = path;
    std::string line;
    bool first_line = true;
    std::size_t ordinal = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        std::size_t stop = line.find_last_not_of(" \t");
        std::string body = line.substr(start, stop - start + 1);
        if (body[0] == '#') {
            const std::string key = "#scale 10^";
            if (first_line && body.rfind(key, 0) == 0) {
                Scalar p = parse_integer(body.substr(key.size()));
                if (p < 0 || p > 10000) throw domain_error("scale header out of range in '" + path + "'");
                meta.scale_pow10 = p.convert_to<unsigned>();
            }
            first_line = false;
            continue;
        }
        first_line = false;
        ++ordinal;
        try {
            values.push_back(parse_integer(body));
        } catch (const domain_error&) {
            throw validation_error("bad value '" + body + "' in '" + path + "'", ordinal);
        }
    }
    if (values.empty()) throw domain_error("sequence file '" + path + "' has no values");
    return ConvexSequence(std::move(values), std::move(meta));
}

inline ConvexSequence make_sequence(const SequenceKind& kind, std::size_t n) {
    switch (kind.tag) {
        case SequenceTag::power: return gen_power(kind.power_k, n);
        case SequenceTag::sqrt_squarefree: return gen_sqrt_squarefree(kind.precision, n);
        case SequenceTag::random_convex: return gen_random_convex(kind.seed, n);
        case SequenceTag::custom: {
            ConvexSequence seq = load_sequence(kind.path);
            if (n != 0 && n != seq.size())
                throw domain_error("custom sequence has " + std::to_string(seq.size()) +
                                   " values, expected " + std::to_string(n));
            return seq;
        }
    }
    throw domain_error("make_sequence: bad kind");
}

}  // namespace convseq
