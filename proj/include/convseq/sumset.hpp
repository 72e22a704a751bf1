#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <utility>
#include <vector>

#include "convseq/budget.hpp"
#include "convseq/errors.hpp"
#include "convseq/scalar.hpp"
#include "convseq/sequence.hpp"

namespace convseq {

struct SumsetEntry {
    Scalar value;
    std::uint64_t weight;  // ordered d-tuple representations of `value`
};

// d-fold sumset of a sequence with ordered-tuple multiplicities. Entries are
// ascending by value; total weight is always N^d.
class WeightedSumset {
public:
    static WeightedSumset from_entries(std::size_t n, unsigned d,
                                       std::vector<SumsetEntry> entries,
                                       SequenceMeta meta = {}) {
        if (n == 0 || d == 0) throw domain_error("sumset: n and d must be >= 1");
        unsigned __int128 total = 0;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (entries[i].weight == 0)
                throw validation_error("sumset entry has zero weight", i + 1);
            if (i > 0 && entries[i].value <= entries[i - 1].value)
                throw validation_error("sumset entries not strictly ascending", i + 1);
            total += entries[i].weight;
        }
        if (from_u128(total) != ipow(n, d))
            throw validation_error("sumset weights do not sum to n^d", entries.size());
        return WeightedSumset(n, d, std::move(entries), std::move(meta));
    }

    std::size_t source_size() const { return n_; }
    unsigned fold() const { return d_; }
    const std::vector<SumsetEntry>& entries() const { return entries_; }
    const SequenceMeta& source_meta() const { return meta_; }
    std::size_t cardinality() const { return entries_.size(); }
    Scalar total_weight() const { return ipow(n_, d_); }

    std::uint64_t max_weight() const {
        std::uint64_t m = 0;
        for (const auto& e : entries_) m = std::max(m, e.weight);
        return m;
    }

private:
    friend WeightedSumset build_weighted_sumset(const ConvexSequence&, unsigned, const Budget&);

    WeightedSumset(std::size_t n, unsigned d, std::vector<SumsetEntry> entries, SequenceMeta meta)
        : n_(n), d_(d), entries_(std::move(entries)), meta_(std::move(meta)) {}

    std::size_t n_;
    unsigned d_;
    std::vector<SumsetEntry> entries_;
    SequenceMeta meta_;
};

namespace detail {

// Largest dense accumulator we are willing to allocate (slots, 8 bytes each).
inline constexpr std::uint64_t dense_slot_cap = 64'000'000;

inline bool int64_safe(const ConvexSequence& seq, unsigned d) {
    // d * |v| must stay clear of int64 overflow for any partial sum.
    const Scalar bound = (Scalar(1) << 62) / d;
    return seq.front() > -bound && seq.back() < bound;
}

inline std::vector<SumsetEntry> build_dense(const ConvexSequence& seq, unsigned d,
                                            std::uint64_t span) {
    const std::size_t n = seq.size();
    std::vector<std::uint64_t> off(n);
    for (std::size_t i = 0; i < n; ++i)
        off[i] = static_cast<std::uint64_t>((seq[i] - seq.front()).convert_to<std::int64_t>());

    std::vector<std::uint64_t> cur;
    if (d == 1) {
        cur.assign(span + 1, 0);
        for (std::uint64_t o : off) cur[o] = 1;
    } else {
        cur.assign(2 * span + 1, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) ++cur[off[i] + off[j]];
        for (unsigned fold = 3; fold <= d; ++fold) {
            std::vector<std::uint64_t> next(static_cast<std::size_t>(fold) * span + 1, 0);
            for (std::size_t idx = 0; idx < cur.size(); ++idx) {
                const std::uint64_t w = cur[idx];
                if (w == 0) continue;
                for (std::uint64_t o : off) next[idx + o] += w;
            }
            cur = std::move(next);
        }
    }

    const Scalar base = Scalar(seq.front()) * d;
    std::vector<SumsetEntry> entries;
    for (std::size_t idx = 0; idx < cur.size(); ++idx)
        if (cur[idx] != 0) entries.push_back({base + idx, cur[idx]});
    return entries;
}

template <typename Key, typename MakeKey, typename MakeValue>
inline std::vector<SumsetEntry> build_hashed(const ConvexSequence& seq, unsigned d,
                                             MakeKey make_key, MakeValue make_value) {
    std::unordered_map<Key, std::uint64_t> cur;
    cur.reserve(seq.size() * 2);
    for (const Scalar& v : seq.values()) cur.emplace(make_key(v), 1);
    for (unsigned fold = 2; fold <= d; ++fold) {
        std::unordered_map<Key, std::uint64_t> next;
        next.reserve(cur.size() * 2);
        for (const auto& [sum, w] : cur)
            for (const Scalar& v : seq.values()) next[sum + make_key(v)] += w;
        cur = std::move(next);
    }
    std::vector<SumsetEntry> entries;
    entries.reserve(cur.size());
    for (const auto& [sum, w] : cur) entries.push_back({make_value(sum), w});
    std::sort(entries.begin(), entries.end(),
              [](const SumsetEntry& a, const SumsetEntry& b) { return a.value < b.value; });
    return entries;
}

}  // namespace detail

inline WeightedSumset build_weighted_sumset(const ConvexSequence& seq, unsigned d,
                                            const Budget& budget = Budget::from_env()) {
    if (d == 0) throw domain_error("sumset: d must be >= 1");
    const std::size_t n = seq.size();
    require_work(ipow(n, d), budget,
                 "sumset N=" + std::to_string(n) + " d=" + std::to_string(d));

    std::vector<SumsetEntry> entries;
    const bool small = detail::int64_safe(seq, d);
    const Scalar dense_len = Scalar(seq.span()) * d + 1;
    if (small && dense_len <= detail::dense_slot_cap) {
        entries = detail::build_dense(seq, d, seq.span().convert_to<std::uint64_t>());
    } else if (small) {
        entries = detail::build_hashed<std::int64_t>(
            seq, d, [](const Scalar& v) { return v.convert_to<std::int64_t>(); },
            [](std::int64_t v) { return Scalar(v); });
    } else {
        entries = detail::build_hashed<Scalar>(
            seq, d, [](const Scalar& v) { return v; }, [](const Scalar& v) { return v; });
    }

    unsigned __int128 total = 0;
    for (const auto& e : entries) total += e.weight;
    if (from_u128(total) != ipow(n, d))
        throw std::logic_error("sumset mass invariant violated");
    return WeightedSumset(n, d, std::move(entries), seq.meta());
}

// Multiplicities ranked for partitioning: weight descending, ties by ascending
// value (entries are value-ascending, so a stable sort preserves that order).
class WeightProfile {
public:
    static constexpr const char* tie_rule = "weight-desc,value-asc";

    explicit WeightProfile(const WeightedSumset& ws) {
        const auto& entries = ws.entries();
        order_.resize(entries.size());
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            return entries[a].weight > entries[b].weight;
        });
        weights_.reserve(order_.size());
        for (std::size_t idx : order_) weights_.push_back(entries[idx].weight);
    }

    // rank r (0-based) -> weight of the r-th heaviest value
    const std::vector<std::uint64_t>& ordered_weights() const { return weights_; }
    // rank r -> index into the sumset's entries()
    const std::vector<std::size_t>& order() const { return order_; }
    std::size_t size() const { return weights_.size(); }
    std::uint64_t max_weight() const { return weights_.empty() ? 0 : weights_.front(); }

private:
    std::vector<std::uint64_t> weights_;
    std::vector<std::size_t> order_;
};

// Values whose multiplicity is at least s, ascending.
inline std::vector<Scalar> threshold_set(const WeightedSumset& ws, double s) {
    if (!(s > 0)) throw domain_error("threshold_set: s must be positive");
    std::vector<Scalar> out;
    for (const auto& e : ws.entries())
        if (static_cast<double>(e.weight) >= s) out.push_back(e.value);
    return out;
}

// Peak multiplicity relative to N^{d(d-1)/(d+1)}, the best known upper bound
// for strictly convex sequences.
inline double andrews_ratio(const WeightedSumset& ws) {
    if (ws.fold() < 2) throw domain_error("andrews_ratio: requires d >= 2");
    const double expo = ws.fold() * (ws.fold() - 1) / (ws.fold() + 1.0);
    return static_cast<double>(ws.max_weight()) /
           std::pow(static_cast<double>(ws.source_size()), expo);
}

// Peak of w_t * t^{1/3} / N^beta over ranks t = 1..|C_d|: how close the ranked
// multiplicities come to the majorant nu_t = N^beta t^{-1/3}.
inline double majorant_ratio(const WeightProfile& profile, std::size_t n, double beta) {
    double best = 0.0;
    const double scale = std::pow(static_cast<double>(n), beta);
    for (std::size_t t = 0; t < profile.size(); ++t) {
        double r = static_cast<double>(profile.ordered_weights()[t]) *
                   std::cbrt(static_cast<double>(t + 1)) / scale;
        best = std::max(best, r);
    }
    return best;
}

inline double majorant_ratio(const WeightedSumset& ws, double beta) {
    return majorant_ratio(WeightProfile(ws), ws.source_size(), beta);
}

}  // namespace convseq
