#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "convseq/budget.hpp"
#include "convseq/errors.hpp"
#include "convseq/scalar.hpp"
#include "convseq/sequence.hpp"
#include "convseq/sumset.hpp"

namespace convseq {

// Translate of the generator graph by (j, u): {(i + j, f(i) + u) : i in 1..N}.
struct Curve {
    std::int64_t j;
    Scalar u;
    std::uint64_t weight;
};

struct MarkedPoint {
    std::int64_t k;
    Scalar c;
    std::uint64_t weight;
};

// Weighted point-curve arrangement over one convex generator f(i) = table[i-1].
// Incidence is index arithmetic, never geometry: (k, c) lies on (j, u) iff
// k - j lands in 1..N and c - u = f(k - j).
class Arrangement {
public:
    Arrangement(std::vector<Scalar> generator, std::vector<Curve> curves,
                std::vector<MarkedPoint> points)
        : generator_(std::move(generator)),
          curves_(std::move(curves)),
          points_(std::move(points)) {
        if (generator_.empty()) throw domain_error("arrangement: empty generator");
        for (std::size_t i = 0; i < curves_.size(); ++i)
            if (curves_[i].weight == 0)
                throw validation_error("arrangement: zero curve weight", i + 1);
        for (std::size_t i = 0; i < points_.size(); ++i)
            if (points_[i].weight == 0)
                throw validation_error("arrangement: zero point weight", i + 1);
        require_distinct(curves_, [](const Curve& c) { return std::pair(c.j, c.u); },
                         "duplicate curve (j,u)");
        require_distinct(points_, [](const MarkedPoint& p) { return std::pair(p.k, p.c); },
                         "duplicate point (k,c)");
    }

    std::size_t window() const { return generator_.size(); }
    const std::vector<Scalar>& generator() const { return generator_; }
    const std::vector<Curve>& curves() const { return curves_; }
    const std::vector<MarkedPoint>& points() const { return points_; }

    Scalar net_curve_weight() const {
        Scalar m = 0;
        for (const auto& c : curves_) m += c.weight;
        return m;
    }
    Scalar net_point_weight() const {
        Scalar n = 0;
        for (const auto& p : points_) n += p.weight;
        return n;
    }
    std::uint64_t max_curve_weight() const {
        std::uint64_t m = 0;
        for (const auto& c : curves_) m = std::max(m, c.weight);
        return m;
    }
    std::uint64_t max_point_weight() const {
        std::uint64_t m = 0;
        for (const auto& p : points_) m = std::max(m, p.weight);
        return m;
    }

    bool incident(const Curve& c, const MarkedPoint& p) const {
        const std::int64_t i = p.k - c.j;
        if (i < 1 || static_cast<std::uint64_t>(i) > generator_.size()) return false;
        return p.c - c.u == generator_[static_cast<std::size_t>(i - 1)];
    }

private:
    template <typename T, typename Key>
    static void require_distinct(const std::vector<T>& items, Key key, const char* what) {
        std::vector<std::size_t> order(items.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return key(items[a]) < key(items[b]); });
        for (std::size_t i = 1; i < order.size(); ++i)
            if (key(items[order[i]]) == key(items[order[i - 1]]))
                throw validation_error(what, order[i] + 1);
    }

    std::vector<Scalar> generator_;
    std::vector<Curve> curves_;
    std::vector<MarkedPoint> points_;
};

namespace detail {

struct PointKeyHash {
    std::size_t operator()(const std::pair<std::int64_t, Scalar>& key) const noexcept {
        std::size_t h = std::hash<std::int64_t>()(key.first);
        h ^= std::hash<Scalar>()(key.second) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

using PointIndex =
    std::unordered_map<std::pair<std::int64_t, Scalar>, std::size_t, PointKeyHash>;

inline PointIndex index_points(const Arrangement& arr) {
    PointIndex index;
    index.reserve(arr.points().size() * 2);
    for (std::size_t i = 0; i < arr.points().size(); ++i)
        index.emplace(std::pair(arr.points()[i].k, arr.points()[i].c), i);
    return index;
}

// Indices of arrangement points lying on the curve, ascending.
inline std::vector<std::size_t> points_on_curve(const Arrangement& arr, const Curve& c,
                                                const PointIndex& index) {
    std::vector<std::size_t> on;
    for (std::size_t i = 1; i <= arr.window(); ++i) {
        auto it = index.find(std::pair(c.j + static_cast<std::int64_t>(i),
                                       arr.generator()[i - 1] + c.u));
        if (it != index.end()) on.push_back(it->second);
    }
    std::sort(on.begin(), on.end());
    return on;
}

}  // namespace detail

struct IncidenceCount {
    Scalar total;
    // point index -> total weight of incident curves; filled on request
    std::vector<std::uint64_t> per_point;
};

inline IncidenceCount count_incidences(const Arrangement& arr, bool want_per_point = false) {
    const auto index = detail::index_points(arr);
    unsigned __int128 acc = 0;
    std::vector<std::uint64_t> per_point(want_per_point ? arr.points().size() : 0, 0);
    for (const Curve& c : arr.curves())
        for (std::size_t p : detail::points_on_curve(arr, c, index)) {
            acc += static_cast<unsigned __int128>(c.weight) * arr.points()[p].weight;
            if (want_per_point) per_point[p] += c.weight;
        }
    return {from_u128(acc), std::move(per_point)};
}

// Curves = translates of the generator by {2..2N} x C_d, carrying the sumset
// multiplicity of their u-component; points = {3..3N} x C_{d+1}, weight 1. The
// point x-window is the full reach of curve x-indices (i + j), so every curve
// holds exactly N points and the weighted count is N * (net curve weight).
inline Arrangement build_arrangement(const ConvexSequence& seq, unsigned d,
                                     const Budget& budget = Budget::from_env()) {
    if (d == 0) throw domain_error("build_arrangement: d must be >= 1");
    const std::size_t n = seq.size();
    const WeightedSumset cd = build_weighted_sumset(seq, d, budget);
    const WeightedSumset cd1 = build_weighted_sumset(seq, d + 1, budget);
    require_work(Scalar(2 * n - 1) * cd.cardinality() + Scalar(3 * n - 2) * cd1.cardinality(),
                 budget,
                 "arrangement N=" + std::to_string(n) + " d=" + std::to_string(d));

    std::vector<Curve> curves;
    curves.reserve((2 * n - 1) * cd.cardinality());
    for (std::int64_t j = 2; j <= static_cast<std::int64_t>(2 * n); ++j)
        for (const auto& e : cd.entries()) curves.push_back({j, e.value, e.weight});

    std::vector<MarkedPoint> points;
    points.reserve((3 * n - 2) * cd1.cardinality());
    for (std::int64_t k = 3; k <= static_cast<std::int64_t>(3 * n); ++k)
        for (const auto& e : cd1.entries()) points.push_back({k, e.value, 1});

    return Arrangement(seq.values(), std::move(curves), std::move(points));
}

struct IntersectionWitness {
    std::size_t curve_a, curve_b;  // two curves through both points
    std::size_t point_a, point_b;  // two points on both curves
};

struct SimpleIntersectionResult {
    bool ok = true;
    std::optional<IntersectionWitness> witness;
};

// The two simple-intersection conditions (curve pairs share <= 1 point, point
// pairs lie on <= 1 common curve) are both equivalent to the absence of a
// mutually incident (curve, curve, point, point) 4-tuple, so one scan over
// per-curve point pairs settles both and yields a witness for either reading.
inline SimpleIntersectionResult verify_simple_intersection(
    const Arrangement& arr, const Budget& budget = Budget::from_env()) {
    const std::size_t n = arr.window();
    if (arr.points().size() >> 32)
        throw resource_error("verify_simple_intersection: too many points to key pairs");
    require_work(Scalar(arr.curves().size()) * (Scalar(n) * (n - 1) / 2), budget,
                 "verify_simple_intersection |L|=" + std::to_string(arr.curves().size()) +
                     " N=" + std::to_string(n));

    const auto index = detail::index_points(arr);
    std::vector<std::uint64_t> pair_keys;
    for (const Curve& c : arr.curves()) {
        const auto on = detail::points_on_curve(arr, c, index);
        for (std::size_t a = 0; a < on.size(); ++a)
            for (std::size_t b = a + 1; b < on.size(); ++b)
                pair_keys.push_back(static_cast<std::uint64_t>(on[a]) << 32 | on[b]);
    }
    std::sort(pair_keys.begin(), pair_keys.end());
    for (std::size_t i = 1; i < pair_keys.size(); ++i) {
        if (pair_keys[i] != pair_keys[i - 1]) continue;
        const std::size_t pa = pair_keys[i] >> 32;
        const std::size_t pb = pair_keys[i] & 0xffffffffULL;
        IntersectionWitness w{0, 0, pa, pb};
        bool first = true;
        for (std::size_t l = 0; l < arr.curves().size(); ++l) {
            if (!arr.incident(arr.curves()[l], arr.points()[pa]) ||
                !arr.incident(arr.curves()[l], arr.points()[pb]))
                continue;
            (first ? w.curve_a : w.curve_b) = l;
            if (!first) return {false, w};
            first = false;
        }
        throw std::logic_error("verify_simple_intersection: lost witness");
    }
    return {true, std::nullopt};
}

// (mu*nu)^{1/3} (m*n)^{2/3} + nu*m + mu*n
inline double st_bound(double m, double n, double mu, double nu) {
    if (!(m > 0) || !(n > 0) || !(mu > 0) || !(nu > 0))
        throw domain_error("st_bound: arguments must be positive");
    return std::cbrt(mu * nu) * std::cbrt(m * n) * std::cbrt(m * n) + nu * m + mu * n;
}

struct RearrangeStep {
    char side;        // 'P' or 'L'
    bool swap;        // true: weight swap; false: unit shift a -> b
    std::size_t a, b; // indices into the input arrangement's points()/curves()
    bool removed;     // shift drained a to zero and dropped it
    Scalar before, after;  // incidence totals around the step
};

struct RearrangeResult {
    Arrangement arrangement;
    std::vector<RearrangeStep> trace;
    Scalar initial_incidences;
    Scalar final_incidences;
};

namespace detail {

// One greedy pass: equalize `weights` at the side's maximum. `incident` is the
// fixed opposite-side incident weight per element; I is maintained exactly.
// Each step picks the ordered pair (a, b), weight(a) <= weight(b) < top,
// maximizing incident(b) - incident(a) (ties by index). A non-negative gap is a
// unit shift a -> b, which strictly spreads the weights; a negative gap means
// every admissible pair is inverted, and swapping the two weights strictly
// increases I. Both moves keep I non-decreasing, so the pass terminates.
template <typename Recorder>
inline void equalize(std::vector<std::uint64_t>& weights, std::vector<bool>& alive,
                     const std::vector<std::uint64_t>& incident, std::uint64_t top,
                     Scalar& incidences, Recorder record) {
    for (;;) {
        std::vector<std::size_t> open;
        for (std::size_t i = 0; i < weights.size(); ++i)
            if (alive[i] && weights[i] < top) open.push_back(i);
        if (open.empty()) return;

        bool found = false;
        std::size_t best_a = 0, best_b = 0;
        __int128 best_gap = 0;
        for (std::size_t a : open)
            for (std::size_t b : open) {
                if (a == b || weights[a] > weights[b]) continue;
                const __int128 gap = static_cast<__int128>(incident[b]) -
                                     static_cast<__int128>(incident[a]);
                if (!found || gap > best_gap) {
                    found = true;
                    best_gap = gap;
                    best_a = a;
                    best_b = b;
                }
            }
        if (!found) throw std::logic_error("equalize: no admissible pair");

        const Scalar before = incidences;
        if (best_gap >= 0) {
            weights[best_a] -= 1;
            weights[best_b] += 1;
            incidences += Scalar(incident[best_b]) - Scalar(incident[best_a]);
            const bool removed = weights[best_a] == 0;
            if (removed) alive[best_a] = false;
            record(RearrangeStep{'?', false, best_a, best_b, removed, before, incidences});
        } else {
            // best_gap < 0 implies no equal-weight pair existed (its aligned
            // labeling would have won), so this swap is strictly productive.
            if (weights[best_a] == weights[best_b])
                throw std::logic_error("equalize: no-op swap selected");
            incidences += Scalar(incident[best_a] - incident[best_b]) *
                          (Scalar(weights[best_b]) - Scalar(weights[best_a]));
            std::swap(weights[best_a], weights[best_b]);
            record(RearrangeStep{'?', true, best_a, best_b, false, before, incidences});
        }
        if (incidences < before) throw std::logic_error("equalize: incidences decreased");
    }
}

}  // namespace detail

// Greedy uniformization: point weights first, then curve weights, following
// the swap/shift moves above. Output keeps n/nu points at weight nu and m/mu
// curves at weight mu, sub-multisets of the input; the trace records every
// move with exact incidence totals, non-decreasing throughout.
inline RearrangeResult rearrange_uniform(const Arrangement& arr) {
    if (arr.curves().empty() || arr.points().empty())
        throw domain_error("rearrange_uniform: needs curves and points");
    const std::uint64_t mu = arr.max_curve_weight();
    const std::uint64_t nu = arr.max_point_weight();
    if (arr.net_curve_weight() % mu != 0)
        throw domain_error("rearrange_uniform: net curve weight " +
                           arr.net_curve_weight().str() + " is not a multiple of mu=" +
                           std::to_string(mu) + "; normalize the input weights first");
    if (arr.net_point_weight() % nu != 0)
        throw domain_error("rearrange_uniform: net point weight " +
                           arr.net_point_weight().str() + " is not a multiple of nu=" +
                           std::to_string(nu) + "; normalize the input weights first");

    const auto index = detail::index_points(arr);
    std::vector<std::vector<std::size_t>> on_curve;  // curve -> incident point indices
    on_curve.reserve(arr.curves().size());
    for (const Curve& c : arr.curves())
        on_curve.push_back(detail::points_on_curve(arr, c, index));

    std::vector<std::uint64_t> cw, pw;
    for (const Curve& c : arr.curves()) cw.push_back(c.weight);
    for (const MarkedPoint& p : arr.points()) pw.push_back(p.weight);
    std::vector<bool> curve_alive(cw.size(), true), point_alive(pw.size(), true);

    // w_p: incident curve weight per point; fixed during the point pass.
    std::vector<std::uint64_t> w_point(pw.size(), 0);
    for (std::size_t l = 0; l < cw.size(); ++l)
        for (std::size_t p : on_curve[l]) w_point[p] += cw[l];

    Scalar incidences = 0;
    for (std::size_t p = 0; p < pw.size(); ++p)
        incidences += Scalar(w_point[p]) * pw[p];
    const Scalar initial = incidences;

    RearrangeResult result{arr, {}, initial, initial};
    detail::equalize(pw, point_alive, w_point, nu, incidences, [&](RearrangeStep s) {
        s.side = 'P';
        result.trace.push_back(s);
    });

    // w_l: incident point weight per curve, against the settled point weights.
    std::vector<std::uint64_t> w_curve(cw.size(), 0);
    for (std::size_t l = 0; l < cw.size(); ++l)
        for (std::size_t p : on_curve[l])
            if (point_alive[p]) w_curve[l] += pw[p];
    detail::equalize(cw, curve_alive, w_curve, mu, incidences, [&](RearrangeStep s) {
        s.side = 'L';
        result.trace.push_back(s);
    });

    std::vector<Curve> out_curves;
    for (std::size_t l = 0; l < cw.size(); ++l)
        if (curve_alive[l]) out_curves.push_back({arr.curves()[l].j, arr.curves()[l].u, cw[l]});
    std::vector<MarkedPoint> out_points;
    for (std::size_t p = 0; p < pw.size(); ++p)
        if (point_alive[p]) out_points.push_back({arr.points()[p].k, arr.points()[p].c, pw[p]});
    result.arrangement = Arrangement(arr.generator(), std::move(out_curves), std::move(out_points));
    result.final_incidences = incidences;
    return result;
}

}  // namespace convseq
