#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "convseq/budget.hpp"
#include "convseq/errors.hpp"
#include "convseq/scalar.hpp"
#include "convseq/sequence.hpp"

namespace convseq {

// Snapshot of a lattice approximation: cells p in {0..q}^dim, each standing
// for the cube of side ~resolution around p/q, resolution = q^{-dim/s}.
class LatticeSet {
public:
    static LatticeSet full_box(std::uint64_t q, double s, unsigned dim,
                               const Budget& budget = Budget::from_env()) {
        validate(q, s, dim);
        require_work(ipow(q + 1, dim), budget,
                     "lattice box q=" + std::to_string(q) + " d=" + std::to_string(dim));
        LatticeSet set(q, s, dim, true);
        const std::size_t count = ipow(q + 1, dim).convert_to<std::size_t>();
        set.cells_.reserve(count * dim);
        std::vector<std::int64_t> p(dim, 0);
        for (;;) {
            set.cells_.insert(set.cells_.end(), p.begin(), p.end());
            unsigned axis = 0;
            while (axis < dim && ++p[axis] > static_cast<std::int64_t>(q)) p[axis++] = 0;
            if (axis == dim) break;
        }
        return set;
    }

    static LatticeSet from_cells(std::uint64_t q, double s, unsigned dim,
                                 std::vector<std::vector<std::int64_t>> cells) {
        validate(q, s, dim);
        LatticeSet set(q, s, dim, false);
        set.cells_.reserve(cells.size() * dim);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (cells[i].size() != dim)
                throw validation_error("lattice cell has wrong dimension", i + 1);
            for (std::int64_t coord : cells[i]) {
                if (coord < 0 || coord > static_cast<std::int64_t>(q))
                    throw validation_error("lattice cell outside [0,q]^d", i + 1);
                set.cells_.push_back(coord);
            }
        }
        return set;
    }

    std::uint64_t q() const { return q_; }
    double s() const { return s_; }
    unsigned dim() const { return dim_; }
    bool is_full_box() const { return full_; }
    double resolution() const {
        return std::pow(static_cast<double>(q_), -static_cast<double>(dim_) / s_);
    }
    std::size_t cell_count() const { return dim_ == 0 ? 0 : cells_.size() / dim_; }
    // coordinates of cell i
    const std::int64_t* cell(std::size_t i) const { return cells_.data() + i * dim_; }

private:
    static void validate(std::uint64_t q, double s, unsigned dim) {
        if (q == 0) throw domain_error("lattice: q must be >= 1");
        if (dim == 0) throw domain_error("lattice: dimension must be >= 1");
        if (!(s > 0) || !(s < static_cast<double>(dim)))
            throw domain_error("lattice: s must lie in (0, d)");
    }

    LatticeSet(std::uint64_t q, double s, unsigned dim, bool full)
        : q_(q), s_(s), dim_(dim), full_(full) {}

    std::uint64_t q_;
    double s_;
    unsigned dim_;
    bool full_;
    std::vector<std::int64_t> cells_;
};

// q_1 = 2, q_{j+1} = q_j^j: 2, 2, 4, 64, 16777216, then past 64 bits.
inline std::vector<std::uint64_t> q_schedule(std::size_t count) {
    if (count > 5) throw domain_error("q_schedule: entries beyond the 5th overflow 64 bits");
    std::vector<std::uint64_t> qs;
    Scalar q = 2;
    for (std::size_t j = 1; j <= count; ++j) {
        qs.push_back(q.convert_to<std::uint64_t>());
        q = ipow(q, static_cast<unsigned>(j));
    }
    return qs;
}

using ScalarFn = std::function<Scalar(const Scalar&)>;

inline ScalarFn power_fn(unsigned k) {
    if (k == 0) throw domain_error("power_fn: exponent must be >= 1");
    return [k](const Scalar& x) { return ipow(x, k); };
}

// f backed by a sequence table, defined on integer arguments 1..N.
inline ScalarFn table_fn(const ConvexSequence& seq) {
    auto values = std::make_shared<const std::vector<Scalar>>(seq.values());
    return [values](const Scalar& x) {
        if (x < 1 || x > values->size())
            throw domain_error("table_fn: argument " + x.str() + " outside 1.." +
                               std::to_string(values->size()));
        return (*values)[x.convert_to<std::size_t>() - 1];
    };
}

// rho_f(x) = f(x_1) + ... + f(x_d); for f(x) = x^2 this is the squared norm.
inline Scalar rho_f(const std::vector<Scalar>& x, const ScalarFn& f) {
    if (x.empty()) throw domain_error("rho_f: empty vector");
    Scalar acc = 0;
    for (const Scalar& coord : x) acc += f(coord);
    return acc;
}

namespace detail {

inline void sort_unique(std::vector<Scalar>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace detail

// Count of distinct rho_f(z - w) over cell pairs. For the full box the
// difference set is exactly {-q..q}^dim and rho_f is separable, so the value
// set is the dim-fold sumset of the one-axis value set; general cell sets fall
// back to pair enumeration.
inline std::size_t distance_value_count(const LatticeSet& set, const ScalarFn& f,
                                        const Budget& budget = Budget::from_env()) {
    if (set.cell_count() == 0) throw domain_error("distance_value_count: empty set");
    if (set.is_full_box()) {
        std::vector<Scalar> axis;
        for (std::int64_t t = -static_cast<std::int64_t>(set.q());
             t <= static_cast<std::int64_t>(set.q()); ++t)
            axis.push_back(f(Scalar(t)));
        detail::sort_unique(axis);
        std::vector<Scalar> values = axis;
        for (unsigned fold = 2; fold <= set.dim(); ++fold) {
            require_work(Scalar(values.size()) * axis.size(), budget,
                         "distance values q=" + std::to_string(set.q()) + " d=" +
                             std::to_string(set.dim()));
            std::vector<Scalar> next;
            next.reserve(values.size() * axis.size());
            for (const Scalar& v : values)
                for (const Scalar& a : axis) next.push_back(v + a);
            detail::sort_unique(next);
            values = std::move(next);
        }
        return values.size();
    }

    const std::size_t count = set.cell_count();
    require_work(Scalar(count) * count, budget,
                 "distance pairs over " + std::to_string(count) + " cells");
    std::vector<Scalar> values;
    values.reserve(count * count);
    for (std::size_t a = 0; a < count; ++a)
        for (std::size_t b = 0; b < count; ++b) {
            Scalar acc = 0;
            for (unsigned axis = 0; axis < set.dim(); ++axis)
                acc += f(Scalar(set.cell(a)[axis] - set.cell(b)[axis]));
            values.push_back(std::move(acc));
        }
    detail::sort_unique(values);
    return values.size();
}

// Size of the greedy maximal delta-separated subset of an ascending list:
// keep a value iff it exceeds the last kept one by at least delta. With
// `scale_pow10` set, delta is interpreted in the unscaled value domain.
inline std::size_t separated_count(const std::vector<Scalar>& values, double delta,
                                   unsigned scale_pow10 = 0) {
    if (!(delta > 0)) throw domain_error("separated_count: delta must be positive");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] < values[i - 1])
            throw validation_error("separated_count: values not ascending", i + 1);
    if (values.empty()) return 0;
    const double step = delta * std::pow(10.0, static_cast<double>(scale_pow10));
    std::size_t kept = 1;
    Scalar last = values.front();
    for (const Scalar& v : values)
        if (to_double(Scalar(v - last)) >= step) {
            ++kept;
            last = v;
        }
    return kept;
}

inline std::size_t separated_count(const std::vector<double>& values, double delta) {
    if (!(delta > 0)) throw domain_error("separated_count: delta must be positive");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] < values[i - 1])
            throw validation_error("separated_count: values not ascending", i + 1);
    if (values.empty()) return 0;
    std::size_t kept = 1;
    double last = values.front();
    for (double v : values)
        if (v - last >= delta) {
            ++kept;
            last = v;
        }
    return kept;
}

}  // namespace convseq
