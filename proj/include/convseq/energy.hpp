#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "convseq/budget.hpp"
#include "convseq/errors.hpp"
#include "convseq/scalar.hpp"
#include "convseq/sequence.hpp"
#include "convseq/sumset.hpp"

namespace convseq {

enum class EnergyBackend { weights, bruteforce, dirichlet };

inline const char* backend_name(EnergyBackend b) {
    switch (b) {
        case EnergyBackend::weights: return "weights";
        case EnergyBackend::bruteforce: return "bruteforce";
        case EnergyBackend::dirichlet: return "dirichlet";
    }
    return "?";
}

// Number of ordered 2d-tuples with equal d-fold partial sums. Always >= N^d
// (diagonal tuples); the growth rate in N is the quantity under study, so no
// upper bound is asserted here.
struct EnergyReport {
    std::size_t n = 0;
    unsigned d = 0;
    Scalar energy;
    EnergyBackend backend = EnergyBackend::weights;
    SequenceMeta sequence_meta;
};

// energy = sum of squared multiplicities over the d-fold sumset.
inline EnergyReport energy_from_weights(const WeightedSumset& ws) {
    unsigned __int128 acc = 0;
    for (const auto& e : ws.entries())
        acc += static_cast<unsigned __int128>(e.weight) * e.weight;
    return {ws.source_size(), ws.fold(), from_u128(acc), EnergyBackend::weights,
            ws.source_meta()};
}

// Deliberately naive oracle: enumerate all N^{2d} tuples and test equality of
// the two d-fold sums. Hard-capped so it can only ever be used as an oracle.
inline EnergyReport energy_bruteforce(const ConvexSequence& seq, unsigned d) {
    constexpr std::uint64_t guard = 100'000'000ULL;
    if (d == 0) throw domain_error("energy_bruteforce: d must be >= 1");
    const std::size_t n = seq.size();
    if (ipow(n, 2 * d) > guard)
        throw resource_error("energy_bruteforce N=" + std::to_string(n) + " d=" +
                             std::to_string(d) + ": N^(2d) exceeds the oracle guard " +
                             std::to_string(guard));

    const bool small = detail::int64_safe(seq, d);
    std::vector<std::int64_t> v64;
    if (small)
        for (const Scalar& v : seq.values()) v64.push_back(v.convert_to<std::int64_t>());

    std::uint64_t count = 0;
    std::vector<std::size_t> idx(2 * d, 0);
    for (;;) {
        if (small) {
            std::int64_t left = 0, right = 0;
            for (unsigned t = 0; t < d; ++t) left += v64[idx[t]];
            for (unsigned t = d; t < 2 * d; ++t) right += v64[idx[t]];
            count += left == right;
        } else {
            Scalar left = 0, right = 0;
            for (unsigned t = 0; t < d; ++t) left += seq[idx[t]];
            for (unsigned t = d; t < 2 * d; ++t) right += seq[idx[t]];
            count += left == right;
        }
        unsigned pos = 0;
        while (pos < 2 * d && ++idx[pos] == n) idx[pos++] = 0;
        if (pos == 2 * d) break;
    }
    return {n, d, Scalar(count), EnergyBackend::bruteforce, seq.meta()};
}

// energy = sum of squared coefficients of (z^{b_1} + ... + z^{b_N})^d, computed
// by exact integer self-convolution on frequencies shifted to start at zero
// (shifting multiplies the polynomial by a monomial and changes no coefficient).
inline EnergyReport energy_dirichlet(const ConvexSequence& seq, unsigned d,
                                     const Budget& budget = Budget::from_env()) {
    if (d == 0) throw domain_error("energy_dirichlet: d must be >= 1");
    const std::size_t n = seq.size();
    const Scalar degree_bound =
        Scalar(d) * std::max(boost::multiprecision::abs(seq.front()),
                             boost::multiprecision::abs(seq.back()));
    require_work(degree_bound + 1, budget, "energy_dirichlet N=" + std::to_string(n) +
                                               " d=" + std::to_string(d) +
                                               " polynomial degree");
    constexpr std::uint64_t slot_cap = 200'000'000ULL;  // coefficient memory guard
    if (Scalar(d) * seq.span() + 1 > slot_cap)
        throw resource_error("energy_dirichlet N=" + std::to_string(n) + " d=" +
                             std::to_string(d) + ": coefficient array exceeds " +
                             std::to_string(slot_cap) + " slots");

    const std::uint64_t span = (seq.span()).convert_to<std::uint64_t>();
    std::vector<std::uint64_t> off(n);
    for (std::size_t i = 0; i < n; ++i)
        off[i] = (seq[i] - seq.front()).convert_to<std::uint64_t>();

    std::vector<std::uint64_t> coeff(span + 1, 0);
    for (std::uint64_t o : off) coeff[o] = 1;
    for (unsigned fold = 2; fold <= d; ++fold) {
        std::vector<std::uint64_t> next(static_cast<std::size_t>(fold) * span + 1, 0);
        for (std::size_t idx = 0; idx < coeff.size(); ++idx) {
            const std::uint64_t w = coeff[idx];
            if (w == 0) continue;
            for (std::uint64_t o : off) next[idx + o] += w;
        }
        coeff = std::move(next);
    }

    unsigned __int128 acc = 0;
    for (std::uint64_t r : coeff) acc += static_cast<unsigned __int128>(r) * r;
    return {n, d, from_u128(acc), EnergyBackend::dirichlet, seq.meta()};
}

// Floating demonstration of the same quantity: mean of |f(theta)|^{2d} over a
// uniform grid on one period, f(theta) = sum_j exp(2*pi*i*b_j*theta). Matches
// the exact energy after rounding once grid_points >= 2*d*(b_N - b_1) + 1.
inline double dirichlet_quadrature(const ConvexSequence& seq, unsigned d,
                                   std::size_t grid_points) {
    if (d == 0) throw domain_error("dirichlet_quadrature: d must be >= 1");
    if (grid_points == 0) throw domain_error("dirichlet_quadrature: empty grid");
    std::vector<double> off;
    off.reserve(seq.size());
    for (const Scalar& v : seq.values()) off.push_back(to_double(Scalar(v - seq.front())));
    constexpr double two_pi = 6.283185307179586476925286766559;
    double acc = 0.0;
    for (std::size_t g = 0; g < grid_points; ++g) {
        const double theta = static_cast<double>(g) / static_cast<double>(grid_points);
        double re = 0.0, im = 0.0;
        for (double o : off) {
            re += std::cos(two_pi * o * theta);
            im += std::sin(two_pi * o * theta);
        }
        acc += std::pow(re * re + im * im, static_cast<double>(d));
    }
    return acc / static_cast<double>(grid_points);
}

struct ExponentFit {
    std::vector<std::pair<double, double>> points;  // (N, value)
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;  // in log10 units
};

// Ordinary least squares on (log10 N, log10 value).
inline ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw domain_error("fit_exponent: need at least 3 points");
    std::vector<double> xs, ys;
    for (const auto& [n, value] : points) {
        if (!(n > 0) || !(value > 0))
            throw domain_error("fit_exponent: points must be positive");
        xs.push_back(std::log10(n));
        ys.push_back(std::log10(value));
    }
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j)
            if (xs[i] == xs[j]) throw domain_error("fit_exponent: duplicate N values");

    const double k = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    ExponentFit fit;
    fit.points = points;
    fit.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / k;
    for (std::size_t i = 0; i < xs.size(); ++i)
        fit.max_residual =
            std::max(fit.max_residual, std::abs(ys[i] - (fit.slope * xs[i] + fit.intercept)));
    return fit;
}

}  // namespace convseq
