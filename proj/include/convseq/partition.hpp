#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "convseq/errors.hpp"
#include "convseq/scalar.hpp"
#include "convseq/sumset.hpp"

namespace convseq {

// alpha = 2(1 - 2^{-d}); beta = d - (4/3)(1 - 2^{-d}); energy exponent 2d - alpha.
struct GrowthExponents {
    unsigned d;
    Rational alpha;
    Rational beta;
    Rational energy_exponent;
};

inline GrowthExponents growth_exponents(unsigned d) {
    if (d < 2) throw domain_error("growth_exponents: d must be >= 2");
    if (d > 64) throw domain_error("growth_exponents: d out of supported range");
    const Rational half_pow = Rational(1, ipow(2, d));  // 2^{-d}
    GrowthExponents e;
    e.d = d;
    e.alpha = 2 * (1 - half_pow);
    e.beta = Rational(d) - Rational(4, 3) * (1 - half_pow);
    e.energy_exponent = Rational(2 * d) - e.alpha;
    return e;
}

// Average-weight ceiling N^{d - alpha_d} for the d-fold sumset.
inline double average_weight_bound(unsigned d, std::size_t n) {
    if (n == 0) throw domain_error("average_weight_bound: N must be >= 1");
    const Rational expo = Rational(d) - growth_exponents(d).alpha;
    return std::pow(static_cast<double>(n), to_double(expo));
}

// Where the threshold schedule starts: mu_0 = N^d (the net weight) or the
// Andrews peak-multiplicity bound N^{d(d-1)/(d+1)}.
enum class PartitionStart { net_weight, andrews };

// How a class is filled from the ranked remainder: by the mass target
// m_i = N^{-(3*eps+delta_i)/2} * m, or by the next weight threshold.
enum class PartitionFill { mass_target, threshold };

enum class PartitionStop { threshold_reached, flat_remainder, class_cap, exhausted };

inline const char* stop_name(PartitionStop s) {
    switch (s) {
        case PartitionStop::threshold_reached: return "threshold_reached";
        case PartitionStop::flat_remainder: return "flat_remainder";
        case PartitionStop::class_cap: return "class_cap";
        case PartitionStop::exhausted: return "exhausted";
    }
    return "?";
}

struct PartitionClass {
    double threshold;      // schedule value mu_i = mu_bar * N^{delta_i}
    double target_mass;    // mass target for this class (final class: remainder)
    std::uint64_t mass;    // actual net weight pulled
    std::size_t begin, end;  // rank range [begin, end) in the weight profile
    std::uint64_t max_member_weight;
    double i_tilde;        // mu_i^{1/3} * mass^{2/3}
    bool budget_ok;        // i_tilde <= N^{-eps} * i_bar
};

struct PartitionReport {
    std::size_t n = 0;
    unsigned d = 0;
    Rational epsilon;
    PartitionStart start = PartitionStart::net_weight;
    PartitionFill fill = PartitionFill::mass_target;
    std::vector<Rational> delta;  // full schedule delta_0 .. delta_{class_cap}
    std::vector<PartitionClass> classes;
    std::size_t M = 0;          // index of the last class
    std::size_t class_cap = 0;  // ceil(N^eps) + 1
    PartitionStop stop = PartitionStop::exhausted;
    double mu_bar = 0, i_tilde = 0, i_bar = 0;
    // rank -> index into the sumset's entries(), weight-desc order
    std::vector<std::size_t> order;
    std::vector<std::uint64_t> ranked_weights;
};

// Greedy weight-class decomposition of C_d. Classes take the heaviest
// remaining values until their mass target (or the next threshold, in
// threshold fill mode); the schedule mu_i = mu_bar * N^{delta_i} follows the
// exact recursion delta_i = (3*eps + delta_{i-1})/4, whose fixed point is eps.
// The loop ends when the schedule or the actual remainder reaches 2*mu_bar,
// or at the hard class cap; the remainder becomes the final class.
inline PartitionReport build_partition(const WeightedSumset& ws,
                                       std::optional<Rational> epsilon = std::nullopt,
                                       PartitionStart start = PartitionStart::net_weight,
                                       PartitionFill fill = PartitionFill::mass_target) {
    const std::size_t n = ws.source_size();
    const unsigned d = ws.fold();
    if (n < 2) throw domain_error("build_partition: N must be >= 2");
    const GrowthExponents expo = growth_exponents(d);  // enforces d >= 2

    Rational delta0;
    if (start == PartitionStart::net_weight) {
        delta0 = expo.alpha;  // mu_0 = N^d = mu_bar * N^{alpha_d}
    } else {
        delta0 = Rational(static_cast<unsigned long>(d) * (d - 1), d + 1) -
                 (Rational(d) - expo.alpha);
    }
    const Rational eps = epsilon.value_or(delta0 / 9);
    if (eps <= 0) throw domain_error("build_partition: epsilon must be positive");
    if (eps >= delta0)
        throw domain_error("build_partition: epsilon must be below delta_0 = " +
                           delta0.str() + " for a decreasing schedule");

    PartitionReport report;
    report.n = n;
    report.d = d;
    report.epsilon = eps;
    report.start = start;
    report.fill = fill;

    const double nd = static_cast<double>(n);
    const double eps_d = to_double(eps);
    report.class_cap =
        static_cast<std::size_t>(std::ceil(std::pow(nd, eps_d))) + 1;
    report.delta.push_back(delta0);
    for (std::size_t i = 1; i <= report.class_cap; ++i)
        report.delta.push_back((3 * eps + report.delta.back()) / 4);

    report.mu_bar = std::pow(nd, d - to_double(expo.alpha));
    const double total_mass = std::pow(nd, static_cast<double>(d));
    report.i_bar = std::cbrt(report.mu_bar) * std::cbrt(total_mass) * std::cbrt(total_mass);

    const WeightProfile profile(ws);
    report.order = profile.order();
    report.ranked_weights = profile.ordered_weights();
    const auto& ranked = report.ranked_weights;

    std::size_t pos = 0;
    for (std::size_t i = 0;; ++i) {
        const double mu_i = report.mu_bar * std::pow(nd, to_double(report.delta[i]));
        bool final_class = false;
        if (pos == ranked.size()) {
            report.stop = PartitionStop::exhausted;
            break;
        }
        if (mu_i <= 2 * report.mu_bar) {
            report.stop = PartitionStop::threshold_reached;
            final_class = true;
        } else if (static_cast<double>(ranked[pos]) <= 2 * report.mu_bar) {
            report.stop = PartitionStop::flat_remainder;
            final_class = true;
        } else if (i == report.class_cap) {
            report.stop = PartitionStop::class_cap;
            final_class = true;
        }

        PartitionClass cls;
        cls.threshold = mu_i;
        cls.begin = pos;
        unsigned __int128 mass = 0;
        if (final_class) {
            cls.target_mass = 0;
            while (pos < ranked.size()) mass += ranked[pos++];
        } else if (fill == PartitionFill::mass_target) {
            cls.target_mass =
                total_mass * std::pow(nd, -to_double((3 * eps + report.delta[i]) / 2));
            while (pos < ranked.size() && static_cast<double>(mass) < cls.target_mass)
                mass += ranked[pos++];
        } else {
            const double mu_next =
                report.mu_bar * std::pow(nd, to_double(report.delta[i + 1]));
            cls.target_mass = mu_next;
            while (pos < ranked.size() && static_cast<double>(ranked[pos]) > mu_next)
                mass += ranked[pos++];
        }
        cls.end = pos;
        cls.mass = static_cast<std::uint64_t>(mass);
        cls.max_member_weight = cls.end > cls.begin ? ranked[cls.begin] : 0;
        cls.i_tilde = std::cbrt(mu_i) * std::cbrt(cls.mass) * std::cbrt(cls.mass);
        cls.budget_ok = cls.i_tilde <= std::pow(nd, -eps_d) * report.i_bar;
        report.classes.push_back(cls);
        if (final_class) break;
    }

    report.M = report.classes.size() - 1;
    for (const auto& c : report.classes) report.i_tilde += c.i_tilde;
    return report;
}

}  // namespace convseq
