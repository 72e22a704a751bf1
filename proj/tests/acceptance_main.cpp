// Acceptance gate: ten end-to-end checks with stated tolerances and runtime
// limits, one PASS/FAIL line each. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "convseq/energy.hpp"
#include "convseq/experiment.hpp"
#include "convseq/falconer.hpp"
#include "convseq/incidence.hpp"
#include "convseq/io.hpp"
#include "convseq/partition.hpp"
#include "convseq/rng.hpp"
#include "convseq/sequence.hpp"
#include "convseq/sumset.hpp"

using namespace convseq;

namespace {

int failures = 0;

std::string fmt(double v) { return format_double(v, "%.4g"); }

// Runs one criterion, enforcing `limit_seconds` when positive.
void run_check(const char* name, double limit_seconds,
               const std::function<bool(std::string&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && limit_seconds > 0 && secs > limit_seconds) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("exceeded ") +
                  fmt(limit_seconds) + "s limit";
    }
    if (!ok) ++failures;
    std::printf("%s  %-38s (%6.2fs)  %s\n", ok ? "PASS" : "FAIL", name, secs,
                detail.c_str());
    std::fflush(stdout);
}

// ---------------------------------------------------------------------------
// 1. Multiplicity-based energy equals brute-force tuple counting.
bool check_oracle_equivalence(std::string& detail) {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const std::size_t n = 2 + seed % 9;  // 2..10
        const ConvexSequence seq = gen_random_convex(seed, n);
        for (unsigned d : {2u, 3u}) {
            const Scalar via_weights =
                energy_from_weights(build_weighted_sumset(seq, d)).energy;
            const Scalar via_tuples = energy_bruteforce(seq, d).energy;
            if (via_weights != via_tuples) {
                detail = "mismatch at seed " + std::to_string(seed) +
                         " d=" + std::to_string(d);
                return false;
            }
        }
    }
    detail = "50 random sequences, N<=10, d in {2,3}";
    return true;
}

// 2. Coefficient-convolution backend identical to the multiplicity backend.
bool check_backend_identity(std::string& detail) {
    std::size_t cases = 0;
    for (unsigned k : {1u, 2u, 3u})
        for (unsigned d : {2u, 3u})
            for (std::size_t n = 1; n <= 64; ++n) {
                const ConvexSequence seq = gen_power(k, n);
                const Scalar via_weights =
                    energy_from_weights(build_weighted_sumset(seq, d)).energy;
                const Scalar via_coeffs = energy_dirichlet(seq, d).energy;
                if (via_weights != via_coeffs) {
                    detail = "mismatch at k=" + std::to_string(k) + " d=" +
                             std::to_string(d) + " N=" + std::to_string(n);
                    return false;
                }
                ++cases;
            }
    detail = std::to_string(cases) + " exact identities";
    return true;
}

// 3. Linear baseline: energy (2N^3+N)/3 exactly, and slope 3.00 +- 0.02.
bool check_closed_form(std::string& detail) {
    for (std::size_t n = 1; n <= 200; ++n) {
        const Scalar want = (2 * Scalar(n) * n * n + n) / 3;
        const Scalar got =
            energy_from_weights(build_weighted_sumset(gen_power(1, n), 2)).energy;
        if (got != want) {
            detail = "closed form fails at N=" + std::to_string(n);
            return false;
        }
        if (n >= 2 && n <= 10 && energy_bruteforce(gen_power(1, n), 2).energy != want) {
            detail = "oracle disagrees with closed form at N=" + std::to_string(n);
            return false;
        }
    }
    std::vector<std::pair<double, double>> pts;
    for (std::size_t n : {64, 128, 256, 512, 1024}) {
        const Scalar e =
            energy_from_weights(build_weighted_sumset(gen_power(1, n), 2)).energy;
        pts.emplace_back(static_cast<double>(n), to_double(e));
    }
    const double slope = fit_exponent(pts).slope;
    detail = "slope " + fmt(slope);
    return slope >= 2.98 && slope <= 3.02;
}

// Shared between criteria 4 and 5: one sumset pass per (sequence, N).
struct GrowthTrend {
    std::string label;
    std::vector<std::pair<double, double>> energy_pts, card_pts, majorant_pts;
};
std::vector<GrowthTrend> growth_trends;

// 4. d=2 growth: energy slope <= 2.6 and |C_2| slope >= 1.45 per sequence.
bool check_growth_trends(std::string& detail) {
    const std::vector<std::size_t> grid{128, 256, 512, 1024, 2048, 4096};
    std::vector<std::pair<std::string, std::function<ConvexSequence(std::size_t)>>> gens;
    gens.emplace_back("squares", [](std::size_t n) { return gen_power(2, n); });
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
        gens.emplace_back("random:" + std::to_string(seed),
                          [seed](std::size_t n) { return gen_random_convex(seed, n); });

    growth_trends.clear();
    double max_energy_slope = 0, min_card_slope = 1e9;
    for (const auto& [label, gen] : gens) {
        GrowthTrend t;
        t.label = label;
        for (std::size_t n : grid) {
            const WeightedSumset ws = build_weighted_sumset(gen(n), 2);
            const WeightProfile profile(ws);
            t.energy_pts.emplace_back(static_cast<double>(n),
                                      to_double(energy_from_weights(ws).energy));
            t.card_pts.emplace_back(static_cast<double>(n),
                                    static_cast<double>(ws.cardinality()));
            t.majorant_pts.emplace_back(static_cast<double>(n),
                                        majorant_ratio(profile, n, 1.0));
        }
        max_energy_slope = std::max(max_energy_slope, fit_exponent(t.energy_pts).slope);
        min_card_slope = std::min(min_card_slope, fit_exponent(t.card_pts).slope);
        growth_trends.push_back(std::move(t));
    }
    detail = "max energy slope " + fmt(max_energy_slope) + " (<=2.6), min |C_2| slope " +
             fmt(min_card_slope) + " (>=1.45)";
    return max_energy_slope <= 2.6 && min_card_slope >= 1.45;
}

// 5. Ranked-multiplicity majorant stays bounded: log-log slope <= 0.05.
bool check_majorant_bounded(std::string& detail) {
    if (growth_trends.empty()) {
        detail = "growth data unavailable (criterion 4 must run first)";
        return false;
    }
    double max_slope = -1e9;
    for (const GrowthTrend& t : growth_trends)
        max_slope = std::max(max_slope, fit_exponent(t.majorant_pts).slope);
    detail = "max ratio slope " + fmt(max_slope) + " (<=0.05)";
    return max_slope <= 0.05;
}

// 6. Quantized square roots: only swap collisions, energy = 2N^2 - N exactly.
bool check_sqrt_diagonal(std::string& detail) {
    for (std::size_t n : {64, 128, 256, 512, 1024}) {
        const ConvexSequence seq = gen_sqrt_squarefree(30, n);
        const Scalar e = energy_from_weights(build_weighted_sumset(seq, 2)).energy;
        if (e != 2 * Scalar(n) * n - n) {
            detail = "extra collisions at N=" + std::to_string(n);
            return false;
        }
    }
    detail = "energy = 2N^2-N for N in {64..1024} at precision 30";
    return true;
}

// Small random arrangement with conforming weights, as in the unit tests but
// with varying generator length.
std::vector<std::uint64_t> conforming_weights(std::mt19937_64& gen, std::size_t count) {
    for (;;) {
        std::vector<std::uint64_t> w;
        std::uint64_t net = 0, top = 0;
        for (std::size_t i = 0; i < count; ++i) {
            w.push_back(1 + uniform_below(gen, 4));
            net += w.back();
            top = std::max(top, w.back());
        }
        if (net % top == 0) return w;
    }
}

Arrangement seeded_arrangement(std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    const ConvexSequence f = gen_random_convex(seed + 5000, 3 + seed % 4);
    std::vector<std::pair<std::int64_t, Scalar>> shifts;
    for (std::int64_t j : {0, 1, 3})
        for (long long u : {0, 2, -5}) shifts.emplace_back(j, Scalar(u));
    const std::vector<std::uint64_t> cw = conforming_weights(gen, shifts.size());
    std::vector<Curve> curves;
    for (std::size_t i = 0; i < shifts.size(); ++i)
        curves.push_back({shifts[i].first, shifts[i].second, cw[i]});

    std::set<std::pair<std::int64_t, Scalar>> seen;
    std::vector<std::pair<std::int64_t, Scalar>> locs;
    for (const Curve& c : curves)
        for (std::size_t i = 1; i <= f.size(); ++i) {
            std::pair<std::int64_t, Scalar> key(c.j + static_cast<std::int64_t>(i),
                                                f[i - 1] + c.u);
            if (seen.insert(key).second) locs.push_back(key);
        }
    locs.emplace_back(100, Scalar(0));
    locs.emplace_back(101, Scalar(7));
    const std::vector<std::uint64_t> pw = conforming_weights(gen, locs.size());
    std::vector<MarkedPoint> points;
    for (std::size_t i = 0; i < locs.size(); ++i)
        points.push_back({locs[i].first, locs[i].second, pw[i]});
    return Arrangement(f.values(), std::move(curves), std::move(points));
}

// 7. Greedy uniformization: monotone, conservative, uniform, terminating.
bool check_rearrangement(std::string& detail) {
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const Arrangement arr = seeded_arrangement(seed);
        const std::uint64_t mu = arr.max_curve_weight();
        const std::uint64_t nu = arr.max_point_weight();
        const RearrangeResult res = rearrange_uniform(arr);
        const std::string at = " at seed " + std::to_string(seed);

        if (res.initial_incidences != count_incidences(arr).total) {
            detail = "initial incidence total wrong" + at;
            return false;
        }
        Scalar cursor = res.initial_incidences;
        for (const RearrangeStep& s : res.trace) {
            if (s.before != cursor || s.after < s.before) {
                detail = "trace not monotone" + at;
                return false;
            }
            cursor = s.after;
        }
        if (cursor != res.final_incidences ||
            res.final_incidences != count_incidences(res.arrangement).total) {
            detail = "final incidence total wrong" + at;
            return false;
        }
        if (res.arrangement.net_curve_weight() != arr.net_curve_weight() ||
            res.arrangement.net_point_weight() != arr.net_point_weight()) {
            detail = "net weight not conserved" + at;
            return false;
        }
        for (const Curve& c : res.arrangement.curves())
            if (c.weight != mu) {
                detail = "non-uniform curve weight" + at;
                return false;
            }
        for (const MarkedPoint& p : res.arrangement.points())
            if (p.weight != nu) {
                detail = "non-uniform point weight" + at;
                return false;
            }
    }
    detail = "200 seeded arrangements";
    return true;
}

// 8. Simple intersection: convex generators pass, a linear generator fails.
bool check_simple_intersection(std::string& detail) {
    std::vector<std::pair<std::string, Arrangement>> cases;
    for (std::size_t n : {2, 4, 8, 16, 32})
        for (unsigned d : {1u, 2u})
            cases.emplace_back("squares N=" + std::to_string(n) + " d=" + std::to_string(d),
                               build_arrangement(gen_power(2, n), d));
    for (unsigned d : {1u, 2u}) {
        cases.emplace_back("sqrt N=16 d=" + std::to_string(d),
                           build_arrangement(gen_sqrt_squarefree(30, 16), d));
        for (std::uint64_t seed = 1; seed <= 3; ++seed)
            cases.emplace_back(
                "random:" + std::to_string(seed) + " d=" + std::to_string(d),
                build_arrangement(gen_random_convex(seed, 16), d));
    }
    for (const auto& [label, arr] : cases)
        if (!verify_simple_intersection(arr).ok) {
            detail = "false violation for " + label;
            return false;
        }

    // Two translates of f(i)=i along their own direction share 3 points.
    const ConvexSequence linear = gen_power(1, 4);
    std::vector<MarkedPoint> points;
    for (long long x = 1; x <= 5; ++x) points.push_back({x, Scalar(x), 1});
    const Arrangement bad(linear.values(), {{0, Scalar(0), 1}, {1, Scalar(1), 1}},
                          std::move(points));
    const SimpleIntersectionResult res = verify_simple_intersection(bad);
    if (res.ok || !res.witness) {
        detail = "linear arrangement not flagged";
        return false;
    }
    const IntersectionWitness& w = *res.witness;
    const bool witness_valid =
        w.curve_a != w.curve_b && w.point_a != w.point_b &&
        bad.incident(bad.curves()[w.curve_a], bad.points()[w.point_a]) &&
        bad.incident(bad.curves()[w.curve_a], bad.points()[w.point_b]) &&
        bad.incident(bad.curves()[w.curve_b], bad.points()[w.point_a]) &&
        bad.incident(bad.curves()[w.curve_b], bad.points()[w.point_b]);
    if (!witness_valid) {
        detail = "witness does not certify the violation";
        return false;
    }
    detail = std::to_string(cases.size()) + " convex arrangements pass; linear fails with witness";
    return true;
}

// 9. Weight-class partition structure for squares, d in {2,3}.
bool check_partition_structure(std::string& detail) {
    Budget big;
    big.work = 3'000'000'000ULL;  // N=1024, d=3 exceeds the default tuple budget
    for (unsigned d : {2u, 3u})
        for (std::size_t n : {64, 128, 256, 512, 1024}) {
            const WeightedSumset ws = build_weighted_sumset(gen_power(2, n), d, big);
            const PartitionReport r = build_partition(ws);
            const std::string at =
                " at d=" + std::to_string(d) + " N=" + std::to_string(n);

            std::size_t cursor = 0;
            unsigned __int128 mass = 0;
            for (const PartitionClass& cls : r.classes) {
                if (cls.begin != cursor || cls.end < cls.begin) {
                    detail = "classes do not tile the ranks" + at;
                    return false;
                }
                cursor = cls.end;
                mass += cls.mass;
            }
            if (cursor != r.ranked_weights.size() || from_u128(mass) != ws.total_weight()) {
                detail = "partition not complete" + at;
                return false;
            }

            if (r.delta[1] != r.delta[0] / 3) {
                detail = "delta_1 != delta_0/3" + at;
                return false;
            }
            const double eps = to_double(r.epsilon);
            for (std::size_t i = 1; i < r.delta.size(); ++i) {
                const double want = (3 * eps + to_double(r.delta[i - 1])) / 4;
                if (std::abs(to_double(r.delta[i]) - want) > 1e-12 ||
                    r.delta[i] != (3 * r.epsilon + r.delta[i - 1]) / 4) {
                    detail = "delta recursion broken" + at;
                    return false;
                }
            }

            const std::size_t cap = static_cast<std::size_t>(
                                        std::ceil(std::pow(static_cast<double>(n), eps))) +
                                    1;
            if (r.class_cap != cap || r.M > cap) {
                detail = "class cap violated" + at;
                return false;
            }
        }
    detail = "exact tiling, recursion, and caps on 10 reports";
    return true;
}

// 10. Lattice distance counts vs all-pairs; separated table reproducible.
bool check_lattice_counts(std::string& detail) {
    const ScalarFn sq = power_fn(2);
    for (std::uint64_t q = 1; q <= 8; ++q) {
        const LatticeSet box = LatticeSet::full_box(q, 1.0, 2);
        std::set<Scalar> naive;
        for (std::size_t a = 0; a < box.cell_count(); ++a)
            for (std::size_t b = 0; b < box.cell_count(); ++b) {
                Scalar acc = 0;
                for (unsigned axis = 0; axis < 2; ++axis)
                    acc += sq(Scalar(box.cell(a)[axis] - box.cell(b)[axis]));
                naive.insert(acc);
            }
        if (distance_value_count(box, sq) != naive.size()) {
            detail = "count mismatch at q=" + std::to_string(q);
            return false;
        }
    }

    ExperimentConfig cfg;
    cfg.command = Command::falconer;
    cfg.mode = "separated";
    cfg.sequence = SequenceKind::parse("power:2");
    cfg.d = 2;
    cfg.n_grid = {64, 128, 256, 512};
    cfg.output = "acceptance_separated_a.csv";
    run_experiment(cfg);
    cfg.output = "acceptance_separated_b.csv";
    run_experiment(cfg);
    const CsvTable table = read_csv_file("acceptance_separated_a.csv");
    std::ifstream a("acceptance_separated_a.csv", std::ios::binary);
    std::ifstream b("acceptance_separated_b.csv", std::ios::binary);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    std::remove("acceptance_separated_a.csv");
    std::remove("acceptance_separated_b.csv");
    if (sa.str().empty() || sa.str() != sb.str()) {
        detail = "separated-count table not byte-identical";
        return false;
    }
    if (table.header != std::vector<std::string>{"N", "delta", "separated_count"} ||
        table.rows.size() != 4) {
        detail = "separated-count table malformed";
        return false;
    }
    detail = "q<=8 counts match all-pairs; harness table byte-stable";
    return true;
}

}  // namespace

int main() {
    run_check("1 multiplicity-vs-bruteforce energy", 10, check_oracle_equivalence);
    run_check("2 convolution backend identity", 30, check_backend_identity);
    run_check("3 linear closed form + slope", 0, check_closed_form);
    run_check("4 d=2 energy/cardinality slopes", 300, check_growth_trends);
    run_check("5 majorant ratio boundedness", 0, check_majorant_bounded);
    run_check("6 quantized-root diagonal energy", 0, check_sqrt_diagonal);
    run_check("7 rearrangement properties", 10, check_rearrangement);
    run_check("8 simple-intersection verification", 0, check_simple_intersection);
    run_check("9 partition structure", 0, check_partition_structure);
    run_check("10 lattice distance counts", 0, check_lattice_counts);
    std::printf("%d/10 criteria passed\n", 10 - failures);
    return failures;
}
