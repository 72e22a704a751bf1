// Demonstrates the greedy weight-uniformization on a small translate
// arrangement: prints the arrangement, the step trace (JSON lines), and the
// incidence totals before and after.

#include <iostream>

#include "convseq/incidence.hpp"
#include "convseq/io.hpp"
#include "convseq/sequence.hpp"

int main() {
    using namespace convseq;

    // Generator f(i) = i^2 on i in 1..3; a handful of translates with skewed
    // curve weights, and every point each curve can reach, with point weights
    // chosen so that the net weight 8 is a multiple of the maximum 2.
    const ConvexSequence seq = gen_power(2, 3);
    std::vector<Curve> curves{{0, Scalar(0), 3}, {1, Scalar(-1), 2}, {2, Scalar(1), 1}};
    std::vector<MarkedPoint> points;
    std::vector<std::uint64_t> point_weights{2, 1, 1, 1, 1, 1, 1};
    std::size_t next = 0;
    for (const Curve& c : curves)
        for (std::size_t i = 1; i <= seq.size(); ++i) {
            const MarkedPoint p{c.j + static_cast<std::int64_t>(i),
                                seq[i - 1] + c.u,
                                point_weights[std::min(next, point_weights.size() - 1)]};
            bool seen = false;
            for (const MarkedPoint& q : points)
                if (q.k == p.k && q.c == p.c) seen = true;
            if (!seen) {
                points.push_back(p);
                ++next;
            }
        }

    Arrangement arr(seq.values(), curves, points);
    std::cout << "arrangement:\n" << arrangement_to_json(arr).dump(2) << "\n";
    std::cout << "m=" << arr.net_curve_weight() << " n=" << arr.net_point_weight()
              << " mu=" << arr.max_curve_weight() << " nu=" << arr.max_point_weight()
              << "\n\n";

    const RearrangeResult result = rearrange_uniform(arr);
    std::cout << "trace:\n";
    write_trace_jsonl(std::cout, result.trace);
    std::cout << "\nincidences: " << result.initial_incidences << " -> "
              << result.final_incidences << "\n";
    std::cout << "final arrangement:\n"
              << arrangement_to_json(result.arrangement).dump(2) << "\n";
    return 0;
}
