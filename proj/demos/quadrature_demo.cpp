// Compares the exact coefficient-convolution energy with floating quadrature
// of |f(theta)|^{2d} on one period, at increasing grid sizes. Once the grid
// passes 2*d*(b_N - b_1) + 1 points the quadrature is exact up to rounding.

#include <cstdio>

#include "convseq/energy.hpp"
#include "convseq/sequence.hpp"

int main() {
    using namespace convseq;
    const unsigned d = 2;
    const ConvexSequence seq = gen_power(2, 8);
    const Scalar exact = energy_dirichlet(seq, d).energy;
    const std::size_t needed = (Scalar(2 * d) * seq.span() + 1).convert_to<std::size_t>();

    std::printf("sequence: squares, N=%zu, d=%u\n", seq.size(), d);
    std::printf("exact energy: %s\n", exact.str().c_str());
    std::printf("grid needed for exactness: %zu\n\n", needed);
    std::printf("%10s  %18s  %12s\n", "grid", "quadrature", "error");
    for (std::size_t grid : {8UL, 32UL, 128UL, needed, 2 * needed}) {
        const double q = dirichlet_quadrature(seq, d, grid);
        std::printf("%10zu  %18.6f  %12.3e\n", grid, q, q - to_double(exact));
    }
    return 0;
}
