#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "convseq/energy.hpp"

using namespace convseq;

namespace {

ConvexSequence seq_of(std::initializer_list<long long> xs) {
    std::vector<Scalar> v;
    for (long long x : xs) v.emplace_back(x);
    return ConvexSequence(std::move(v));
}

Scalar closed_form_linear_energy(long long n) {  // pair-collision count for b_i = i
    return (2 * Scalar(n) * n * n + n) / 3;
}

}  // namespace

TEST_CASE("energy from weights matches hand-checked values") {
    REQUIRE(energy_from_weights(build_weighted_sumset(gen_power(2, 3), 2)).energy == 15);
    REQUIRE(energy_from_weights(build_weighted_sumset(gen_power(1, 3), 2)).energy == 19);
    for (unsigned d : {1u, 2u, 4u})
        REQUIRE(energy_from_weights(build_weighted_sumset(seq_of({5}), d)).energy == 1);
}

TEST_CASE("linear sequences satisfy the cubic closed form") {
    for (long long n : {1, 2, 3, 5, 17, 64, 200}) {
        Scalar e = energy_from_weights(build_weighted_sumset(gen_power(1, n), 2)).energy;
        REQUIRE(e == closed_form_linear_energy(n));
    }
}

TEST_CASE("brute force energy agrees on small cases") {
    REQUIRE(energy_bruteforce(gen_power(2, 3), 2).energy == 15);
    REQUIRE(energy_bruteforce(gen_power(1, 2), 1).energy == 2);
    REQUIRE(energy_bruteforce(seq_of({1, 2}), 2).energy == 6);

    for (unsigned d = 1; d <= 2; ++d) {
        for (std::uint64_t seed = 1; seed <= 8; ++seed) {
            ConvexSequence seq = gen_random_convex(seed, 7);
            REQUIRE(energy_bruteforce(seq, d).energy ==
                    energy_from_weights(build_weighted_sumset(seq, d)).energy);
        }
    }
    ConvexSequence squares = gen_power(2, 5);
    REQUIRE(energy_bruteforce(squares, 3).energy ==
            energy_from_weights(build_weighted_sumset(squares, 3)).energy);
}

TEST_CASE("brute force refuses oversized inputs") {
    REQUIRE_THROWS_AS(energy_bruteforce(gen_power(1, 1000), 3), resource_error);
    REQUIRE_THROWS_AS(energy_bruteforce(gen_power(2, 3), 0), domain_error);
}

TEST_CASE("quantized square roots only admit swap collisions") {
    for (std::size_t n : {2, 5, 16}) {
        ConvexSequence seq = gen_sqrt_squarefree(30, n);
        Scalar e = energy_from_weights(build_weighted_sumset(seq, 2)).energy;
        REQUIRE(e == 2 * Scalar(n) * n - n);
    }
    ConvexSequence tiny = gen_sqrt_squarefree(30, 4);
    REQUIRE(energy_bruteforce(tiny, 2).energy == 2 * 16 - 4);
}

TEST_CASE("coefficient convolution backend equals the weight backend") {
    for (unsigned d = 1; d <= 3; ++d) {
        for (std::size_t n : {1, 2, 7, 16}) {
            ConvexSequence squares = gen_power(2, n);
            REQUIRE(energy_dirichlet(squares, d).energy ==
                    energy_from_weights(build_weighted_sumset(squares, d)).energy);
        }
        ConvexSequence rnd = gen_random_convex(3, 12);
        REQUIRE(energy_dirichlet(rnd, d).energy ==
                energy_from_weights(build_weighted_sumset(rnd, d)).energy);
    }
    REQUIRE(energy_dirichlet(seq_of({1, 2}), 2).energy == 6);
    REQUIRE(energy_dirichlet(gen_power(2, 3), 2).energy == 15);
    REQUIRE(energy_dirichlet(seq_of({1}), 3).energy == 1);
    // Negative values are shifted, not rejected.
    REQUIRE(energy_dirichlet(seq_of({-5, -1, 2}), 2).energy ==
            energy_from_weights(build_weighted_sumset(seq_of({-5, -1, 2}), 2)).energy);
}

TEST_CASE("coefficient convolution respects its resource budget") {
    Budget tiny;
    tiny.work = 50;
    REQUIRE_THROWS_AS(energy_dirichlet(gen_power(2, 10), 2, tiny), resource_error);
    REQUIRE_THROWS_AS(energy_dirichlet(gen_power(2, 3), 0), domain_error);
}

TEST_CASE("grid quadrature reproduces the exact energy once the grid resolves it") {
    ConvexSequence squares = gen_power(2, 4);
    const unsigned d = 2;
    const double exact =
        to_double(energy_from_weights(build_weighted_sumset(squares, d)).energy);
    // Smallest guaranteed grid: one point past twice the polynomial degree.
    const std::size_t needed = 2 * d * 16 + 1;
    for (std::size_t grid : {needed, 2 * needed}) {
        double approx = dirichlet_quadrature(squares, d, grid);
        REQUIRE(std::llround(approx) == std::llround(exact));
        REQUIRE(std::abs(approx - exact) < 1e-6 * exact);
    }
    REQUIRE_THROWS_AS(dirichlet_quadrature(squares, d, 0), domain_error);
}

TEST_CASE("energy never drops below the diagonal count") {
    for (unsigned d = 1; d <= 3; ++d)
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            ConvexSequence seq = gen_random_convex(seed, 9);
            Scalar e = energy_from_weights(build_weighted_sumset(seq, d)).energy;
            REQUIRE(e >= ipow(seq.size(), d));
        }
}

TEST_CASE("energy is monotone under extension and invariant under affine maps") {
    Scalar prev = 0;
    for (std::size_t n = 1; n <= 12; ++n) {
        Scalar e = energy_from_weights(build_weighted_sumset(gen_power(2, n), 2)).energy;
        REQUIRE(e >= prev);
        prev = e;
    }

    ConvexSequence base = gen_power(2, 6);
    std::vector<Scalar> mapped;
    for (const Scalar& v : base.values()) mapped.push_back(7 * v + 3);
    ConvexSequence affine{std::move(mapped)};
    for (unsigned d = 1; d <= 3; ++d)
        REQUIRE(energy_from_weights(build_weighted_sumset(affine, d)).energy ==
                energy_from_weights(build_weighted_sumset(base, d)).energy);
}

TEST_CASE("log-log fit recovers exact power laws") {
    ExponentFit cubic = fit_exponent({{10, 1e3}, {100, 1e6}, {1000, 1e9}});
    REQUIRE(cubic.slope == Catch::Approx(3.0).margin(1e-9));
    REQUIRE(cubic.max_residual < 1e-9);

    std::vector<std::pair<double, double>> pts;
    for (long long n : {64, 128, 256, 512})
        pts.emplace_back(static_cast<double>(n), to_double(closed_form_linear_energy(n)));
    ExponentFit linear_fit = fit_exponent(pts);
    REQUIRE(linear_fit.slope > 2.99);
    REQUIRE(linear_fit.slope < 3.01);

    REQUIRE_THROWS_AS(fit_exponent({{10, 1e3}, {100, 1e6}}), domain_error);
    REQUIRE_THROWS_AS(fit_exponent({{10, 1e3}, {100, 0.0}, {1000, 1e9}}), domain_error);
    REQUIRE_THROWS_AS(fit_exponent({{10, 1e3}, {10, 1e6}, {1000, 1e9}}), domain_error);
}
