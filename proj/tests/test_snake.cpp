#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "levytree/generators.hpp"
#include "levytree/snake.hpp"

using namespace levytree;

TEST_CASE("single edge: empirical variance matches the edge length") {
    const ContourExcursion H({0, 1, 2, 1, 0}, 1.0);  // Z at time 2 has variance 2
    const std::size_t N = 100000;
    double sum = 0.0, sumsq = 0.0;
    CounterRng rng(3);
    for (std::size_t i = 0; i < N; ++i) {
        const LabeledDisplacement d = sample_snake(H, {2.0}, rng);
        sum += d.z[0];
        sumsq += d.z[0] * d.z[0];
    }
    const double mean = sum / static_cast<double>(N);
    const double var = sumsq / static_cast<double>(N) - mean * mean;
    const double se_var = 2.0 * std::sqrt(2.0 / static_cast<double>(N));  // Var ~ 2, sd(var-hat) ~ var sqrt(2/N)
    CHECK(std::abs(var - 2.0) < 3.0 * se_var);
    CHECK(std::abs(mean) < 3.0 * std::sqrt(2.0 / static_cast<double>(N)));
}

TEST_CASE("disjoint root paths give uncorrelated displacements") {
    const ContourExcursion H({0, 1, 0, 1, 0}, 1.0);  // m_H(1,3) = 0
    const std::size_t N = 100000;
    double sum_ab = 0.0;
    CounterRng rng(5);
    for (std::size_t i = 0; i < N; ++i) {
        const LabeledDisplacement d = sample_snake(H, {1.0, 3.0}, rng);
        sum_ab += d.z[0] * d.z[1];
    }
    const double cov = sum_ab / static_cast<double>(N);
    CHECK(std::abs(cov) < 3.0 / std::sqrt(static_cast<double>(N)));
}

TEST_CASE("covariance structure matches d_H on a fixed 3-leaf tree") {
    const ContourExcursion H({0, 1, 2, 3, 2, 1, 2, 3, 2, 1, 2, 1, 0}, 1.0);
    const std::vector<double> times = {3.0, 7.0, 10.0};
    const DistanceMatrix dm = distance_matrix(H, times);
    const std::size_t N = 100000;
    std::vector<std::vector<double>> sq(3, std::vector<double>(3, 0.0));
    CounterRng rng(9);
    for (std::size_t i = 0; i < N; ++i) {
        const LabeledDisplacement d = sample_snake(H, times, rng);
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b) {
                const double diff = d.z[a] - d.z[b];
                sq[a][b] += diff * diff;
            }
    }
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) {
            if (a == b) continue;
            const double est = sq[a][b] / static_cast<double>(N);
            // (Z_a - Z_b)^2 has variance 2 d^2, so se = d sqrt(2/N)
            const double se = dm.at(a, b) * std::sqrt(2.0 / static_cast<double>(N));
            CHECK(std::abs(est - dm.at(a, b)) < 4.0 * se);
        }
}

TEST_CASE("Z at the root is zero") {
    const ContourExcursion H({0, 1, 0}, 1.0);
    CounterRng rng(1);
    const LabeledDisplacement d = sample_snake(H, {0.0}, rng);
    CHECK(d.z[0] == 0.0);
}

TEST_CASE("ise_right_mass stays in [0,1] and is deterministic per seed") {
    CounterRng rng(11);
    const ContourExcursion H = brownian_excursion(256, rng);
    for (int rep = 0; rep < 20; ++rep) {
        const double v = ise_right_mass(H, 50, rng);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    CounterRng a(13), b(13);
    CHECK(ise_right_mass(H, 100, a) == ise_right_mass(H, 100, b));
    CHECK_THROWS_AS(ise_right_mass(H, 0, rng), DomainError);
}

TEST_CASE("segment tree: right mass centers on 1/2 by sign symmetry") {
    // tent-shaped excursion codes a segment; only the root class has Z = 0
    std::vector<double> tent(129, 0.0);
    for (std::size_t i = 0; i <= 64; ++i) {
        tent[i] = static_cast<double>(i);
        tent[128 - i] = static_cast<double>(i);
    }
    const ContourExcursion H(std::move(tent), 1.0);
    const std::size_t N = 4000;
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        CounterRng rng = CounterRng::substream(17, i);
        sum += ise_right_mass(H, 64, rng);
    }
    const double mean = sum / static_cast<double>(N);
    const double se = 0.35 / std::sqrt(static_cast<double>(N));
    CHECK(std::abs(mean - 0.5) < 3.0 * se + 0.004);  // + root-atom allowance 1/(2*128)
}

TEST_CASE("sign symmetry over random trees") {
    const std::size_t N = 2000;
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        CounterRng rng = CounterRng::substream(19, i);
        const ContourExcursion H = brownian_excursion(256, rng);
        sum += ise_right_mass(H, 100, rng);
    }
    const double mean = sum / static_cast<double>(N);
    const double se = 0.29 / std::sqrt(static_cast<double>(N));
    CHECK(std::abs(mean - 0.5) < 3.0 * se);
}
