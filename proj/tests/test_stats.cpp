#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "levytree/rng.hpp"
#include "levytree/stats.hpp"

using namespace levytree;

TEST_CASE("identical samples give statistic 0, p = 1") {
    const std::vector<double> xs = {0.3, 1.2, -0.5, 2.0};
    const KsResult r = ks_two_sample(xs, xs);
    CHECK(r.statistic == 0.0);
    CHECK(r.p_value == 1.0);
}

TEST_CASE("disjoint singletons give statistic 1") {
    const KsResult r = ks_two_sample({0.0}, {1.0});
    CHECK(r.statistic == 1.0);
}

TEST_CASE("empty input is an error") {
    CHECK_THROWS_AS(ks_two_sample({}, {1.0}), DomainError);
    CHECK_THROWS_AS(ks_two_sample({1.0}, {}), DomainError);
    CHECK_THROWS_AS(ks_uniform({}), DomainError);
}

TEST_CASE("ties are handled") {
    // two discrete samples from the same law: statistic small, p large
    const std::vector<double> xs = {0, 0, 1, 1, 2, 2, 3, 3};
    const std::vector<double> ys = {0, 0, 1, 1, 2, 2, 3, 3};
    CHECK(ks_two_sample(xs, ys).statistic == 0.0);
    const KsResult r = ks_two_sample({0, 0, 0, 1}, {0, 0, 1, 1});
    CHECK(r.statistic == 0.25);
}

TEST_CASE("kolmogorov_q endpoints and monotonicity") {
    CHECK(kolmogorov_q(0.0) == 1.0);
    CHECK(kolmogorov_q(8.0) < 1e-12);
    double prev = 1.0;
    for (double l = 0.05; l < 3.0; l += 0.05) {
        const double q = kolmogorov_q(l);
        CHECK(q <= prev + 1e-9);
        prev = q;
    }
    // classical value: Q(1.36) ~ 0.049 (the 5% critical point)
    CHECK(kolmogorov_q(1.36) == doctest::Approx(0.049).epsilon(0.02));
}

TEST_CASE("null calibration: same-law streams rarely dip below p = 0.001") {
    int failures = 0;
    for (std::uint64_t run = 0; run < 300; ++run) {
        CounterRng rng(9000 + run);
        std::vector<double> xs(2000), ys(2000);
        for (auto& x : xs) x = rng.uniform();
        for (auto& y : ys) y = rng.uniform();
        if (ks_two_sample(xs, ys).p_value <= 0.001) ++failures;
    }
    CHECK(failures <= 2);
}

TEST_CASE("power sanity: shifted uniforms are rejected") {
    CounterRng rng(123);
    std::vector<double> xs(4000), ys(4000);
    for (auto& x : xs) x = rng.uniform();
    for (auto& y : ys) y = rng.uniform() + 0.1;
    CHECK(ks_two_sample(xs, ys).p_value < 1e-6);
}

TEST_CASE("one-sample uniform test") {
    CounterRng rng(55);
    std::vector<double> xs(5000);
    for (auto& x : xs) x = rng.uniform();
    CHECK(ks_uniform(xs).p_value > 0.01);

    std::vector<double> bad(5000);
    for (auto& x : bad) x = rng.uniform() * 0.8;
    CHECK(ks_uniform(bad).p_value < 1e-6);
}

TEST_CASE("mean_se") {
    const MeanSe m = mean_se({1.0, 2.0, 3.0, 4.0});
    CHECK(m.mean == 2.5);
    CHECK(m.se == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0).epsilon(1e-12));
}
