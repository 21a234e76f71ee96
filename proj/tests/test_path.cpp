#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "levytree/generators.hpp"
#include "levytree/path.hpp"
#include "levytree/rng.hpp"

using namespace levytree;

namespace {

FinitePath fp(std::vector<double> v, double step = 1.0) { return FinitePath(std::move(v), step); }

// Independent oracle for the re-rooting formula: evaluate H^[s]_t = d_H(s, s+t)
// (wrapped) pointwise with a naive min scan, no running-min recursion.
std::vector<std::int64_t> reroot_oracle(const std::vector<std::int64_t>& h, std::size_t s) {
    const std::size_t m = h.size() - 1;
    auto d = [&](std::size_t a, std::size_t b) {
        if (a > b) std::swap(a, b);
        std::int64_t mn = h[a];
        for (std::size_t i = a; i <= b; ++i) mn = std::min(mn, h[i]);
        return h[a] + h[b] - 2 * mn;
    };
    std::vector<std::int64_t> out(m + 1);
    for (std::size_t t = 0; t <= m; ++t)
        out[t] = t < m - s ? d(s, s + t) : d(s, s + t - m);
    return out;
}

}  // namespace

TEST_CASE("eval at grid points and between them") {
    const FinitePath w = fp({0, 1, 2, 1, 0});
    CHECK(w.eval(2.0) == 2.0);
    CHECK(w.eval(0.5) == 0.5);
    const FinitePath v = fp({2, 1, 2, 0, 1});
    CHECK(v.eval(3.5) == 0.5);  // interpolation of the two bracketing samples
    CHECK(v.eval(0.0) == 2.0);
    CHECK(v.eval(4.0) == 1.0);
    CHECK_THROWS_AS(v.eval(-0.1), DomainError);
    CHECK_THROWS_AS(v.eval(4.2), DomainError);
}

TEST_CASE("eval respects non-unit steps") {
    const FinitePath w = fp({0, 2, 0}, 0.5);
    CHECK(w.lifetime() == 1.0);
    CHECK(w.eval(0.5) == 2.0);
    CHECK(w.eval(0.25) == 1.0);
}

TEST_CASE("range_min") {
    const FinitePath w = fp({0, 1, 2, 3, 2, 1, 2, 1, 0});
    CHECK(w.range_min(2, 7) == 1.0);
    CHECK(w.range_min(3.5, 3.5) == w.eval(3.5));
    CHECK(fp({0, 1, 2, 1, 0}).range_min(0, 4) == 0.0);
    CHECK(w.range_min(2.5, 2.75) == w.eval(2.5));  // within one cell
    CHECK_THROWS_AS(w.range_min(3, 2), DomainError);
}

TEST_CASE("range_min split consistency") {
    CounterRng rng(11);
    const ContourExcursion H = brownian_excursion(128, rng);
    const FinitePath& w = H.path();
    for (int i = 0; i < 200; ++i) {
        double a = rng.uniform() * w.lifetime();
        double b = rng.uniform() * w.lifetime();
        if (a > b) std::swap(a, b);
        const double c = a + rng.uniform() * (b - a);
        CHECK(w.range_min(a, b) ==
              doctest::Approx(std::min(w.range_min(a, c), w.range_min(c, b))).epsilon(1e-14));
    }
}

TEST_CASE("tree_distance") {
    const ContourExcursion H({0, 1, 2, 3, 2, 1, 2, 1, 0}, 1.0);
    CHECK(tree_distance(H, 3, 6) == 3.0);
    CHECK(tree_distance(H, 5, 5) == 0.0);
    CHECK(tree_distance(H, 0, 3) == 3.0);  // d(0,t) = H_t for an excursion
    CHECK(tree_distance(H, 6, 3) == 3.0);  // symmetric
}

TEST_CASE("reroot matches the displayed formula") {
    const ContourExcursion H({0, 1, 2, 3, 2, 1, 2, 1, 0}, 1.0);
    const ContourExcursion R = reroot(H, 6.0);
    const std::vector<double> expect = {0, 1, 2, 1, 2, 3, 2, 1, 0};
    REQUIRE(R.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) CHECK(R[i] == expect[i]);

    // the oracle agrees on every shift
    const std::vector<std::int64_t> h = {0, 1, 2, 3, 2, 1, 2, 1, 0};
    for (std::size_t s = 0; s <= 8; ++s) {
        const auto expected = reroot_oracle(h, s);
        const LatticePath r = lat_reroot(LatticePath{h}, s);
        CHECK(r.heights == expected);
    }
}

TEST_CASE("reroot fixed points") {
    const ContourExcursion H({0, 1, 2, 3, 2, 1, 2, 1, 0}, 1.0);
    const ContourExcursion R0 = reroot(H, 0.0);
    for (std::size_t i = 0; i < H.size(); ++i) CHECK(R0[i] == H[i]);

    const ContourExcursion S({0, 1, 2, 1, 0}, 1.0);
    const ContourExcursion RS = reroot(S, 2.0);
    for (std::size_t i = 0; i < S.size(); ++i) CHECK(RS[i] == S[i]);
}

TEST_CASE("reroot rejects off-grid and out-of-range times") {
    const ContourExcursion H({0, 1, 2, 1, 0}, 1.0);
    CHECK_THROWS_AS(reroot(H, 1.5), PrecisionError);
    CHECK_THROWS_AS(reroot(H, 5.0), DomainError);
    CHECK_THROWS_AS(reroot(H, -1.0), DomainError);
}

TEST_CASE("reroot involution and Dyck closure, exhaustive") {
    for (std::size_t n = 1; n <= 6; ++n) {
        for_each_dyck(n, [&](const LatticePath& p) {
            for (std::size_t s = 0; s <= 2 * n; ++s) {
                const LatticePath r = lat_reroot(p, s);
                CHECK(is_dyck(r));
                CHECK(lat_reroot(r, 2 * n - s).heights == p.heights);
            }
        });
    }
}

// Continuous excursions here are normalized Galton-Watson contours: re-rooting
// is closed on (scaled) lattice excursions, so the identities are exact up to
// float rounding. A Gaussian-grid path is not closed under grid re-rooting
// (the re-rooted path acquires minima between grid points), so the identities
// only hold for it in the grid-refinement limit.
TEST_CASE("reroot involution on random continuous excursions") {
    const OffspringDistribution geo = offspring_geometric();
    const ConditionedGwSampler gw(geo, 128);
    for (std::uint64_t rep = 0; rep < 25; ++rep) {
        CounterRng rng = CounterRng::substream(5, rep);
        const ContourExcursion H = excursion_of_tree(gw.sample(rng), 2.0);
        const std::size_t s = static_cast<std::size_t>(rng.uniform() * 256.0);
        const ContourExcursion R = reroot_at(reroot_at(H, s), H.size() - 1 - s);
        for (std::size_t i = 0; i < H.size(); ++i)
            CHECK(std::abs(R[i] - H[i]) <= 1e-12);
    }
}

TEST_CASE("isometry of re-rooted distances on the grid") {
    CounterRng rng(17);
    const OffspringDistribution geo = offspring_geometric();
    const ConditionedGwSampler gw(geo, 64);
    const ContourExcursion H = excursion_of_tree(gw.sample(rng), 2.0);
    const std::size_t m = H.size() - 1;
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t s = static_cast<std::size_t>(rng.uniform() * static_cast<double>(m));
        const std::size_t a = static_cast<std::size_t>(rng.uniform() * static_cast<double>(m));
        const std::size_t b = static_cast<std::size_t>(rng.uniform() * static_cast<double>(m));
        const ContourExcursion R = reroot_at(H, s);
        const auto wrap = [&](std::size_t x) { return x >= m ? x - m : x; };
        const double lhs = tree_distance(R, a * H.step(), b * H.step());
        const double rhs = tree_distance(H, wrap(s + a) * H.step(), wrap(s + b) * H.step());
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("reverse") {
    const FinitePath w = fp({2, 1, 2, 0, 1});
    const FinitePath r = reverse(w);
    CHECK(r.samples() == std::vector<double>{1, 0, 2, 1, 2});
    CHECK(reverse(r).samples() == w.samples());
    CHECK(reverse(fp({3, 3, 3})).samples() == std::vector<double>{3, 3, 3});
    CHECK(reverse(fp({0, 1, 0})).samples() == std::vector<double>{0, 1, 0});
}

TEST_CASE("tilde") {
    CHECK(tilde(fp({2, 1, 2, 0, 1})).samples() == std::vector<double>{0, 1, 2, 2, 3});
    CHECK(tilde(fp({0, 1, 2})).samples() == std::vector<double>{0, 1, 2});
    CHECK(tilde(fp({1, 0})).samples() == std::vector<double>{0, 1});
}

TEST_CASE("tilde endpoint identity on random paths") {
    CounterRng rng(23);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> v(40);
        for (auto& x : v) x = rng.gaussian();
        const FinitePath w = fp(v, 0.25);
        double mn = v[0];
        for (const double x : v) mn = std::min(mn, x);
        const FinitePath t = tilde(w);
        CHECK(t.back() == doctest::Approx(w.front() + w.back() - 2.0 * mn).epsilon(1e-14));
        CHECK(t.front() == 0.0);
        for (std::size_t i = 0; i < t.size(); ++i) CHECK(t[i] >= 0.0);
    }
}

TEST_CASE("split") {
    const ContourExcursion H({0, 1, 2, 1, 0}, 1.0);
    const auto [fwd, bwd] = split(H, 2.0);
    CHECK(fwd.samples() == std::vector<double>{2, 1, 0});
    CHECK(bwd.samples() == std::vector<double>{2, 1, 0});

    const auto [f0, b0] = split(H, 0.0);
    CHECK(f0.samples() == H.path().samples());
    CHECK(b0.samples() == std::vector<double>{0});

    const auto [fs, bs] = split(H, 4.0);
    CHECK(fs.samples() == std::vector<double>{0});
    CHECK(bs.samples() == reverse(H.path()).samples());
}

TEST_CASE("is_dyck") {
    CHECK(is_dyck(LatticePath{{0, 1, 2, 1, 0}}));
    CHECK_FALSE(is_dyck(LatticePath{{0, 1, 0, -1, 0}}));
    CHECK_FALSE(is_dyck(LatticePath{{0, 2, 0}}));
    CHECK_FALSE(is_dyck(LatticePath{{0, 1, 1, 0}}));
    CHECK_FALSE(is_dyck(LatticePath{{1, 0, 1}}));
}

TEST_CASE("degenerate single-sample excursion") {
    const ContourExcursion H({0.0}, 1.0);
    CHECK(H.sigma() == 0.0);
    CHECK(reroot(H, 0.0).size() == 1);
    CHECK(tilde(H.path()).samples() == std::vector<double>{0});
    CHECK(reverse(H.path()).samples() == std::vector<double>{0});
}

TEST_CASE("excursion validation") {
    CHECK_THROWS_AS(ContourExcursion({0, 1, 0.5}, 1.0), InputError);
    CHECK_THROWS_AS(ContourExcursion({0, -1, 0}, 1.0), InputError);
    CHECK_THROWS_AS(FinitePath({}, 1.0), InputError);
    CHECK_THROWS_AS(FinitePath({0.0}, 0.0), InputError);
}
