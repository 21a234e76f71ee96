#pragma once

#include <cmath>
#include <vector>

#include "levytree/errors.hpp"
#include "levytree/rng.hpp"
#include "levytree/tree_coding.hpp"

namespace levytree {

// Brownian motion indexed by the coded tree, sampled at finitely many times:
// Z_rho = 0 and E[(Z_a - Z_b)^2] = d_H(a,b).
struct LabeledDisplacement {
    std::vector<double> times;
    std::vector<double> z;  // z[i] is Z at p_H(times[i])
};

// Build the spanned subtree, then draw one independent centered Gaussian
// increment per edge (variance = edge length) and sum along root paths.
inline LabeledDisplacement sample_snake(const ContourExcursion& H,
                                        const std::vector<double>& times, CounterRng& rng) {
    const SpannedTree tree = spanned_subtree(H, times);
    const std::size_t n = tree.vertices.size();

    std::vector<std::vector<int>> children(n);
    for (std::size_t v = 1; v < n; ++v)
        children[static_cast<std::size_t>(tree.vertices[v].parent)].push_back(static_cast<int>(v));

    std::vector<double> zv(n, 0.0);
    std::vector<int> stack{0};
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (const int c : children[static_cast<std::size_t>(v)]) {
            const double len = tree.vertices[static_cast<std::size_t>(c)].edge_length;
            zv[static_cast<std::size_t>(c)] =
                zv[static_cast<std::size_t>(v)] + rng.gaussian() * std::sqrt(len);
            stack.push_back(c);
        }
    }

    LabeledDisplacement out;
    out.times = times;
    out.z.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        out.z[i] = zv[static_cast<std::size_t>(tree.find_label(static_cast<int>(i) + 1))];
    return out;
}

// Empirical estimate of I((0,inf)) = integral of 1{Z_a > 0} against the mass
// measure: the fraction of k mass-sampled vertices with positive displacement.
inline double ise_right_mass(const ContourExcursion& H, std::size_t k, CounterRng& rng) {
    if (k == 0) throw DomainError("ise_right_mass: k must be >= 1");
    const std::vector<double> times = mass_sample(H, rng, k);
    const LabeledDisplacement snake = sample_snake(H, times, rng);
    std::size_t pos = 0;
    for (const double z : snake.z)
        if (z > 0.0) ++pos;
    return static_cast<double>(pos) / static_cast<double>(k);
}

}  // namespace levytree
