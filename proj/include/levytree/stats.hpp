#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "levytree/errors.hpp"

namespace levytree {

// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{j-1} e^{-2 j^2 lambda^2},
// with the theta-dual series below the crossover where the alternating form
// converges slowly.
inline double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 1.18) {
        const double t = std::exp(-3.14159265358979323846 * 3.14159265358979323846 /
                                  (8.0 * lambda * lambda));
        const double cdf = std::sqrt(2.0 * 3.14159265358979323846) / lambda *
                           (t + std::pow(t, 9) + std::pow(t, 25) + std::pow(t, 49));
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double q = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * static_cast<double>(j) * static_cast<double>(j) *
                                     lambda * lambda);
        q += sign * term;
        sign = -sign;
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * q, 0.0, 1.0);
}

struct KsResult {
    double statistic;
    double p_value;
};

// Two-sample Kolmogorov-Smirnov with the Numerical-Recipes effective-size
// p-value. Ties are handled by comparing CDFs only at distinct values, so the
// statistic is exact for discrete data (the asymptotic p is then conservative).
inline KsResult ks_two_sample(std::vector<double> xs, std::vector<double> ys) {
    if (xs.empty() || ys.empty()) throw DomainError("ks_two_sample: empty sample");
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    const double nx = static_cast<double>(xs.size());
    const double ny = static_cast<double>(ys.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < xs.size() && j < ys.size()) {
        const double v = std::min(xs[i], ys[j]);
        while (i < xs.size() && xs[i] == v) ++i;
        while (j < ys.size() && ys[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    // Tails past the shorter sample cannot improve on the max already seen.
    const double en = std::sqrt(nx * ny / (nx + ny));
    const double lambda = (en + 0.12 + 0.11 / en) * d;
    return {d, kolmogorov_q(lambda)};
}

// One-sample Kolmogorov-Smirnov against Uniform[0,1].
inline KsResult ks_uniform(std::vector<double> xs) {
    if (xs.empty()) throw DomainError("ks_uniform: empty sample");
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        d = std::max(d, std::abs(static_cast<double>(k + 1) / n - xs[k]));
        d = std::max(d, std::abs(xs[k] - static_cast<double>(k) / n));
    }
    const double en = std::sqrt(n);
    const double lambda = (en + 0.12 + 0.11 / en) * d;
    return {d, kolmogorov_q(lambda)};
}

// Mean and standard error of a sample.
struct MeanSe {
    double mean;
    double se;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
    if (xs.empty()) throw DomainError("mean_se: empty sample");
    double m = 0.0;
    for (const double x : xs) m += x;
    m /= static_cast<double>(xs.size());
    double v = 0.0;
    for (const double x : xs) v += (x - m) * (x - m);
    v /= std::max<double>(1.0, static_cast<double>(xs.size() - 1));
    return {m, std::sqrt(v / static_cast<double>(xs.size()))};
}

}  // namespace levytree
