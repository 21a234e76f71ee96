#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "levytree/errors.hpp"
#include "levytree/generators.hpp"
#include "levytree/measure.hpp"
#include "levytree/path.hpp"
#include "levytree/rng.hpp"

namespace levytree {

// H^mu_t = S(k_{-I_t} mu) + H_t over [0, T_{|mu|}]: the spine path of measure
// mu driven by a skip-free walk. Starts at S(mu), ends at 0.
struct SpinePath {
    FinitePath path;    // H^mu on the unit time grid
    WalkPath walk;      // the driving walk, truncated at T_{|mu|}
    FiniteMeasure mu;
};

// S(k_{j*delta} mu) for j = 0..L; the spine construction only ever removes
// mass on the delta-lattice.
inline std::vector<double> spine_support_table(const FiniteMeasure& mu, double delta,
                                               std::int64_t L) {
    std::vector<double> table(static_cast<std::size_t>(L) + 1);
    for (std::int64_t j = 0; j <= L; ++j)
        table[static_cast<std::size_t>(j)] = truncate(mu, static_cast<double>(j) * delta).sup_support();
    return table;
}

// Number of delta-units in |mu|; PrecisionError if |mu| is off the lattice.
inline std::int64_t mass_units(const FiniteMeasure& mu, double delta) {
    if (!(delta > 0.0)) throw DomainError("mass_units: delta must be positive");
    const double u = mu.total_mass() / delta;
    const double r = std::round(u);
    if (std::abs(u - r) > 1e-9 * std::max(1.0, std::abs(r)))
        throw PrecisionError("|mu| must be a multiple of delta");
    return static_cast<std::int64_t>(r);
}

inline SpinePath spine_path(const FiniteMeasure& mu, const WalkPath& walk, double delta) {
    if (!walk.skip_free()) throw InputError("spine_path: walk is not skip-free downward");
    if (walk.units.empty() || walk.units[0] != 0)
        throw InputError("spine_path: walk must start at 0");
    const std::int64_t L = mass_units(mu, delta);

    // truncate the walk at the first hit of -|mu|
    std::size_t T = walk.units.size();
    for (std::size_t t = 0; t < walk.units.size(); ++t) {
        if (walk.units[t] == -L) {
            T = t;
            break;
        }
    }
    if (T == walk.units.size()) throw InputError("spine_path: walk never reaches -|mu|");

    WalkPath trunc;
    trunc.delta = delta;
    trunc.units.assign(walk.units.begin(), walk.units.begin() + static_cast<std::ptrdiff_t>(T) + 1);

    const std::vector<double> S = spine_support_table(mu, delta, L);
    const std::vector<std::int64_t> H = height_of_walk(trunc);

    std::vector<double> values(T + 1);
    std::int64_t imin = 0;
    for (std::size_t t = 0; t <= T; ++t) {
        imin = std::min(imin, trunc.units[t]);
        values[t] = S[static_cast<std::size_t>(-imin)] + static_cast<double>(H[t]);
    }
    return SpinePath{FinitePath(std::move(values), 1.0), std::move(trunc), mu};
}

// Q_mu: run a fair +-delta walk to the first hit of -|mu| and read the spine
// path off it. The critical walk has heavy-tailed hitting times, so a step
// budget is imposed; exceeding it is retryable with a fresh substream.
inline SpinePath sample_Q(const FiniteMeasure& mu, CounterRng& rng, double delta,
                          std::uint64_t max_steps = 10000000) {
    const std::int64_t L = mass_units(mu, delta);
    WalkPath walk;
    walk.delta = delta;
    walk.units.push_back(0);
    CoinStream coins(rng);
    std::int64_t x = 0;
    for (std::uint64_t t = 0; t < max_steps; ++t) {
        x += coins.step();
        walk.units.push_back(x);
        if (x == -L) return spine_path(mu, walk, delta);
    }
    throw RetryableError("sample_Q: step budget exceeded before hitting -|mu|");
}

// S(mu) - S(k_{|mu|-r} mu) = S(k_r mu-bar), the elementary fact behind the
// time-reversal step of the spine reversal law.
inline bool elementary_fact_check(const FiniteMeasure& mu, double r, double tol = 1e-12) {
    const double lhs = mu.sup_support() - truncate(mu, mu.total_mass() - r).sup_support();
    const double rhs = truncate(reverse_measure(mu), r).sup_support();
    return std::abs(lhs - rhs) <= tol;
}

// Brownian specialization of the Bismut pair measure M_a: for psi(u) = u^2 the
// joint subordinator exponent (psi*(l) - psi*(l')) / (l - l') = l + l' forces
// U^1_t = U^2_t = t, so the pair is deterministically (Leb[0,a], Leb[0,a]).
inline std::pair<FiniteMeasure, FiniteMeasure> brownian_bismut_pair(double a) {
    if (!(a > 0.0)) throw DomainError("brownian_bismut_pair: a must be positive");
    return {FiniteMeasure::lebesgue(a), FiniteMeasure::lebesgue(a)};
}

}  // namespace levytree
