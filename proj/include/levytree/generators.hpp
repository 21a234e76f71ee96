#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "levytree/errors.hpp"
#include "levytree/fft.hpp"
#include "levytree/path.hpp"
#include "levytree/rational.hpp"
#include "levytree/rng.hpp"

namespace levytree {

// Stable branching mechanism psi(u) = c * u^gamma, gamma in (1,2]. General
// (alpha, beta, pi) mechanisms are out of scope; c is carried explicitly and
// never baked into a sampler.
struct LevyModel {
    double gamma = 2.0;
    double c = 1.0;

    LevyModel() = default;
    LevyModel(double g, double scale = 1.0) : gamma(g), c(scale) {
        if (!(gamma > 1.0) || !(gamma <= 2.0)) throw DomainError("LevyModel: gamma must be in (1,2]");
        if (!(c > 0.0)) throw DomainError("LevyModel: c must be positive");
    }
};

// Height scaling induced by N^(a) = law of (a^{1/gamma} X_{t/a}): durations
// scale by a, heights by a^{1-1/gamma}.
inline double stable_height_scale(double a, double gamma) {
    return std::pow(a, 1.0 - 1.0 / gamma);
}

inline ContourExcursion rescale_stable(const ContourExcursion& H, double a, const LevyModel& model) {
    if (!(a > 0.0)) throw DomainError("rescale_stable: a must be positive");
    const double hs = stable_height_scale(a, model.gamma);
    std::vector<double> s(H.size());
    for (std::size_t i = 0; i < H.size(); ++i) s[i] = H[i] * hs;
    return ContourExcursion(std::move(s), H.step() * a);
}

// ---------------------------------------------------------------------------
// Offspring distributions

class OffspringDistribution {
public:
    // P(k) = 2^{-k-1}; critical with variance 2. Conditioned Galton-Watson
    // trees with this law are uniform plane trees.
    static OffspringDistribution geometric_half() {
        std::vector<double> pmf;
        double p = 0.5;
        while (p > 0.0) {  // runs to double underflow, ~1074 entries
            pmf.push_back(p);
            p *= 0.5;
        }
        return OffspringDistribution("geometric(1/2)", std::move(pmf));
    }

    // Generating function phi(s) = s + gamma^{-1} (1-s)^gamma: critical, tail
    // index gamma. Coefficients by binomial-series recurrence, truncated at
    // k_max with the remaining mass lumped into the last bucket.
    static OffspringDistribution stable(double gamma, std::size_t k_max = 1000000) {
        if (!(gamma > 1.0 && gamma <= 2.0))
            throw DomainError("offspring_stable: gamma must be in (1,2]");
        std::vector<double> pmf(k_max + 1, 0.0);
        pmf[0] = 1.0 / gamma;
        // a_k = |C(gamma,k)|, k >= 2; p_k = a_k / gamma. p_1 = 0.
        double a = gamma * (gamma - 1.0) / 2.0;
        double total = pmf[0];
        for (std::size_t k = 2; k <= k_max; ++k) {
            pmf[k] = a / gamma;
            total += pmf[k];
            a *= (static_cast<double>(k) - gamma) / static_cast<double>(k + 1);
        }
        if (total < 1.0) pmf[k_max] += 1.0 - total;
        while (pmf.size() > 1 && pmf.back() == 0.0) pmf.pop_back();
        return OffspringDistribution("stable(gamma=" + std::to_string(gamma) + ")", std::move(pmf));
    }

    double pmf(std::size_t k) const { return k < pmf_.size() ? pmf_[k] : 0.0; }
    const std::vector<double>& pmf_table() const { return pmf_; }
    std::size_t max_value() const { return pmf_.size() - 1; }
    const std::string& name() const { return name_; }

    double mean() const {
        double m = 0.0;
        for (std::size_t k = 1; k < pmf_.size(); ++k) m += static_cast<double>(k) * pmf_[k];
        return m;
    }

    int sample(CounterRng& rng) const {
        const double u = rng.uniform();
        // The first few values carry nearly all the mass for critical laws.
        double c = 0.0;
        const std::size_t head = std::min<std::size_t>(8, cdf_.size());
        for (std::size_t k = 0; k < head; ++k) {
            c = cdf_[k];
            if (u < c) return static_cast<int>(k);
        }
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        if (it == cdf_.end()) return static_cast<int>(cdf_.size() - 1);
        return static_cast<int>(it - cdf_.begin());
    }

private:
    OffspringDistribution(std::string name, std::vector<double> pmf)
        : name_(std::move(name)), pmf_(std::move(pmf)), cdf_(pmf_.size()) {
        double c = 0.0;
        for (std::size_t k = 0; k < pmf_.size(); ++k) {
            c += pmf_[k];
            cdf_[k] = c;
        }
    }

    std::string name_;
    std::vector<double> pmf_;
    std::vector<double> cdf_;
};

inline OffspringDistribution offspring_geometric() { return OffspringDistribution::geometric_half(); }
inline OffspringDistribution offspring_stable(double gamma) { return OffspringDistribution::stable(gamma); }

// ---------------------------------------------------------------------------
// Plane trees and skip-free walks

// Rooted ordered tree stored as preorder child counts.
struct PlaneTree {
    std::vector<std::int32_t> child_counts;

    std::size_t vertex_count() const { return child_counts.size(); }
    std::size_t edge_count() const { return child_counts.size() - 1; }

    // Lukasiewicz condition: partial sums of (count - 1) stay >= 0 until the
    // final value -1.
    bool valid() const {
        if (child_counts.empty()) return false;
        std::int64_t s = 0;
        for (std::size_t i = 0; i < child_counts.size(); ++i) {
            s += child_counts[i] - 1;
            if (i + 1 < child_counts.size() ? s < 0 : s != -1) return false;
        }
        return true;
    }

    std::vector<std::int32_t> preorder_depths() const {
        std::vector<std::int32_t> depths(child_counts.size(), 0);
        std::vector<std::int32_t> stack;
        stack.push_back(child_counts[0]);
        for (std::size_t i = 1; i < child_counts.size(); ++i) {
            while (stack.back() == 0) stack.pop_back();
            depths[i] = static_cast<std::int32_t>(stack.size());
            --stack.back();
            stack.push_back(child_counts[i]);
        }
        return depths;
    }
};

// Skip-free-downward walk with values in delta * Z.
struct WalkPath {
    std::vector<std::int64_t> units;
    double delta = 1.0;

    std::size_t size() const { return units.size(); }
    double value(std::size_t t) const { return static_cast<double>(units[t]) * delta; }

    bool skip_free() const {
        for (std::size_t t = 0; t + 1 < units.size(); ++t)
            if (units[t + 1] - units[t] < -1) return false;
        return true;
    }
};

inline WalkPath lukasiewicz_walk(const PlaneTree& tree) {
    WalkPath w;
    w.units.resize(tree.vertex_count() + 1);
    w.units[0] = 0;
    for (std::size_t i = 0; i < tree.vertex_count(); ++i)
        w.units[i + 1] = w.units[i] + tree.child_counts[i] - 1;
    return w;
}

// Incremental weak-records-from-the-right counter: after feeding the step
// u_t -> u_{t+1}, the stack holds {s <= t : u_s <= min(u_{s+1..t+1})} and its
// size is H_{t+1}. Amortized O(1) per step.
class HeightStack {
public:
    void reset() { stack_.clear(); }

    std::int64_t feed(std::int64_t cur, std::int64_t next) {
        if (next >= cur) {
            stack_.push_back(cur);
        } else {
            while (!stack_.empty() && stack_.back() > next) stack_.pop_back();
        }
        return static_cast<std::int64_t>(stack_.size());
    }

private:
    std::vector<std::int64_t> stack_;
};

// H_t = #{s in [0,t) : X_s <= min(X_{s+1..t})}. For the Lukasiewicz walk of a
// plane tree this is the preorder depth sequence followed by a terminal 0.
inline std::vector<std::int64_t> height_of_walk(const WalkPath& w) {
    if (!w.skip_free()) throw InputError("height_of_walk: walk is not skip-free downward");
    std::vector<std::int64_t> H(w.size(), 0);
    HeightStack hs;
    for (std::size_t t = 0; t + 1 < w.size(); ++t)
        H[t + 1] = hs.feed(w.units[t], w.units[t + 1]);
    return H;
}

// Depth-first contour: Dyck path of length 2n for a tree with n edges.
inline LatticePath contour_of_tree(const PlaneTree& tree) {
    if (!tree.valid()) throw InputError("contour_of_tree: not a valid plane tree");
    LatticePath out;
    out.heights.reserve(2 * tree.edge_count() + 1);
    out.heights.push_back(0);
    std::vector<std::int32_t> stack{tree.child_counts[0]};
    std::size_t next = 1;
    std::int64_t depth = 0;
    while (!stack.empty()) {
        if (stack.back() > 0) {
            --stack.back();
            ++depth;
            out.heights.push_back(depth);
            stack.push_back(tree.child_counts[next++]);
        } else {
            stack.pop_back();
            if (!stack.empty()) {
                --depth;
                out.heights.push_back(depth);
            }
        }
    }
    return out;
}

inline PlaneTree contour_to_tree(const LatticePath& dyck) {
    if (!is_dyck(dyck)) throw InputError("contour_to_tree: not a Dyck path");
    PlaneTree tree;
    tree.child_counts.push_back(0);
    std::vector<std::size_t> stack{0};
    for (std::size_t i = 0; i + 1 < dyck.size(); ++i) {
        if (dyck[i + 1] > dyck[i]) {
            tree.child_counts.push_back(0);
            ++tree.child_counts[stack.back()];
            stack.push_back(tree.child_counts.size() - 1);
        } else {
            stack.pop_back();
        }
    }
    return tree;
}

// ---------------------------------------------------------------------------
// Conditioned Galton-Watson sampling

namespace detail {

// First-argmin rotation of the step sequence (cycle lemma): among the N cyclic
// shifts of an integer sequence with steps >= -1 summing to -1, exactly one is
// a Lukasiewicz path, namely the one starting right after the first minimum.
inline PlaneTree rotate_to_tree(const std::vector<std::int32_t>& counts) {
    const std::size_t N = counts.size();
    std::int64_t sum = 0, best = 0;
    std::size_t argmin = 0;
    for (std::size_t i = 0; i < N; ++i) {
        sum += counts[i] - 1;
        if (sum < best) {
            best = sum;
            argmin = i;
        }
    }
    PlaneTree tree;
    tree.child_counts.resize(N);
    for (std::size_t i = 0; i < N; ++i)
        tree.child_counts[i] = counts[(argmin + 1 + i) % N];
    return tree;
}

}  // namespace detail

// Samples a Galton-Watson tree conditioned on total progeny n+1. Small n uses
// plain rejection on the i.i.d. child-count vector; large n samples the same
// conditioned vector by recursive conditional splitting of block sums, whose
// pmfs are precomputed once by FFT convolution (truncated at n, which is exact
// for the conditioned law: no child count can exceed n). Both paths finish
// with the cycle-lemma rotation.
class ConditionedGwSampler {
public:
    ConditionedGwSampler(OffspringDistribution offspring, std::size_t n_edges,
                         std::uint64_t rejection_budget = 2000000,
                         std::size_t rejection_cutoff = 256)
        : offspring_(std::move(offspring)), n_(n_edges), budget_(rejection_budget),
          cutoff_(rejection_cutoff) {
        if (n_ == 0) throw DomainError("ConditionedGwSampler: need n >= 1");
        if (n_ > cutoff_ && n_ != 1) build_plan();
    }

    std::size_t edges() const { return n_; }

    PlaneTree sample(CounterRng& rng) const {
        if (n_ == 1) return PlaneTree{{1, 0}};  // the unique tree with 2 vertices
        return n_ <= cutoff_ ? sample_rejection(rng) : sample_split(rng);
    }

private:

    PlaneTree sample_rejection(CounterRng& rng) const {
        const std::size_t N = n_ + 1;
        std::vector<std::int32_t> counts(N);
        for (std::uint64_t attempt = 0; attempt < budget_; ++attempt) {
            std::int64_t sum = 0;
            bool dead = false;
            for (std::size_t i = 0; i < N; ++i) {
                const int k = offspring_.sample(rng);
                counts[i] = k;
                sum += k;
                if (sum > static_cast<std::int64_t>(n_)) {
                    dead = true;
                    break;
                }
            }
            if (!dead && sum == static_cast<std::int64_t>(n_))
                return detail::rotate_to_tree(counts);
        }
        throw RetryableError("gw_tree_conditioned: rejection budget exceeded");
    }

    // -- conditional splitting ------------------------------------------------

    void build_plan() {
        // pmf of a sum of `size` i.i.d. child counts, truncated to [0, n].
        std::function<const std::vector<double>&(std::size_t)> pmf_of =
            [&](std::size_t size) -> const std::vector<double>& {
            auto it = block_pmf_.find(size);
            if (it != block_pmf_.end()) return it->second;
            std::vector<double> q;
            if (size == 1) {
                const auto& p = offspring_.pmf_table();
                q.assign(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(
                                                    std::min(p.size(), n_ + 1)));
                q.resize(n_ + 1, 0.0);
            } else {
                const auto& qa = pmf_of(size / 2);
                const auto& qb = pmf_of(size - size / 2);
                q = detail::convolve_trunc(qa, qb, n_ + 1);
            }
            return block_pmf_.emplace(size, std::move(q)).first->second;
        };
        const std::vector<double>& root = pmf_of(n_ + 1);
        if (!(root[n_] > 0.0))
            throw InputError("gw_tree_conditioned: total progeny n+1 is unreachable");
    }

    int split_left_sum(std::size_t left, std::size_t right, int total, CounterRng& rng) const {
        const auto& qa = block_pmf_.at(left);
        const auto& qb = block_pmf_.at(right);
        const double table_total = block_pmf_.at(left + right)[static_cast<std::size_t>(total)];
        const int lo = std::max(0, total - static_cast<int>(n_));
        const int hi = std::min(static_cast<int>(n_), total);
        const int center = std::clamp(
            static_cast<int>(std::lround(static_cast<double>(total) * static_cast<double>(left) /
                                         static_cast<double>(left + right))),
            lo, hi);
        for (int pass = 0; pass < 3; ++pass) {
            // Last pass renormalizes with the exactly accumulated total, which
            // closes the ~1e-15 gap between the table value and the true sum.
            double norm = table_total;
            if (pass == 2) {
                norm = 0.0;
                for (int j = lo; j <= hi; ++j)
                    norm += qa[static_cast<std::size_t>(j)] * qb[static_cast<std::size_t>(total - j)];
            }
            const double u = rng.uniform() * norm;
            double cum = 0.0;
            for (int d = 0;; ++d) {
                bool in_range = false;
                const int up = center + d;
                if (up <= hi) {
                    in_range = true;
                    cum += qa[static_cast<std::size_t>(up)] * qb[static_cast<std::size_t>(total - up)];
                    if (cum > u) return up;
                }
                const int dn = center - d - 1;
                if (dn >= lo) {
                    in_range = true;
                    cum += qa[static_cast<std::size_t>(dn)] * qb[static_cast<std::size_t>(total - dn)];
                    if (cum > u) return dn;
                }
                if (!in_range) break;
            }
        }
        throw RetryableError("gw_tree_conditioned: conditional split failed to converge");
    }

    PlaneTree sample_split(CounterRng& rng) const {
        std::vector<std::int32_t> counts;
        counts.reserve(n_ + 1);
        std::function<void(std::size_t, int)> expand = [&](std::size_t size, int total) {
            if (size == 1) {
                counts.push_back(total);
                return;
            }
            const std::size_t left = size / 2;
            const int j = split_left_sum(left, size - left, total, rng);
            expand(left, j);
            expand(size - left, total - j);
        };
        expand(n_ + 1, static_cast<int>(n_));
        return detail::rotate_to_tree(counts);
    }

    OffspringDistribution offspring_;
    std::size_t n_;
    std::uint64_t budget_;
    std::size_t cutoff_;
    std::map<std::size_t, std::vector<double>> block_pmf_;
};

inline PlaneTree gw_tree_conditioned(const OffspringDistribution& offspring, std::size_t n_edges,
                                     CounterRng& rng) {
    return ConditionedGwSampler(offspring, n_edges).sample(rng);
}

// ---------------------------------------------------------------------------
// Excursion samplers

// Normalized Brownian excursion on [0,1] with n+1 grid samples: Gaussian
// random walk, bridge transform b(t) = w(t) - t w(1), Vervaat rotation at the
// first grid argmin. Endpoints are exactly 0 and every sample is >= 0.
inline ContourExcursion brownian_excursion(std::size_t n, CounterRng& rng) {
    if (n < 2) throw DomainError("brownian_excursion: need n >= 2");
    const double sd = std::sqrt(1.0 / static_cast<double>(n));
    std::vector<double> b(n + 1);
    b[0] = 0.0;
    for (std::size_t k = 1; k <= n; ++k) b[k] = b[k - 1] + sd * rng.gaussian();
    const double wn = b[n];
    for (std::size_t k = 1; k <= n; ++k)
        b[k] -= (static_cast<double>(k) / static_cast<double>(n)) * wn;
    b[n] = 0.0;

    std::size_t argmin = 0;
    for (std::size_t k = 1; k < n; ++k)
        if (b[k] < b[argmin]) argmin = k;

    std::vector<double> e(n + 1);
    const double low = b[argmin];
    for (std::size_t j = 0; j <= n; ++j) {
        const std::size_t idx = argmin + j;
        e[j] = b[idx <= n ? idx : idx - n] - low;
    }
    e[0] = 0.0;
    e[n] = 0.0;
    return ContourExcursion(std::move(e), 1.0 / static_cast<double>(n));
}

// Contour of a conditioned Galton-Watson tree (geometric offspring for
// gamma = 2, stable-tailed otherwise), time-normalized to [0,1] with heights
// scaled by n^{-(1-1/gamma)}. The model constant relating this to N^(1)
// heights is left at 1; invariance suites compare like with like, so it cancels.
inline ContourExcursion excursion_of_tree(const PlaneTree& tree, double gamma) {
    const LatticePath contour = contour_of_tree(tree);
    const std::size_t n = tree.edge_count();
    const double hs = 1.0 / stable_height_scale(static_cast<double>(n), gamma);
    std::vector<double> s(contour.size());
    for (std::size_t i = 0; i < contour.size(); ++i)
        s[i] = static_cast<double>(contour[i]) * hs;
    return ContourExcursion(std::move(s), 1.0 / static_cast<double>(2 * n));
}

inline ContourExcursion normalized_stable_excursion(std::size_t n_edges, const LevyModel& model,
                                                    CounterRng& rng) {
    const OffspringDistribution offspring =
        model.gamma == 2.0 ? offspring_geometric() : offspring_stable(model.gamma);
    const PlaneTree tree = gw_tree_conditioned(offspring, n_edges, rng);
    return excursion_of_tree(tree, model.gamma);
}

// ---------------------------------------------------------------------------
// Exact enumeration

// All Dyck paths of length 2n in lexicographic step order (up < down);
// exactly Catalan(n) of them.
template <typename Fn>
void for_each_dyck(std::size_t n, Fn&& fn) {
    if (n < 1) throw DomainError("for_each_dyck: need n >= 1");
    if (n > 12) throw ResourceError("for_each_dyck: n > 12 enumerations are not supported");
    const std::size_t len = 2 * n;
    LatticePath p;
    p.heights.assign(len + 1, 0);
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == len) {
            fn(static_cast<const LatticePath&>(p));
            return;
        }
        const std::int64_t h = p.heights[i];
        const std::size_t left = len - i;
        if (static_cast<std::size_t>(h) + 1 <= left - 1) {
            p.heights[i + 1] = h + 1;
            self(self, i + 1);
        }
        if (h > 0) {
            p.heights[i + 1] = h - 1;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
}

inline std::vector<LatticePath> enumerate_dyck(std::size_t n) {
    std::vector<LatticePath> out;
    for_each_dyck(n, [&](const LatticePath& p) { out.push_back(p); });
    return out;
}

// GW(geometric 1/2) weight of any plane tree with n edges: 2^{-(2n+1)}. Exact.
inline Rat srw_excursion_tree_weight(std::size_t n) {
    return Rat::pow2_inv(static_cast<unsigned>(2 * n + 1));
}

}  // namespace levytree
