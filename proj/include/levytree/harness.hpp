#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "levytree/errors.hpp"
#include "levytree/functionals.hpp"
#include "levytree/generators.hpp"
#include "levytree/measure.hpp"
#include "levytree/path.hpp"
#include "levytree/rational.hpp"
#include "levytree/report.hpp"
#include "levytree/rng.hpp"
#include "levytree/snake.hpp"
#include "levytree/spine.hpp"
#include "levytree/stats.hpp"
#include "levytree/tree_coding.hpp"

namespace levytree {

// ---------------------------------------------------------------------------
// Replica driver: work is dealt by replica index and every replica writes only
// its own slots, so results are independent of the worker count.

template <class Fn>
void parallel_for_replicas(std::size_t count, int workers, Fn&& fn) {
    int w = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
    if (w < 1) w = 1;
    if (w == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        try {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) fn(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
            next.store(count);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(w));
    for (int t = 0; t < w; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

class StopwatchMs {
public:
    StopwatchMs() : start_(std::chrono::steady_clock::now()) {}
    std::int64_t elapsed() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

inline std::uint64_t catalan(std::size_t n) {
    std::vector<std::uint64_t> c(n + 1, 0);
    c[0] = 1;
    for (std::size_t k = 1; k <= n; ++k)
        for (std::size_t i = 0; i < k; ++i) c[k] += c[i] * c[k - 1 - i];
    return c[n];
}

namespace detail {

inline std::string encode_lattice(const LatticePath& p) {
    std::string s;
    s.reserve(p.size());
    for (const auto h : p.heights) s.push_back(static_cast<char>('0' + h));
    return s;
}

inline std::vector<StatEntry> battery_ks(const std::vector<FunctionalSpec>& battery,
                                         const std::vector<std::vector<double>>& a,
                                         const std::vector<std::vector<double>>& b) {
    std::vector<StatEntry> stats;
    for (std::size_t f = 0; f < battery.size(); ++f) {
        const KsResult ks = ks_two_sample(a[f], b[f]);
        stats.push_back({battery[f].name(), ks.statistic, ks.p_value});
    }
    return stats;
}

inline bool bonferroni_pass(const std::vector<StatEntry>& stats, double alpha, std::size_t m) {
    for (const auto& s : stats)
        if (s.p.has_value() && *s.p <= alpha / static_cast<double>(m)) return false;
    return true;
}

}  // namespace detail

// The re-rooting suites sample trees through conditioned Galton-Watson
// contours rather than the Gaussian-grid excursion: grid re-rooting is an
// exact bijection on lattice excursions, so the invariance being tested holds
// exactly in law at every finite size. A Gaussian-grid path is not closed
// under grid re-rooting (the re-rooted path has minima between grid points),
// which would leak O(1/sqrt(grid)) discretization error into the comparisons.
//
// Heights are left as exact integers (time is still normalized to [0,1]).
// The KS statistic is invariant under the common height scaling, and integer
// arithmetic keeps tied values bit-identical on both sides of a comparison;
// pre-scaled heights would put re-rooted values 1-2 ulp off the plain ones,
// splitting the lattice atoms and inflating the statistic by whole atom
// masses. cfg.grid is the contour length 2n; the tree has n edges.
class CrtContourSampler {
public:
    CrtContourSampler(double gamma, std::size_t contour_grid)
        : gamma_(gamma),
          gw_(gamma == 2.0 ? offspring_geometric() : offspring_stable(gamma),
              std::max<std::size_t>(1, contour_grid / 2)) {}

    ContourExcursion operator()(CounterRng& rng) const {
        const LatticePath contour = contour_of_tree(gw_.sample(rng));
        std::vector<double> s(contour.size());
        for (std::size_t i = 0; i < contour.size(); ++i)
            s[i] = static_cast<double>(contour[i]);
        return ContourExcursion(std::move(s), 1.0 / static_cast<double>(2 * gw_.edges()));
    }

    std::size_t edges() const { return gw_.edges(); }
    double gamma() const { return gamma_; }

private:
    double gamma_;
    ConditionedGwSampler gw_;
};

// ---------------------------------------------------------------------------
// Exact suites (pure functions of n; no randomness, no p-values)

// Fixed-s re-rooting is a bijection of the Dyck set: for every integer s,
// H -> H^[s] maps the Dyck set of length 2n onto itself, and (H^[s])^[2n-s]
// recovers H.
inline TestReport verify_reroot_bijection(std::size_t n) {
    if (n < 1 || n > 10) throw DomainError("verify_reroot_bijection: need 1 <= n <= 10");
    StopwatchMs timer;
    const std::vector<LatticePath> paths = enumerate_dyck(n);
    const std::uint64_t expect = catalan(n);

    std::uint64_t violations = 0;
    std::uint64_t checked = 0;
    bool bijective = true;
    for (std::size_t s = 0; s <= 2 * n; ++s) {
        std::unordered_set<std::string> image;
        image.reserve(paths.size() * 2);
        for (const auto& p : paths) {
            const LatticePath r = lat_reroot(p, s);
            ++checked;
            if (!is_dyck(r) || r.size() != p.size()) ++violations;
            if (!(lat_reroot(r, 2 * n - s) == p)) ++violations;
            image.insert(detail::encode_lattice(r));
        }
        if (image.size() != expect) bijective = false;
    }

    TestReport rep;
    rep.suite = "reroot-bijection";
    rep.mode = "exact";
    rep.params["n"] = n;
    rep.params["paths"] = expect;
    rep.params["shifts"] = 2 * n + 1;
    rep.stats.push_back({"checks", static_cast<double>(checked), std::nullopt});
    rep.stats.push_back({"violations", static_cast<double>(violations), std::nullopt});
    rep.pass = violations == 0 && bijective;
    rep.runtime_ms = timer.elapsed();
    return rep;
}

// Exact weighted re-rooting sum identity over GW(geometric 1/2): with tree weight
// 2^{-(2n+1)}, sum over trees with <= n_max edges and over integer s of
// g(sigma) F(s, H^[s]) equals the same sum with F(s, H), in exact rationals.
inline TestReport verify_reroot_sum_exact(std::size_t n_max) {
    if (n_max < 1 || n_max > 7) throw DomainError("verify_reroot_sum_exact: need 1 <= n_max <= 7");
    StopwatchMs timer;

    struct Weight {
        std::string name;
        bool (*applies)(std::size_t sigma);
    };
    const std::vector<Weight> weights = {
        {"one", [](std::size_t) { return true; }},
        {"sigma==8", [](std::size_t sigma) { return sigma == 8; }},
        {"sigma<=6", [](std::size_t sigma) { return sigma <= 6; }},
    };
    const std::vector<RationalFunctional> battery = reroot_sum_battery();

    std::vector<std::vector<Rat>> lhs(battery.size(), std::vector<Rat>(weights.size(), Rat(0)));
    std::vector<std::vector<Rat>> rhs(battery.size(), std::vector<Rat>(weights.size(), Rat(0)));

    for (std::size_t n = 1; n <= n_max; ++n) {
        const Rat w = srw_excursion_tree_weight(n);
        const std::size_t sigma = 2 * n;
        for_each_dyck(n, [&](const LatticePath& p) {
            for (std::size_t s = 0; s < sigma; ++s) {
                const LatticePath r = lat_reroot(p, s);
                for (std::size_t f = 0; f < battery.size(); ++f) {
                    const Rat fs_rerooted = battery[f].apply(s, r);
                    const Rat fs_plain = battery[f].apply(s, p);
                    for (std::size_t g = 0; g < weights.size(); ++g) {
                        if (!weights[g].applies(sigma)) continue;
                        lhs[f][g] += w * fs_rerooted;
                        rhs[f][g] += w * fs_plain;
                    }
                }
            }
        });
    }

    TestReport rep;
    rep.suite = "reroot-sum-exact";
    rep.mode = "exact";
    rep.params["n_max"] = n_max;
    rep.params["functionals"] = battery.size();
    rep.params["weights"] = weights.size();
    bool all_equal = true;
    for (std::size_t f = 0; f < battery.size(); ++f)
        for (std::size_t g = 0; g < weights.size(); ++g) {
            const bool eq = lhs[f][g] == rhs[f][g];
            all_equal = all_equal && eq;
            rep.stats.push_back({battery[f].name() + " | g=" + weights[g].name,
                                 (lhs[f][g] - rhs[f][g]).to_double(), std::nullopt});
        }
    rep.pass = all_equal;
    rep.runtime_ms = timer.elapsed();
    return rep;
}

// Time reversal maps the Dyck set of each length onto itself.
inline TestReport verify_time_reversal_exact(std::size_t n_max) {
    if (n_max < 1 || n_max > 10) throw DomainError("verify_time_reversal_exact: need 1 <= n_max <= 10");
    StopwatchMs timer;
    std::uint64_t violations = 0;
    bool bijective = true;
    for (std::size_t n = 1; n <= n_max; ++n) {
        std::unordered_set<std::string> image;
        for_each_dyck(n, [&](const LatticePath& p) {
            const LatticePath r = lat_reverse(p);
            if (!is_dyck(r) || !(lat_reverse(r) == p)) ++violations;
            image.insert(detail::encode_lattice(r));
        });
        if (image.size() != catalan(n)) bijective = false;
    }
    TestReport rep;
    rep.suite = "time-reversal-exact";
    rep.mode = "exact";
    rep.params["n_max"] = n_max;
    rep.stats.push_back({"violations", static_cast<double>(violations), std::nullopt});
    rep.pass = violations == 0 && bijective;
    rep.runtime_ms = timer.elapsed();
    return rep;
}

// ---------------------------------------------------------------------------
// Tolerance suites (seeded, but checked against an exactness bound)

// Re-rooted distance matrices match the shift-mapped originals: T_{H^[s]} is
// T_H re-rooted at p_H(s).
inline TestReport verify_isometry(const McConfig& cfg, std::size_t shifts_per_path = 10,
                                  std::size_t times_per_path = 5, double tol = 1e-12) {
    cfg.validate();
    StopwatchMs timer;
    const std::size_t N = cfg.replicas;
    const CrtContourSampler sampler(2.0, cfg.grid);
    std::vector<double> devs(N, 0.0);

    parallel_for_replicas(N, cfg.workers, [&](std::size_t i) {
        CounterRng rng = CounterRng::substream(cfg.seed, i);
        const ContourExcursion H = sampler(rng);
        const double m = static_cast<double>(H.path().segments());
        double worst = 0.0;
        for (std::size_t rep = 0; rep < shifts_per_path; ++rep) {
            const std::size_t k = static_cast<std::size_t>(std::llround(rng.uniform() * m));
            const std::vector<double> times = mass_sample(H, rng, times_per_path);
            const ContourExcursion R = reroot_at(H, k);
            const double s = static_cast<double>(k) * H.step();
            std::vector<double> shifted(times.size());
            for (std::size_t j = 0; j < times.size(); ++j) {
                double st = s + times[j];
                if (st > H.sigma()) st -= H.sigma();
                shifted[j] = st;
            }
            worst = std::max(worst,
                             distance_matrix(R, times).max_abs_diff(distance_matrix(H, shifted)));
        }
        devs[i] = worst;
    });

    double maxdev = 0.0;
    for (const double d : devs) maxdev = std::max(maxdev, d);

    TestReport rep;
    rep.suite = "isometry";
    rep.mode = "statistical";
    rep.params["grid"] = cfg.grid;
    rep.params["edges"] = sampler.edges();
    rep.params["replicas"] = N;
    rep.params["shifts_per_path"] = shifts_per_path;
    rep.params["times_per_path"] = times_per_path;
    rep.params["tolerance"] = tol;
    rep.seed = cfg.seed;
    rep.stats.push_back({"max_abs_deviation", maxdev, std::nullopt});
    rep.pass = maxdev <= tol;
    rep.runtime_ms = timer.elapsed();
    return rep;
}

namespace detail {

// Random element of M_f* on the dyadic 1/8 lattice with integer total mass;
// every CDF manipulation on these stays exact in binary64.
inline FiniteMeasure random_lattice_measure(CounterRng& rng) {
    auto dyadic = [&](double lo, double hi) {
        const double n = std::floor(rng.uniform() * ((hi - lo) * 8.0 + 1.0));
        return lo + n * 0.125;
    };
    std::vector<FiniteMeasure::Drift> drift;
    const std::size_t nseg = 1 + static_cast<std::size_t>(rng.uniform() * 2.0);
    const double rates[5] = {0.25, 0.5, 1.0, 2.0, 4.0};
    double x = 0.0;
    for (std::size_t s = 0; s < nseg; ++s) {
        const double len = dyadic(0.25, 1.5);
        const double rate = rates[static_cast<std::size_t>(rng.uniform() * 5.0)];
        drift.push_back({x, x + len, rate});
        x += len;
    }
    const double S = x;
    std::vector<FiniteMeasure::Atom> atoms;
    const std::size_t natoms = static_cast<std::size_t>(rng.uniform() * 3.0);
    for (std::size_t a = 0; a < natoms; ++a)
        atoms.push_back({dyadic(0.0, S), dyadic(0.125, 1.0)});

    FiniteMeasure mu(drift, atoms);
    const double total = mu.total_mass();
    const double target = std::ceil(total);
    if (target > total) atoms.push_back({dyadic(0.0, S), target - total});
    return FiniteMeasure(std::move(drift), std::move(atoms));
}

}  // namespace detail

// Pathwise spine identities on lattice instances, exactly:
//   running-min identity:  min_{[0,t]} H^mu = S(k_{-I_t} mu)
//   support-shift identity:  S(mu) + H_t - S(k_{|mu|+I_t} mu) = H_t + S(k_{-I_t} mu-bar)
inline TestReport verify_spine_identities(const McConfig& cfg) {
    cfg.validate();
    StopwatchMs timer;
    const std::size_t N = cfg.replicas;
    std::vector<std::uint8_t> ok1(N, 0), ok3(N, 0);

    parallel_for_replicas(N, cfg.workers, [&](std::size_t i) {
        CounterRng rng = CounterRng::substream(cfg.seed, i);
        const FiniteMeasure mu = detail::random_lattice_measure(rng);
        const FiniteMeasure mubar = reverse_measure(mu);
        const std::int64_t L = mass_units(mu, 1.0);

        // critical skip-free walk run to the first hit of -L
        WalkPath walk;
        walk.delta = 1.0;
        for (int attempt = 0; attempt < 200 && walk.units.empty(); ++attempt) {
            std::vector<std::int64_t> units{0};
            std::int64_t xv = 0;
            const int law = static_cast<int>(i % 3);
            for (std::uint64_t t = 0; t < 1000000 && xv != -L; ++t) {
                std::int64_t step = 0;
                const double u = rng.uniform();
                if (law == 0) {
                    step = u < 0.5 ? -1 : 1;
                } else if (law == 1) {
                    step = u < 1.0 / 3 ? -1 : (u < 2.0 / 3 ? 0 : 1);
                } else {
                    step = u < 0.75 ? -1 : 3;
                }
                xv += step;
                units.push_back(xv);
            }
            if (xv == -L) walk.units = std::move(units);
        }
        if (walk.units.empty()) return;  // leaves ok flags 0 -> counted as failure

        const SpinePath spine = spine_path(mu, walk, 1.0);
        const std::vector<double> Smu = spine_support_table(mu, 1.0, L);
        const std::vector<double> Sbar = spine_support_table(mubar, 1.0, L);

        bool k1 = true;
        double runmin = spine.path[0];
        std::int64_t imin = 0;
        for (std::size_t t = 0; t < spine.path.size(); ++t) {
            imin = std::min(imin, spine.walk.units[t]);
            runmin = std::min(runmin, spine.path[t]);
            if (runmin != Smu[static_cast<std::size_t>(-imin)]) k1 = false;
        }
        bool k3 = true;
        for (std::int64_t r = 0; r <= L; ++r) {
            const double lhs = Smu[0] - Smu[static_cast<std::size_t>(L - r)];
            if (lhs != Sbar[static_cast<std::size_t>(r)]) k3 = false;
        }
        ok1[i] = k1 ? 1 : 0;
        ok3[i] = k3 ? 1 : 0;
    });

    std::uint64_t bad1 = 0, bad3 = 0;
    for (std::size_t i = 0; i < N; ++i) {
        if (!ok1[i]) ++bad1;
        if (!ok3[i]) ++bad3;
    }
    TestReport rep;
    rep.suite = "spine-identities";
    rep.mode = "statistical";
    rep.params["replicas"] = N;
    rep.params["delta"] = 1.0;
    rep.seed = cfg.seed;
    rep.stats.push_back({"runmin_support_violations", static_cast<double>(bad1), std::nullopt});
    rep.stats.push_back({"support_shift_violations", static_cast<double>(bad3), std::nullopt});
    rep.pass = bad1 == 0 && bad3 == 0;
    rep.runtime_ms = timer.elapsed();
    return rep;
}

// ---------------------------------------------------------------------------
// Distributional suites (two-sample KS over a functional battery, Bonferroni)

// Fixed-s re-rooting invariance: phi(H^[s0 sigma]) vs phi(H) on independent
// replica halves, one report per s0 (samples shared across s0 values; the
// re-rooting transform consumes no randomness, so each report is identical to
// a standalone run). The model's normalized sampler is the conditioned-GW
// contour (geometric offspring at gamma = 2, stable-tailed otherwise).
inline std::vector<TestReport> verify_fixed_s_multi(const LevyModel& model,
                                                    const std::vector<double>& s0s,
                                                    const McConfig& cfg) {
    cfg.validate();
    for (const double s0 : s0s)
        if (s0 < 0.0 || s0 >= 1.0) throw DomainError("verify_fixed_s: s0 must be in [0,1)");
    StopwatchMs timer;
    const std::size_t N = cfg.replicas;
    const std::vector<FunctionalSpec> battery = default_battery();
    const std::size_t m = battery.size();
    const CrtContourSampler sampler(model.gamma, cfg.grid);

    std::vector<std::vector<std::vector<double>>> side_a(
        s0s.size(), std::vector<std::vector<double>>(m, std::vector<double>(N)));
    std::vector<std::vector<double>> side_b(m, std::vector<double>(N));

    parallel_for_replicas(2 * N, cfg.workers, [&](std::size_t i) {
        CounterRng rng = CounterRng::substream(cfg.seed, i);
        const ContourExcursion H = sampler(rng);
        if (i < N) {
            const double segs = static_cast<double>(H.path().segments());
            for (std::size_t s = 0; s < s0s.size(); ++s) {
                const std::size_t k = static_cast<std::size_t>(std::llround(s0s[s] * segs));
                const ContourExcursion R = reroot_at(H, k);
                for (std::size_t f = 0; f < m; ++f) side_a[s][f][i] = battery[f].apply(R.path());
            }
        } else {
            for (std::size_t f = 0; f < m; ++f) side_b[f][i - N] = battery[f].apply(H.path());
        }
    });

    std::vector<TestReport> reports;
    for (std::size_t s = 0; s < s0s.size(); ++s) {
        TestReport rep;
        rep.suite = "fixed-s";
        rep.mode = "statistical";
        rep.params["gamma"] = model.gamma;
        rep.params["c"] = model.c;
        rep.params["s0"] = s0s[s];
        rep.params["sampler"] = model.gamma == 2.0 ? "gw-geometric" : "gw-stable";
        rep.params["grid"] = cfg.grid;
        rep.params["edges"] = sampler.edges();
        rep.params["replicas_per_side"] = N;
        rep.params["alpha"] = cfg.alpha;
        rep.params["bonferroni_m"] = m;
        rep.seed = cfg.seed;
        rep.stats = detail::battery_ks(battery, side_a[s], side_b);
        rep.pass = detail::bonferroni_pass(rep.stats, cfg.alpha, m);
        rep.runtime_ms = timer.elapsed();
        reports.push_back(std::move(rep));
    }
    return reports;
}

inline TestReport verify_fixed_s_mc(const LevyModel& model, double s0, const McConfig& cfg) {
    return verify_fixed_s_multi(model, {s0}, cfg).front();
}

// Spine reversal law: tilde(w) under Q_mu versus reverse(w) under Q_{mu-bar},
// compared on the battery {duration, sup, area, eval at 1/4, 1/2, 3/4}.
// Censored replicas (budget exceeded) retry on fresh substreams and are
// reported. The identity is a continuum statement; the discrete sides differ
// at per-step scale, so expect rejection at coarse delta and high replica
// counts (see the tests for the enumerable small-walk counterexample).
inline TestReport verify_spine_reversal(const FiniteMeasure& mu, double delta, const McConfig& cfg,
                                        std::uint64_t step_budget = 10000000) {
    cfg.validate();
    StopwatchMs timer;
    const std::size_t N = cfg.replicas;
    const FiniteMeasure mubar = reverse_measure(mu);
    const std::int64_t L = mass_units(mu, delta);
    const std::vector<double> table_a = spine_support_table(mu, delta, L);
    const std::vector<double> table_b = spine_support_table(mubar, delta, L);
    const std::vector<FunctionalSpec> battery = {
        FunctionalSpec::duration(),  FunctionalSpec::sup(),          FunctionalSpec::area(),
        FunctionalSpec::eval_at(0.25), FunctionalSpec::eval_at(0.5), FunctionalSpec::eval_at(0.75)};
    const std::size_t m = battery.size();

    std::vector<std::vector<double>> side_a(m, std::vector<double>(N));
    std::vector<std::vector<double>> side_b(m, std::vector<double>(N));
    std::vector<std::uint32_t> retries(2 * N, 0);

    parallel_for_replicas(2 * N, cfg.workers, [&](std::size_t i) {
        const bool is_a = i < N;
        const std::vector<double>& table = is_a ? table_a : table_b;
        thread_local std::vector<std::int32_t> walk;

        // generate a fair walk to the first hit of -L, retrying w/ fresh substreams
        std::uint32_t attempt = 0;
        for (;;) {
            CounterRng rng = CounterRng(cfg.seed, i + static_cast<std::uint64_t>(attempt) * 2 * N);
            CoinStream coins(rng);
            walk.clear();
            walk.push_back(0);
            std::int32_t x = 0;
            bool hit = false;
            for (std::uint64_t t = 0; t < step_budget; ++t) {
                x += coins.step();
                walk.push_back(x);
                if (x == -L) {
                    hit = true;
                    break;
                }
            }
            if (hit) break;
            ++attempt;
            if (attempt > 1000) throw RetryableError("verify_spine_reversal: persistent budget exhaustion");
        }
        retries[i] = attempt;

        const std::size_t tau = walk.size() - 1;
        // capture slots for the fractional evaluation points
        double fpos[3], fv0[3], fv1[3];
        std::size_t fi0[3], fi1[3];
        const double fracs[3] = {0.25, 0.5, 0.75};
        for (int f = 0; f < 3; ++f) {
            fpos[f] = fracs[f] * static_cast<double>(tau);
            fi0[f] = static_cast<std::size_t>(std::floor(fpos[f]));
            fi1[f] = std::min(fi0[f] + 1, tau);
            fv0[f] = fv1[f] = 0.0;
        }

        HeightStack hs;
        std::int32_t imin = 0;
        double sum = 0.0, sup = 0.0, first = 0.0, last = 0.0;
        double runmin = 0.0;
        const double v0 = table[0];  // S(mu) = H^mu_0
        for (std::size_t t = 0; t <= tau; ++t) {
            imin = std::min(imin, walk[t]);
            const std::int64_t h = t == 0 ? 0 : hs.feed(walk[t - 1], walk[t]);
            const double hmu = table[static_cast<std::size_t>(-imin)] + static_cast<double>(h);
            double v;
            if (is_a) {
                runmin = t == 0 ? hmu : std::min(runmin, hmu);
                v = v0 + hmu - 2.0 * runmin;  // tilde(H^mu) on the grid
            } else {
                v = hmu;  // functionals of the reversal are read off directly
            }
            sum += v;
            sup = std::max(sup, v);
            if (t == 0) first = v;
            if (t == tau) last = v;
            for (int f = 0; f < 3; ++f) {
                if (t == fi0[f]) fv0[f] = v;
                if (t == fi1[f]) fv1[f] = v;
            }
        }
        const double area = sum - 0.5 * (first + last);
        double evals[3];
        for (int f = 0; f < 3; ++f) {
            const double frac = fpos[f] - std::floor(fpos[f]);
            const double at_f = fv0[f] + frac * (fv1[f] - fv0[f]);
            if (is_a) {
                evals[f] = at_f;
            } else {
                // reverse(w)(f tau) = w((1-f) tau); read the mirrored slot
                const double mirrored = fv0[2 - f] + (fpos[2 - f] - std::floor(fpos[2 - f])) *
                                                         (fv1[2 - f] - fv0[2 - f]);
                evals[f] = mirrored;
            }
        }
        const std::size_t slot = is_a ? i : i - N;
        auto& side = is_a ? side_a : side_b;
        side[0][slot] = static_cast<double>(tau);
        side[1][slot] = sup;
        side[2][slot] = area;
        side[3][slot] = evals[0];
        side[4][slot] = evals[1];
        side[5][slot] = evals[2];
    });

    std::uint64_t censored_a = 0, censored_b = 0;
    for (std::size_t i = 0; i < 2 * N; ++i) (i < N ? censored_a : censored_b) += retries[i];

    TestReport rep;
    rep.suite = "spine-reversal";
    rep.mode = "statistical";
    rep.params["delta"] = delta;
    rep.params["mass_units"] = L;
    rep.params["replicas_per_side"] = N;
    rep.params["step_budget"] = step_budget;
    rep.params["alpha"] = cfg.alpha;
    rep.params["bonferroni_m"] = m;
    rep.seed = cfg.seed;
    rep.stats = detail::battery_ks(battery, side_a, side_b);
    rep.stats.push_back({"censored_retries_side_a", static_cast<double>(censored_a), std::nullopt});
    rep.stats.push_back({"censored_retries_side_b", static_cast<double>(censored_b), std::nullopt});
    rep.pass = detail::bonferroni_pass(rep.stats, cfg.alpha, m);
    rep.runtime_ms = timer.elapsed();
    return rep;
}

// Triplet exchangeability under the CRT sampler: the three leg-length
// marginals agree pairwise (KS on disjoint replica halves) and the permuted
// moment E[A B^2] - E[B A^2] vanishes within 4 standard errors.
inline TestReport verify_triplet(const McConfig& cfg) {
    cfg.validate();
    StopwatchMs timer;
    const std::size_t N = cfg.replicas;
    const CrtContourSampler sampler(2.0, cfg.grid);
    std::vector<double> A(N), B(N), C(N), D(N);

    parallel_for_replicas(N, cfg.workers, [&](std::size_t i) {
        CounterRng rng = CounterRng::substream(cfg.seed, i);
        const ContourExcursion H = sampler(rng);
        const std::vector<double> uv = mass_sample(H, rng, 2);
        const Triplet t = triplet(H, uv[0], uv[1]);
        A[i] = t.a;
        B[i] = t.b;
        C[i] = t.c;
        D[i] = t.a * t.b * t.b - t.b * t.a * t.a;
    });

    const std::size_t half = N / 2;
    auto first_half = [&](const std::vector<double>& v) {
        return std::vector<double>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(half));
    };
    auto second_half = [&](const std::vector<double>& v) {
        return std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(half), v.end());
    };

    TestReport rep;
    rep.suite = "triplet";
    rep.mode = "statistical";
    rep.params["grid"] = cfg.grid;
    rep.params["replicas"] = N;
    rep.params["alpha"] = cfg.alpha;
    rep.params["bonferroni_m"] = 3;
    rep.seed = cfg.seed;

    const KsResult ab = ks_two_sample(first_half(A), second_half(B));
    const KsResult ac = ks_two_sample(first_half(A), second_half(C));
    const KsResult bc = ks_two_sample(first_half(B), second_half(C));
    rep.stats.push_back({"ks(A,B)", ab.statistic, ab.p_value});
    rep.stats.push_back({"ks(A,C)", ac.statistic, ac.p_value});
    rep.stats.push_back({"ks(B,C)", bc.statistic, bc.p_value});

    const MeanSe moment = mean_se(D);
    const double z = moment.se > 0.0 ? std::abs(moment.mean) / moment.se : 0.0;
    rep.stats.push_back({"permuted_moment_z", z, std::nullopt});

    rep.pass = detail::bonferroni_pass(rep.stats, cfg.alpha, 3) && z <= 4.0;
    rep.runtime_ms = timer.elapsed();
    return rep;
}

// ISE right mass: the estimated total occupation mass right of the origin is
// uniform on [0,1] (one-sample KS).
inline TestReport verify_ise(const McConfig& cfg, std::size_t k,
                             std::vector<double>* out_values = nullptr) {
    cfg.validate();
    StopwatchMs timer;
    const std::size_t N = cfg.replicas;
    const CrtContourSampler sampler(2.0, cfg.grid);
    std::vector<double> values(N);
    parallel_for_replicas(N, cfg.workers, [&](std::size_t i) {
        CounterRng rng = CounterRng::substream(cfg.seed, i);
        const ContourExcursion H = sampler(rng);
        values[i] = ise_right_mass(H, k, rng);
    });
    const KsResult ks = ks_uniform(values);
    if (out_values) *out_values = values;

    TestReport rep;
    rep.suite = "ise";
    rep.mode = "statistical";
    rep.params["grid"] = cfg.grid;
    rep.params["trees"] = N;
    rep.params["k"] = k;
    rep.params["alpha"] = cfg.alpha;
    rep.seed = cfg.seed;
    rep.stats.push_back({"ks_uniform", ks.statistic, ks.p_value});
    rep.pass = ks.p_value > cfg.alpha;
    rep.runtime_ms = timer.elapsed();
    return rep;
}

// Time-reversal invariance of the CRT excursion, statistically.
inline TestReport verify_time_reversal_mc(const McConfig& cfg) {
    cfg.validate();
    StopwatchMs timer;
    const std::size_t N = cfg.replicas;
    const std::vector<FunctionalSpec> battery = default_battery();
    const std::size_t m = battery.size();
    std::vector<std::vector<double>> side_a(m, std::vector<double>(N));
    std::vector<std::vector<double>> side_b(m, std::vector<double>(N));

    parallel_for_replicas(2 * N, cfg.workers, [&](std::size_t i) {
        CounterRng rng = CounterRng::substream(cfg.seed, i);
        const ContourExcursion H = brownian_excursion(cfg.grid, rng);
        if (i < N) {
            const FinitePath rev = reverse(H.path());
            for (std::size_t f = 0; f < m; ++f) side_a[f][i] = battery[f].apply(rev);
        } else {
            for (std::size_t f = 0; f < m; ++f) side_b[f][i - N] = battery[f].apply(H.path());
        }
    });

    TestReport rep;
    rep.suite = "time-reversal";
    rep.mode = "statistical";
    rep.params["grid"] = cfg.grid;
    rep.params["replicas_per_side"] = N;
    rep.params["alpha"] = cfg.alpha;
    rep.params["bonferroni_m"] = m;
    rep.seed = cfg.seed;
    rep.stats = detail::battery_ks(battery, side_a, side_b);
    rep.pass = detail::bonferroni_pass(rep.stats, cfg.alpha, m);
    rep.runtime_ms = timer.elapsed();
    return rep;
}

// Negative control: the fixed-s comparison run across models (gamma = 2
// re-rooted versus gamma = 1.5 plain) must FAIL, demonstrating test power.
// The report passes when the underlying comparison rejects.
inline TestReport verify_negative_control(const McConfig& cfg, double s0 = 0.3) {
    cfg.validate();
    StopwatchMs timer;
    const std::size_t N = cfg.replicas;
    const std::vector<FunctionalSpec> battery = default_battery();
    const std::size_t m = battery.size();
    // cross-model comparison, so heights are normalized on both sides
    const std::size_t edges = std::max<std::size_t>(1, cfg.grid / 2);
    const OffspringDistribution geo = offspring_geometric();
    const OffspringDistribution st = offspring_stable(1.5);
    const ConditionedGwSampler gw_a(geo, edges);
    const ConditionedGwSampler gw_b(st, edges);

    std::vector<std::vector<double>> side_a(m, std::vector<double>(N));
    std::vector<std::vector<double>> side_b(m, std::vector<double>(N));

    parallel_for_replicas(2 * N, cfg.workers, [&](std::size_t i) {
        CounterRng rng = CounterRng::substream(cfg.seed, i);
        if (i < N) {
            const ContourExcursion H = excursion_of_tree(gw_a.sample(rng), 2.0);
            const std::size_t k = static_cast<std::size_t>(
                std::llround(s0 * static_cast<double>(H.path().segments())));
            const ContourExcursion R = reroot_at(H, k);
            for (std::size_t f = 0; f < m; ++f) side_a[f][i] = battery[f].apply(R.path());
        } else {
            const ContourExcursion H = excursion_of_tree(gw_b.sample(rng), 1.5);
            for (std::size_t f = 0; f < m; ++f) side_b[f][i - N] = battery[f].apply(H.path());
        }
    });

    TestReport rep;
    rep.suite = "negative-control";
    rep.mode = "statistical";
    rep.params["gamma_a"] = 2.0;
    rep.params["gamma_b"] = 1.5;
    rep.params["s0"] = s0;
    rep.params["grid"] = cfg.grid;
    rep.params["replicas_per_side"] = N;
    rep.params["alpha"] = cfg.alpha;
    rep.params["bonferroni_m"] = m;
    rep.seed = cfg.seed;
    rep.stats = detail::battery_ks(battery, side_a, side_b);
    const bool rejected = !detail::bonferroni_pass(rep.stats, cfg.alpha, m);
    rep.stats.push_back({"rejected_as_expected", rejected ? 1.0 : 0.0, std::nullopt});
    rep.pass = rejected;
    rep.runtime_ms = timer.elapsed();
    return rep;
}

}  // namespace levytree
