// Acceptance suite: one line per criterion, exit 0 iff all pass.
// Statistical criteria run at pinned seeds with alpha = 0.001 and Bonferroni
// correction over their functional batteries; runtime bounds are part of the
// criteria and enforced.

#include <cstdio>
#include <string>
#include <vector>

#include "levytree/harness.hpp"

using namespace levytree;

namespace {

struct Criterion {
    int id;
    std::string label;
    bool pass;
    double seconds;
    std::string detail;
};

std::vector<Criterion> g_results;

void record(int id, const std::string& label, bool pass, double seconds,
            const std::string& detail) {
    g_results.push_back({id, label, pass, seconds, detail});
    std::printf("[%s] criterion %d: %s (%.1f s)%s%s\n", pass ? "PASS" : "FAIL", id, label.c_str(),
                seconds, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
}

std::string p_summary(const TestReport& rep) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "min_p=%.3g", rep.min_p());
    return buf;
}

void criterion_1() {
    StopwatchMs timer;
    bool pass = true;
    std::uint64_t checks = 0;
    for (std::size_t n = 1; n <= 8; ++n) {
        const TestReport rep = verify_reroot_bijection(n);
        pass = pass && rep.pass;
        checks += static_cast<std::uint64_t>(rep.stats[0].statistic);
    }
    const double sec = static_cast<double>(timer.elapsed()) / 1000.0;
    record(1, "exact re-rooting bijection, all Dyck paths n <= 8", pass && sec < 60.0, sec,
           std::to_string(checks) + " checks");
}

void criterion_2() {
    StopwatchMs timer;
    const TestReport rep = verify_reroot_sum_exact(6);
    const double sec = static_cast<double>(timer.elapsed()) / 1000.0;
    record(2, "exact re-rooting identity over weighted tree sums, n_max = 6",
           rep.pass && sec < 300.0, sec,
           std::to_string(rep.stats.size()) + " (F,g) pairs, exact rationals");
}

void criterion_3() {
    StopwatchMs timer;
    McConfig cfg;
    cfg.seed = 7003;
    cfg.replicas = 1000;
    cfg.grid = 1024;
    const TestReport rep = verify_isometry(cfg, 10, 5);
    const double sec = static_cast<double>(timer.elapsed()) / 1000.0;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "max_dev=%.2e", rep.stats[0].statistic);
    record(3, "re-rooted distance matrices match shifted originals (1e-12)",
           rep.pass && sec < 120.0, sec, buf);
}

void criterion_4() {
    StopwatchMs timer;
    McConfig cfg;
    cfg.seed = 7004;
    cfg.replicas = 10000;
    const TestReport rep = verify_spine_identities(cfg);
    const double sec = static_cast<double>(timer.elapsed()) / 1000.0;
    record(4, "running-min and support-shift spine identities, exact on 10^4 lattice instances",
           rep.pass && sec < 60.0, sec,
           "violations=" + std::to_string(static_cast<long>(rep.stats[0].statistic +
                                                            rep.stats[1].statistic)));
}

void criterion_5() {
    StopwatchMs timer;
    McConfig cfg;
    cfg.seed = 7005;
    cfg.replicas = 100000;
    const FiniteMeasure mu({{0.0, 2.0, 1.0}}, {{0.5, 3.0}});
    const TestReport rep = verify_spine_reversal(mu, 0.25, cfg);
    const double sec = static_cast<double>(timer.elapsed()) / 1000.0;
    std::string detail = p_summary(rep);
    if (!rep.pass)
        detail += " [the discrete spine analogue deviates from the continuum law on the"
                  " fractional-evaluation functionals at this mass unit; the gap is provable"
                  " by 3-step walk enumeration and vanishes as delta -> 0]";
    record(5, "spine reversal law (tilde under Q_mu vs reverse under Q_mubar), N = 1e5/side",
           rep.pass && sec < 600.0, sec, detail);
}

void criterion_6() {
    StopwatchMs timer;
    McConfig cfg;
    cfg.seed = 7006;
    cfg.replicas = 20000;
    cfg.grid = 4096;
    bool pass = true;
    std::string detail;
    for (const auto& rep : verify_fixed_s_multi(LevyModel(2.0), {0.1, 0.3, 0.7}, cfg)) {
        pass = pass && rep.pass;
        detail += "g2/s" + rep.params.at("s0").dump() + ":" + p_summary(rep) + " ";
    }
    McConfig cfg15;
    cfg15.seed = 7106;
    cfg15.replicas = 20000;
    cfg15.grid = 20000;  // contour length; 10^4 edges
    bool stable_pass = true;
    for (const auto& rep : verify_fixed_s_multi(LevyModel(1.5), {0.1, 0.3, 0.7}, cfg15)) {
        pass = pass && rep.pass;
        stable_pass = stable_pass && rep.pass;
        detail += "g1.5/s" + rep.params.at("s0").dump() + ":" + p_summary(rep) + " ";
    }
    if (!stable_pass)
        detail += "[the stable-tailed conditioned-GW law is only asymptotically re-rooting"
                  " invariant; its finite-n bias (~n^(-1/3), ~0.025 at 10^4 edges) exceeds the"
                  " KS threshold at 2e4 replicas/side; the gamma=2 legs are exact bijections"
                  " and pass]";
    const double sec = static_cast<double>(timer.elapsed()) / 1000.0;
    record(6, "fixed-s re-rooting invariance, gamma = 2 and gamma = 1.5", pass && sec < 1200.0,
           sec, detail);
}

void criterion_7() {
    StopwatchMs timer;
    McConfig cfg;
    cfg.seed = 7007;
    cfg.replicas = 20000;
    cfg.grid = 1024;
    const TestReport rep = verify_triplet(cfg);
    const double sec = static_cast<double>(timer.elapsed()) / 1000.0;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s moment_z=%.2f", p_summary(rep).c_str(),
                  rep.stats.back().statistic);
    record(7, "triplet exchangeability (marginals + permuted moment)", rep.pass, sec, buf);
}

void criterion_8() {
    StopwatchMs timer;
    McConfig cfg;
    cfg.seed = 7008;
    cfg.replicas = 5000;
    cfg.grid = 1024;
    const TestReport rep = verify_ise(cfg, 500);
    const double sec = static_cast<double>(timer.elapsed()) / 1000.0;
    record(8, "ISE right mass uniform on [0,1], 5000 trees x 500 samples",
           rep.pass && sec < 600.0, sec, p_summary(rep));
}

void criterion_9() {
    StopwatchMs timer;
    McConfig cfg;
    cfg.seed = 7009;
    cfg.replicas = 4000;
    cfg.grid = 2048;
    const TestReport rep = verify_negative_control(cfg);
    const double sec = static_cast<double>(timer.elapsed()) / 1000.0;
    record(9, "negative control: gamma = 2 vs gamma = 1.5 comparison is rejected", rep.pass, sec,
           p_summary(rep));
}

void criterion_10() {
    StopwatchMs timer;
    bool pass = true;

    McConfig cfg;
    cfg.seed = 7010;
    cfg.replicas = 300;
    cfg.grid = 512;
    cfg.workers = 1;
    const TestReport a1 = verify_fixed_s_mc(LevyModel(2.0), 0.3, cfg);
    cfg.workers = 3;
    const TestReport a2 = verify_fixed_s_mc(LevyModel(2.0), 0.3, cfg);
    pass = pass && a1.canonical_bytes() == a2.canonical_bytes();

    McConfig cfg2;
    cfg2.seed = 7110;
    cfg2.replicas = 200;
    cfg2.workers = 1;
    const TestReport b1 = verify_spine_reversal(FiniteMeasure::lebesgue(1.0), 0.5, cfg2, 100000);
    cfg2.workers = 4;
    const TestReport b2 = verify_spine_reversal(FiniteMeasure::lebesgue(1.0), 0.5, cfg2, 100000);
    pass = pass && b1.canonical_bytes() == b2.canonical_bytes();

    McConfig cfg3;
    cfg3.seed = 7210;
    cfg3.replicas = 400;
    cfg3.grid = 256;
    cfg3.workers = 2;
    const TestReport c1 = verify_ise(cfg3, 100);
    cfg3.workers = 5;
    const TestReport c2 = verify_ise(cfg3, 100);
    pass = pass && c1.canonical_bytes() == c2.canonical_bytes();

    const double sec = static_cast<double>(timer.elapsed()) / 1000.0;
    record(10, "byte-identical reports across worker hints (timing field excluded)", pass, sec,
           "");
}

}  // namespace

int main() {
    std::printf("levytree acceptance suite\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();

    int failed = 0;
    for (const auto& c : g_results)
        if (!c.pass) ++failed;
    std::printf("%zu criteria, %d failed\n", g_results.size(), failed);
    return failed == 0 ? 0 : 1;
}
