// levytree: generators, path transforms and verification suites for the
// re-rooting calculus of Levy trees. Exit codes: 0 = all pass, 1 = any fail,
// 2 = input error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "levytree/generators.hpp"
#include "levytree/harness.hpp"
#include "levytree/io.hpp"
#include "levytree/spine.hpp"

namespace {

using namespace levytree;

LevyModel parse_model(const std::string& spec) {
    double gamma = 2.0, c = 1.0;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw InputError("--model expects key=value pairs");
        const std::string key = item.substr(0, eq);
        const double value = parse_double(item.substr(eq + 1));
        if (key == "gamma")
            gamma = value;
        else if (key == "c")
            c = value;
        else
            throw InputError("--model: unknown key '" + key + "'");
    }
    return LevyModel(gamma, c);
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(item));
    return out;
}

void emit(const TestReport& rep, const std::string& report_file, bool& all_pass) {
    all_pass = all_pass && rep.pass;
    std::cout << (rep.pass ? "[PASS] " : "[FAIL] ") << rep.suite << "  min_p=";
    bool any_p = false;
    for (const auto& s : rep.stats) any_p = any_p || s.p.has_value();
    if (any_p)
        std::cout << rep.min_p();
    else
        std::cout << "n/a";
    std::cout << "  runtime=" << rep.runtime_ms << "ms\n";
    if (!report_file.empty()) append_report(rep, report_file);
}

int run(int argc, char** argv) {
    CLI::App app{"Path-level calculus of Levy trees: coding, re-rooting, spine machinery"};
    app.require_subcommand(1);

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "generate excursions, trees or walks");
    gen->require_subcommand(1);
    std::string model_spec = "gamma=2";
    std::uint64_t seed = 7;
    std::size_t gen_n = 1024;
    std::string out_file;
    std::string sampler = "auto";
    std::size_t count = 1;

    auto* gen_exc = gen->add_subcommand("excursion", "normalized excursion (path CSV)");
    gen_exc->add_option("--model", model_spec, "gamma=...[,c=...]");
    gen_exc->add_option("--n", gen_n, "grid size (brownian) or edge count (gw)");
    gen_exc->add_option("--seed", seed);
    gen_exc->add_option("--out", out_file)->required();
    gen_exc->add_option("--sampler", sampler, "auto|brownian|gw");

    auto* gen_tree = gen->add_subcommand("tree", "conditioned Galton-Watson tree (parens, one per line)");
    gen_tree->add_option("--model", model_spec);
    gen_tree->add_option("--n", gen_n, "edge count")->required();
    gen_tree->add_option("--seed", seed);
    gen_tree->add_option("--count", count, "number of trees");
    gen_tree->add_option("--out", out_file)->required();

    auto* gen_walk = gen->add_subcommand("walk", "fair +-1 walk (path CSV)");
    gen_walk->add_option("--n", gen_n, "number of steps")->required();
    gen_walk->add_option("--seed", seed);
    gen_walk->add_option("--out", out_file)->required();

    // ---- reroot ----
    auto* rr = app.add_subcommand("reroot", "re-root an excursion read from a path CSV");
    std::string rr_in, rr_out;
    double rr_s = 0.0;
    rr->add_option("--in", rr_in)->required();
    rr->add_option("--s", rr_s, "re-rooting time (snapped to the nearest grid point)")->required();
    rr->add_option("--out", rr_out)->required();

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->require_subcommand(1);
    std::string suite, report_file, measure_file, csv_file, s0_list = "0.3";
    std::size_t vn = 5, replicas = 1000, grid = 1024, kk = 500;
    double gamma = 2.0, alpha = 0.001, delta = 0.25;
    int workers = 0;

    auto* vx = verify->add_subcommand("exact", "exact enumeration suites");
    vx->add_option("--suite", suite, "reroot-bijection|reroot-sum|time-reversal")->required();
    vx->add_option("--n", vn, "half-length / max edges");
    vx->add_option("--report", report_file);

    auto* vm = verify->add_subcommand("mc", "seeded Monte Carlo suites");
    vm->add_option("--suite", suite,
                   "fixed-s|spine-reversal|triplet|ise|time-reversal|isometry|spine-identities|negative-control")
        ->required();
    vm->add_option("--gamma", gamma);
    vm->add_option("--s0", s0_list, "comma list of re-rooting fractions");
    vm->add_option("--grid", grid, "grid size (or edge count for tree samplers)");
    vm->add_option("--replicas", replicas, "replicas per side");
    vm->add_option("--seed", seed);
    vm->add_option("--alpha", alpha);
    vm->add_option("--workers", workers, "worker hint; reports do not depend on it");
    vm->add_option("--delta", delta, "mass unit for spine-reversal");
    vm->add_option("--measure", measure_file, "measure JSON for spine-reversal");
    vm->add_option("--k", kk, "vertex samples per tree for ise");
    vm->add_option("--csv", csv_file, "append tree_id,k,right_mass rows (ise)");
    vm->add_option("--report", report_file);

    // ---- report ----
    auto* rep_cmd = app.add_subcommand("report", "inspect report files");
    auto* summarize = rep_cmd->add_subcommand("summarize", "summarize a JSON-lines report file");
    std::string summarize_file;
    summarize->add_option("file", summarize_file)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    bool all_pass = true;

    if (gen_exc->parsed()) {
        const LevyModel model = parse_model(model_spec);
        CounterRng rng(seed, 0);
        const ContourExcursion H =
            (sampler == "brownian" || (sampler == "auto" && model.gamma == 2.0))
                ? brownian_excursion(gen_n, rng)
                : normalized_stable_excursion(gen_n, model, rng);
        write_path_csv(H.path(), out_file);
    } else if (gen_tree->parsed()) {
        const LevyModel model = parse_model(model_spec);
        const OffspringDistribution offspring =
            model.gamma == 2.0 ? offspring_geometric() : offspring_stable(model.gamma);
        const ConditionedGwSampler gw(offspring, gen_n);
        std::ofstream out(out_file);
        if (!out) throw InputError("cannot open: " + out_file);
        for (std::size_t i = 0; i < count; ++i) {
            CounterRng rng = CounterRng::substream(seed, i);
            out << tree_to_parens(gw.sample(rng)) << '\n';
        }
    } else if (gen_walk->parsed()) {
        CounterRng rng(seed, 0);
        CoinStream coins(rng);
        std::vector<double> v(gen_n + 1);
        v[0] = 0.0;
        for (std::size_t t = 1; t <= gen_n; ++t) v[t] = v[t - 1] + coins.step();
        write_path_csv(FinitePath(std::move(v), 1.0), out_file);
    } else if (rr->parsed()) {
        const FinitePath w = read_path_csv_file(rr_in);
        const ContourExcursion H(w);
        const double coord = w.grid_coord(rr_s);
        const std::size_t k = static_cast<std::size_t>(std::llround(coord));
        if (coord != std::floor(coord))
            std::cerr << "note: --s snapped to grid point " << static_cast<double>(k) * w.step()
                      << "\n";
        write_path_csv(reroot_at(H, k).path(), rr_out);
    } else if (vx->parsed()) {
        TestReport rep;
        if (suite == "reroot-bijection")
            rep = verify_reroot_bijection(vn);
        else if (suite == "reroot-sum")
            rep = verify_reroot_sum_exact(vn);
        else if (suite == "time-reversal")
            rep = verify_time_reversal_exact(vn);
        else
            throw InputError("unknown exact suite: " + suite);
        emit(rep, report_file, all_pass);
    } else if (vm->parsed()) {
        McConfig cfg;
        cfg.seed = seed;
        cfg.replicas = replicas;
        cfg.grid = grid;
        cfg.alpha = alpha;
        cfg.workers = workers;
        if (suite == "fixed-s") {
            const LevyModel model(gamma);
            for (const auto& rep : verify_fixed_s_multi(model, parse_list(s0_list), cfg))
                emit(rep, report_file, all_pass);
        } else if (suite == "spine-reversal") {
            FiniteMeasure mu;
            if (!measure_file.empty()) {
                std::ifstream in(measure_file);
                if (!in) throw InputError("cannot open: " + measure_file);
                nlohmann::json j;
                in >> j;
                mu = measure_from_json(j);
            } else {
                // the worked example: unit drift on [0,2] plus an atom of mass 3 at 1/2
                mu = FiniteMeasure({{0.0, 2.0, 1.0}}, {{0.5, 3.0}});
            }
            emit(verify_spine_reversal(mu, delta, cfg), report_file, all_pass);
        } else if (suite == "triplet") {
            emit(verify_triplet(cfg), report_file, all_pass);
        } else if (suite == "ise") {
            std::vector<double> values;
            const TestReport rep = verify_ise(cfg, kk, &values);
            if (!csv_file.empty()) {
                std::ofstream out(csv_file, std::ios::app);
                if (!out) throw InputError("cannot open: " + csv_file);
                for (std::size_t i = 0; i < values.size(); ++i)
                    out << i << ',' << kk << ',' << format_double(values[i]) << '\n';
            }
            emit(rep, report_file, all_pass);
        } else if (suite == "time-reversal") {
            emit(verify_time_reversal_mc(cfg), report_file, all_pass);
        } else if (suite == "isometry") {
            emit(verify_isometry(cfg), report_file, all_pass);
        } else if (suite == "spine-identities") {
            emit(verify_spine_identities(cfg), report_file, all_pass);
        } else if (suite == "negative-control") {
            emit(verify_negative_control(cfg), report_file, all_pass);
        } else {
            throw InputError("unknown mc suite: " + suite);
        }
    } else if (summarize->parsed()) {
        const std::vector<TestReport> reports = read_reports(summarize_file);
        for (const auto& rep : reports) {
            all_pass = all_pass && rep.pass;
            std::cout << (rep.pass ? "PASS  " : "FAIL  ") << rep.suite << "  mode=" << rep.mode
                      << "  seed=" << rep.seed << "  runtime=" << rep.runtime_ms << "ms\n";
        }
        std::cout << reports.size() << " report(s)\n";
    }

    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
