// One line per acceptance criterion. Exit status counts failures, except for
// criteria listed as known red (pass --strict to count those too).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "e2oc/cli/commands.hpp"
#include "e2oc/cli/config.hpp"
#include "e2oc/common/kv.hpp"
#include "e2oc/common/rng.hpp"
#include "e2oc/engines/moea.hpp"
#include "e2oc/moo/dominance.hpp"
#include "e2oc/moo/hypervolume.hpp"
#include "e2oc/moo/metrics.hpp"
#include "e2oc/operators/combination.hpp"
#include "e2oc/problems/fjsp.hpp"
#include "e2oc/problems/motsp.hpp"
#include "e2oc/search/landscape.hpp"
#include "oracles.hpp"

using namespace e2oc;
namespace fs = std::filesystem;
using moo::ObjectiveVector;

namespace {

const fs::path kFixtures = E2OC_FIXTURES;

// Pinned tolerances and thresholds.
constexpr int kSortPopulations = 200;
constexpr std::size_t kSortMaxSize = 64;
constexpr int kTwoPointFronts = 200;
constexpr int kMcFronts = 20;
constexpr std::size_t kMcSamples = 1000000;
constexpr double kMcSigmas = 3.0;
constexpr int kIgdTrials = 100;
constexpr double kMetricsCapS = 120;
constexpr double kRiTolerancePp = 0.1;
constexpr double kDecodeCapS = 60;
constexpr int kTspSeeds = 5, kTspHitsNeeded = 4;
constexpr double kTspCapS = 120;
constexpr int kT6Instances = 5, kT6Seeds = 5, kT6HitsNeeded = 4;
constexpr double kT6CapS = 1200;
constexpr int kPlantedSeeds = 10, kArgmaxNeeded = 8, kVariantNeeded = 7;
constexpr double kPlantedCapS = 300;

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string name;
    std::function<Outcome()> run;
    double cap_s = 0;  // 0: no runtime bound
    bool known_red = false;
};

fs::path scratch(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("e2oc_acceptance_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string fmt(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

// dyadic coordinates keep every product and sum exact
double dyadic(Rng& r) { return static_cast<double>(r.below(16)) / 16.0; }

Outcome metrics_oracle() {
    Rng r(20240611);
    int sort_ok = 0;
    for (int t = 0; t < kSortPopulations; ++t) {
        const std::size_t n = 1 + r.below(kSortMaxSize), m = 2 + static_cast<std::size_t>(t % 2);
        std::vector<ObjectiveVector> pop(n, ObjectiveVector(m));
        for (auto& p : pop)
            for (auto& x : p) x = t % 4 < 2 ? static_cast<double>(r.below(6)) : r.uniform();
        const auto ranks = moo::pareto_ranks(pop);
        bool ok = ranks == oracle::pareto_ranks(pop);
        const auto fronts = moo::non_dominated_sort(pop);
        for (std::size_t f = 0; f < fronts.size(); ++f)
            for (auto i : fronts[f]) ok = ok && ranks[i] == static_cast<int>(f);
        sort_ok += ok;
    }

    int hv2_ok = 0;
    for (int t = 0; t < kTwoPointFronts; ++t) {
        const std::size_t m = 2 + static_cast<std::size_t>(t % 2);
        std::vector<ObjectiveVector> pts(2, ObjectiveVector(m));
        for (auto& p : pts)
            for (auto& x : p) x = dyadic(r);
        const moo::HvContext ctx{ObjectiveVector(m, 0.0), ObjectiveVector(m, 1.0)};
        hv2_ok += moo::hypervolume(pts, ctx).value == oracle::inclusion_exclusion(pts, ctx.reference);
    }

    int mc_ok = 0;
    double worst = 0.0;
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < kMcFronts; ++t) {
        std::vector<ObjectiveVector> raw(12, ObjectiveVector(3));
        for (auto& p : raw)
            for (auto& x : p) x = r.uniform(0.1, 0.9);
        const auto front = moo::ParetoArchive::from_points(raw).points();
        const moo::HvContext ctx{{0, 0, 0}, {1, 1, 1}};
        const double exact = moo::hypervolume(front, ctx).value;
        std::size_t hits = 0;
        for (std::size_t s = 0; s < kMcSamples; ++s) {
            const double x = u(gen), y = u(gen), z = u(gen);
            for (const auto& p : front)
                if (p[0] <= x && p[1] <= y && p[2] <= z) {
                    ++hits;
                    break;
                }
        }
        const double est = static_cast<double>(hits) / kMcSamples;
        const double sigma = std::sqrt(exact * (1 - exact) / kMcSamples);
        worst = std::max(worst, std::abs(est - exact) / sigma);
        mc_ok += std::abs(est - exact) <= kMcSigmas * sigma;
    }

    int igd_ok = 0;
    for (int t = 0; t < kIgdTrials; ++t) {
        const std::size_t m = 2 + static_cast<std::size_t>(t % 2);
        std::vector<ObjectiveVector> a(1 + r.below(30), ObjectiveVector(m)), b(1 + r.below(30), ObjectiveVector(m));
        for (auto* s : {&a, &b})
            for (auto& p : *s)
                for (auto& x : p) x = r.uniform();
        igd_ok += moo::igd_raw(a, b) == oracle::igd(a, b);
    }

    const bool pass = sort_ok == kSortPopulations && hv2_ok == kTwoPointFronts && mc_ok == kMcFronts &&
                      igd_ok == kIgdTrials;
    return {pass, "sort " + std::to_string(sort_ok) + "/" + std::to_string(kSortPopulations) + ", 2-point HV exact " +
                      std::to_string(hv2_ok) + "/" + std::to_string(kTwoPointFronts) + ", MC 3-D " +
                      std::to_string(mc_ok) + "/" + std::to_string(kMcFronts) + " (worst " + fmt(worst, 2) +
                      " sigma), IGD exact " + std::to_string(igd_ok) + "/" + std::to_string(kIgdTrials)};
}

Outcome ri_arithmetic() {
    const double ri = moo::relative_improvement(0.2435, 0.1996);
    return {std::abs(ri - 22.0) <= kRiTolerancePp, "RI(0.2435, 0.1996) = " + fmt(ri, 3) + "% vs 22.0%"};
}

Outcome fjsp_decode() {
    const auto inst = problems::parse_brandimarte(read_text(kFixtures / "toy2x2.fjs"), "toy2x2");
    long long best = std::numeric_limits<long long>::max();
    std::size_t count = 0, bad = 0;
    oracle::for_each_encoding(inst, [&](const problems::FjspSolution& s) {
        const auto sched = problems::decode_schedule(s, inst);
        bad += !oracle::schedule_ok(sched, inst);
        best = std::min(best, sched.makespan);
        ++count;
    });
    const auto brute = oracle::fjsp_makespan(inst);
    return {best == brute && bad == 0,
            std::to_string(count) + " encodings, min makespan " + std::to_string(best) + " vs enumeration " +
                std::to_string(brute) + ", " + std::to_string(bad) + " invalid schedules"};
}

Outcome tsp_pareto() {
    auto inst = std::make_shared<problems::MotspInstance>(problems::generate_motsp(606, 6, 2, "tsp6"));
    const problems::TspProblem p(inst, problems::ProblemKind::bi_tsp);
    const auto truth = oracle::tsp_front(p);
    int hits = 0;
    for (int s = 1; s <= kTspSeeds; ++s) {
        engines::MoeaConfig cfg;
        cfg.population = 30;
        cfg.generations = 200;
        cfg.seed = static_cast<std::uint64_t>(s);
        const auto res = engines::run_moea(p, operators::expert_combination("ox_swap_2opt"), cfg);
        std::set<ObjectiveVector> got;
        for (const auto& e : res.front.entries()) got.insert(e.f);
        hits += got == truth;
    }
    return {hits >= kTspHitsNeeded, std::to_string(hits) + "/" + std::to_string(kTspSeeds) +
                                        " seeds recover the " + std::to_string(truth.size()) + "-point exhaustive front"};
}

Outcome table6() {
    const std::vector<std::string> combos{"2opt", "ox_swap", "ox_swap_oropt"};
    std::vector<double> total(combos.size(), 0.0);
    int hits = 0;
    std::string per;
    for (int i = 0; i < kT6Instances; ++i) {
        auto inst = std::make_shared<problems::MotspInstance>(
            problems::generate_motsp(derive_seed(6, "table6", static_cast<std::uint64_t>(i)), 20, 2, "tsp20"));
        const problems::TspProblem p(inst, problems::ProblemKind::bi_tsp);
        std::vector<std::vector<moo::ParetoArchive>> fronts(combos.size());
        std::vector<ObjectiveVector> all;
        for (std::size_t c = 0; c < combos.size(); ++c)
            for (int s = 1; s <= kT6Seeds; ++s) {
                engines::MoeaConfig cfg;
                cfg.population = 50;
                cfg.generations = 100;
                cfg.seed = derive_seed(static_cast<std::uint64_t>(s), "table6-run", static_cast<std::uint64_t>(i));
                fronts[c].push_back(engines::run_moea(p, operators::expert_combination(combos[c]), cfg).front);
                for (const auto& e : fronts[c].back().entries()) all.push_back(e.f);
            }
        const auto ctx = moo::make_hv_context(p.ideal(), moo::ParetoArchive::from_points(all).points());
        std::vector<double> mean(combos.size(), 0.0);
        for (std::size_t c = 0; c < combos.size(); ++c) {
            for (const auto& f : fronts[c]) mean[c] += moo::hypervolume(f, ctx).value / kT6Seeds;
            total[c] += mean[c] / kT6Instances;
        }
        hits += mean[0] > mean[1] && mean[1] > mean[2];
        per += (per.empty() ? "" : "; ") + fmt(mean[0], 3) + "/" + fmt(mean[1], 3) + "/" + fmt(mean[2], 3);
    }
    return {hits >= kT6HitsNeeded, "2opt > ox_swap > ox_swap_oropt on " + std::to_string(hits) + "/" +
                                       std::to_string(kT6Instances) + " instances; mean HV " + fmt(total[0]) + " / " +
                                       fmt(total[1]) + " / " + fmt(total[2]) + " (paper 0.6117 / 0.5751 / 0.5350); per instance " +
                                       per};
}

// Planted runs through the CLI commands, shared by several criteria.
struct PlantedRuns {
    fs::path root = scratch("planted");
    std::vector<fs::path> e2oc, mcts_oc, chained;

    cli::ExperimentConfig config(search::ControllerKind k) const {
        KeyValue kv;
        kv.set("preset", "planted");
        kv.set("planted.fixture", (kFixtures / "planted_landscape.kv").string());
        auto c = cli::parse_config(kv);
        c.controller = k;
        return c;
    }

    void run_e2oc() {
        for (int s = 1; s <= kPlantedSeeds; ++s) {
            auto c = config(search::ControllerKind::e2oc);
            c.seed = c.search.seed = static_cast<std::uint64_t>(s);
            e2oc.push_back(cli::cmd_run(c, {root / ("e2oc-" + std::to_string(s)), {}}));
        }
    }
};

double best_fit(const fs::path& run) { return KeyValue::load(run / "search/result.kv").real("best_fit"); }

// Exhaustive argmax computed from the fixture file itself.
std::vector<int> fixture_argmax() {
    const auto kv = KeyValue::load(kFixtures / "planted_landscape.kv");
    const auto map = search::PlantedLandscape::from_kv(kv);
    const int k = static_cast<int>(map.roles.size()), g = map.thoughts, v = map.variants;
    std::vector<int> best, cur(static_cast<std::size_t>(k), 0);
    double best_val = -1e300;
    for (int code = 0; code < static_cast<int>(std::pow(g, k)); ++code) {
        int c = code;
        double val = 0.0;
        for (int i = 0; i < k; ++i) {
            cur[static_cast<std::size_t>(i)] = c % g;
            c /= g;
            double top = -1e300;
            for (int x = 0; x < v; ++x)
                top = std::max(top, map.q[static_cast<std::size_t>((i * g + cur[static_cast<std::size_t>(i)]) * v + x)]);
            val += top;
        }
        if (val > best_val) best_val = val, best = cur;
    }
    return best;
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    std::stringstream in(s);
    for (std::string t; std::getline(in, t, ',');) out.push_back(std::stoi(t));
    return out;
}

Outcome planted_search(PlantedRuns& runs) {
    runs.run_e2oc();
    const auto argmax = fixture_argmax();
    const auto c = runs.config(search::ControllerKind::e2oc);
    const auto& b = c.search.budget;
    const long long formula = static_cast<long long>(b.iter_out + 1) * b.iter_mid * 4 * b.sam_max;
    int found = 0, monotone = 0, ledger_ok = 0;
    for (const auto& dir : runs.e2oc) {
        const auto res = KeyValue::load(dir / "search/result.kv");
        found += parse_ints(res.str("best_strategy")) == argmax;
        bool mono = true;
        std::istringstream rot(read_text(dir / "search/rotations.tsv"));
        for (std::string line; std::getline(rot, line);) {
            double prev = -1e300;
            std::stringstream ls(line);
            for (std::string t; std::getline(ls, t, '\t');) {
                const double x = std::stod(t);
                mono = mono && x >= prev;
                prev = x;
            }
        }
        monotone += mono;
        const auto ledger = KeyValue::load(dir / "search/ledger.kv");
        ledger_ok += ledger.integer("consumed") == formula && ledger.integer("limit") == formula &&
                     res.integer("generated") == formula;
    }
    const int n = kPlantedSeeds;
    std::string am;
    for (int x : argmax) am += std::to_string(x);
    return {found >= kArgmaxNeeded && monotone == n && ledger_ok == n,
            "argmax " + am + " found in " + std::to_string(found) + "/" + std::to_string(n) +
                " seeds, non-decreasing rotations " + std::to_string(monotone) + "/" + std::to_string(n) +
                ", ledger = " + std::to_string(formula) + " in " + std::to_string(ledger_ok) + "/" + std::to_string(n)};
}

Outcome variant_order(PlantedRuns& runs) {
    if (runs.e2oc.empty()) runs.run_e2oc();
    int wins = 0;
    double me = 0, mo = 0;
    for (int s = 1; s <= kPlantedSeeds; ++s) {
        auto c = runs.config(search::ControllerKind::mcts_oc);
        c.seed = c.search.seed = static_cast<std::uint64_t>(s);
        const auto dir = cli::cmd_run(c, {runs.root / ("mcts_oc-" + std::to_string(s)), {}});
        runs.mcts_oc.push_back(dir);
        const double e = best_fit(runs.e2oc[static_cast<std::size_t>(s - 1)]), o = best_fit(dir);
        wins += e >= o;
        me += e / kPlantedSeeds;
        mo += o / kPlantedSeeds;
    }
    return {wins >= kVariantNeeded, "e2oc >= mcts_oc in " + std::to_string(wins) + "/" + std::to_string(kPlantedSeeds) +
                                        " paired seeds (mean " + fmt(me) + " vs " + fmt(mo) + ")"};
}

Outcome chaining(PlantedRuns& runs) {
    if (runs.e2oc.empty()) runs.run_e2oc();
    int ok = 0;
    double gain = 0;
    for (const auto& dir : runs.e2oc) {
        const auto next = cli::cmd_chain(dir);
        runs.chained.push_back(next);
        ok += best_fit(next) >= best_fit(dir);
        gain += (best_fit(next) - best_fit(dir)) / kPlantedSeeds;
    }
    return {ok == kPlantedSeeds, "E2OC' >= E2OC in " + std::to_string(ok) + "/" + std::to_string(kPlantedSeeds) +
                                     " seeds (mean gain " + fmt(gain, 5) + ")"};
}

Outcome determinism(PlantedRuns& runs) {
    const auto root = scratch("determinism");
    KeyValue kv;
    kv.set("preset", "smoke-tsp");
    kv.set("instances.dir", (root / "inst").string());
    kv.set("seed", "17");
    const auto c = cli::parse_config(kv);
    cli::cmd_gen_instances(c);
    const auto a = cli::cmd_run(c, {root / "a", {}});
    const auto b = cli::cmd_run(c, {root / "b", {}});
    const bool smoke_same = read_text(a / "summary.tsv") == read_text(b / "summary.tsv");

    if (runs.e2oc.empty()) runs.run_e2oc();
    auto pc = runs.config(search::ControllerKind::e2oc);
    pc.seed = pc.search.seed = 1;
    const auto again = cli::cmd_run(pc, {root / "planted", {}});
    const bool planted_same = read_text(again / "summary.tsv") == read_text(runs.e2oc.front() / "summary.tsv");
    return {smoke_same && planted_same, std::string("smoke-tsp summary ") + (smoke_same ? "identical" : "differs") +
                                            ", planted summary " + (planted_same ? "identical" : "differs")};
}

}  // namespace

int main(int argc, char** argv) {
    bool strict = false;
    std::optional<std::string> only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--strict") == 0) strict = true;
        else only = argv[i];
    }

    PlantedRuns planted;
    const std::vector<Criterion> criteria{
        {"metrics-oracle", metrics_oracle, kMetricsCapS},
        {"ri-arithmetic", ri_arithmetic},
        {"fjsp-decode-oracle", fjsp_decode, kDecodeCapS},
        {"small-tsp-pareto", tsp_pareto, kTspCapS},
        {"table6-direction", table6, kT6CapS, true},
        {"planted-search", [&] { return planted_search(planted); }, kPlantedCapS},
        {"variant-order", [&] { return variant_order(planted); }},
        {"chaining", [&] { return chaining(planted); }},
        {"determinism", [&] { return determinism(planted); }},
    };

    int failed = 0, red = 0, passed = 0;
    for (const auto& c : criteria) {
        if (only && c.name.rfind(*only, 0) != 0) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.cap_s > 0 && secs > c.cap_s) {
            o.pass = false;
            o.detail += "; over the " + fmt(c.cap_s, 0) + " s cap";
        }
        std::printf("%s %-20s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.name.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
        if (o.pass) ++passed;
        else if (c.known_red && !strict) ++red;
        else ++failed;
    }
    std::printf("%d passed, %d failed, %d known red\n", passed, failed, red);
    return failed == 0 ? 0 : 1;
}
