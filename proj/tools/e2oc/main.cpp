#include <CLI11.hpp>

#include <iostream>

#include "e2oc/cli/commands.hpp"
#include "e2oc/common/error.hpp"

using namespace e2oc;
using namespace e2oc::cli;
namespace fs = std::filesystem;

namespace {

struct ConfigArgs {
    std::string file;
    std::string preset;
    std::vector<std::string> sets;

    void attach(CLI::App* app, bool required = true) {
        auto* f = app->add_option("-c,--config", file, "Experiment config (key = value file)");
        auto* p = app->add_option("-p,--preset", preset, "Named preset used when no config file is given");
        app->add_option("-s,--set", sets, "Override one key: key=value (repeatable)");
        if (required) f->excludes(p);
    }

    bool given() const { return !file.empty() || !preset.empty() || !sets.empty(); }

    ExperimentConfig resolve() const {
        KeyValue kv;
        fs::path base;
        if (!file.empty()) {
            if (!fs::exists(file)) throw ConfigError("config file " + file + " does not exist");
            kv = KeyValue::load(file);
            base = fs::path(file).parent_path();
        } else if (!preset.empty()) {
            kv.set("preset", preset);
        } else if (sets.empty()) {
            throw ConfigError("give --config <file> or --preset <name>");
        }
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
            kv.set(s.substr(0, eq), s.substr(eq + 1));
        }
        return parse_config(kv, base);
    }
};

int exit_for(const fs::path& dir) {
    const auto st = KeyValue::load(dir / "status.kv");
    std::cout << dir.string() << '\n';
    return st.str("state") == "budget-exhausted" ? kExitBudget : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"e2oc: operator-combination search for multi-objective solvers"};
    app.require_subcommand(1);

    ConfigArgs gen_cfg;
    bool force = false;
    auto* gen = app.add_subcommand("gen-instances", "Generate and calibrate the configured instances");
    gen_cfg.attach(gen);
    gen->add_flag("--force", force, "Regenerate instances that already exist");

    ConfigArgs ws_cfg;
    std::string ws_out;
    auto* ws = app.add_subcommand("warmstart", "Build the thought space only");
    ws_cfg.attach(ws);
    ws->add_option("-o,--out", ws_out, "Output directory (default: config output)");

    ConfigArgs run_cfg;
    std::string variant, baseline, run_out, run_ws;
    auto* run = app.add_subcommand("run", "Search, online evaluation and summary");
    run_cfg.attach(run);
    auto* v = run->add_option("--variant", variant, "e2oc | mcts_oc | mcts_tuple | mcts_sample");
    auto* b = run->add_option("--baseline", baseline, "cd | ucb | win-ucb");
    v->excludes(b);
    run->add_option("-o,--out", run_out, "Run directory (default: config output)");
    run->add_option("--warmstart", run_ws, "Reuse the thought space of a warmstart directory");

    ConfigArgs chain_cfg;
    std::string chain_from, chain_out;
    auto* chain = app.add_subcommand("chain", "Continue from a completed run");
    chain->add_option("--from", chain_from, "Previous run directory")->required();
    chain_cfg.attach(chain, false);
    chain->add_option("-o,--out", chain_out, "Run directory (default: <from>.chain<n>)");

    ConfigArgs ev_cfg;
    std::vector<std::string> combos;
    std::string ev_out;
    auto* ev = app.add_subcommand("evaluate", "Online evaluation of expert combinations");
    ev_cfg.attach(ev);
    ev->add_option("--combination", combos, "Combination names, e.g. 2opt ox_swap")->required()->delimiter(',');
    ev->add_option("-o,--out", ev_out, "Output directory")->required();

    std::vector<std::string> runs;
    std::string rep_base, rep_out;
    auto* rep = app.add_subcommand("report", "Tables and plot data from run directories");
    rep->add_option("runs", runs, "Run directories")->required();
    rep->add_option("--baseline", rep_base, "Entry label RI is taken against");
    rep->add_option("-o,--out", rep_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    return guarded([&]() -> int {
        if (*gen) {
            const int n = cmd_gen_instances(gen_cfg.resolve(), force);
            std::cout << n << " instance(s) written\n";
            return kExitOk;
        }
        if (*ws) {
            const auto c = ws_cfg.resolve();
            return exit_for(cmd_warmstart(c, ws_out.empty() ? std::optional<fs::path>{} : fs::path(ws_out)));
        }
        if (*run) {
            auto c = run_cfg.resolve();
            if (!variant.empty()) {
                c.controller = search::parse_controller(variant);
                if (search::is_baseline(c.controller)) throw ConfigError(variant + " is a baseline; use --baseline");
            }
            if (!baseline.empty()) {
                c.controller = search::parse_controller(baseline);
                if (!search::is_baseline(c.controller)) throw ConfigError(baseline + " is a variant; use --variant");
            }
            RunOptions o;
            if (!run_out.empty()) o.out = run_out;
            if (!run_ws.empty()) o.warmstart = run_ws;
            return exit_for(cmd_run(c, o));
        }
        if (*chain) {
            std::optional<ExperimentConfig> c;
            if (chain_cfg.given()) c = chain_cfg.resolve();
            return exit_for(cmd_chain(chain_from, c, chain_out.empty() ? std::optional<fs::path>{} : fs::path(chain_out)));
        }
        if (*ev) {
            cmd_evaluate(ev_cfg.resolve(), combos, ev_out);
            std::cout << read_text(fs::path(ev_out) / "summary.tsv");
            return kExitOk;
        }
        std::vector<fs::path> dirs(runs.begin(), runs.end());
        std::cout << format_set_table(cmd_report(dirs, rep_base, rep_out));
        return kExitOk;
    });
}
