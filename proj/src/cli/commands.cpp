#include "e2oc/cli/commands.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "e2oc/cli/instances.hpp"
#include "e2oc/common/error.hpp"
#include "e2oc/common/rng.hpp"
#include "e2oc/problems/fjsp.hpp"
#include "e2oc/problems/motsp.hpp"
#include "e2oc/search/landscape.hpp"

namespace e2oc::cli {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> all_instances(const ExperimentConfig& c) {
    auto ids = c.train;
    for (const auto& id : c.test)
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    return ids;
}

std::vector<engines::InstanceEntry> load_instances(const ExperimentConfig& c, const std::vector<std::string>& ids) {
    std::vector<engines::InstanceEntry> out;
    for (const auto& id : ids) out.push_back(load_instance(c.instance_dir, c.problem, id));
    return out;
}

// Small instances of the configured kind used to validate generated operators.
std::vector<std::shared_ptr<const problems::Problem>> validation_probes(problems::ProblemKind kind, std::uint64_t seed) {
    const auto s = derive_seed(seed, "probe");
    if (problems::is_fjsp(kind)) {
        problems::FjspGeneratorParams gp;
        gp.jobs = 3;
        gp.machines = 3;
        gp.min_ops = 2;
        gp.max_ops = 3;
        auto inst = std::make_shared<problems::FjspInstance>(problems::generate_fjsp(s, gp, "probe"));
        return {std::make_shared<problems::FjspProblem>(inst, kind)};
    }
    auto inst = std::make_shared<problems::MotspInstance>(problems::generate_motsp(s, 8, problems::objective_count(kind), "probe"));
    return {std::make_shared<problems::TspProblem>(inst, kind)};
}

void prepare_dir(const fs::path& dir) {
    if (fs::exists(dir) && !fs::is_empty(dir))
        throw ConfigError("output directory " + dir.string() + " is not empty; pick a new one (runs are never overwritten)");
    fs::create_directories(dir);
}

// Backend, evaluator and environment of one search, owned together.
struct SearchRig {
    std::unique_ptr<genesis::GeneratorBackend> backend;
    std::unique_ptr<engines::CombinationEvaluator> evaluator;
    std::unique_ptr<operators::ExternalRuntime> runtime;
    std::shared_ptr<std::ofstream> log;
    search::SearchEnv env;

    SearchRig(const ExperimentConfig& c, const fs::path& dir) {
        if (c.backend == "remote") backend = std::make_unique<genesis::RemoteBackend>(c.remote);
        else backend = std::make_unique<genesis::SyntheticBackend>(c.synthetic);
        backend->set_audit_log(std::make_shared<genesis::AuditLog>(dir / "audit.jsonl"));

        if (c.evaluator == EvaluatorKind::planted) {
            evaluator = std::make_unique<search::PlantedEvaluator>(search::PlantedLandscape::load(c.planted_fixture));
        } else {
            engines::EvaluatorSettings es;
            es.moea = c.offline;
            es.runs = c.offline_runs;
            es.workers = c.workers;
            evaluator = std::make_unique<engines::MoeaEvaluator>(es, load_instances(c, c.train));
        }
        runtime = std::make_unique<operators::ExternalRuntime>();

        env.backend = backend.get();
        env.evaluator = evaluator.get();
        env.generation.sam_max = c.search.budget.sam_max;
        env.generation.script_dir = dir / "scripts";
        env.generation.probes = validation_probes(c.problem, c.seed);
        env.generation.validation.pairs = c.validation_pairs;
        env.generation.validation.wall_cap = std::chrono::milliseconds(c.validation_wall_ms);
        env.generation.validation.seed = derive_seed(c.seed, "validation");
        env.generation.runtime = runtime.get();
        env.snapshot_dir = dir / "search" / "snapshots";
        log = std::make_shared<std::ofstream>(dir / "search.log");
        env.log = [l = log](const std::string& m) { *l << m << '\n'; };
    }

    void write_usage(const fs::path& file) const {
        const auto t = backend->totals();
        KeyValue kv;
        kv.set("backend", backend->kind());
        kv.set("calls", t.calls);
        kv.set("failures", t.failures);
        kv.set("prompt_tokens", t.prompt_tokens);
        kv.set("completion_tokens", t.completion_tokens);
        kv.set("cost", t.cost);
        kv.save(file);
    }
};

void write_status(const fs::path& dir, const std::string& state, const std::string& stage, int depth,
                  const std::optional<search::StrategyResult>& r = {}) {
    KeyValue kv;
    kv.set("state", state);
    kv.set("stage", stage);
    kv.set("chain_depth", static_cast<long long>(depth));
    if (r) {
        kv.set("controller", r->controller);
        kv.set("stop_reason", r->stop_reason);
        kv.set("best_fit", r->best_fit);
    }
    kv.save(dir / "status.kv");
}

// Online evaluation of the labelled combinations; report entries and contexts.
void evaluate_online(const ExperimentConfig& c, const fs::path& dir,
                     const std::vector<std::pair<std::string, operators::OperatorCombination>>& entries) {
    const auto ids = all_instances(c);
    const auto instances = load_instances(c, ids);
    write_contexts(dir, instances);
    std::vector<std::string> labels;
    for (const auto& [label, combo] : entries) {
        const auto edir = dir / "online" / entry_dir_name(label);
        engines::EvaluatorSettings es;
        es.moea = c.online;
        es.runs = c.online_runs;
        es.workers = c.workers;
        es.artifacts = edir;
        es.keep_history = true;
        engines::MoeaEvaluator ev(es, instances);
        const auto rec = ev.evaluate(combo, derive_seed(c.seed, "online"));
        rec.to_kv().save(edir / "record.kv");
        labels.push_back(label);
    }
    write_entries(dir, labels, c.train, c.test);
}

void write_search_table(const fs::path& file, const std::string& label, const search::StrategyResult& r) {
    std::ostringstream s;
    s << "entry\tcontroller\tbest_fit\tbest_strategy\tgenerated\tbudget_limit\tskipped_slots\tfailed_rotations\t"
         "stop_reason\tbest_combination\n";
    std::string strat;
    for (int g : r.best_strategy) strat += (strat.empty() ? "" : ",") + std::to_string(g);
    s << label << '\t' << r.controller << '\t' << format_real(r.best_fit) << '\t' << strat << '\t' << r.generated << '\t'
      << r.budget_limit << '\t' << r.skipped_slots << '\t' << r.failed_rotations << '\t' << r.stop_reason << '\t'
      << r.best.id() << '\n';
    write_text(file, s.str());
}

// Search stage shared by run and chain; online evaluation and summary follow.
fs::path search_and_report(const ExperimentConfig& c, const fs::path& dir, const search::SearchStart& start, int depth) {
    std::string stage = "search";
    write_status(dir, "running", stage, depth);
    c.to_kv().save(dir / "config.kv");
    try {
        SearchRig rig(c, dir);
        const auto r = search::run_search(c.controller, start, c.search, rig.env);
        search::save_result(dir / "search", r);
        rig.write_usage(dir / "usage.kv");
        const auto label = entry_label(c.controller, depth);
        write_search_table(dir / "search.tsv", label, r);

        if (c.online_enabled) {
            stage = "online";
            write_status(dir, "running", stage, depth, r);
            evaluate_online(c, dir, {{label, r.best}, {"baseline", operators::expert_combination(c.baseline)}});
            const auto rep = build_report({dir}, "baseline", dir / "report");
            write_text(dir / "summary.tsv", format_set_table(rep));
        } else {
            write_text(dir / "summary.tsv", read_text(dir / "search.tsv"));
        }
        write_status(dir, r.stop_reason == "budget-exhausted" ? "budget-exhausted" : "completed", "done", depth, r);
    } catch (const Error& e) {
        KeyValue err;
        err.set("kind", e.kind());
        err.set("message", e.what());
        err.save(dir / "error.kv");
        write_status(dir, "failed", stage, depth);
        throw;
    } catch (const std::exception& e) {
        KeyValue err;
        err.set("kind", "internal");
        err.set("message", e.what());
        err.save(dir / "error.kv");
        write_status(dir, "failed", stage, depth);
        throw;
    }
    return dir;
}

}  // namespace

std::string entry_label(search::ControllerKind k, int chain_depth) {
    return search::controller_name(k) + std::string(static_cast<std::size_t>(std::max(0, chain_depth)), '\'');
}

int cmd_gen_instances(const ExperimentConfig& c, bool force) {
    if (c.evaluator == EvaluatorKind::planted) return 0;
    CalibrationSettings cs;
    cs.baseline = c.baseline;
    cs.moea = c.offline;
    cs.runs = c.offline_runs;
    cs.seed = c.seed;
    int written = 0;
    for (const auto& id : all_instances(c)) {
        const bool file = fs::exists(instance_file(c.instance_dir, c.problem, id));
        if (file && fs::exists(metadata_file(c.instance_dir, c.problem, id)) && !force) continue;
        // an instance file without metadata (e.g. a public benchmark) is calibrated as is
        auto p = file && !force ? read_instance(c.instance_dir, c.problem, id) : generate_instance(c.problem, id, c.seed);
        calibrate_instance(c.instance_dir, std::move(p), cs);
        ++written;
    }
    return written;
}

fs::path cmd_warmstart(const ExperimentConfig& c, const std::optional<fs::path>& out) {
    const auto dir = out.value_or(c.output);
    prepare_dir(dir);
    c.to_kv().save(dir / "config.kv");
    SearchRig rig(c, dir);
    search::SearchSession s({operators::expert_combination(c.baseline), {}, {}}, c.search, rig.env);
    const auto& b = c.search.budget;
    s.warm_start(c.search.ap, b.iter_mid * b.sam_max, true);
    const auto r = s.finish("warmstart");
    search::save_result(dir / "search", r);
    rig.write_usage(dir / "usage.kv");
    write_status(dir, "completed", "warmstart", 0, r);
    return dir;
}

fs::path cmd_run(const ExperimentConfig& c, const RunOptions& o) {
    const auto dir = o.out.value_or(c.output);
    search::SearchStart start{operators::expert_combination(c.baseline), {}, {}};
    if (o.warmstart) {
        const auto ws = search::load_result(*o.warmstart / "search");
        if (ws.best.schema() != start.combo.schema())
            throw ConfigError("warm-start in " + o.warmstart->string() + " was built for other operator roles");
        start.thoughts = ws.thoughts;
    }
    prepare_dir(dir);
    return search_and_report(c, dir, start, 0);
}

fs::path cmd_chain(const fs::path& previous, const std::optional<ExperimentConfig>& c, const std::optional<fs::path>& out) {
    const auto status = previous / "status.kv";
    if (!fs::exists(status)) throw ConfigError(previous.string() + " is not a run directory (status.kv missing)");
    const auto st = KeyValue::load(status);
    if (st.str("state") != "completed" && st.str("state") != "budget-exhausted")
        throw ConfigError("previous run " + previous.string() + " did not complete (state " + st.str("state") + ")");
    const auto prev = search::load_result(previous / "search");
    const auto cfg = c ? *c : load_config(previous / "config.kv");
    const int depth = static_cast<int>(st.integer("chain_depth", 0)) + 1;
    const auto dir = out.value_or(fs::path(previous.string() + ".chain" + std::to_string(depth)));
    prepare_dir(dir);
    KeyValue from;
    from.set("previous", fs::absolute(previous).lexically_normal().string());
    from.set("previous_fit", prev.best_fit);
    from.save(dir / "chain.kv");
    return search_and_report(cfg, dir, {prev.best, prev.best_fit, prev.thoughts}, depth);
}

fs::path cmd_evaluate(const ExperimentConfig& c, const std::vector<std::string>& combinations, const fs::path& out) {
    if (combinations.empty()) throw ConfigError("evaluate needs at least one combination");
    std::vector<std::pair<std::string, operators::OperatorCombination>> entries;
    for (const auto& name : combinations) {
        auto combo = operators::expert_combination(name);
        if (!combo.fits(c.problem))
            throw ConfigError("combination '" + name + "' does not fit problem " + std::string(problems::problem_name(c.problem)));
        entries.emplace_back(name, std::move(combo));
    }
    prepare_dir(out);
    c.to_kv().save(out / "config.kv");
    evaluate_online(c, out, entries);
    const bool has_base = std::find(combinations.begin(), combinations.end(), c.baseline) != combinations.end();
    const auto rep = build_report({out}, has_base ? c.baseline : std::string(), out / "report");
    write_text(out / "summary.tsv", format_set_table(rep));
    write_status(out, "completed", "evaluate", 0);
    return out;
}

Report cmd_report(const std::vector<fs::path>& run_dirs, const std::string& baseline, const fs::path& out) {
    return build_report(run_dirs, baseline, out);
}

int guarded(const std::function<int()>& fn, const std::optional<fs::path>& run_dir) {
    std::string kind, message;
    int code = kExitOk;
    try {
        return fn();
    } catch (const ConfigError& e) {
        kind = e.kind(), message = e.what(), code = kExitConfig;
    } catch (const ParseError& e) {
        kind = e.kind(), message = e.what(), code = kExitConfig;
    } catch (const BackendError& e) {
        kind = e.kind(), message = e.what(), code = kExitBackend;
    } catch (const BudgetExhausted& e) {
        kind = e.kind(), message = e.what(), code = kExitBudget;
    } catch (const Error& e) {
        kind = e.kind(), message = e.what(), code = kExitError;
    } catch (const std::exception& e) {
        kind = "internal", message = e.what(), code = kExitError;
    }
    nlohmann::ordered_json j;
    j["error"] = kind;
    j["message"] = message;
    j["exit_code"] = code;
    if (run_dir) j["run_dir"] = run_dir->string();
    std::cerr << j.dump() << '\n';
    return code;
}

}  // namespace e2oc::cli
