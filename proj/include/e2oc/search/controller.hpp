#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "e2oc/engines/evaluator.hpp"
#include "e2oc/genesis/backend.hpp"
#include "e2oc/genesis/generate.hpp"
#include "e2oc/genesis/thought.hpp"
#include "e2oc/operators/combination.hpp"
#include "e2oc/search/budget.hpp"
#include "e2oc/search/tree.hpp"

namespace e2oc::search {

using genesis::DesignThought;
using genesis::PromptStorage;
using operators::Operator;
using operators::OperatorCombination;

enum class ControllerKind { e2oc, mcts_oc, mcts_tuple, mcts_sample, cd, ucb, win_ucb };

std::string controller_name(ControllerKind k);
/// Accepts "win-ucb" and "win_ucb". Throws ConfigError.
ControllerKind parse_controller(const std::string& name);
bool is_baseline(ControllerKind k) noexcept;

struct SearchSettings {
    SearchBudget budget;
    /// Thoughts extracted per role in warm-start (and the per-role cap of mcts_sample).
    int ap = 3;
    double exploration = kDefaultExploration;
    /// win_ucb reward window.
    int window = 10;
    /// Children a mcts_tuple node gets before selection descends through it.
    int tuple_children = 3;
    /// Operators kept as children per mcts_oc expansion.
    int oc_width = 3;
    /// Parallel evaluations of one slot's candidates.
    int eval_workers = 1;
    std::uint64_t seed = 1;
};

struct SearchEnv {
    genesis::GeneratorBackend* backend = nullptr;
    engines::CombinationEvaluator* evaluator = nullptr;
    /// Probes, script directory and runtime for candidate generation.
    genesis::GenerationOptions generation;
    /// Tree snapshots and ledger written here after each outer iteration.
    std::optional<std::filesystem::path> snapshot_dir;
    std::function<void(const std::string&)> log;
};

/// Initial combination, optionally with a known fit and thought space (chaining).
struct SearchStart {
    OperatorCombination combo;
    std::optional<double> fit;
    std::optional<PromptStorage> thoughts;
};

struct SearchRecord {
    std::string stage;
    std::string combination;
    std::uint64_t seed = 0;
    double fit = 0.0;
    bool flagged = false;
};

struct ScorePoint {
    int iteration = 0;
    /// Score of this iteration's strategy (backpropagated for tree controllers).
    double score = 0.0;
    double best_fit = 0.0;
    std::vector<int> strategy;
};

struct Elite {
    Operator op;
    double fit = 0.0;
};

struct StrategyResult {
    std::string controller;
    OperatorCombination best;
    double best_fit = 0.0;
    /// Thought index per slot behind the best combination's operators (0 for experts).
    std::vector<int> best_strategy;
    std::vector<ScorePoint> history;
    /// Incumbent fit after each slot step, one series per rotation.
    std::vector<std::vector<double>> rotations;
    std::vector<SearchRecord> records;
    PromptStorage thoughts;
    long long generated = 0;
    long long budget_limit = 0;
    int skipped_slots = 0;
    int failed_rotations = 0;
    /// "completed", "budget-exhausted" or "tree-exhausted".
    std::string stop_reason = "completed";
    std::vector<std::string> warnings;
    std::string tree_json;
    KeyValue ledger;
    std::uint64_t seed = 0;
};

inline constexpr int kResultSchemaVersion = 1;

/// result.kv, records.tsv, history.tsv, thoughts.json, tree.json, ledger.kv
/// and best/slot<i>/ operator directories.
void save_result(const std::filesystem::path& dir, const StrategyResult& r);
/// Throws ConfigError with a migration hint on a schema-version mismatch.
StrategyResult load_result(const std::filesystem::path& dir);

/// Search state shared by all controllers: budget ledger, evaluation
/// records, incumbent and thought space.
class SearchSession {
public:
    SearchSession(const SearchStart& start, const SearchSettings& settings, SearchEnv env);

    /// Generates one design task's candidates (inner generator loop, at most
    /// budget.per_task() or `cap`) for `slot` from `thought`, scoring each by
    /// substitution into `base`. Returns the valid candidates best first.
    std::vector<Elite> design_task(std::size_t slot, const DesignThought& thought, const OperatorCombination& base,
                                   const std::string& stage, int cap = -1);

    /// Per role: ON_max candidates from the initial prompt, scored against the
    /// initial combination; up to `ap` distinct elites, and their thoughts
    /// when `extract` is set.
    std::vector<std::vector<Elite>> warm_start(int ap, int on_max, bool extract = true);

    /// iter_mid sweeps (or `sweeps`) of per-slot regeneration from strategy
    /// thoughts with greedy acceptance (fit' >= fit) on the incumbent.
    RotationOutcome rotate(const std::vector<int>& strategy, int sweeps = -1, const std::string& stage = "rotation");

    /// One evaluation with a fresh seed, recorded under `stage`.
    double evaluate(const OperatorCombination& combo, const std::string& stage);

    /// Accepts `combo` as incumbent when fit >= incumbent fit.
    bool offer(const OperatorCombination& combo, double fit);

    const OperatorCombination& best() const noexcept { return best_; }
    double best_fit() const noexcept { return best_fit_; }
    const PromptStorage& thoughts() const noexcept { return thoughts_; }
    PromptStorage& thoughts() noexcept { return thoughts_; }
    const BudgetLedger& ledger() const noexcept { return ledger_; }
    const SearchSettings& settings() const noexcept { return settings_; }
    const SearchEnv& env() const noexcept { return env_; }
    std::size_t k() const noexcept { return best_.size(); }
    Rng& rng() noexcept { return rng_; }
    std::uint64_t next_seed(const char* label);

    void log(const std::string& msg);
    void snapshot(int iteration, const std::string& tree_json);
    /// Assembles the result (best strategy, records, ledger, ...).
    StrategyResult finish(const std::string& controller);

    StrategyResult partial;  // history, rotations, counters filled by controllers

private:
    std::vector<double> evaluate_all(const std::vector<OperatorCombination>& combos, const std::string& stage);

    SearchSettings settings_;
    SearchEnv env_;
    BudgetLedger ledger_;
    PromptStorage thoughts_;
    OperatorCombination initial_;
    OperatorCombination best_;
    double best_fit_ = 0.0;
    std::vector<SearchRecord> records_;
    Rng rng_;
    std::uint64_t gen_counter_ = 0;
    std::uint64_t eval_counter_ = 0;
};

/// Runs one controller end to end. Budget exhaustion stops cleanly and is
/// reported through stop_reason.
StrategyResult run_search(ControllerKind kind, const SearchStart& start, const SearchSettings& settings,
                          const SearchEnv& env);

/// Chained run (E2OC'): starts from a previous result's combination, fit and thoughts.
StrategyResult run_chain(const StrategyResult& previous, ControllerKind kind, const SearchSettings& settings,
                         const SearchEnv& env);

}  // namespace e2oc::search
