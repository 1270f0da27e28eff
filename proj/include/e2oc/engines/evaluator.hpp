#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "e2oc/common/kv.hpp"
#include "e2oc/engines/config.hpp"
#include "e2oc/moo/archive.hpp"
#include "e2oc/operators/combination.hpp"
#include "e2oc/operators/runtime.hpp"
#include "e2oc/problems/problem.hpp"

namespace e2oc::engines {

struct InstanceEntry {
    std::shared_ptr<const problems::Problem> problem;
    moo::HvContext ctx;
};

struct RunRecord {
    std::string instance;
    int run = 0;
    std::uint64_t seed = 0;
    double hv = 0.0;
    std::size_t front_size = 0;
    bool aborted = false;
    bool clamped = false;
    std::string error;
};

struct EvaluationRecord {
    std::string combination;
    std::vector<std::string> instances;  // sorted
    int runs_per_instance = 0;
    std::uint64_t seed = 0;
    /// Canonical order: instance id, then run index.
    std::vector<RunRecord> runs;
    double fit = 0.0;
    /// Some run aborted or produced an empty front.
    bool flagged = false;
    double wall_seconds = 0.0;
    /// Generated-operator evaluations charged to the search budget.
    long long budget_charge = 0;

    KeyValue to_kv() const;
    static EvaluationRecord from_kv(const KeyValue& kv);
};

/// Mean of per-run HVs summed in the record's canonical order.
double mean_hv(const std::vector<RunRecord>& runs);

/// Anything that scores a combination. `seed` is the experiment-level seed the
/// per-run seeds are derived from; callers pass fresh seeds for re-evaluation.
class CombinationEvaluator {
public:
    virtual ~CombinationEvaluator() = default;
    virtual EvaluationRecord evaluate(const operators::OperatorCombination& combo, std::uint64_t seed) = 0;
    long long calls() const noexcept { return calls_.load(); }

protected:
    std::atomic<long long> calls_{0};
};

struct EvaluatorSettings {
    MoeaConfig moea;
    int runs = 1;
    int workers = 1;
    /// When set, per-run fronts, trajectories and config snapshots go under
    /// <artifacts>/<combination digest>-<seed>/.
    std::optional<std::filesystem::path> artifacts;
    /// With artifacts: also write history.tsv, the non-dominated set of every generation.
    bool keep_history = false;
    operators::RuntimeConfig runtime = operators::default_runtime_config();
};

/// Run seed: hash of (experiment seed, combination id, instance id, run index).
std::uint64_t run_seed(std::uint64_t experiment_seed, const std::string& combination, const std::string& instance,
                       int run);

/// Runs the MOEA `runs` times per instance; fit = mean HV over all runs and instances.
class MoeaEvaluator : public CombinationEvaluator {
public:
    MoeaEvaluator(EvaluatorSettings settings, std::vector<InstanceEntry> instances);

    EvaluationRecord evaluate(const operators::OperatorCombination& combo, std::uint64_t seed) override;

    const EvaluatorSettings& settings() const noexcept { return settings_; }
    const std::vector<InstanceEntry>& instances() const noexcept { return instances_; }

    /// Total MOEA runs executed so far.
    long long moea_runs() const noexcept { return moea_runs_.load(); }

private:
    EvaluatorSettings settings_;
    std::vector<InstanceEntry> instances_;
    std::atomic<long long> moea_runs_{0};
};

/// Directory name used for a record's artifacts.
std::string artifact_dir_name(const std::string& combination, std::uint64_t seed);

/// HV context for an instance: ideal = problem lower bound, reference = nadir
/// of the union of `runs` baseline fronts x 1.1. Also returns the union.
struct Calibration {
    moo::HvContext ctx;
    moo::ParetoArchive baseline_front;
};
Calibration calibrate_context(const problems::Problem& problem, const operators::OperatorCombination& baseline,
                              const MoeaConfig& cfg, int runs, std::uint64_t seed);

}  // namespace e2oc::engines
