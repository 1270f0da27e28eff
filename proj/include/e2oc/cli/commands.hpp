#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "e2oc/cli/config.hpp"
#include "e2oc/cli/report.hpp"
#include "e2oc/search/controller.hpp"

namespace e2oc::cli {

/// Exit codes shared by every verb.
enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitConfig = 2, kExitBackend = 3, kExitBudget = 4 };

/// Generates and calibrates every train and test instance that is missing
/// (all of them with `force`). Instance files without metadata are calibrated
/// as they are. Returns the number calibrated.
int cmd_gen_instances(const ExperimentConfig& c, bool force = false);

/// Warm-start only: the thought space and elites, saved as a search result
/// under <out>/search. `run --warmstart <out>` continues from it.
std::filesystem::path cmd_warmstart(const ExperimentConfig& c, const std::optional<std::filesystem::path>& out = {});

struct RunOptions {
    std::optional<std::filesystem::path> out;
    /// Directory written by cmd_warmstart; its thoughts replace the warm-start stage.
    std::optional<std::filesystem::path> warmstart;
};

/// Search with the configured controller, then online evaluation of the best
/// combination and the baseline on train + test, then summary.tsv.
/// Artifacts stay in place when a stage fails. Returns the run directory.
std::filesystem::path cmd_run(const ExperimentConfig& c, const RunOptions& o = {});

/// Re-runs the controller from a completed run's best combination, fit and
/// thought space. Uses the previous run's config.kv unless `c` is given.
std::filesystem::path cmd_chain(const std::filesystem::path& previous, const std::optional<ExperimentConfig>& c = {},
                                const std::optional<std::filesystem::path>& out = {});

/// Online evaluation of named expert combinations (e.g. "2opt", "ox_swap")
/// on train + test, written as report entries under `out`.
std::filesystem::path cmd_evaluate(const ExperimentConfig& c, const std::vector<std::string>& combinations,
                                   const std::filesystem::path& out);

Report cmd_report(const std::vector<std::filesystem::path>& run_dirs, const std::string& baseline,
                  const std::filesystem::path& out);

/// Report label of a run: controller name plus one ' per chain step.
std::string entry_label(search::ControllerKind k, int chain_depth);

/// Runs `fn`, mapping exceptions to exit codes. On failure a one-line JSON
/// error record goes to stderr. Failed runs also leave <run>/error.kv.
int guarded(const std::function<int()>& fn, const std::optional<std::filesystem::path>& run_dir = {});

}  // namespace e2oc::cli
