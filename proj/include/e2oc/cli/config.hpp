#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "e2oc/common/kv.hpp"
#include "e2oc/engines/config.hpp"
#include "e2oc/engines/evaluator.hpp"
#include "e2oc/genesis/backend.hpp"
#include "e2oc/problems/problem.hpp"
#include "e2oc/search/controller.hpp"

namespace e2oc::cli {

enum class EvaluatorKind { moea, planted };

/// Everything a run needs, resolved from one key-value file (plus an
/// optional named preset it builds on).
struct ExperimentConfig {
    problems::ProblemKind problem = problems::ProblemKind::bi_tsp;
    std::filesystem::path instance_dir = "instances";
    std::vector<std::string> train;
    std::vector<std::string> test;
    /// Expert combination the search starts from and is compared with. Its
    /// roles are the combination slots.
    std::string baseline = "ox_swap_2opt";

    std::string offline_preset = "tsp-offline";
    engines::MoeaConfig offline;
    int offline_runs = 3;
    std::string online_preset = "tsp-online";
    engines::MoeaConfig online;
    int online_runs = 5;
    bool online_enabled = true;
    /// Parallel MOEA runs per evaluation.
    int workers = 1;

    search::ControllerKind controller = search::ControllerKind::e2oc;
    search::SearchSettings search;

    std::string backend = "synthetic";
    genesis::SyntheticSettings synthetic;
    genesis::RemoteSettings remote;

    EvaluatorKind evaluator = EvaluatorKind::moea;
    std::filesystem::path planted_fixture;

    int validation_pairs = 8;
    int validation_wall_ms = 2000;

    std::filesystem::path output = "runs/e2oc";
    std::uint64_t seed = 1;

    void validate() const;  // throws ConfigError
    /// Fully resolved snapshot; parse_config(to_kv()) reproduces this config.
    KeyValue to_kv() const;
};

/// Named starting points: "fjsp", "tri-fjsp", "tsp", "tri-tsp", "smoke-tsp", "planted".
std::vector<std::string> preset_names();
KeyValue config_preset(const std::string& name);  // throws ConfigError

/// Resolves `kv` (with "preset = <name>" applied first). Relative paths are
/// taken relative to `base_dir`.
ExperimentConfig parse_config(const KeyValue& kv, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& file);

}  // namespace e2oc::cli
