#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "e2oc/genesis/backend.hpp"
#include "e2oc/genesis/thought.hpp"
#include "e2oc/operators/operator.hpp"
#include "e2oc/operators/runtime.hpp"
#include "e2oc/problems/problem.hpp"

namespace e2oc::genesis {

inline constexpr int kMaxSampling = 25;

struct ValidationOptions {
    int pairs = 8;
    std::chrono::milliseconds wall_cap{2000};
    std::uint64_t seed = 1;
};

/// Runs the operator on `pairs` random parent pairs per probe instance. Valid
/// iff every child satisfies the encoding invariants within the wall cap.
operators::ValidationReport validate_operator(const operators::Operator& op,
                                              std::span<const std::shared_ptr<const problems::Problem>> probes,
                                              const ValidationOptions& opts = {},
                                              operators::ExternalRuntime* runtime = nullptr);

struct GenerationTask {
    Role role = Role::tsp_local_search;
    std::string thought_key;
    std::string prompt;
};

struct GenerationOptions {
    int sam_max = kMaxSampling;
    /// External (non-native) code is written here; without it such candidates are dropped.
    std::optional<std::filesystem::path> script_dir;
    std::vector<std::shared_ptr<const problems::Problem>> probes;
    ValidationOptions validation;
    operators::ExternalRuntime* runtime = nullptr;
};

struct CandidateBatch {
    /// Every parsed candidate, validation report attached (valid or not).
    std::vector<operators::Operator> candidates;
    int requested = 0;
    /// Responses without a usable code block.
    int dropped = 0;

    std::vector<operators::Operator> valid() const;
};

/// Parses one delimited code body into an operator. Native specs
/// ("native-operator v1") bind to the catalog; anything else is written as a
/// script under `script_dir`. Returns nullopt when the code cannot be bound.
std::optional<operators::Operator> operator_from_code(const std::string& code, Role role, const std::string& id,
                                                      const std::optional<std::filesystem::path>& script_dir);

/// One backend call per candidate (count capped at sam_max, calls issued up to
/// the backend's concurrency). Candidates are validated when probes are given.
/// Throws ContractError for count < 1, BackendError when the backend gives up.
CandidateBatch generate_candidates(GeneratorBackend& backend, const GenerationTask& task, int count,
                                   std::uint64_t seed, const GenerationOptions& opts = {});

/// Asks the backend to analyze an elite. A malformed answer is retried once,
/// then a generic thought flagged degraded is returned. Index is left at -1
/// for PromptStorage::add to assign.
DesignThought extract_design_thought(const operators::Operator& elite, double fitness, GeneratorBackend& backend,
                                     std::uint64_t seed);

}  // namespace e2oc::genesis
