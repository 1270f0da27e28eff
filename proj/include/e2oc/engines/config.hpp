#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "e2oc/common/kv.hpp"

namespace e2oc::engines {

enum class EngineKind { nsga2, nsga3, moead };

std::string_view engine_name(EngineKind k) noexcept;
EngineKind parse_engine(std::string_view name);  // throws ConfigError

struct MoeaConfig {
    EngineKind engine = EngineKind::nsga2;
    std::size_t population = 100;
    std::size_t generations = 100;
    double crossover_rate = 0.9;
    double mutation_rate = 0.2;
    /// MOEA/D neighbourhood size and neighbour-mating probability.
    std::size_t neighborhood = 20;
    double neighbor_prob = 0.9;
    int max_replacements = 2;
    /// NSGA-III / MOEA/D simplex divisions; 0 picks the count closest to the population.
    std::size_t divisions = 0;
    /// Operator failures tolerated per offspring before the run aborts.
    int retry_budget = 3;
    std::uint64_t seed = 1;

    void validate() const;  // throws ConfigError
};

/// Evaluator profile: solver settings plus the number of independent runs.
struct EvaluatorPreset {
    std::string name;
    MoeaConfig moea;
    int runs = 1;
};

/// fjsp-offline (15 gens x 50 pop x 3 runs), fjsp-online (30 x 100 x 5),
/// tsp-offline (30 x 100 x 3), tsp-online (200 x 200 x 5).
EvaluatorPreset evaluator_preset(const std::string& name);

void write_config(KeyValue& kv, const MoeaConfig& cfg, const std::string& prefix = "moea.");
/// Starts from `base` and overrides the keys present under `prefix`.
MoeaConfig read_config(const KeyValue& kv, MoeaConfig base, const std::string& prefix = "moea.");

}  // namespace e2oc::engines
