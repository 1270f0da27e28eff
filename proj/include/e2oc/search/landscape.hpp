#pragma once

#include <filesystem>
#include <vector>

#include "e2oc/common/kv.hpp"
#include "e2oc/engines/evaluator.hpp"
#include "e2oc/operators/combination.hpp"

namespace e2oc::search {

/// Additive fitness map for search tests: each (slot, thought index, variant)
/// carries a planted offset q. fit = clamp(base + sum of slot offsets + noise).
/// Expert operators and unknown thoughts or variants contribute 0.
struct PlantedLandscape {
    operators::Schema roles;
    int thoughts = 4;
    int variants = 8;
    double base = 0.5;
    /// Half-width of the uniform evaluation noise.
    double noise = 0.0;
    std::vector<double> q;  // [slot][thought][variant]

    double offset(std::size_t slot, int thought, int variant) const;
    double& at(std::size_t slot, int thought, int variant);
    /// Offset of one operator placed in `slot`.
    double contribution(std::size_t slot, const operators::Operator& op) const;
    /// Noise-free fitness of a combination.
    double value(const operators::OperatorCombination& combo) const;

    /// base + sum over slots of the best variant offset of thought g_i.
    double strategy_value(const std::vector<int>& strategy) const;
    /// Exhaustive argmax over all thoughts^K strategies.
    std::vector<int> best_strategy() const;

    KeyValue to_kv() const;
    static PlantedLandscape from_kv(const KeyValue& kv);
    static PlantedLandscape load(const std::filesystem::path& file);
};

/// Thought index encoded in an operator's thought key ("<role>#<g>"); 0 for
/// expert operators.
int thought_index(const operators::Operator& op);

class PlantedEvaluator final : public engines::CombinationEvaluator {
public:
    explicit PlantedEvaluator(PlantedLandscape map) : map_(std::move(map)) {}
    engines::EvaluationRecord evaluate(const operators::OperatorCombination& combo, std::uint64_t seed) override;
    const PlantedLandscape& landscape() const noexcept { return map_; }

private:
    PlantedLandscape map_;
};

}  // namespace e2oc::search
