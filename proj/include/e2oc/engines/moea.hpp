#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "e2oc/common/rng.hpp"
#include "e2oc/engines/config.hpp"
#include "e2oc/moo/archive.hpp"
#include "e2oc/operators/combination.hpp"
#include "e2oc/problems/problem.hpp"

namespace e2oc::operators {
class ExternalRuntime;
}

namespace e2oc::engines {

struct Individual {
    problems::Genome genome;
    moo::ObjectiveVector f;
};

struct VariationStats {
    long long applications = 0;
    long long rejected = 0;
    long long failures = 0;
};

/// Runs the combination's slots in order on a copy of the first parent.
/// Crossover slots fire with the crossover rate (partner = second parent),
/// mutation slots with the mutation rate, local search always. A rejected
/// child keeps the current genome. OperatorFailure is retried up to the retry
/// budget, then rethrown.
class Variation {
public:
    Variation(const operators::OperatorCombination& combo, const problems::Problem& problem,
              const MoeaConfig& cfg, operators::ExternalRuntime* runtime = nullptr);

    problems::Genome offspring(const problems::Genome& a, const problems::Genome& b, Rng& rng);
    const VariationStats& stats() const noexcept { return stats_; }

private:
    const operators::OperatorCombination& combo_;
    const problems::Problem& problem_;
    const MoeaConfig& cfg_;
    operators::ExternalRuntime* runtime_;
    VariationStats stats_;
};

/// Indices of the survivors: whole fronts by ascending rank, the split front
/// by descending crowding distance, ties by pool index. Result is sorted.
std::vector<std::size_t> nsga2_environmental_selection(std::span<const moo::ObjectiveVector> pool,
                                                       std::size_t target);

/// Das-Dennis simplex lattice with `divisions` steps per axis.
std::vector<std::vector<double>> das_dennis(std::size_t m, std::size_t divisions);
/// Smallest division count whose lattice has at least `population` points
/// (or the closest one below when that overshoots by more).
std::size_t auto_divisions(std::size_t m, std::size_t population);

/// Reference-point niching selection. Result is sorted.
std::vector<std::size_t> nsga3_environmental_selection(std::span<const moo::ObjectiveVector> pool,
                                                       std::size_t target,
                                                       const std::vector<std::vector<double>>& directions,
                                                       Rng& rng);

/// max_i w_i |f_i - z_i|, zero weights replaced by 1e-6.
double tchebycheff(const moo::ObjectiveVector& f, const std::vector<double>& w, const moo::ObjectiveVector& z);

struct MoeadState {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<std::size_t>> neighbors;  // by weight distance, self first
    std::vector<Individual> population;               // one per weight vector
    moo::ObjectiveVector ideal;
};

MoeadState moead_init(std::vector<Individual> population, std::vector<std::vector<double>> weights,
                      std::size_t neighborhood);

/// Offers `child` to the subproblems in `order`; replaces a subproblem when the
/// child is strictly better under its Tchebycheff value, at most `cap` times.
/// Updates the ideal point first. Returns the replaced subproblem indices.
std::vector<std::size_t> moead_update(MoeadState& state, std::span<const std::size_t> order,
                                      const Individual& child, int cap);

/// One subproblem step: mating pool (neighbourhood with probability delta,
/// otherwise the whole population), variation, evaluation, update.
std::vector<std::size_t> moead_step(MoeadState& state, std::size_t i, Variation& var,
                                    const problems::Problem& problem, const MoeaConfig& cfg, Rng& rng);

struct RunResult {
    moo::ParetoArchive front;
    /// Per generation (0 = initial population): normalized HV of the
    /// population's non-dominated set. Empty when no context was given.
    std::vector<double> hv_trajectory;
    std::vector<moo::ParetoArchive> history;  // filled when keep_history
    VariationStats stats;
    std::uint64_t seed = 0;
    long long evaluations = 0;
};

struct RunOptions {
    const moo::HvContext* ctx = nullptr;
    bool keep_history = false;
    operators::ExternalRuntime* runtime = nullptr;
};

/// Deterministic given cfg.seed. Throws ContractError when the combination
/// does not fit the problem, OperatorFailure when the retry budget runs out.
RunResult run_moea(const problems::Problem& problem, const operators::OperatorCombination& combo,
                   const MoeaConfig& cfg, const RunOptions& opts = {});

}  // namespace e2oc::engines
