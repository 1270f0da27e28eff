#pragma once

#include <functional>
#include <string>
#include <vector>

#include "e2oc/common/rng.hpp"
#include "e2oc/search/bandit.hpp"

namespace e2oc::search {

struct MctsNode {
    int id = 0;
    int parent = -1;
    /// Chosen index per decided slot (thought indices, or operator pool
    /// indices for the operator tree); a full K-tuple for the tuple tree.
    std::vector<int> state;
    double sco = 0.0;
    long long vs = 0;
    std::vector<int> children;
    /// Excluded from selection (repeated zero-valid rotations, or every child dead).
    bool dead = false;
    /// Some rotation under this node failed.
    bool flagged = false;
    int zero_valid = 0;
    double best_fit = -1.0;
    std::string best_combination;
};

class MctsTree {
public:
    explicit MctsTree(double c = kDefaultExploration, std::vector<int> root_state = {});

    const MctsNode& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
    MctsNode& node(int i) { return nodes_.at(static_cast<std::size_t>(i)); }
    std::size_t size() const noexcept { return nodes_.size(); }
    double exploration() const noexcept { return c_; }

    int add_child(int parent, std::vector<int> state);
    double ucb(int child) const;
    /// Live child with the largest UCB, first inserted on ties; -1 when none.
    int select_child(int parent) const;
    /// Adds fit to sco and one visit from `leaf` up to the root.
    void backpropagate(int leaf, double fit);
    /// Path from the root to `leaf`, root first.
    std::vector<int> path(int leaf) const;

    /// Prefix tree checks: states extend the parent's by one element, vs >=
    /// sum of children's vs, sco finite and non-negative.
    bool well_formed(bool prefix_states = true) const;

    std::string to_json() const;

private:
    double c_;
    std::vector<MctsNode> nodes_;
};

struct RotationOutcome {
    /// Score backpropagated for the strategy.
    double fit = 0.0;
    /// Valid candidates generated across the rotation.
    int valid = 0;
    std::string combination;
};

struct IterationOutcome {
    int node = -1;
    std::vector<int> strategy;
    double fit = 0.0;
    bool failed = false;
    /// No live node was left to select.
    bool exhausted = false;
};

using RotationHook = std::function<RotationOutcome(const std::vector<int>& strategy)>;
/// Number of thoughts currently in PS_depth. May grow between calls.
using DomainSize = std::function<int(int depth)>;
/// Called when a node at `depth` is about to get children or has every child
/// visited; may grow the domain.
using ExpandHook = std::function<void(int depth)>;

/// Runs the hook on out.strategy, records the outcome on out.node and
/// backpropagates. Errors other than BackendError and BudgetExhausted count as
/// a failed rotation (fit 0, node flagged); zero valid candidates twice marks
/// the node dead.
void simulate_and_backpropagate(MctsTree& tree, IterationOutcome& out, const RotationHook& hook);

/// One selection / expansion / simulation / backpropagation round over
/// prefix states of length <= k.
IterationOutcome mcts_iteration(MctsTree& tree, int k, const DomainSize& domain, const RotationHook& hook, Rng& rng,
                                const ExpandHook& on_expand = {});

}  // namespace e2oc::search
