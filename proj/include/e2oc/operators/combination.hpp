#pragma once

#include <span>
#include <string>
#include <vector>

#include "e2oc/common/rng.hpp"
#include "e2oc/operators/operator.hpp"
#include "e2oc/problems/problem.hpp"

namespace e2oc::operators {

class ExternalRuntime;

struct ApplyResult {
    /// One child when valid; the unchanged parents when rejected.
    std::vector<problems::Genome> children;
    bool valid = false;
    std::string reason;
};

/// Dispatches to the native catalog or the external runtime and validates the
/// child against the problem's encoding invariants (repair by rejection).
/// Throws ContractError on role or arity mismatch, OperatorFailure when the
/// operator itself fails.
ApplyResult apply_operator(const Operator& op, std::span<const problems::Genome> parents,
                           const problems::Problem& problem, Rng& rng, ExternalRuntime* runtime = nullptr);

/// Slot roles of a combination. FJSP uses the four fixed roles; TSP pipelines
/// are configurable ordered role lists.
using Schema = std::vector<Role>;
Schema fjsp_schema();

/// Ordered K-tuple of operators. Immutable; with_slot() returns a copy.
class OperatorCombination {
public:
    OperatorCombination() = default;
    /// Throws ContractError when an operator failed validation or a role does
    /// not match its slot.
    OperatorCombination(Schema schema, std::vector<OperatorPtr> ops);

    std::size_t size() const noexcept { return ops_.size(); }
    const Schema& schema() const noexcept { return schema_; }
    const Operator& operator[](std::size_t i) const { return *ops_.at(i); }
    const OperatorPtr& ptr(std::size_t i) const { return ops_.at(i); }
    const std::vector<OperatorPtr>& operators() const noexcept { return ops_; }

    OperatorCombination with_slot(std::size_t i, OperatorPtr op) const;

    /// Stable id: slot operator ids joined by '|'.
    std::string id() const;
    bool fits(problems::ProblemKind kind) const noexcept;

private:
    Schema schema_;
    std::vector<OperatorPtr> ops_;
};

/// Expert combinations: "fjsp-expert" and TSP pipelines named by tokens joined
/// with '_' (ox, swap, 2opt, 3opt, oropt), e.g. "ox_swap_oropt".
OperatorCombination expert_combination(const std::string& name);

}  // namespace e2oc::operators
