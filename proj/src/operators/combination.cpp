#include "e2oc/operators/combination.hpp"

#include <sstream>

#include "e2oc/common/error.hpp"
#include "e2oc/operators/catalog.hpp"
#include "e2oc/operators/runtime.hpp"

namespace e2oc::operators {

ApplyResult apply_operator(const Operator& op, std::span<const problems::Genome> parents,
                           const problems::Problem& problem, Rng& rng, ExternalRuntime* runtime) {
    if (role_is_fjsp(op.role) != problems::is_fjsp(problem.kind()))
        throw ContractError("operator " + op.id + " with role " + std::string(role_name(op.role)) +
                            " applied to " + std::string(problems::problem_name(problem.kind())));
    if (parents.size() != static_cast<std::size_t>(op.arity()))
        throw ContractError("operator " + op.id + " expects " + std::to_string(op.arity()) + " parents, got " +
                            std::to_string(parents.size()));

    std::vector<problems::Genome> out;
    if (const auto* n = std::get_if<NativeBinding>(&op.binding)) {
        const auto& entry = find_entry(n->entry);
        try {
            out.push_back(entry.fn(parents, problem, n->params, rng));
        } catch (const ContractError&) {
            throw;
        } catch (const std::exception& e) {
            throw OperatorFailure("operator " + op.id + " failed: " + e.what());
        }
    } else {
        if (!runtime) throw OperatorFailure("operator " + op.id + " needs an external runtime");
        out = runtime->apply(std::get<ExternalBinding>(op.binding), op.role, problem, parents, rng.next());
    }

    ApplyResult r;
    if (out.empty()) {
        r.reason = "no child produced";
    } else if (!problem.feasible(out.front())) {
        r.reason = "invariant-violation";
    } else {
        r.valid = true;
        r.children.push_back(std::move(out.front()));
        return r;
    }
    r.children.assign(parents.begin(), parents.end());
    return r;
}

Schema fjsp_schema() {
    return {Role::fjsp_op_crossover, Role::fjsp_op_mutation, Role::fjsp_machine_crossover,
            Role::fjsp_machine_mutation};
}

OperatorCombination::OperatorCombination(Schema schema, std::vector<OperatorPtr> ops)
    : schema_(std::move(schema)), ops_(std::move(ops)) {
    if (schema_.empty()) throw ContractError("empty operator combination");
    if (schema_.size() != ops_.size())
        throw ContractError("combination has " + std::to_string(ops_.size()) + " operators for " +
                            std::to_string(schema_.size()) + " slots");
    const bool fjsp = role_is_fjsp(schema_.front());
    for (std::size_t i = 0; i < ops_.size(); ++i) {
        if (!ops_[i]) throw ContractError("null operator in slot " + std::to_string(i));
        if (role_is_fjsp(schema_[i]) != fjsp) throw ContractError("schema mixes FJSP and TSP roles");
        if (ops_[i]->role != schema_[i])
            throw ContractError("slot " + std::to_string(i) + " expects " + std::string(role_name(schema_[i])) +
                                ", got " + std::string(role_name(ops_[i]->role)));
        if (ops_[i]->validation.status == Validity::invalid)
            throw ContractError("operator " + ops_[i]->id + " failed validation (" + ops_[i]->validation.cause +
                                ") and cannot enter a combination");
    }
}

OperatorCombination OperatorCombination::with_slot(std::size_t i, OperatorPtr op) const {
    auto ops = ops_;
    ops.at(i) = std::move(op);
    return OperatorCombination(schema_, std::move(ops));
}

std::string OperatorCombination::id() const {
    std::string s;
    for (std::size_t i = 0; i < ops_.size(); ++i) {
        if (i) s += '|';
        s += ops_[i]->id;
    }
    return s;
}

bool OperatorCombination::fits(problems::ProblemKind kind) const noexcept {
    return !schema_.empty() && role_is_fjsp(schema_.front()) == problems::is_fjsp(kind);
}

OperatorCombination expert_combination(const std::string& name) {
    if (name == "fjsp-expert") {
        std::vector<OperatorPtr> ops;
        for (auto r : fjsp_schema()) ops.push_back(std::make_shared<Operator>(expert_operator(r)));
        return OperatorCombination(fjsp_schema(), std::move(ops));
    }
    Schema schema;
    std::vector<OperatorPtr> ops;
    std::istringstream in(name);
    std::string tok;
    while (std::getline(in, tok, '_')) {
        Operator op;
        if (tok == "ox") {
            op = make_native("expert-v1/ox", Role::tsp_crossover, "ox");
        } else if (tok == "swap") {
            op = make_native("expert-v1/swap", Role::tsp_mutation, "swap");
        } else if (tok == "2opt") {
            op = make_native("expert-v1/two_opt", Role::tsp_local_search, "two_opt");
        } else if (tok == "3opt") {
            op = make_native("expert-v1/three_opt", Role::tsp_local_search, "three_opt");
        } else if (tok == "oropt") {
            op = make_native("expert-v1/or_opt", Role::tsp_local_search, "or_opt");
        } else {
            throw ConfigError("unknown operator token '" + tok + "' in combination '" + name + "'");
        }
        schema.push_back(op.role);
        ops.push_back(std::make_shared<Operator>(std::move(op)));
    }
    if (ops.empty()) throw ConfigError("empty combination name");
    return OperatorCombination(std::move(schema), std::move(ops));
}

}  // namespace e2oc::operators
