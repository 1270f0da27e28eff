#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace e2oc::operators {

enum class Role {
    fjsp_op_crossover,
    fjsp_op_mutation,
    fjsp_machine_crossover,
    fjsp_machine_mutation,
    tsp_crossover,
    tsp_mutation,
    tsp_local_search,
};

std::string_view role_name(Role r) noexcept;
Role parse_role(std::string_view name);  // throws ConfigError
int role_arity(Role r) noexcept;
bool role_is_fjsp(Role r) noexcept;
bool role_is_crossover(Role r) noexcept;
bool role_is_mutation(Role r) noexcept;

enum class Provenance { expert, generated };

using Params = std::map<std::string, double>;

struct NativeBinding {
    std::string entry;
    Params params;
};

struct ExternalBinding {
    std::filesystem::path script;
    std::string entry = "variation";
};

using Binding = std::variant<NativeBinding, ExternalBinding>;

enum class Validity { unchecked, valid, invalid };

struct ValidationReport {
    Validity status = Validity::unchecked;
    int probes = 0;
    int failures = 0;
    std::string cause;  // "invariant-violation", "timeout", "operator-failure", ...
    std::string detail;
};

struct Operator {
    std::string id;
    Role role = Role::tsp_local_search;
    Provenance provenance = Provenance::expert;
    Binding binding;
    /// Design thought the candidate was generated from (generated operators only).
    std::string thought_key;
    /// Catalog variant index drawn by the synthetic backend, -1 otherwise.
    int variant = -1;
    std::string code;
    ValidationReport validation;

    int arity() const noexcept { return role_arity(role); }
    bool is_native() const noexcept { return std::holds_alternative<NativeBinding>(binding); }
};

using OperatorPtr = std::shared_ptr<const Operator>;

Operator make_native(std::string id, Role role, std::string entry, Params params = {});

/// One directory per operator: operator.kv (metadata, binding, validation) and code.txt.
void save_operator(const std::filesystem::path& dir, const Operator& op);
Operator load_operator(const std::filesystem::path& dir);

}  // namespace e2oc::operators
