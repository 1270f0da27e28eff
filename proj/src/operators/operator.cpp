#include "e2oc/operators/operator.hpp"

#include "e2oc/common/error.hpp"
#include "e2oc/common/kv.hpp"

namespace e2oc::operators {

namespace {

constexpr Role kRoles[] = {Role::fjsp_op_crossover, Role::fjsp_op_mutation, Role::fjsp_machine_crossover,
                           Role::fjsp_machine_mutation, Role::tsp_crossover, Role::tsp_mutation,
                           Role::tsp_local_search};

std::string_view validity_name(Validity v) {
    switch (v) {
        case Validity::valid: return "valid";
        case Validity::invalid: return "invalid";
        default: return "unchecked";
    }
}

Validity parse_validity(const std::string& s) {
    if (s == "valid") return Validity::valid;
    if (s == "invalid") return Validity::invalid;
    if (s == "unchecked") return Validity::unchecked;
    throw ConfigError("unknown validity '" + s + "'");
}

}  // namespace

std::string_view role_name(Role r) noexcept {
    switch (r) {
        case Role::fjsp_op_crossover: return "fjsp-op-crossover";
        case Role::fjsp_op_mutation: return "fjsp-op-mutation";
        case Role::fjsp_machine_crossover: return "fjsp-machine-crossover";
        case Role::fjsp_machine_mutation: return "fjsp-machine-mutation";
        case Role::tsp_crossover: return "tsp-crossover";
        case Role::tsp_mutation: return "tsp-mutation";
        case Role::tsp_local_search: return "tsp-local-search";
    }
    return "?";
}

Role parse_role(std::string_view name) {
    for (auto r : kRoles)
        if (role_name(r) == name) return r;
    throw ConfigError("unknown operator role '" + std::string(name) + "'");
}

int role_arity(Role r) noexcept { return role_is_crossover(r) ? 2 : 1; }

bool role_is_fjsp(Role r) noexcept {
    return r == Role::fjsp_op_crossover || r == Role::fjsp_op_mutation || r == Role::fjsp_machine_crossover ||
           r == Role::fjsp_machine_mutation;
}

bool role_is_crossover(Role r) noexcept {
    return r == Role::fjsp_op_crossover || r == Role::fjsp_machine_crossover || r == Role::tsp_crossover;
}

bool role_is_mutation(Role r) noexcept {
    return r == Role::fjsp_op_mutation || r == Role::fjsp_machine_mutation || r == Role::tsp_mutation;
}

Operator make_native(std::string id, Role role, std::string entry, Params params) {
    Operator op;
    op.id = std::move(id);
    op.role = role;
    op.binding = NativeBinding{std::move(entry), std::move(params)};
    return op;
}

void save_operator(const std::filesystem::path& dir, const Operator& op) {
    KeyValue kv;
    kv.set("id", op.id);
    kv.set("role", std::string(role_name(op.role)));
    kv.set("provenance", std::string(op.provenance == Provenance::expert ? "expert" : "generated"));
    kv.set("thought", op.thought_key);
    kv.set("variant", static_cast<long long>(op.variant));
    if (const auto* n = std::get_if<NativeBinding>(&op.binding)) {
        kv.set("binding", std::string("native"));
        kv.set("entry", n->entry);
        for (const auto& [k, v] : n->params) kv.set("param." + k, v);
    } else {
        const auto& e = std::get<ExternalBinding>(op.binding);
        kv.set("binding", std::string("external"));
        kv.set("script", e.script.string());
        kv.set("entry", e.entry);
    }
    kv.set("validation.status", std::string(validity_name(op.validation.status)));
    kv.set("validation.probes", static_cast<long long>(op.validation.probes));
    kv.set("validation.failures", static_cast<long long>(op.validation.failures));
    kv.set("validation.cause", op.validation.cause);
    kv.save(dir / "operator.kv");
    write_text(dir / "code.txt", op.code);
}

Operator load_operator(const std::filesystem::path& dir) {
    const auto kv = KeyValue::load(dir / "operator.kv");
    Operator op;
    op.id = kv.str("id");
    op.role = parse_role(kv.str("role"));
    const auto prov = kv.str("provenance");
    if (prov != "expert" && prov != "generated") throw ConfigError("unknown provenance '" + prov + "'");
    op.provenance = prov == "expert" ? Provenance::expert : Provenance::generated;
    op.thought_key = kv.str("thought", "");
    op.variant = static_cast<int>(kv.integer("variant", -1));
    const auto binding = kv.str("binding");
    if (binding == "native") {
        NativeBinding n{kv.str("entry"), {}};
        for (const auto& [k, v] : kv.entries())
            if (k.rfind("param.", 0) == 0) n.params[k.substr(6)] = kv.real(k);
        op.binding = std::move(n);
    } else if (binding == "external") {
        op.binding = ExternalBinding{kv.str("script"), kv.str("entry", "variation")};
    } else {
        throw ConfigError("unknown binding '" + binding + "'");
    }
    op.validation.status = parse_validity(kv.str("validation.status", "unchecked"));
    op.validation.probes = static_cast<int>(kv.integer("validation.probes", 0));
    op.validation.failures = static_cast<int>(kv.integer("validation.failures", 0));
    op.validation.cause = kv.str("validation.cause", "");
    if (std::filesystem::exists(dir / "code.txt")) op.code = read_text(dir / "code.txt");
    return op;
}

}  // namespace e2oc::operators
