#include "e2oc/genesis/thought.hpp"

#include <json.hpp>

#include "e2oc/common/error.hpp"
#include "e2oc/common/kv.hpp"

namespace e2oc::genesis {

std::string DesignThought::key() const { return std::string(operators::role_name(role)) + "#" + std::to_string(index); }

namespace {

const char* kFjspHeader = R"(# parents: list of {"sequence": [...], "assignment": [...]}
# sequence: job-repetition operation sequence (job j appears once per operation)
# assignment: eligible-machine index per operation, jobs ascending then operation index
# instance: {"machines": int, "jobs": [[[machine, duration], ...] per operation] per job}
# seed: integer seed from the host; params: dict of floats
import random

)";

const char* kTspHeader = R"(# parents: list of {"sequence": [...]} where sequence is a permutation of 0..k-1
# instance: {"k": int, "coords": [[[x, y] per node] per objective space]}
# seed: integer seed from the host; params: dict of floats
import random

)";

std::string make_template(Role r) {
    const bool fjsp = operators::role_is_fjsp(r);
    std::string body;
    switch (r) {
        case Role::fjsp_op_crossover:
            body = R"(def variation(role, instance, parents, seed, params):
    rng = random.Random(seed)
    a, b = parents[0]["sequence"], parents[1]["sequence"]
    jobs = sorted(set(a))
    keep = set(j for j in jobs if rng.random() < 0.5)
    fill = iter(j for j in b if j not in keep)
    child = [j if j in keep else next(fill) for j in a]
    return [{"sequence": child, "assignment": list(parents[0]["assignment"])}]
)";
            break;
        case Role::fjsp_op_mutation:
            body = R"(def variation(role, instance, parents, seed, params):
    rng = random.Random(seed)
    seq = list(parents[0]["sequence"])
    i, j = rng.sample(range(len(seq)), 2)
    seq[i], seq[j] = seq[j], seq[i]
    return [{"sequence": seq, "assignment": list(parents[0]["assignment"])}]
)";
            break;
        case Role::fjsp_machine_crossover:
            body = R"(def variation(role, instance, parents, seed, params):
    rng = random.Random(seed)
    a, b = parents[0]["assignment"], parents[1]["assignment"]
    cut = rng.randrange(1, len(a)) if len(a) > 1 else 0
    return [{"sequence": list(parents[0]["sequence"]), "assignment": a[:cut] + b[cut:]}]
)";
            break;
        case Role::fjsp_machine_mutation:
            body = R"(def variation(role, instance, parents, seed, params):
    rng = random.Random(seed)
    asg = list(parents[0]["assignment"])
    ops = [op for job in instance["jobs"] for op in job]
    i = rng.randrange(len(asg))
    asg[i] = rng.randrange(len(ops[i]))
    return [{"sequence": list(parents[0]["sequence"]), "assignment": asg}]
)";
            break;
        case Role::tsp_crossover:
            body = R"(def variation(role, instance, parents, seed, params):
    rng = random.Random(seed)
    a, b = parents[0]["sequence"], parents[1]["sequence"]
    n = len(a)
    i, j = sorted(rng.sample(range(n), 2))
    mid = a[i:j + 1]
    rest = [v for v in b[j + 1:] + b[:j + 1] if v not in mid]
    child = rest[n - j - 1:] + mid + rest[:n - j - 1]
    return [{"sequence": child}]
)";
            break;
        case Role::tsp_mutation:
            body = R"(def variation(role, instance, parents, seed, params):
    rng = random.Random(seed)
    t = list(parents[0]["sequence"])
    i, j = rng.sample(range(len(t)), 2)
    t[i], t[j] = t[j], t[i]
    return [{"sequence": t}]
)";
            break;
        case Role::tsp_local_search:
            body = R"(def variation(role, instance, parents, seed, params):
    rng = random.Random(seed)
    import math
    t = list(parents[0]["sequence"])
    n = len(t)
    w = [rng.random() for _ in instance["coords"]]
    s = sum(w)
    w = [x / s for x in w]
    def d(u, v):
        return sum(wm * math.dist(c[u], c[v]) for wm, c in zip(w, instance["coords"]))
    off = rng.randrange(n)
    for s in range(n):
        i = (s + off) % n
        for j in range(i + 2, n if i > 0 else n - 1):
            a, b, c, e = t[i], t[i + 1], t[j], t[(j + 1) % n]
            if d(a, c) + d(b, e) < d(a, b) + d(c, e) - 1e-12:
                t[i + 1:j + 1] = reversed(t[i + 1:j + 1])
                return [{"sequence": t}]
    return [{"sequence": t}]
)";
            break;
    }
    return std::string(fjsp ? kFjspHeader : kTspHeader) + body;
}

}  // namespace

const std::string& expert_template(Role role) {
    static const std::map<Role, std::string> cache = [] {
        std::map<Role, std::string> m;
        for (auto r : {Role::fjsp_op_crossover, Role::fjsp_op_mutation, Role::fjsp_machine_crossover,
                       Role::fjsp_machine_mutation, Role::tsp_crossover, Role::tsp_mutation, Role::tsp_local_search})
            m[r] = make_template(r);
        return m;
    }();
    return cache.at(role);
}

std::string task_description(Role role) {
    std::string what;
    switch (role) {
        case Role::fjsp_op_crossover: what = "a crossover on the operation sequence of a flexible job shop schedule"; break;
        case Role::fjsp_op_mutation: what = "a mutation of the operation sequence of a flexible job shop schedule"; break;
        case Role::fjsp_machine_crossover: what = "a crossover on the machine assignment of a flexible job shop schedule"; break;
        case Role::fjsp_machine_mutation: what = "a mutation of the machine assignment of a flexible job shop schedule"; break;
        case Role::tsp_crossover: what = "a crossover of two tours of a multi-objective TSP"; break;
        case Role::tsp_mutation: what = "a mutation of one tour of a multi-objective TSP"; break;
        case Role::tsp_local_search: what = "a local search move on one tour of a multi-objective TSP"; break;
    }
    return "Design " + what + ", used inside a multi-objective evolutionary algorithm that minimizes all objectives. "
           "The child must keep the encoding valid. Define the function `variation(role, instance, parents, seed, params)` "
           "and return a list with one child.";
}

DesignThought initial_thought(Role role) {
    DesignThought t;
    t.role = role;
    t.index = 0;
    t.suggestion = "Start from the expert-designed operator and keep its encoding guarantees.";
    t.template_code = expert_template(role);
    return t;
}

PromptStorage::PromptStorage(const std::vector<Role>& roles) {
    for (auto r : roles)
        if (!has(r)) thoughts_[r].push_back(initial_thought(r));
}

const DesignThought& PromptStorage::add(DesignThought t) {
    if (t.suggestion.empty()) throw ContractError("design thought text is empty");
    auto& v = thoughts_[t.role];
    if (v.empty() && t.index != 0) throw ContractError("first thought of a role must be the initial thought");
    t.index = static_cast<int>(v.size());
    v.push_back(std::move(t));
    return v.back();
}

const std::vector<DesignThought>& PromptStorage::of(Role r) const {
    auto it = thoughts_.find(r);
    if (it == thoughts_.end()) throw ContractError("no thoughts for role " + std::string(operators::role_name(r)));
    return it->second;
}

const DesignThought& PromptStorage::at(Role r, int index) const {
    const auto& v = of(r);
    if (index < 0 || static_cast<std::size_t>(index) >= v.size())
        throw ContractError("thought index " + std::to_string(index) + " out of range for " +
                            std::string(operators::role_name(r)));
    return v[static_cast<std::size_t>(index)];
}

std::size_t PromptStorage::total() const {
    std::size_t n = 0;
    for (const auto& [r, v] : thoughts_) n += v.size();
    return n;
}

std::vector<Role> PromptStorage::roles() const {
    std::vector<Role> out;
    for (const auto& [r, v] : thoughts_) out.push_back(r);
    return out;
}

std::string PromptStorage::to_json() const {
    nlohmann::ordered_json j;
    j["version"] = 1;
    auto& arr = j["thoughts"] = nlohmann::ordered_json::array();
    for (const auto& [r, v] : thoughts_)
        for (const auto& t : v)
            arr.push_back({{"role", operators::role_name(r)},
                           {"index", t.index},
                           {"suggestion", t.suggestion},
                           {"template", t.template_code},
                           {"source_elite", t.source_elite},
                           {"degraded", t.degraded}});
    return j.dump(2) + "\n";
}

PromptStorage PromptStorage::from_json(const std::string& text) {
    PromptStorage ps;
    try {
        const auto j = nlohmann::json::parse(text);
        if (j.at("version").get<int>() != 1) throw ConfigError("unsupported prompt storage version");
        for (const auto& e : j.at("thoughts")) {
            DesignThought t;
            t.role = operators::parse_role(e.at("role").get<std::string>());
            t.index = e.at("index").get<int>();
            t.suggestion = e.at("suggestion").get<std::string>();
            t.template_code = e.at("template").get<std::string>();
            t.source_elite = e.at("source_elite").get<std::string>();
            t.degraded = e.at("degraded").get<bool>();
            const int want = t.index;
            if (ps.add(std::move(t)).index != want) throw ConfigError("prompt storage indices are not contiguous");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed prompt storage: ") + e.what());
    }
    return ps;
}

void PromptStorage::save(const std::filesystem::path& file) const { write_text(file, to_json()); }
PromptStorage PromptStorage::load(const std::filesystem::path& file) { return from_json(read_text(file)); }

}  // namespace e2oc::genesis
