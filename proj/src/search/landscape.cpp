#include "e2oc/search/landscape.hpp"

#include <algorithm>

#include "e2oc/common/error.hpp"
#include "e2oc/common/rng.hpp"

namespace e2oc::search {

namespace {

std::size_t flat(const PlantedLandscape& m, std::size_t slot, int g, int v) {
    return (slot * static_cast<std::size_t>(m.thoughts) + static_cast<std::size_t>(g)) *
               static_cast<std::size_t>(m.variants) +
           static_cast<std::size_t>(v);
}

}  // namespace

double PlantedLandscape::offset(std::size_t slot, int g, int v) const {
    if (slot >= roles.size() || g < 0 || g >= thoughts || v < 0 || v >= variants) return 0.0;
    return q[flat(*this, slot, g, v)];
}

double& PlantedLandscape::at(std::size_t slot, int g, int v) {
    if (slot >= roles.size() || g < 0 || g >= thoughts || v < 0 || v >= variants)
        throw ContractError("planted landscape index out of range");
    return q[flat(*this, slot, g, v)];
}

int thought_index(const operators::Operator& op) {
    const auto hash = op.thought_key.rfind('#');
    if (op.provenance == operators::Provenance::expert || hash == std::string::npos) return 0;
    try {
        return std::stoi(op.thought_key.substr(hash + 1));
    } catch (const std::exception&) {
        return 0;
    }
}

double PlantedLandscape::contribution(std::size_t slot, const operators::Operator& op) const {
    if (op.provenance == operators::Provenance::expert) return 0.0;
    return offset(slot, thought_index(op), op.variant);
}

double PlantedLandscape::value(const operators::OperatorCombination& combo) const {
    if (combo.size() != roles.size()) throw ContractError("combination does not match the landscape slots");
    double f = base;
    for (std::size_t i = 0; i < combo.size(); ++i) f += contribution(i, combo[i]);
    return f;
}

double PlantedLandscape::strategy_value(const std::vector<int>& s) const {
    if (s.size() != roles.size()) throw ContractError("strategy length differs from K");
    double f = base;
    for (std::size_t i = 0; i < s.size(); ++i) {
        double best = offset(i, s[i], 0);
        for (int v = 1; v < variants; ++v) best = std::max(best, offset(i, s[i], v));
        f += best;
    }
    return f;
}

std::vector<int> PlantedLandscape::best_strategy() const {
    const std::size_t k = roles.size();
    std::vector<int> s(k, 0), best = s;
    double best_v = strategy_value(s);
    while (true) {
        std::size_t i = 0;
        while (i < k && ++s[i] == thoughts) s[i++] = 0;
        if (i == k) break;
        const double v = strategy_value(s);
        if (v > best_v) best_v = v, best = s;
    }
    return best;
}

KeyValue PlantedLandscape::to_kv() const {
    KeyValue kv;
    std::string r;
    for (auto role : roles) r += (r.empty() ? "" : ",") + std::string(operators::role_name(role));
    kv.set("roles", r);
    kv.set("thoughts", static_cast<long long>(thoughts));
    kv.set("variants", static_cast<long long>(variants));
    kv.set("base", base);
    kv.set("noise", noise);
    for (std::size_t i = 0; i < roles.size(); ++i)
        for (int g = 0; g < thoughts; ++g)
            for (int v = 0; v < variants; ++v)
                kv.set("q." + std::to_string(i) + "." + std::to_string(g) + "." + std::to_string(v), offset(i, g, v));
    return kv;
}

PlantedLandscape PlantedLandscape::from_kv(const KeyValue& kv) {
    PlantedLandscape m;
    for (const auto& r : kv.list("roles")) m.roles.push_back(operators::parse_role(r));
    m.thoughts = static_cast<int>(kv.integer("thoughts"));
    m.variants = static_cast<int>(kv.integer("variants"));
    m.base = kv.real("base");
    m.noise = kv.real("noise", 0.0);
    if (m.roles.empty() || m.thoughts < 1 || m.variants < 1) throw ConfigError("planted landscape is empty");
    m.q.assign(m.roles.size() * static_cast<std::size_t>(m.thoughts * m.variants), 0.0);
    for (std::size_t i = 0; i < m.roles.size(); ++i)
        for (int g = 0; g < m.thoughts; ++g)
            for (int v = 0; v < m.variants; ++v)
                m.at(i, g, v) =
                    kv.real("q." + std::to_string(i) + "." + std::to_string(g) + "." + std::to_string(v), 0.0);
    return m;
}

PlantedLandscape PlantedLandscape::load(const std::filesystem::path& file) { return from_kv(KeyValue::load(file)); }

engines::EvaluationRecord PlantedEvaluator::evaluate(const operators::OperatorCombination& combo, std::uint64_t seed) {
    ++calls_;
    engines::EvaluationRecord rec;
    rec.combination = combo.id();
    rec.instances = {"planted"};
    rec.runs_per_instance = 1;
    rec.seed = seed;
    Rng rng(derive_seed({seed, fnv1a64(rec.combination)}));
    double f = map_.value(combo) + map_.noise * (2.0 * rng.uniform() - 1.0);
    engines::RunRecord run;
    run.instance = "planted";
    run.seed = seed;
    run.clamped = f < 0.0 || f > 1.0;
    run.hv = std::clamp(f, 0.0, 1.0);
    run.front_size = 1;
    rec.runs.push_back(run);
    rec.fit = run.hv;
    for (std::size_t i = 0; i < combo.size(); ++i)
        if (combo[i].provenance == operators::Provenance::generated) ++rec.budget_charge;
    return rec;
}

}  // namespace e2oc::search
