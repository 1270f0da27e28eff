#include "e2oc/engines/config.hpp"

#include "e2oc/common/error.hpp"

namespace e2oc::engines {

std::string_view engine_name(EngineKind k) noexcept {
    switch (k) {
        case EngineKind::nsga2: return "nsga2";
        case EngineKind::nsga3: return "nsga3";
        case EngineKind::moead: return "moead";
    }
    return "?";
}

EngineKind parse_engine(std::string_view name) {
    for (auto k : {EngineKind::nsga2, EngineKind::nsga3, EngineKind::moead})
        if (engine_name(k) == name) return k;
    throw ConfigError("unknown engine '" + std::string(name) + "'");
}

void MoeaConfig::validate() const {
    if (population < 4) throw ConfigError("population must be at least 4");
    if (generations < 1) throw ConfigError("generations must be at least 1");
    if (crossover_rate < 0.0 || crossover_rate > 1.0) throw ConfigError("crossover rate outside [0,1]");
    if (mutation_rate < 0.0 || mutation_rate > 1.0) throw ConfigError("mutation rate outside [0,1]");
    if (neighbor_prob < 0.0 || neighbor_prob > 1.0) throw ConfigError("neighbour probability outside [0,1]");
    if (engine == EngineKind::moead && neighborhood >= population)
        throw ConfigError("MOEA/D neighbourhood must be smaller than the population");
    if (neighborhood < 2) throw ConfigError("neighbourhood must be at least 2");
    if (max_replacements < 1) throw ConfigError("max replacements must be at least 1");
    if (retry_budget < 0) throw ConfigError("negative retry budget");
}

EvaluatorPreset evaluator_preset(const std::string& name) {
    EvaluatorPreset p;
    p.name = name;
    if (name == "fjsp-offline") {
        p.moea.generations = 15;
        p.moea.population = 50;
        p.runs = 3;
    } else if (name == "fjsp-online") {
        p.moea.generations = 30;
        p.moea.population = 100;
        p.runs = 5;
    } else if (name == "tsp-offline") {
        p.moea.generations = 30;
        p.moea.population = 100;
        p.runs = 3;
    } else if (name == "tsp-online") {
        p.moea.generations = 200;
        p.moea.population = 200;
        p.runs = 5;
    } else {
        throw ConfigError("unknown evaluator preset '" + name + "'");
    }
    return p;
}

void write_config(KeyValue& kv, const MoeaConfig& c, const std::string& prefix) {
    kv.set(prefix + "engine", std::string(engine_name(c.engine)));
    kv.set(prefix + "population", static_cast<long long>(c.population));
    kv.set(prefix + "generations", static_cast<long long>(c.generations));
    kv.set(prefix + "crossover_rate", c.crossover_rate);
    kv.set(prefix + "mutation_rate", c.mutation_rate);
    kv.set(prefix + "neighborhood", static_cast<long long>(c.neighborhood));
    kv.set(prefix + "neighbor_prob", c.neighbor_prob);
    kv.set(prefix + "max_replacements", static_cast<long long>(c.max_replacements));
    kv.set(prefix + "divisions", static_cast<long long>(c.divisions));
    kv.set(prefix + "retry_budget", static_cast<long long>(c.retry_budget));
    kv.set(prefix + "seed", std::to_string(c.seed));
}

MoeaConfig read_config(const KeyValue& kv, MoeaConfig c, const std::string& prefix) {
    auto count = [&](const char* key, std::size_t fallback) {
        const auto v = kv.integer(prefix + key, static_cast<long long>(fallback));
        if (v < 0) throw ConfigError(prefix + key + " must be non-negative");
        return static_cast<std::size_t>(v);
    };
    if (kv.has(prefix + "engine")) c.engine = parse_engine(kv.str(prefix + "engine"));
    c.population = count("population", c.population);
    c.generations = count("generations", c.generations);
    c.crossover_rate = kv.real(prefix + "crossover_rate", c.crossover_rate);
    c.mutation_rate = kv.real(prefix + "mutation_rate", c.mutation_rate);
    c.neighborhood = count("neighborhood", c.neighborhood);
    c.neighbor_prob = kv.real(prefix + "neighbor_prob", c.neighbor_prob);
    c.max_replacements = static_cast<int>(kv.integer(prefix + "max_replacements", c.max_replacements));
    c.divisions = count("divisions", c.divisions);
    c.retry_budget = static_cast<int>(kv.integer(prefix + "retry_budget", c.retry_budget));
    if (kv.has(prefix + "seed")) {
        try {
            c.seed = std::stoull(kv.str(prefix + "seed"));
        } catch (const std::exception&) {
            throw ConfigError(prefix + "seed is not an unsigned integer");
        }
    }
    c.validate();
    return c;
}

}  // namespace e2oc::engines
