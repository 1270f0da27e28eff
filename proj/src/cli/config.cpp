#include "e2oc/cli/config.hpp"

#include <algorithm>
#include <sstream>

#include "e2oc/common/error.hpp"
#include "e2oc/operators/combination.hpp"

namespace e2oc::cli {

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
    return s;
}

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
    if (p.empty() || p.is_absolute() || base.empty()) return p;
    return base / p;
}

bool truthy(const std::string& v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ConfigError("expected a boolean, got '" + v + "'");
}

}  // namespace

std::vector<std::string> preset_names() { return {"fjsp", "tri-fjsp", "tsp", "tri-tsp", "smoke-tsp", "planted"}; }

KeyValue config_preset(const std::string& name) {
    KeyValue kv;
    if (name == "fjsp" || name == "tri-fjsp") {
        kv.set("problem", name == "fjsp" ? "bi-fjsp" : "tri-fjsp");
        kv.set("instances.train", "mk15");
        kv.set("instances.test", "mk01,mk02,mk03,mk04,mk05,mk06,mk07,mk08,mk09,mk10,mk11,mk12,mk13,mk14");
        kv.set("baseline", "fjsp-expert");
        kv.set("offline.preset", "fjsp-offline");
        kv.set("online.preset", "fjsp-online");
    } else if (name == "tsp" || name == "tri-tsp") {
        kv.set("problem", name == "tsp" ? "bi-tsp" : "tri-tsp");
        kv.set("instances.train", "tsp100_1");
        kv.set("instances.test", "tsp20_1,tsp50_1");
        kv.set("baseline", "ox_swap_2opt");
        kv.set("offline.preset", "tsp-offline");
        kv.set("online.preset", "tsp-online");
    } else if (name == "smoke-tsp") {
        kv.set("problem", "bi-tsp");
        kv.set("instances.train", "tsp6_1");
        kv.set("instances.test", "tsp6_2");
        kv.set("baseline", "ox_2opt");
        kv.set("offline.preset", "tsp-offline");
        kv.set("offline.moea.population", 20LL);
        kv.set("offline.moea.generations", 10LL);
        kv.set("offline.runs", 2LL);
        kv.set("online.preset", "tsp-online");
        kv.set("online.moea.population", 20LL);
        kv.set("online.moea.generations", 20LL);
        kv.set("online.runs", 2LL);
        kv.set("budget.iter_out", 1LL);
        kv.set("budget.iter_mid", 2LL);
        kv.set("budget.sam_max", 4LL);
        kv.set("search.ap", 1LL);
        kv.set("validation.pairs", 4LL);
    } else if (name == "planted") {
        kv.set("problem", "bi-fjsp");
        kv.set("baseline", "fjsp-expert");
        kv.set("evaluator", "planted");
        kv.set("online.enabled", "0");
        kv.set("offline.preset", "fjsp-offline");
        kv.set("online.preset", "fjsp-online");
    } else {
        throw ConfigError("unknown preset '" + name + "' (known: " + join(preset_names()) + ")");
    }
    return kv;
}

void ExperimentConfig::validate() const {
    if (evaluator == EvaluatorKind::moea && train.empty()) throw ConfigError("instances.train is empty");
    if (evaluator == EvaluatorKind::planted && planted_fixture.empty())
        throw ConfigError("evaluator = planted needs planted.fixture");
    if (evaluator == EvaluatorKind::planted && !std::filesystem::exists(planted_fixture))
        throw ConfigError("planted fixture " + planted_fixture.string() + " does not exist");
    const auto combo = operators::expert_combination(baseline);
    if (!combo.fits(problem))
        throw ConfigError("baseline '" + baseline + "' does not fit problem " + std::string(problems::problem_name(problem)));
    offline.validate();
    online.validate();
    if (offline_runs < 1 || online_runs < 1) throw ConfigError("runs must be at least 1");
    if (workers < 1) throw ConfigError("workers must be at least 1");
    search.budget.validate();
    if (search.ap < 0) throw ConfigError("search.ap must be non-negative");
    if (search.window < 1) throw ConfigError("search.window must be at least 1");
    if (search.eval_workers < 1) throw ConfigError("search.eval_workers must be at least 1");
    if (backend != "synthetic" && backend != "remote") throw ConfigError("backend.kind must be synthetic or remote");
    if (validation_pairs < 1 || validation_wall_ms < 1) throw ConfigError("validation settings must be positive");
}

ExperimentConfig parse_config(const KeyValue& raw, const std::filesystem::path& base_dir) {
    KeyValue kv;
    if (raw.has("preset")) kv = config_preset(raw.str("preset"));
    for (const auto& [k, v] : raw.entries())
        if (k != "preset") kv.set(k, v);

    ExperimentConfig c;
    c.problem = problems::parse_problem_kind(kv.str("problem", "bi-tsp"));
    c.instance_dir = resolve(kv.str("instances.dir", "instances"), base_dir);
    c.train = kv.has("instances.train") ? kv.list("instances.train") : std::vector<std::string>{};
    c.test = kv.has("instances.test") ? kv.list("instances.test") : std::vector<std::string>{};
    c.baseline = kv.str("baseline", problems::is_fjsp(c.problem) ? "fjsp-expert" : "ox_swap_2opt");

    c.offline_preset = kv.str("offline.preset", problems::is_fjsp(c.problem) ? "fjsp-offline" : "tsp-offline");
    const auto off = engines::evaluator_preset(c.offline_preset);
    c.offline = engines::read_config(kv, off.moea, "offline.moea.");
    c.offline_runs = static_cast<int>(kv.integer("offline.runs", off.runs));
    c.online_preset = kv.str("online.preset", problems::is_fjsp(c.problem) ? "fjsp-online" : "tsp-online");
    const auto on = engines::evaluator_preset(c.online_preset);
    c.online = engines::read_config(kv, on.moea, "online.moea.");
    c.online_runs = static_cast<int>(kv.integer("online.runs", on.runs));
    c.online_enabled = truthy(kv.str("online.enabled", "1"));
    c.workers = static_cast<int>(kv.integer("workers", 1));

    c.controller = search::parse_controller(kv.str("controller", "e2oc"));
    c.search.budget = search::read_budget(kv, search::SearchBudget{});
    c.search.ap = static_cast<int>(kv.integer("search.ap", c.search.ap));
    c.search.exploration = kv.real("search.exploration", c.search.exploration);
    c.search.window = static_cast<int>(kv.integer("search.window", c.search.window));
    c.search.tuple_children = static_cast<int>(kv.integer("search.tuple_children", c.search.tuple_children));
    c.search.oc_width = static_cast<int>(kv.integer("search.oc_width", c.search.oc_width));
    c.search.eval_workers = static_cast<int>(kv.integer("search.eval_workers", c.search.eval_workers));

    c.backend = kv.str("backend.kind", "synthetic");
    c.synthetic.variants = static_cast<int>(kv.integer("backend.variants", c.synthetic.variants));
    c.synthetic.invalid_rate = kv.real("backend.invalid_rate", c.synthetic.invalid_rate);
    c.synthetic.unparsable_rate = kv.real("backend.unparsable_rate", c.synthetic.unparsable_rate);
    auto& r = c.remote;
    r.base_url = kv.str("backend.base_url", r.base_url);
    r.path = kv.str("backend.path", r.path);
    r.model = kv.str("backend.model", r.model);
    r.temperature = kv.real("backend.temperature", r.temperature);
    r.api_key_env = kv.str("backend.api_key_env", r.api_key_env);
    r.retries = static_cast<int>(kv.integer("backend.retries", r.retries));
    r.backoff = std::chrono::milliseconds(kv.integer("backend.backoff_ms", r.backoff.count()));
    r.timeout = std::chrono::seconds(kv.integer("backend.timeout_s", r.timeout.count()));
    r.concurrency = static_cast<int>(kv.integer("backend.concurrency", r.concurrency));
    r.price_prompt = kv.real("backend.price_prompt", r.price_prompt);
    r.price_completion = kv.real("backend.price_completion", r.price_completion);

    const auto ev = kv.str("evaluator", "moea");
    if (ev == "moea") c.evaluator = EvaluatorKind::moea;
    else if (ev == "planted") c.evaluator = EvaluatorKind::planted;
    else throw ConfigError("evaluator must be moea or planted, got '" + ev + "'");
    c.planted_fixture = resolve(kv.str("planted.fixture", ""), base_dir);

    c.validation_pairs = static_cast<int>(kv.integer("validation.pairs", c.validation_pairs));
    c.validation_wall_ms = static_cast<int>(kv.integer("validation.wall_cap_ms", c.validation_wall_ms));
    c.output = kv.str("output", c.output.string());
    try {
        c.seed = std::stoull(kv.str("seed", "1"));
    } catch (const std::exception&) {
        throw ConfigError("seed must be an unsigned integer");
    }
    c.search.seed = c.seed;
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
    if (!std::filesystem::exists(file)) throw ConfigError("config file " + file.string() + " does not exist");
    return parse_config(KeyValue::load(file), file.parent_path());
}

KeyValue ExperimentConfig::to_kv() const {
    KeyValue kv;
    kv.set("problem", std::string(problems::problem_name(problem)));
    kv.set("instances.dir", std::filesystem::absolute(instance_dir).lexically_normal().string());
    kv.set("instances.train", join(train));
    kv.set("instances.test", join(test));
    kv.set("baseline", baseline);
    kv.set("offline.preset", offline_preset);
    engines::write_config(kv, offline, "offline.moea.");
    kv.set("offline.runs", static_cast<long long>(offline_runs));
    kv.set("online.preset", online_preset);
    engines::write_config(kv, online, "online.moea.");
    kv.set("online.runs", static_cast<long long>(online_runs));
    kv.set("online.enabled", online_enabled ? "1" : "0");
    kv.set("workers", static_cast<long long>(workers));
    kv.set("controller", search::controller_name(controller));
    search::write_budget(kv, search.budget);
    kv.set("search.ap", static_cast<long long>(search.ap));
    kv.set("search.exploration", search.exploration);
    kv.set("search.window", static_cast<long long>(search.window));
    kv.set("search.tuple_children", static_cast<long long>(search.tuple_children));
    kv.set("search.oc_width", static_cast<long long>(search.oc_width));
    kv.set("search.eval_workers", static_cast<long long>(search.eval_workers));
    kv.set("backend.kind", backend);
    kv.set("backend.variants", static_cast<long long>(synthetic.variants));
    kv.set("backend.invalid_rate", synthetic.invalid_rate);
    kv.set("backend.unparsable_rate", synthetic.unparsable_rate);
    kv.set("backend.base_url", remote.base_url);
    kv.set("backend.path", remote.path);
    kv.set("backend.model", remote.model);
    kv.set("backend.temperature", remote.temperature);
    kv.set("backend.api_key_env", remote.api_key_env);
    kv.set("backend.retries", static_cast<long long>(remote.retries));
    kv.set("backend.backoff_ms", static_cast<long long>(remote.backoff.count()));
    kv.set("backend.timeout_s", static_cast<long long>(remote.timeout.count()));
    kv.set("backend.concurrency", static_cast<long long>(remote.concurrency));
    kv.set("backend.price_prompt", remote.price_prompt);
    kv.set("backend.price_completion", remote.price_completion);
    kv.set("evaluator", evaluator == EvaluatorKind::moea ? "moea" : "planted");
    if (!planted_fixture.empty())
        kv.set("planted.fixture", std::filesystem::absolute(planted_fixture).lexically_normal().string());
    kv.set("validation.pairs", static_cast<long long>(validation_pairs));
    kv.set("validation.wall_cap_ms", static_cast<long long>(validation_wall_ms));
    kv.set("output", output.string());
    kv.set("seed", std::to_string(seed));
    return kv;
}

}  // namespace e2oc::cli
