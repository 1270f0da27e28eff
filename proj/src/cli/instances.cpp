#include "e2oc/cli/instances.hpp"

#include <array>

#include "e2oc/common/error.hpp"
#include "e2oc/common/kv.hpp"
#include "e2oc/common/rng.hpp"
#include "e2oc/moo/front_io.hpp"
#include "e2oc/operators/combination.hpp"
#include "e2oc/problems/motsp.hpp"

namespace e2oc::cli {

namespace fs = std::filesystem;
using problems::ProblemKind;

problems::FjspGeneratorParams mk_params(int index) {
    // jobs, machines, min ops, max ops, max eligible, min duration, max duration
    static const std::array<std::array<int, 7>, 15> table{{
        {10, 6, 5, 7, 3, 1, 7},     {10, 6, 5, 7, 6, 1, 7},     {15, 8, 10, 10, 5, 1, 20},
        {15, 8, 3, 10, 3, 1, 10},   {15, 4, 5, 10, 2, 5, 10},   {10, 15, 15, 15, 5, 1, 10},
        {20, 5, 5, 5, 5, 1, 20},    {20, 10, 10, 14, 2, 5, 20}, {20, 10, 10, 14, 5, 5, 20},
        {20, 15, 10, 14, 5, 5, 20}, {30, 5, 5, 8, 2, 5, 20},    {30, 10, 5, 10, 3, 5, 20},
        {30, 10, 5, 10, 3, 5, 20},  {30, 15, 8, 12, 3, 5, 20},  {30, 15, 8, 12, 3, 5, 20},
    }};
    if (index < 1 || index > 15) throw ConfigError("mk index must be in 1..15");
    const auto& t = table[static_cast<std::size_t>(index - 1)];
    problems::FjspGeneratorParams p;
    p.jobs = t[0];
    p.machines = t[1];
    p.min_ops = t[2];
    p.max_ops = t[3];
    p.max_eligible = t[4];
    p.min_duration = t[5];
    p.max_duration = t[6];
    return p;
}

std::shared_ptr<const problems::Problem> generate_instance(ProblemKind kind, const std::string& id,
                                                           std::uint64_t seed) {
    const auto s = derive_seed(seed, "instance:" + id);
    if (problems::is_fjsp(kind)) {
        if (id.size() != 4 || id.rfind("mk", 0) != 0)
            throw ConfigError("cannot generate FJSP instance '" + id + "': expected mk01..mk15 (import other files)");
        const int index = std::stoi(id.substr(2));
        auto inst = std::make_shared<problems::FjspInstance>(problems::generate_fjsp(s, mk_params(index), id));
        return std::make_shared<problems::FjspProblem>(inst, kind);
    }
    const auto us = id.find('_');
    if (id.rfind("tsp", 0) != 0 || us == std::string::npos || us <= 3)
        throw ConfigError("cannot generate TSP instance '" + id + "': expected tsp<k>_<n>");
    std::size_t k = 0;
    try {
        k = static_cast<std::size_t>(std::stoul(id.substr(3, us - 3)));
    } catch (const std::exception&) {
        throw ConfigError("bad node count in instance id '" + id + "'");
    }
    if (k < 3) throw ConfigError("TSP instances need at least 3 nodes");
    auto inst = std::make_shared<problems::MotspInstance>(problems::generate_motsp(s, k, problems::objective_count(kind), id));
    return std::make_shared<problems::TspProblem>(inst, kind);
}

fs::path instance_file(const fs::path& dir, ProblemKind kind, const std::string& id) {
    if (problems::is_fjsp(kind)) return dir / (id + ".fjs");
    return dir / (id + ".m" + std::to_string(problems::objective_count(kind)) + ".tsp");
}

fs::path metadata_file(const fs::path& dir, ProblemKind kind, const std::string& id) {
    return dir / (id + "." + std::string(problems::problem_name(kind)) + ".kv");
}

void write_instance(const fs::path& dir, const problems::Problem& p) {
    fs::create_directories(dir);
    const auto file = instance_file(dir, p.kind(), p.id());
    if (const auto* f = dynamic_cast<const problems::FjspProblem*>(&p)) write_text(file, problems::serialize_brandimarte(f->instance()));
    else if (const auto* t = dynamic_cast<const problems::TspProblem*>(&p)) write_text(file, problems::format_motsp(t->instance()));
    else throw ContractError("unknown problem type");
}

std::shared_ptr<const problems::Problem> read_instance(const fs::path& dir, ProblemKind kind, const std::string& id) {
    const auto file = instance_file(dir, kind, id);
    if (!fs::exists(file))
        throw ConfigError("instance file " + file.string() + " is missing; run 'e2oc gen-instances' first");
    if (problems::is_fjsp(kind)) {
        auto inst = std::make_shared<problems::FjspInstance>(problems::parse_brandimarte(read_text(file), id));
        return std::make_shared<problems::FjspProblem>(inst, kind);
    }
    auto inst = std::make_shared<problems::MotspInstance>(problems::parse_motsp(read_text(file), id));
    if (inst->objectives() != problems::objective_count(kind))
        throw ConfigError("instance " + id + " has " + std::to_string(inst->objectives()) + " spaces, problem needs " +
                          std::to_string(problems::objective_count(kind)));
    return std::make_shared<problems::TspProblem>(inst, kind);
}

engines::InstanceEntry calibrate_instance(const fs::path& dir, std::shared_ptr<const problems::Problem> p,
                                          const CalibrationSettings& s) {
    write_instance(dir, *p);
    const auto cal = engines::calibrate_context(*p, operators::expert_combination(s.baseline), s.moea, s.runs,
                                                derive_seed(s.seed, "calibrate:" + p->id()));
    KeyValue kv;
    kv.set("id", p->id());
    kv.set("problem", std::string(problems::problem_name(p->kind())));
    kv.set("file", instance_file(dir, p->kind(), p->id()).filename().string());
    kv.set("rng", std::string(kRngName));
    kv.set("seed", std::to_string(s.seed));
    kv.set("calibration.baseline", s.baseline);
    kv.set("calibration.runs", static_cast<long long>(s.runs));
    engines::write_config(kv, s.moea, "calibration.moea.");
    moo::write_hv_context(kv, cal.ctx);
    kv.save(metadata_file(dir, p->kind(), p->id()));
    auto front_file = metadata_file(dir, p->kind(), p->id());
    front_file.replace_extension(".front.tsv");
    moo::save_front(front_file, cal.baseline_front);
    return {std::move(p), cal.ctx};
}

engines::InstanceEntry load_instance(const fs::path& dir, ProblemKind kind, const std::string& id) {
    auto p = read_instance(dir, kind, id);
    const auto meta = metadata_file(dir, kind, id);
    if (!fs::exists(meta))
        throw ConfigError("instance metadata " + meta.string() + " is missing; run 'e2oc gen-instances' first");
    return {std::move(p), moo::read_hv_context(KeyValue::load(meta))};
}

}  // namespace e2oc::cli
