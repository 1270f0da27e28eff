#include "e2oc/genesis/generate.hpp"

#include <chrono>
#include <cstdio>
#include <future>
#include <sstream>

#include "e2oc/common/error.hpp"
#include "e2oc/common/kv.hpp"
#include "e2oc/common/rng.hpp"
#include "e2oc/genesis/prompt.hpp"
#include "e2oc/operators/catalog.hpp"
#include "e2oc/operators/combination.hpp"

namespace e2oc::genesis {

using operators::Operator;
using operators::ValidationReport;
using operators::Validity;

ValidationReport validate_operator(const Operator& op, std::span<const std::shared_ptr<const problems::Problem>> probes,
                                   const ValidationOptions& opts, operators::ExternalRuntime* runtime) {
    ValidationReport rep;
    rep.status = Validity::valid;
    Rng rng(derive_seed(opts.seed, "validate:" + op.id));
    for (const auto& p : probes) {
        for (int k = 0; k < opts.pairs; ++k) {
            std::vector<problems::Genome> parents{p->random_genome(rng)};
            if (op.arity() == 2) parents.push_back(p->random_genome(rng));
            ++rep.probes;
            const auto t0 = std::chrono::steady_clock::now();
            std::string cause, detail;
            try {
                const auto r = operators::apply_operator(op, parents, *p, rng, runtime);
                if (!r.valid) cause = "invariant-violation", detail = r.reason;
            } catch (const OperatorFailure& e) {
                detail = e.what();
                cause = detail.find("timeout") != std::string::npos || detail.find("timed out") != std::string::npos
                            ? "timeout"
                            : "operator-failure";
            }
            if (cause.empty() && std::chrono::steady_clock::now() - t0 > opts.wall_cap)
                cause = "timeout", detail = "probe exceeded the wall cap";
            if (!cause.empty()) {
                ++rep.failures;
                if (rep.status == Validity::valid) {
                    rep.status = Validity::invalid;
                    rep.cause = cause;
                    rep.detail = detail.substr(0, 300);
                }
                // A hanging operator would hang on every probe; stop early.
                if (cause == "timeout") return rep;
            }
        }
    }
    return rep;
}

std::vector<Operator> CandidateBatch::valid() const {
    std::vector<Operator> out;
    for (const auto& c : candidates)
        if (c.validation.status == Validity::valid) out.push_back(c);
    return out;
}

std::optional<Operator> operator_from_code(const std::string& code, Role role, const std::string& id,
                                           const std::optional<std::filesystem::path>& script_dir) {
    Operator op;
    op.id = id;
    op.role = role;
    op.provenance = operators::Provenance::generated;
    op.code = code;
    std::istringstream in(code);
    std::string first;
    std::getline(in, first);
    if (first == "native-operator v1") {
        operators::NativeBinding b;
        std::string line;
        while (std::getline(in, line)) {
            const auto colon = line.find(": ");
            if (line.empty() || line[0] == '#') continue;
            if (colon == std::string::npos) return std::nullopt;
            const auto key = line.substr(0, colon), value = line.substr(colon + 2);
            try {
                if (key == "entry") b.entry = value;
                else if (key == "variant") op.variant = std::stoi(value);
                else if (key.rfind("param.", 0) == 0) b.params[key.substr(6)] = std::stod(value);
                else return std::nullopt;
            } catch (const std::exception&) {
                return std::nullopt;
            }
        }
        try {
            const auto& e = operators::find_entry(b.entry);
            if (std::find(e.roles.begin(), e.roles.end(), role) == e.roles.end()) return std::nullopt;
        } catch (const ConfigError&) {
            return std::nullopt;
        }
        op.binding = std::move(b);
        return op;
    }
    if (!script_dir || id.find('/') != std::string::npos) return std::nullopt;
    std::filesystem::create_directories(*script_dir);
    const auto file = *script_dir / (id + ".py");
    write_text(file, code);
    op.binding = operators::ExternalBinding{file, "variation"};
    return op;
}

namespace {

std::string candidate_id(Role role, std::uint64_t digest, std::uint64_t seed, int j) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(derive_seed({digest, seed, static_cast<std::uint64_t>(j)})));
    std::string r(operators::role_name(role));
    return "gen-" + r + "-" + buf;
}

}  // namespace

CandidateBatch generate_candidates(GeneratorBackend& backend, const GenerationTask& task, int count,
                                   std::uint64_t seed, const GenerationOptions& opts) {
    if (count < 1) throw ContractError("candidate count must be at least 1");
    if (opts.sam_max < 1) throw ConfigError("sam_max must be at least 1");
    count = std::min(count, opts.sam_max);
    const auto digest = fnv1a64(task.prompt);
    std::vector<std::string> responses(static_cast<std::size_t>(count));
    const int lanes = std::max(1, backend.concurrency());
    auto call = [&](int j) {
        responses[static_cast<std::size_t>(j)] =
            backend.complete(task.prompt, derive_seed({seed, static_cast<std::uint64_t>(j)})).text;
    };
    if (lanes == 1) {
        for (int j = 0; j < count; ++j) call(j);
    } else {
        for (int start = 0; start < count; start += lanes) {
            std::vector<std::future<void>> fs;
            for (int j = start; j < std::min(count, start + lanes); ++j) fs.push_back(std::async(std::launch::async, call, j));
            std::exception_ptr err;
            for (auto& f : fs) {
                try {
                    f.get();
                } catch (...) {
                    if (!err) err = std::current_exception();
                }
            }
            if (err) std::rethrow_exception(err);
        }
    }

    CandidateBatch batch;
    batch.requested = count;
    for (int j = 0; j < count; ++j) {
        const auto blocks = extract_blocks(responses[static_cast<std::size_t>(j)], "OPERATOR");
        std::optional<Operator> op;
        if (!blocks.empty())
            op = operator_from_code(blocks.front(), task.role, candidate_id(task.role, digest, seed, j), opts.script_dir);
        if (!op) {
            ++batch.dropped;
            continue;
        }
        op->thought_key = task.thought_key;
        if (!opts.probes.empty()) op->validation = validate_operator(*op, opts.probes, opts.validation, opts.runtime);
        batch.candidates.push_back(std::move(*op));
    }
    return batch;
}

DesignThought extract_design_thought(const Operator& elite, double fitness, GeneratorBackend& backend,
                                     std::uint64_t seed) {
    const std::string code = elite.code.empty() ? expert_template(elite.role) : elite.code;
    const auto prompt = build_analysis_prompt(elite.role, elite.id, code, fitness);
    DesignThought t;
    t.role = elite.role;
    t.index = -1;
    t.source_elite = elite.id;
    for (int attempt = 0; attempt < 2; ++attempt) {
        const auto text = backend.complete(prompt, derive_seed({seed, static_cast<std::uint64_t>(attempt)})).text;
        const auto th = extract_blocks(text, "THOUGHT");
        const auto tp = extract_blocks(text, "TEMPLATE");
        if (th.empty() || tp.empty()) continue;
        auto s = th.front();
        while (!s.empty() && (s.back() == '\n' || s.back() == ' ')) s.pop_back();
        if (s.empty()) continue;
        t.suggestion = std::move(s);
        t.template_code = tp.front();
        return t;
    }
    t.suggestion = "Keep the structure of " + elite.id + " and vary its parameters conservatively.";
    t.template_code = code;
    t.degraded = true;
    return t;
}

}  // namespace e2oc::genesis
