#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "e2oc/common/error.hpp"
#include "e2oc/common/kv.hpp"
#include "e2oc/genesis/backend.hpp"
#include "e2oc/genesis/generate.hpp"
#include "e2oc/genesis/prompt.hpp"
#include "e2oc/genesis/thought.hpp"
#include "e2oc/operators/catalog.hpp"
#include "e2oc/operators/combination.hpp"
#include "e2oc/problems/fjsp.hpp"
#include "e2oc/problems/motsp.hpp"

using namespace e2oc;
using namespace e2oc::genesis;
using operators::Role;
using operators::Validity;

namespace {

const std::filesystem::path kSandbox = std::filesystem::path(E2OC_FIXTURES) / "sandbox";

operators::RuntimeConfig harness() {
    operators::RuntimeConfig c;
    c.command = {"python3", (kSandbox / "harness.py").string()};
    c.wall_cap = std::chrono::milliseconds(500);
    return c;
}

std::vector<std::shared_ptr<const problems::Problem>> tsp_probes() {
    auto inst = std::make_shared<problems::MotspInstance>(problems::generate_motsp(5, 9, 2));
    return {std::make_shared<problems::TspProblem>(inst, problems::ProblemKind::bi_tsp)};
}

std::vector<std::shared_ptr<const problems::Problem>> fjsp_probes() {
    problems::FjspGeneratorParams gp;
    gp.jobs = 4;
    gp.machines = 3;
    auto inst = std::make_shared<problems::FjspInstance>(problems::generate_fjsp(2, gp, "probe"));
    return {std::make_shared<problems::FjspProblem>(inst, problems::ProblemKind::bi_fjsp)};
}

// Replays fixed responses in order.
class ScriptedBackend final : public GeneratorBackend {
public:
    explicit ScriptedBackend(std::vector<std::string> replies) : replies_(std::move(replies)) {}
    std::string kind() const override { return "scripted"; }

protected:
    Completion do_complete(const std::string& prompt, std::uint64_t) override {
        Completion c;
        c.text = replies_.at(next_++ % replies_.size());
        c.usage = {estimate_tokens(prompt), estimate_tokens(c.text), 0.001};
        return c;
    }

private:
    std::vector<std::string> replies_;
    std::size_t next_ = 0;
};

}  // namespace

TEST_CASE("prompt storage keeps initial thoughts at index 0") {
    PromptStorage ps(operators::fjsp_schema());
    CHECK(ps.total() == 4);
    for (auto r : operators::fjsp_schema()) {
        CHECK(ps.at(r, 0).index == 0);
        CHECK(ps.at(r, 0).source_elite.empty());
        CHECK(!ps.at(r, 0).suggestion.empty());
    }
    DesignThought t;
    t.role = Role::fjsp_op_mutation;
    t.index = 7;
    t.suggestion = "swap adjacent operations of the critical job";
    t.template_code = "x";
    t.source_elite = "gen-a";
    CHECK(ps.add(t).index == 1);
    CHECK(ps.at(Role::fjsp_op_mutation, 1).key() == "fjsp-op-mutation#1");
    CHECK_THROWS_AS(ps.at(Role::fjsp_op_mutation, 2), ContractError);
    CHECK_THROWS_AS(ps.of(Role::tsp_mutation), ContractError);
    t.suggestion.clear();
    CHECK_THROWS_AS(ps.add(t), ContractError);

    auto back = PromptStorage::from_json(ps.to_json());
    CHECK(back == ps);
    CHECK_THROWS_AS(PromptStorage::from_json("{"), ConfigError);
}

TEST_CASE("generation prompt structure") {
    auto t0 = initial_thought(Role::tsp_local_search);
    const auto p0 = build_generation_prompt(t0);
    CHECK(p0 == build_generation_prompt(t0));
    CHECK(p0.find(kTaskMarker) != std::string::npos);
    CHECK(p0.find(kExpertMarker) != std::string::npos);
    CHECK(p0.find(kEliteMarker) == std::string::npos);
    CHECK(p0.find(kTemplateMarker) == std::string::npos);
    CHECK(p0.find(kSuggestionMarker) == std::string::npos);
    CHECK(header_value(p0, "Role") == "tsp-local-search");
    CHECK(header_value(p0, "Thought") == "tsp-local-search#0");

    DesignThought t1{Role::tsp_local_search, 1, "scan shorter segments first", "def variation(): pass\n", "gen-x", false};
    const auto p1 = build_generation_prompt(t1, {"native-operator v1\nentry: two_opt\n", ""});
    for (auto m : {kTaskMarker, kSuggestionMarker, kEliteMarker, kExpertMarker, kTemplateMarker})
        CHECK(p1.find(m) != std::string::npos);
    CHECK(p1.find("entry: two_opt") != std::string::npos);
    CHECK(p1 != build_generation_prompt(t1));

    t1.template_code.clear();
    CHECK_THROWS_AS(build_generation_prompt(t1), ConfigError);
}

TEST_CASE("delimited block extraction ignores everything else") {
    const std::string text = "intro\n<<<OPERATOR\nline a\nline b\nOPERATOR>>>\nnoise ```code```\n<<<OPERATOR\nc\nOPERATOR>>>\n<<<OPERATOR\nunterminated\n";
    auto b = extract_blocks(text, "OPERATOR");
    REQUIRE(b.size() == 2);
    CHECK(b[0] == "line a\nline b\n");
    CHECK(b[1] == "c\n");
    CHECK(extract_blocks("def variation(): pass", "OPERATOR").empty());
}

TEST_CASE("synthetic backend is a pure function of prompt and seed") {
    auto task = GenerationTask{Role::fjsp_op_crossover, "fjsp-op-crossover#0",
                               build_generation_prompt(initial_thought(Role::fjsp_op_crossover))};
    SyntheticBackend a, b;
    auto x = generate_candidates(a, task, 10, 42);
    auto y = generate_candidates(b, task, 10, 42);
    REQUIRE(x.candidates.size() == 10);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(x.candidates[i].id == y.candidates[i].id);
        CHECK(x.candidates[i].code == y.candidates[i].code);
        CHECK(x.candidates[i].thought_key == "fjsp-op-crossover#0");
        CHECK(x.candidates[i].provenance == operators::Provenance::generated);
        CHECK(x.candidates[i].variant >= 0);
        CHECK(x.candidates[i].variant < 8);
    }
    auto z = generate_candidates(b, task, 10, 43);
    int same = 0;
    for (std::size_t i = 0; i < 10; ++i) same += x.candidates[i].code == z.candidates[i].code;
    CHECK(same < 10);
    CHECK(a.totals().calls == 10);

    // Candidate count is capped by sam_max.
    auto big = generate_candidates(a, task, 40, 1);
    CHECK(big.requested == 25);
    CHECK(big.candidates.size() == 25);
    CHECK_THROWS_AS(generate_candidates(a, task, 0, 1), ContractError);
}

TEST_CASE("responses without code blocks are dropped and counted") {
    ScriptedBackend none({"I think you should use a better operator.", "```python\ndef variation(): pass\n```"});
    auto task = GenerationTask{Role::tsp_mutation, "tsp-mutation#0", build_generation_prompt(initial_thought(Role::tsp_mutation))};
    auto batch = generate_candidates(none, task, 6, 1);
    CHECK(batch.candidates.empty());
    CHECK(batch.dropped == 6);

    // Wrong-role native specs and external code without a script directory are dropped too.
    ScriptedBackend wrong({format_code_block("OPERATOR", "native-operator v1\nentry: pox\n"),
                           format_code_block("OPERATOR", "def variation(role, instance, parents, seed, params):\n    return parents\n")});
    batch = generate_candidates(wrong, task, 2, 1);
    CHECK(batch.dropped == 2);
}

TEST_CASE("validation of catalog, broken and synthetic candidates") {
    const auto tp = tsp_probes();
    const auto fp = fjsp_probes();
    for (const auto& e : operators::native_catalog()) {
        for (auto role : e.roles) {
            if (e.entry == "identity") continue;
            auto op = operators::make_native("t/" + e.entry, role, e.entry);
            const auto& probes = operators::role_is_fjsp(role) ? fp : tp;
            auto rep = validate_operator(op, probes);
            CHECK(rep.probes == 8);
            if (e.broken) {
                CHECK(rep.status == Validity::invalid);
                CHECK(rep.cause == "invariant-violation");
                CHECK(rep.failures > 0);
            } else {
                CHECK(rep.status == Validity::valid);
                CHECK(rep.failures == 0);
            }
        }
    }

    SyntheticBackend broken_often(SyntheticSettings{8, 0.5, 0.0});
    GenerationOptions opts;
    opts.probes = tp;
    auto task = GenerationTask{Role::tsp_local_search, "tsp-local-search#0",
                               build_generation_prompt(initial_thought(Role::tsp_local_search))};
    auto batch = generate_candidates(broken_often, task, 25, 9, opts);
    const auto valid = batch.valid();
    CHECK(valid.size() < batch.candidates.size());
    CHECK(!valid.empty());
    for (const auto& c : batch.candidates) CHECK(c.validation.status != Validity::unchecked);
}

TEST_CASE("validation of external scripts") {
    operators::ExternalRuntime rt(harness());
    const auto tp = tsp_probes();
    auto ext = [](const char* file) {
        operators::Operator op;
        op.id = file;
        op.role = Role::tsp_mutation;
        op.provenance = operators::Provenance::generated;
        op.binding = operators::ExternalBinding{kSandbox / file, "variation"};
        return op;
    };
    auto rep = validate_operator(ext("identity.py"), tp, {}, &rt);
    CHECK(rep.status == Validity::valid);
    rep = validate_operator(ext("nonperm.py"), tp, {}, &rt);
    CHECK(rep.status == Validity::invalid);
    CHECK(rep.cause == "invariant-violation");
    rep = validate_operator(ext("hang.py"), tp, {}, &rt);
    CHECK(rep.status == Validity::invalid);
    CHECK(rep.cause == "timeout");
    rep = validate_operator(ext("raises.py"), tp, {}, &rt);
    CHECK(rep.status == Validity::invalid);
    CHECK(rep.cause == "operator-failure");

    // External code from a backend is written to the script directory and bound.
    const auto dir = std::filesystem::temp_directory_path() / "e2oc_gen_scripts";
    std::filesystem::remove_all(dir);
    ScriptedBackend py({format_code_block("OPERATOR", read_text(kSandbox / "identity.py"))});
    GenerationOptions opts;
    opts.script_dir = dir;
    opts.probes = tp;
    opts.runtime = &rt;
    auto batch = generate_candidates(py, {Role::tsp_mutation, "tsp-mutation#0", "Request: generate-operator\n"}, 2, 3, opts);
    REQUIRE(batch.candidates.size() == 2);
    CHECK(!batch.candidates[0].is_native());
    CHECK(std::filesystem::exists(std::get<operators::ExternalBinding>(batch.candidates[0].binding).script));
    CHECK(batch.valid().size() == 2);
    std::filesystem::remove_all(dir);
}

TEST_CASE("design thought extraction") {
    auto elite = operators::make_native("gen-e1", Role::fjsp_machine_mutation, "machine_reassign");
    elite.code = native_code(std::get<operators::NativeBinding>(elite.binding), 3);
    SyntheticBackend s;
    auto a = extract_design_thought(elite, 0.4, s, 1);
    auto b = extract_design_thought(elite, 0.4, s, 1);
    CHECK(a == b);
    CHECK(!a.degraded);
    CHECK(a.source_elite == "gen-e1");
    CHECK(a.suggestion.find("gen-e1") != std::string::npos);
    CHECK(s.totals().calls == 2);

    ScriptedBackend junk({"no blocks here"});
    auto d = extract_design_thought(elite, 0.4, junk, 1);
    CHECK(d.degraded);
    CHECK(!d.suggestion.empty());
    CHECK(junk.totals().calls == 2);  // one retry

    ScriptedBackend second({"junk", format_code_block("THOUGHT", "use the least loaded machine") +
                                         format_code_block("TEMPLATE", "tmpl")});
    auto e = extract_design_thought(elite, 0.4, second, 1);
    CHECK(!e.degraded);
    CHECK(e.suggestion == "use the least loaded machine");

    // Appending to storage gives consecutive indices.
    PromptStorage ps(operators::fjsp_schema());
    CHECK(ps.add(a).index == 1);
    CHECK(ps.add(d).index == 2);
    CHECK(ps.at(Role::fjsp_machine_mutation, 2).degraded);
}

TEST_CASE("usage counters equal the sum of per-call records") {
    SyntheticBackend s;
    auto task = GenerationTask{Role::tsp_crossover, "tsp-crossover#0", build_generation_prompt(initial_thought(Role::tsp_crossover))};
    long long last = 0;
    for (int i = 0; i < 5; ++i) {
        generate_candidates(s, task, 3, static_cast<std::uint64_t>(i));
        CHECK(s.totals().prompt_tokens > last);
        last = s.totals().prompt_tokens;
    }
    long long p = 0, c = 0;
    for (const auto& r : s.records()) p += r.usage.prompt_tokens, c += r.usage.completion_tokens;
    CHECK(s.totals().calls == 15);
    CHECK(p == s.totals().prompt_tokens);
    CHECK(c == s.totals().completion_tokens);
}

TEST_CASE("remote backend against a local chat-completion server") {
    httplib::Server srv;
    std::atomic<int> hits{0}, fail_first{0};
    std::atomic<int> status_override{0};
    std::atomic<int> in_flight{0}, peak{0};
    srv.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        ++hits;
        const int now = ++in_flight;
        int p = peak.load();
        while (now > p && !peak.compare_exchange_weak(p, now)) {}
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
        --in_flight;
        if (status_override.load()) {
            res.status = status_override.load();
            return;
        }
        if (fail_first.load() > 0) {
            --fail_first;
            res.status = 503;
            return;
        }
        const auto body = nlohmann::json::parse(req.body);
        const bool authed = req.get_header_value("Authorization") == "Bearer test-key";
        const std::string content = body["messages"][0]["content"];
        const std::string role = header_value(content, "Role");
        nlohmann::json out{
            {"choices", {{{"message", {{"role", "assistant"},
                                       {"content", "ok " + std::string(authed ? "authed" : "anon") + "\n" +
                                                       format_code_block("OPERATOR", "native-operator v1\nentry: swap\nparam.count: 2\n")}}}}}},
            {"usage", {{"prompt_tokens", 100}, {"completion_tokens", 20}}},
            {"model", body["model"]}};
        res.set_content(out.dump(), "application/json");
    });
    const int port = srv.bind_to_any_port("127.0.0.1");
    std::thread th([&] { srv.listen_after_bind(); });
    srv.wait_until_ready();

    ::setenv("E2OC_TEST_KEY", "test-key", 1);
    RemoteSettings rs;
    rs.base_url = "http://127.0.0.1:" + std::to_string(port);
    rs.path = "/v1/chat/completions";
    rs.api_key_env = "E2OC_TEST_KEY";
    rs.backoff = std::chrono::milliseconds(1);
    rs.concurrency = 4;
    RemoteBackend rb(rs);
    const auto log_file = std::filesystem::temp_directory_path() / "e2oc_audit_test.jsonl";
    std::filesystem::remove(log_file);
    rb.set_audit_log(std::make_shared<AuditLog>(log_file));

    auto c = rb.complete("Request: generate-operator\nRole: tsp-mutation\n", 1);
    CHECK(c.text.rfind("ok authed", 0) == 0);
    CHECK(c.usage.prompt_tokens == 100);
    CHECK(c.usage.completion_tokens == 20);
    CHECK(c.usage.cost == doctest::Approx((100 * 0.27 + 20 * 1.10) / 1e6));

    // Transient failures are retried.
    fail_first = 2;
    hits = 0;
    CHECK_NOTHROW(rb.complete("again", 2));
    CHECK(hits == 3);

    // Persistent server errors exhaust the retries.
    status_override = 500;
    hits = 0;
    CHECK_THROWS_AS(rb.complete("fails", 3), BackendError);
    CHECK(hits == 4);
    // Client errors are not retried.
    status_override = 401;
    hits = 0;
    CHECK_THROWS_AS(rb.complete("denied", 4), BackendError);
    CHECK(hits == 1);
    status_override = 0;

    // Candidate generation through the remote backend, bounded concurrency.
    hits = 0;
    auto task = GenerationTask{Role::tsp_mutation, "tsp-mutation#0", build_generation_prompt(initial_thought(Role::tsp_mutation))};
    auto batch = generate_candidates(rb, task, 8, 5);
    CHECK(hits == 8);
    CHECK(batch.candidates.size() == 8);
    CHECK(peak.load() <= 4);
    CHECK(std::get<operators::NativeBinding>(batch.candidates[0].binding).params.at("count") == 2.0);

    const auto totals = rb.totals();
    CHECK(totals.calls == 12);
    CHECK(totals.failures == 2);
    CHECK(totals.prompt_tokens == 100 * 10);

    // One audit record per call.
    const auto log = read_text(log_file);
    CHECK(std::count(log.begin(), log.end(), '\n') == 12);
    const auto first = nlohmann::json::parse(log.substr(0, log.find('\n')));
    CHECK(first["backend"] == "remote-chat");
    CHECK(first["prompt_tokens"] == 100);
    CHECK(first.contains("timestamp"));

    srv.stop();
    th.join();
    std::filesystem::remove(log_file);

    // Nothing listening: transport failure becomes a backend error.
    rs.base_url = "http://127.0.0.1:" + std::to_string(port);
    rs.retries = 1;
    RemoteBackend dead(rs);
    CHECK_THROWS_AS(dead.complete("x", 1), BackendError);
}
