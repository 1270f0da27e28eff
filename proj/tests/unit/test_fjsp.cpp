#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>

#include "e2oc/common/error.hpp"
#include "e2oc/common/kv.hpp"
#include "e2oc/problems/fjsp.hpp"
#include "oracles.hpp"

using namespace e2oc;
using namespace e2oc::problems;

namespace {

FjspInstance load_fixture(const std::string& name) {
    return parse_brandimarte(read_text(std::filesystem::path(E2OC_FIXTURES) / name), name);
}

}  // namespace

TEST_CASE("parse the toy fixture") {
    auto inst = load_fixture("toy2x2.fjs");
    CHECK(inst.job_count() == 2);
    CHECK(inst.machines == 2);
    CHECK(inst.jobs[0].size() == 2);
    CHECK(inst.jobs[1].size() == 2);
    CHECK(inst.jobs[0][0] == std::vector<FjspOption>{{0, 3}, {1, 2}});
    CHECK(inst.jobs[1][1] == std::vector<FjspOption>{{0, 1}, {1, 3}});
    CHECK(inst.operation_count() == 4);
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(load_fixture("zero_eligible.fjs"), ParseError);
    try {
        load_fixture("zero_eligible.fjs");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_brandimarte("1 2\n1 1 3 5\n"), ParseError);   // machine 3 of 2
    CHECK_THROWS_AS(parse_brandimarte("2 2\n1 1 1 5\n"), ParseError);   // truncated
    CHECK_THROWS_AS(parse_brandimarte("x y\n"), ParseError);
    CHECK_THROWS_AS(parse_brandimarte("1 1\n1 1 1 0\n"), ParseError);
}

TEST_CASE("parse serialize parse is idempotent") {
    for (const char* name : {"toy2x2.fjs", "toy3x3.fjs"}) {
        auto a = load_fixture(name);
        auto b = parse_brandimarte(serialize_brandimarte(a), name);
        CHECK(a == b);
        CHECK(serialize_brandimarte(a) == serialize_brandimarte(b));
    }
    auto g = generate_fjsp(5, {}, "g");
    CHECK(parse_brandimarte(serialize_brandimarte(g), "g") == g);
}

TEST_CASE("mk01 header from the public benchmark") {
    const char* dir = std::getenv("E2OC_BRANDIMARTE_DIR");
    if (!dir || !std::filesystem::exists(std::filesystem::path(dir) / "Mk01.fjs")) {
        MESSAGE("E2OC_BRANDIMARTE_DIR not set or Mk01.fjs absent, mk01 check skipped");
        return;
    }
    auto inst = parse_brandimarte(read_text(std::filesystem::path(dir) / "Mk01.fjs"), "mk01");
    CHECK(inst.job_count() == 10);
    CHECK(inst.machines == 6);
}

TEST_CASE("single operation decodes to its duration") {
    FjspInstance inst{"one", 1, {{{{0, 5}}}}};
    auto f = decode_fjsp({{0}, {0}}, inst, 3);
    CHECK(f == moo::ObjectiveVector{5, 5, 5});
}

TEST_CASE("earliest gap insertion fills idle time") {
    // Job 0: m0 for 2 then m1 for 5. Job 1: m1 for 2.
    // Sequence 0,0,1: job 1 goes into the idle gap [0,2) on m1.
    FjspInstance inst{"gap", 2, {{{{0, 2}}, {{1, 5}}}, {{{1, 2}}}}};
    auto s = decode_schedule({{0, 0, 1}, {0, 0, 0}}, inst);
    CHECK(s.operations[2].start == 0);
    CHECK(s.makespan == 7);
    CHECK(oracle::schedule_ok(s, inst));
}

TEST_CASE("decode oracle on the toy fixture") {
    for (const char* name : {"toy2x2.fjs", "toy3x3.fjs"}) {
        auto inst = load_fixture(name);
        long long best = std::numeric_limits<long long>::max();
        std::size_t count = 0;
        oracle::for_each_encoding(inst, [&](const FjspSolution& s) {
            auto sched = decode_schedule(s, inst);
            CHECK(oracle::schedule_ok(sched, inst));
            CHECK(sched.makespan >= sched.max_load());
            auto bi = schedule_objectives(sched, 2), tri = schedule_objectives(sched, 3);
            CHECK(std::equal(bi.begin(), bi.end(), tri.begin()));
            auto lb = fjsp_lower_bound(inst, 3);
            for (int m = 0; m < 3; ++m) CHECK(tri[m] >= lb[m]);
            best = std::min(best, sched.makespan);
            ++count;
        });
        CHECK(count > 0);
        CHECK(best == oracle::fjsp_makespan(inst));
    }
}

TEST_CASE("encoding invariants are enforced") {
    auto inst = load_fixture("toy2x2.fjs");
    CHECK_THROWS_AS(decode_fjsp({{0, 0, 1}, {0, 0, 0, 0}}, inst, 2), InfeasibleEncoding);
    CHECK_THROWS_AS(decode_fjsp({{0, 0, 0, 1}, {0, 0, 0, 0}}, inst, 2), InfeasibleEncoding);
    CHECK_THROWS_AS(decode_fjsp({{0, 0, 1, 1}, {0, 1, 0, 0}}, inst, 2), InfeasibleEncoding);
    CHECK_THROWS_AS(decode_fjsp({{0, 0, 1, 2}, {0, 0, 0, 0}}, inst, 2), InfeasibleEncoding);
    CHECK(fjsp_feasible({{1, 0, 1, 0}, {1, 0, 0, 1}}, inst));
}

TEST_CASE("random solutions and generated instances are feasible") {
    auto inst = generate_fjsp(42, {}, "gen");
    inst.validate();
    CHECK(inst.job_count() == 10);
    CHECK(generate_fjsp(42, {}, "gen") == inst);
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        auto s = random_fjsp_solution(inst, rng);
        REQUIRE(fjsp_feasible(s, inst));
        CHECK(oracle::schedule_ok(decode_schedule(s, inst), inst));
    }
    FjspProblem p(std::make_shared<FjspInstance>(inst), ProblemKind::tri_fjsp);
    CHECK(p.objectives() == 3);
    CHECK(p.evaluate(p.random_genome(rng)).size() == 3);
}
