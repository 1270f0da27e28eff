#include <doctest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>

#include "e2oc/common/error.hpp"
#include "e2oc/operators/catalog.hpp"
#include "e2oc/operators/combination.hpp"
#include "e2oc/operators/runtime.hpp"

using namespace e2oc;
using namespace e2oc::operators;
using problems::Genome;

namespace {

const std::filesystem::path kDir = std::filesystem::path(E2OC_FIXTURES) / "sandbox";

bool have_python() { return std::system("python3 -c pass >/dev/null 2>&1") == 0; }

RuntimeConfig cfg() {
    RuntimeConfig c;
    c.command = {"python3", (kDir / "harness.py").string()};
    c.wall_cap = std::chrono::milliseconds(1500);
    return c;
}

std::shared_ptr<problems::TspProblem> tsp(std::size_t k) {
    return std::make_shared<problems::TspProblem>(
        std::make_shared<problems::MotspInstance>(problems::generate_motsp(3, k, 2)), problems::ProblemKind::bi_tsp);
}

Operator external(const char* script, Role role = Role::tsp_mutation) {
    Operator op;
    op.id = script;
    op.role = role;
    op.provenance = Provenance::generated;
    op.binding = ExternalBinding{kDir / script};
    return op;
}

}  // namespace

TEST_CASE("protocol records round trip") {
    VariationRequest r;
    r.id = 42;
    r.role = Role::fjsp_machine_mutation;
    r.parents = {{{0, 1, 1, 0}, {0, 2, 1, 0}}};
    r.seed = 0xffffffffffffffffULL;
    r.params = {{"count", 2}};
    r.instance = "{\"k\":4}";
    auto back = decode_request(encode_request(r));
    CHECK(back.id == 42);
    CHECK(back.role == r.role);
    CHECK(back.parents == r.parents);
    CHECK(back.seed == r.seed);
    CHECK(back.params == r.params);

    VariationResponse ok;
    ok.id = 3;
    ok.ok = true;
    ok.children = {{{2, 0, 1}, {}}};
    auto o = decode_response(encode_response(ok));
    CHECK(o.ok);
    CHECK(o.children == ok.children);
    VariationResponse err;
    err.id = 4;
    err.error_kind = "exception";
    err.message = "boom";
    auto e = decode_response(encode_response(err));
    CHECK_FALSE(e.ok);
    CHECK(e.message == "boom");

    try {
        decode_response("garbage line here");
        FAIL("expected ProtocolError");
    } catch (const ProtocolError& ex) {
        CHECK(std::string(ex.what()).find("garbage line here") != std::string::npos);
    }
    CHECK_THROWS_AS(decode_response("{\"v\":2,\"id\":1,\"status\":\"ok\",\"children\":[]}"), ProtocolError);
    CHECK_THROWS_AS(decode_response("{\"v\":1,\"id\":1,\"status\":\"ok\",\"children\":[]}"), ProtocolError);
}

TEST_CASE("external runtime round trips and fault injection") {
    if (!have_python()) {
        MESSAGE("python3 not available, external runtime test skipped");
        return;
    }
    auto p = tsp(10);
    ExternalRuntime rt(cfg());
    Rng rng(1);
    auto g = p->random_genome(rng);
    std::vector<Genome> parents{g};

    SUBCASE("identity") {
        auto res = apply_operator(external("identity.py"), parents, *p, rng, &rt);
        CHECK(res.valid);
        CHECK(res.children.front() == g);
    }
    SUBCASE("non-permutation is rejected") {
        auto res = apply_operator(external("nonperm.py"), parents, *p, rng, &rt);
        CHECK_FALSE(res.valid);
        CHECK(res.children.front() == g);
    }
    SUBCASE("raise then recover") {
        CHECK_THROWS_AS(apply_operator(external("raises.py"), parents, *p, rng, &rt), OperatorFailure);
        CHECK(rt.alive());
        CHECK_THROWS_AS(apply_operator(external("raises.py"), parents, *p, rng, &rt), OperatorFailure);
        CHECK(rt.launches() == 1);
        CHECK(apply_operator(external("identity.py"), parents, *p, rng, &rt).valid);
    }
    SUBCASE("hang times out within the cap") {
        const auto t0 = std::chrono::steady_clock::now();
        CHECK_THROWS_AS(apply_operator(external("hang.py"), parents, *p, rng, &rt), OperatorFailure);
        const auto dt = std::chrono::steady_clock::now() - t0;
        CHECK(dt < std::chrono::milliseconds(1500 + 500 + 1000));  // cap + 0.5 s + interpreter startup
        CHECK_FALSE(rt.alive());
        CHECK(apply_operator(external("identity.py"), parents, *p, rng, &rt).valid);
    }
    SUBCASE("garbage output is a protocol error") {
        CHECK_THROWS_AS(apply_operator(external("garbage.py"), parents, *p, rng, &rt), ProtocolError);
        CHECK(apply_operator(external("identity.py"), parents, *p, rng, &rt).valid);
    }
    SUBCASE("missing entry fails at startup") {
        CHECK_THROWS_AS(apply_operator(external("no_entry.py"), parents, *p, rng, &rt), OperatorFailure);
    }
}

TEST_CASE("swap reference script matches the native swap") {
    if (!have_python()) {
        MESSAGE("python3 not available, equivalence test skipped");
        return;
    }
    auto p = tsp(15);
    ExternalRuntime rt(cfg());
    Rng rng(9);
    for (int i = 0; i < 1000; ++i) {
        auto g = p->random_genome(rng);
        const auto seed = rng.next();
        std::vector<Genome> parents{g};
        auto ext = rt.apply(ExternalBinding{kDir / "swap.py"}, Role::tsp_mutation, *p, parents, seed);
        Rng native(seed);
        REQUIRE(ext.front().sequence == tsp_swap(g.sequence, native));
    }
    CHECK(rt.launches() == 1);
}
