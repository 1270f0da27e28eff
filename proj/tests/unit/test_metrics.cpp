#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "e2oc/common/error.hpp"
#include "e2oc/common/rng.hpp"
#include "e2oc/moo/front_io.hpp"
#include "e2oc/moo/hypervolume.hpp"
#include "e2oc/moo/metrics.hpp"
#include "oracles.hpp"

using namespace e2oc::moo;

TEST_CASE("igd equals nested-loop mean of nearest distances") {
    e2oc::Rng r(4);
    for (int t = 0; t < 20; ++t) {
        const std::size_t m = 2 + t % 3;
        std::vector<ObjectiveVector> a(1 + r.below(20), ObjectiveVector(m)), b(1 + r.below(20), ObjectiveVector(m));
        for (auto& p : a)
            for (auto& x : p) x = r.uniform();
        for (auto& p : b)
            for (auto& x : p) x = r.uniform();
        CHECK(igd_raw(a, b) == doctest::Approx(oracle::igd(a, b)).epsilon(1e-12));
    }
    CHECK(std::isinf(igd_raw({}, std::vector<ObjectiveVector>{{0, 0}})));
}

TEST_CASE("igd is computed in normalized space") {
    HvContext ctx{{0, 0}, {10, 100}};
    ParetoArchive f;
    f.insert("a", {5, 50});
    ReferenceFront ref{{{5, 0}}, "hand"};
    CHECK(igd(f, ref, ctx) == doctest::Approx(0.5));
    ReferenceFront self{{{5, 50}}, "self"};
    CHECK(igd(f, self, ctx) == 0.0);
}

TEST_CASE("relative improvement") {
    CHECK(relative_improvement(0.2435, 0.1996) == doctest::Approx(21.994).epsilon(1e-4));
    CHECK(relative_improvement(0.1746, 0.1732) == doctest::Approx(0.8083).epsilon(1e-3));
    CHECK_THROWS_AS(relative_improvement(1.0, 0.0), e2oc::UndefinedBaseline);
}

TEST_CASE("aggregate fitness averages runs and flags empties") {
    HvContext ctx{{0, 0}, {1, 1}};
    ParetoArchive a, b, empty;
    a.insert("x", {0.5, 0.5});
    b.insert("y", {0.0, 0.5});
    std::vector<ParetoArchive> runs{a, b};
    auto agg = aggregate_fitness(runs, ctx);
    CHECK(agg.value == doctest::Approx((0.25 + 0.5) / 2));
    CHECK_FALSE(agg.flagged);
    runs.push_back(empty);
    agg = aggregate_fitness(runs, ctx);
    CHECK(agg.value == doctest::Approx(0.75 / 3));
    CHECK(agg.flagged);
}

TEST_CASE("front and context files round trip") {
    auto dir = std::filesystem::temp_directory_path() / "e2oc_front_test";
    std::filesystem::remove_all(dir);
    ParetoArchive f;
    f.insert("s1", {0.1, 1.0 / 3.0});
    f.insert("s2", {0.05, 7.25});
    save_front(dir / "front.tsv", f);
    auto back = load_front(dir / "front.tsv");
    CHECK(back.points() == f.points());
    CHECK(back.entries()[1].id == "s2");
    HvContext ctx{{0.5, 1}, {3.3, 4.4}};
    save_hv_context(dir / "hv.kv", ctx);
    CHECK(load_hv_context(dir / "hv.kv") == ctx);
    CHECK_THROWS_AS(parse_front("a\t1\tx\n"), e2oc::ParseError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("reference front union") {
    ParetoArchive a, b;
    a.insert("a", {1, 3});
    a.insert("b", {3, 1});
    b.insert("c", {2, 2});
    b.insert("d", {1, 3});
    std::vector<ParetoArchive> fr{a, b};
    auto rf = ReferenceFront::from_union(fr, "test");
    CHECK(rf.points.size() == 3);
    CHECK(rf.points.front() == ObjectiveVector{1, 3});
}
