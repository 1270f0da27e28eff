#include <doctest.h>

#include <limits>

#include "e2oc/common/error.hpp"
#include "e2oc/common/rng.hpp"
#include "e2oc/moo/archive.hpp"
#include "e2oc/moo/dominance.hpp"
#include "oracles.hpp"

using namespace e2oc::moo;

namespace {

std::vector<ObjectiveVector> random_pop(e2oc::Rng& r, std::size_t n, std::size_t m) {
    std::vector<ObjectiveVector> pop(n, ObjectiveVector(m));
    for (auto& p : pop)
        for (auto& v : p) v = static_cast<double>(r.below(6));
    return pop;
}

}  // namespace

TEST_CASE("dominance basics") {
    CHECK(dominates({1, 2}, {2, 2}));
    CHECK_FALSE(dominates({1, 2}, {1, 2}));
    CHECK_FALSE(dominates({1, 3}, {2, 2}));
    CHECK_THROWS_AS(dominates({1, 2}, {1, 2, 3}), e2oc::DimensionError);
}

TEST_CASE("non-dominated sort matches brute-force peeling") {
    e2oc::Rng r(2024);
    for (int t = 0; t < 50; ++t) {
        auto pop = random_pop(r, 1 + r.below(60), 2 + r.below(3));
        CHECK(pareto_ranks(pop) == oracle::pareto_ranks(pop));
        auto fronts = non_dominated_sort(pop);
        std::size_t total = 0;
        for (auto& f : fronts) {
            total += f.size();
            CHECK(std::is_sorted(f.begin(), f.end()));
        }
        CHECK(total == pop.size());
    }
}

TEST_CASE("crowding distance on a line") {
    std::vector<ObjectiveVector> f{{0, 4}, {1, 3}, {3, 1}, {4, 0}};
    auto d = crowding_distance(f);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(d[0] == inf);
    CHECK(d[3] == inf);
    CHECK(d[1] == doctest::Approx(3.0 / 4 + 3.0 / 4));
    CHECK(d[2] == doctest::Approx(3.0 / 4 + 3.0 / 4));
    CHECK(crowding_distance(std::vector<ObjectiveVector>{{1, 1}, {2, 0}})[0] == inf);
}

TEST_CASE("archive keeps only distinct non-dominated points") {
    ParetoArchive a;
    CHECK(a.insert("a", {2, 2}));
    CHECK_FALSE(a.insert("b", {2, 2}));
    CHECK_FALSE(a.insert("c", {3, 3}));
    CHECK(a.insert("d", {1, 3}));
    CHECK(a.insert("e", {1, 1}));
    CHECK(a.size() == 1);
    CHECK(a.entries()[0].id == "e");
    CHECK_THROWS_AS(a.insert("f", {1}), e2oc::DimensionError);
    CHECK_THROWS_AS(a.insert("g", {0, std::numeric_limits<double>::quiet_NaN()}), e2oc::DimensionError);

    e2oc::Rng r(8);
    auto pop = random_pop(r, 80, 3);
    auto arch = ParetoArchive::from_points(pop);
    ParetoArchive inc;
    for (std::size_t i = 0; i < pop.size(); ++i) inc.insert("p" + std::to_string(i), pop[i]);
    CHECK(arch.sorted().points() == inc.sorted().points());
    auto ranks = oracle::pareto_ranks(pop);
    for (const auto& e : arch.entries()) CHECK(ranks[std::stoul(e.id.substr(1))] == 0);
}

TEST_CASE("hv context from baseline nadir") {
    std::vector<ObjectiveVector> base{{10, 2}, {4, 5}};
    auto ctx = make_hv_context({1, 1}, base);
    CHECK(ctx.reference[0] == doctest::Approx(11.0));
    CHECK(ctx.reference[1] == doctest::Approx(5.5));
    CHECK_THROWS_AS(make_hv_context({20, 1}, base), e2oc::ContractError);
    CHECK_THROWS_AS(make_hv_context({1, 1, 1}, base), e2oc::DimensionError);
    CHECK_THROWS_AS(make_hv_context({1, 1}, {}), e2oc::ContractError);
}
