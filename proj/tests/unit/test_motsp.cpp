#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "e2oc/common/error.hpp"
#include "e2oc/problems/motsp.hpp"

using namespace e2oc;
using namespace e2oc::problems;

TEST_CASE("generation is deterministic and round-trips") {
    auto a = generate_motsp(1, 20, 2);
    auto b = generate_motsp(1, 20, 2);
    CHECK(format_motsp(a) == format_motsp(b));
    CHECK(format_motsp(a) != format_motsp(generate_motsp(2, 20, 2)));
    auto c = parse_motsp(format_motsp(a));
    CHECK(c == a);
    CHECK(a.generator == "splitmix64-ctr/v1");
    CHECK_THROWS_AS(parse_motsp("k 3\nM 2\n"), ParseError);
    CHECK_THROWS_AS(generate_motsp(1, 2, 2), ConfigError);
}

TEST_CASE("coordinates are uniform on the unit square") {
    auto inst = generate_motsp(7, 50000, 2);
    std::vector<int> hist(100, 0);
    for (const auto& s : inst.spaces)
        for (const auto& p : s) {
            REQUIRE(p[0] >= 0.0);
            REQUIRE(p[0] < 1.0);
            ++hist[int(p[0] * 10) * 10 + int(p[1] * 10)];
        }
    const double expect = 100000.0 / 100;
    double chi = 0.0;
    for (int h : hist) chi += (h - expect) * (h - expect) / expect;
    // chi-square 99 dof, 0.99 quantile
    CHECK(chi < 134.64);
}

TEST_CASE("unit square perimeter") {
    MotspInstance inst;
    inst.spaces = {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 0}, {1, 1}, {1, 0}, {0, 1}}};
    auto f = tour_objectives({0, 1, 2, 3}, inst);
    CHECK(f[0] == doctest::Approx(4.0));
    CHECK(f[1] == doctest::Approx(2.0 + 2.0 * std::sqrt(2.0)));
    CHECK_THROWS_AS(tour_objectives({0, 1, 1, 3}, inst), InfeasibleEncoding);
}

TEST_CASE("rotation and reversal invariance, k = 3 constant") {
    auto inst = generate_motsp(3, 9, 3);
    DistanceTables d(inst);
    Tour t{4, 2, 7, 0, 8, 1, 3, 6, 5};
    auto f = tour_objectives(t, d);
    auto r = t;
    std::reverse(r.begin(), r.end());
    auto g = tour_objectives(r, d);
    for (int m = 0; m < 3; ++m) CHECK(g[m] == f[m]);
    std::rotate(r.begin(), r.begin() + 3, r.end());
    g = tour_objectives(r, d);
    for (int m = 0; m < 3; ++m) CHECK(g[m] == f[m]);

    auto tri = generate_motsp(4, 3, 2);
    DistanceTables dt(tri);
    Tour p{0, 1, 2};
    auto base = tour_objectives(p, dt);
    while (std::next_permutation(p.begin(), p.end())) {
        auto h = tour_objectives(p, dt);
        CHECK(h[0] == doctest::Approx(base[0]));
        CHECK(h[1] == doctest::Approx(base[1]));
    }
}

TEST_CASE("objective 1 optimum and lower bound against enumeration") {
    auto inst = generate_motsp(11, 8, 2);
    DistanceTables d(inst);
    Tour t(8);
    std::iota(t.begin(), t.end(), 0);
    double best = 1e300;
    // Fix node 0 first; 7! orders cover every cyclic tour.
    do {
        double len = 0.0;
        for (int i = 0; i < 8; ++i) {
            const auto& a = inst.spaces[0][t[i]];
            const auto& b = inst.spaces[0][t[(i + 1) % 8]];
            len += std::hypot(a[0] - b[0], a[1] - b[1]);
        }
        best = std::min(best, len);
        CHECK(tour_length(t, d, 0) == doctest::Approx(len).epsilon(1e-12));
    } while (std::next_permutation(t.begin() + 1, t.end()));
    auto lb = motsp_lower_bound(d);
    CHECK(lb[0] <= best + 1e-12);
    CHECK(lb[0] > 0.0);
}

TEST_CASE("tsp problem binding") {
    auto inst = std::make_shared<MotspInstance>(generate_motsp(5, 10, 2));
    TspProblem p(inst, ProblemKind::bi_tsp);
    Rng r(1);
    auto g = p.random_genome(r);
    CHECK(p.feasible(g));
    CHECK(p.evaluate(g).size() == 2);
    CHECK_THROWS_AS(TspProblem(inst, ProblemKind::tri_tsp), ConfigError);
    CHECK(parse_problem_kind("tri-fjsp") == ProblemKind::tri_fjsp);
    CHECK_THROWS_AS(parse_problem_kind("x"), ConfigError);
}
