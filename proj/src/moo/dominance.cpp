#include "e2oc/moo/dominance.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>

#include "e2oc/common/error.hpp"
#include "e2oc/kernels/kernels.hpp"

namespace e2oc::moo {

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    if (a.size() != b.size())
        throw DimensionError("dominance between vectors of length " + std::to_string(a.size()) +
                             " and " + std::to_string(b.size()));
    bool strictly = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strictly = true;
    }
    return strictly;
}

std::vector<double> to_columns(std::span<const ObjectiveVector> pts) {
    if (pts.empty()) return {};
    const std::size_t n = pts.size(), m = pts.front().size();
    std::vector<double> cols(n * m);
    for (std::size_t i = 0; i < n; ++i) {
        if (pts[i].size() != m) throw DimensionError("population has mixed objective counts");
        for (std::size_t j = 0; j < m; ++j) cols[j * n + i] = pts[i][j];
    }
    return cols;
}

std::vector<std::vector<std::size_t>> non_dominated_sort(std::span<const ObjectiveVector> pop) {
    const std::size_t n = pop.size();
    if (n == 0) return {};
    const std::size_t m = pop.front().size();
    const auto cols = to_columns(pop);

    // dominated_sets[p] lists the points p dominates; counts[q] is how many dominate q.
    std::vector<std::vector<std::size_t>> dominated_sets(n);
    std::vector<std::size_t> counts(n, 0);
    std::vector<std::uint8_t> p_dom(n), q_dom(n);
    for (std::size_t p = 0; p < n; ++p) {
        kernels::dominance_row(cols.data(), n, m, pop[p].data(), p_dom.data(), q_dom.data());
        for (std::size_t q = 0; q < n; ++q) {
            if (p_dom[q]) dominated_sets[p].push_back(q);
            if (q_dom[q]) ++counts[p];
        }
    }

    std::vector<std::vector<std::size_t>> fronts;
    std::vector<std::size_t> current;
    for (std::size_t p = 0; p < n; ++p)
        if (counts[p] == 0) current.push_back(p);
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (auto p : current)
            for (auto q : dominated_sets[p])
                if (--counts[q] == 0) next.push_back(q);
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

std::vector<int> pareto_ranks(std::span<const ObjectiveVector> pop) {
    std::vector<int> rank(pop.size(), 0);
    const auto fronts = non_dominated_sort(pop);
    for (std::size_t r = 0; r < fronts.size(); ++r)
        for (auto i : fronts[r]) rank[i] = static_cast<int>(r);
    return rank;
}

std::vector<double> crowding_distance(std::span<const ObjectiveVector> front) {
    const std::size_t n = front.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, 0.0);
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(), inf);
        return dist;
    }
    const std::size_t m = front.front().size();
    std::vector<std::size_t> order(n);
    for (std::size_t j = 0; j < m; ++j) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return front[a][j] < front[b][j]; });
        const double lo = front[order.front()][j];
        const double hi = front[order.back()][j];
        dist[order.front()] = inf;
        dist[order.back()] = inf;
        if (!(hi > lo)) continue;
        for (std::size_t k = 1; k + 1 < n; ++k) {
            auto& d = dist[order[k]];
            if (d != inf) d += (front[order[k + 1]][j] - front[order[k - 1]][j]) / (hi - lo);
        }
    }
    return dist;
}

}  // namespace e2oc::moo
