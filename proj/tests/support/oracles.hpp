#pragma once

// Brute-force reference implementations shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <vector>

#include "e2oc/moo/archive.hpp"
#include "e2oc/problems/fjsp.hpp"
#include "e2oc/problems/motsp.hpp"

namespace oracle {

using e2oc::moo::ObjectiveVector;

inline bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    bool le = true, lt = false;
    for (std::size_t d = 0; d < a.size(); ++d) {
        le = le && a[d] <= b[d];
        lt = lt || a[d] < b[d];
    }
    return le && lt;
}

// Rank by repeated peeling with the definition of dominance.
inline std::vector<int> pareto_ranks(const std::vector<ObjectiveVector>& pop) {
    std::vector<int> rank(pop.size(), -1);
    int level = 0;
    std::size_t assigned = 0;
    while (assigned < pop.size()) {
        std::vector<std::size_t> layer;
        for (std::size_t i = 0; i < pop.size(); ++i) {
            if (rank[i] >= 0) continue;
            bool dominated = false;
            for (std::size_t j = 0; j < pop.size() && !dominated; ++j)
                if (rank[j] < 0 && j != i) dominated = dominates(pop[j], pop[i]);
            if (!dominated) layer.push_back(i);
        }
        for (auto i : layer) rank[i] = level;
        assigned += layer.size();
        ++level;
    }
    return rank;
}

// Union of boxes [p, ref] by inclusion-exclusion over all subsets.
inline double inclusion_exclusion(const std::vector<ObjectiveVector>& pts, const ObjectiveVector& ref) {
    const std::size_t n = pts.size(), m = ref.size();
    double total = 0.0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        ObjectiveVector corner(m, -1e300);
        int bits = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask >> i & 1)) continue;
            ++bits;
            for (std::size_t j = 0; j < m; ++j) corner[j] = std::max(corner[j], pts[i][j]);
        }
        double vol = 1.0;
        for (std::size_t j = 0; j < m; ++j) vol *= std::max(0.0, ref[j] - corner[j]);
        total += (bits % 2 ? 1.0 : -1.0) * vol;
    }
    return total;
}

// Mean over reference points of the distance to the nearest front point.
inline double igd(const std::vector<ObjectiveVector>& front, const std::vector<ObjectiveVector>& ref) {
    double sum = 0.0;
    for (const auto& q : ref) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : front) {
            double d = 0.0;
            for (std::size_t j = 0; j < q.size(); ++j) d += (p[j] - q[j]) * (p[j] - q[j]);
            best = std::min(best, std::sqrt(d));
        }
        sum += best;
    }
    return sum / static_cast<double>(ref.size());
}

// Distinct objective vectors of the Pareto front over every tour.
inline std::set<ObjectiveVector> tsp_front(const e2oc::problems::TspProblem& p) {
    const int k = static_cast<int>(p.instance().nodes());
    std::vector<int> rest(k - 1);
    std::iota(rest.begin(), rest.end(), 1);
    std::vector<ObjectiveVector> all;
    do {
        if (rest.front() > rest.back()) continue;
        e2oc::problems::Tour t{0};
        t.insert(t.end(), rest.begin(), rest.end());
        all.push_back(p.evaluate({t, {}}));
    } while (std::next_permutation(rest.begin(), rest.end()));
    std::set<ObjectiveVector> out;
    for (const auto& a : all) {
        bool dom = false;
        for (const auto& b : all) dom = dom || dominates(b, a);
        if (!dom) out.insert(a);
    }
    return out;
}

// Eligible machine and duration, no overlap per machine, job order kept.
inline bool schedule_ok(const e2oc::problems::FjspSchedule& s, const e2oc::problems::FjspInstance& inst) {
    for (std::size_t a = 0; a < s.operations.size(); ++a) {
        const auto& x = s.operations[a];
        bool eligible = false;
        for (const auto& o : inst.jobs[x.job][x.op]) eligible |= (o.machine == x.machine && o.duration == x.end - x.start);
        if (!eligible) return false;
        for (std::size_t b = a + 1; b < s.operations.size(); ++b) {
            const auto& y = s.operations[b];
            if (x.machine == y.machine && !(x.end <= y.start || y.end <= x.start)) return false;
            if (x.job == y.job) {
                const auto& first = x.op < y.op ? x : y;
                const auto& second = x.op < y.op ? y : x;
                if (first.end > second.start) return false;
            }
        }
    }
    return true;
}

// Optimal makespan by enumerating assignments and every precedence-feasible
// dispatch order with append-only (semi-active) timing.
inline long long fjsp_makespan(const e2oc::problems::FjspInstance& inst) {
    const auto offsets = inst.job_offsets();
    const std::size_t ops = inst.operation_count();
    long long best = std::numeric_limits<long long>::max();
    std::vector<int> assign(ops, 0);
    std::function<void(std::size_t)> over_assignments = [&](std::size_t pos) {
        if (pos == ops) {
            std::vector<std::size_t> next(inst.job_count(), 0);
            std::vector<long long> job_t(inst.job_count(), 0), mach_t(inst.machines, 0);
            std::function<void(std::size_t, long long)> dispatch = [&](std::size_t done, long long span) {
                if (done == ops) {
                    best = std::min(best, span);
                    return;
                }
                for (std::size_t j = 0; j < inst.job_count(); ++j) {
                    if (next[j] == inst.jobs[j].size()) continue;
                    const auto& o = inst.jobs[j][next[j]][assign[offsets[j] + next[j]]];
                    const long long start = std::max(job_t[j], mach_t[o.machine]);
                    const long long sj = job_t[j], sm = mach_t[o.machine];
                    job_t[j] = mach_t[o.machine] = start + o.duration;
                    ++next[j];
                    dispatch(done + 1, std::max(span, start + o.duration));
                    --next[j];
                    job_t[j] = sj;
                    mach_t[o.machine] = sm;
                }
            };
            dispatch(0, 0);
            return;
        }
        std::size_t j = 0;
        while (offsets[j + 1] <= pos) ++j;
        const auto& op = inst.jobs[j][pos - offsets[j]];
        for (std::size_t a = 0; a < op.size(); ++a) {
            assign[pos] = static_cast<int>(a);
            over_assignments(pos + 1);
        }
    };
    over_assignments(0);
    return best;
}

// Every encoding: all distinct operation sequences times all assignments.
template <class F>
void for_each_encoding(const e2oc::problems::FjspInstance& inst, F&& f) {
    e2oc::problems::FjspSolution s;
    for (std::size_t j = 0; j < inst.job_count(); ++j) s.sequence.insert(s.sequence.end(), inst.jobs[j].size(), int(j));
    const std::size_t ops = inst.operation_count();
    std::vector<std::size_t> sizes;
    for (const auto& job : inst.jobs)
        for (const auto& op : job) sizes.push_back(op.size());
    std::sort(s.sequence.begin(), s.sequence.end());
    do {
        s.assignment.assign(ops, 0);
        while (true) {
            f(s);
            std::size_t i = 0;
            while (i < ops && ++s.assignment[i] == int(sizes[i])) s.assignment[i++] = 0;
            if (i == ops) break;
        }
    } while (std::next_permutation(s.sequence.begin(), s.sequence.end()));
}

}  // namespace oracle
