#include "e2oc/engines/moea.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "e2oc/common/error.hpp"
#include "e2oc/moo/dominance.hpp"
#include "e2oc/moo/hypervolume.hpp"

namespace e2oc::engines {

using moo::ObjectiveVector;
using operators::Role;

Variation::Variation(const operators::OperatorCombination& combo, const problems::Problem& problem,
                     const MoeaConfig& cfg, operators::ExternalRuntime* runtime)
    : combo_(combo), problem_(problem), cfg_(cfg), runtime_(runtime) {
    if (!combo.fits(problem.kind()))
        throw ContractError("combination " + combo.id() + " does not fit " +
                            std::string(problems::problem_name(problem.kind())));
}

problems::Genome Variation::offspring(const problems::Genome& a, const problems::Genome& b, Rng& rng) {
    problems::Genome cur = a;
    int failures = 0;
    for (std::size_t s = 0; s < combo_.size(); ++s) {
        const auto& op = combo_[s];
        if (operators::role_is_crossover(op.role)) {
            if (!rng.bernoulli(cfg_.crossover_rate)) continue;
        } else if (operators::role_is_mutation(op.role)) {
            if (!rng.bernoulli(cfg_.mutation_rate)) continue;
        }
        for (;;) {
            std::vector<problems::Genome> parents{cur};
            if (op.arity() == 2) parents.push_back(b);
            try {
                auto r = operators::apply_operator(op, parents, problem_, rng, runtime_);
                ++stats_.applications;
                if (r.valid)
                    cur = std::move(r.children.front());
                else
                    ++stats_.rejected;
                break;
            } catch (const OperatorFailure& e) {
                ++stats_.failures;
                if (++failures > cfg_.retry_budget)
                    throw OperatorFailure("operator " + op.id + " failed " + std::to_string(failures) +
                                          " times for one offspring: " + e.what());
            }
        }
    }
    return cur;
}

namespace {

std::vector<ObjectiveVector> objectives_of(const std::vector<Individual>& pop) {
    std::vector<ObjectiveVector> out;
    out.reserve(pop.size());
    for (const auto& i : pop) out.push_back(i.f);
    return out;
}

Individual make_individual(problems::Genome g, const problems::Problem& problem) {
    auto f = problem.evaluate(g);
    return {std::move(g), std::move(f)};
}

}  // namespace

std::vector<std::size_t> nsga2_environmental_selection(std::span<const ObjectiveVector> pool,
                                                       std::size_t target) {
    if (target > pool.size()) throw ContractError("selection target exceeds pool size");
    std::vector<std::size_t> out;
    out.reserve(target);
    for (const auto& front : moo::non_dominated_sort(pool)) {
        if (out.size() == target) break;
        if (out.size() + front.size() <= target) {
            out.insert(out.end(), front.begin(), front.end());
            continue;
        }
        std::vector<ObjectiveVector> pts;
        for (auto i : front) pts.push_back(pool[i]);
        const auto cd = moo::crowding_distance(pts);
        std::vector<std::size_t> order(front.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            if (cd[x] != cd[y]) return cd[x] > cd[y];
            return front[x] < front[y];
        });
        for (std::size_t k = 0; out.size() < target; ++k) out.push_back(front[order[k]]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<double>> das_dennis(std::size_t m, std::size_t divisions) {
    if (m < 1 || divisions < 1) throw ContractError("das_dennis needs m >= 1 and divisions >= 1");
    std::vector<std::vector<double>> out;
    std::vector<std::size_t> c(m, 0);
    auto rec = [&](auto&& self, std::size_t dim, std::size_t left) -> void {
        if (dim + 1 == m) {
            c[dim] = left;
            std::vector<double> w(m);
            for (std::size_t i = 0; i < m; ++i)
                w[i] = static_cast<double>(c[i]) / static_cast<double>(divisions);
            out.push_back(std::move(w));
            return;
        }
        for (std::size_t v = 0; v <= left; ++v) {
            c[dim] = v;
            self(self, dim + 1, left - v);
        }
    };
    rec(rec, 0, divisions);
    return out;
}

namespace {
std::size_t lattice_size(std::size_t m, std::size_t h) {
    // C(h + m - 1, m - 1)
    double r = 1.0;
    for (std::size_t i = 1; i < m; ++i) r = r * static_cast<double>(h + i) / static_cast<double>(i);
    return static_cast<std::size_t>(std::llround(r));
}
}  // namespace

std::size_t auto_divisions(std::size_t m, std::size_t population) {
    std::size_t h = 1;
    while (lattice_size(m, h) < population) ++h;
    if (h > 1) {
        const auto above = lattice_size(m, h) - population;
        const auto below = population - lattice_size(m, h - 1);
        if (below < above) --h;
    }
    return h;
}

namespace {

/// Solves A x = b by Gaussian elimination with partial pivoting; false when singular.
bool solve(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double>& x) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-12) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double k = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= k * a[col][c];
            b[r] -= k * b[col];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t r = n; r-- > 0;) {
        double s = b[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return true;
}

}  // namespace

std::vector<std::size_t> nsga3_environmental_selection(std::span<const ObjectiveVector> pool,
                                                       std::size_t target,
                                                       const std::vector<std::vector<double>>& dirs,
                                                       Rng& rng) {
    if (target > pool.size()) throw ContractError("selection target exceeds pool size");
    if (dirs.empty()) throw ContractError("no reference directions");
    const auto fronts = moo::non_dominated_sort(pool);
    std::vector<std::size_t> chosen, last;
    for (const auto& front : fronts) {
        if (chosen.size() + front.size() <= target) {
            chosen.insert(chosen.end(), front.begin(), front.end());
            if (chosen.size() == target) break;
            continue;
        }
        last = front;
        break;
    }
    if (last.empty()) {
        std::sort(chosen.begin(), chosen.end());
        return chosen;
    }

    const std::size_t m = pool.front().size();
    std::vector<std::size_t> st = chosen;
    st.insert(st.end(), last.begin(), last.end());

    // Normalization: translate by the ideal of S_t, intercepts from extreme points.
    ObjectiveVector zmin(m, std::numeric_limits<double>::infinity());
    for (auto i : st)
        for (std::size_t j = 0; j < m; ++j) zmin[j] = std::min(zmin[j], pool[i][j]);
    std::vector<ObjectiveVector> extremes;
    for (std::size_t axis = 0; axis < m; ++axis) {
        std::size_t best = st.front();
        double best_asf = std::numeric_limits<double>::infinity();
        for (auto i : st) {
            double asf = 0.0;
            for (std::size_t j = 0; j < m; ++j)
                asf = std::max(asf, (pool[i][j] - zmin[j]) / (j == axis ? 1.0 : 1e-6));
            if (asf < best_asf) best_asf = asf, best = i;
        }
        ObjectiveVector e(m);
        for (std::size_t j = 0; j < m; ++j) e[j] = pool[best][j] - zmin[j];
        extremes.push_back(std::move(e));
    }
    std::vector<double> intercept(m, 0.0), plane;
    bool ok = solve(extremes, std::vector<double>(m, 1.0), plane);
    for (std::size_t j = 0; ok && j < m; ++j) {
        if (!(plane[j] > 1e-12)) ok = false;
        else intercept[j] = 1.0 / plane[j];
    }
    if (!ok) {
        for (std::size_t j = 0; j < m; ++j) {
            intercept[j] = 0.0;
            for (auto i : st) intercept[j] = std::max(intercept[j], pool[i][j] - zmin[j]);
        }
    }
    for (auto& v : intercept)
        if (!(v > 1e-12)) v = 1.0;

    // Association: nearest direction by perpendicular distance.
    std::vector<std::size_t> assoc(pool.size(), 0);
    std::vector<double> dist(pool.size(), 0.0);
    for (auto i : st) {
        ObjectiveVector fn(m);
        for (std::size_t j = 0; j < m; ++j) fn[j] = (pool[i][j] - zmin[j]) / intercept[j];
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t d = 0; d < dirs.size(); ++d) {
            double wn = 0.0, dot = 0.0;
            for (std::size_t j = 0; j < m; ++j) wn += dirs[d][j] * dirs[d][j], dot += dirs[d][j] * fn[j];
            double perp = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                const double diff = fn[j] - dot / wn * dirs[d][j];
                perp += diff * diff;
            }
            if (perp < best) best = perp, assoc[i] = d;
        }
        dist[i] = best;
    }

    std::vector<std::size_t> niche(dirs.size(), 0);
    for (auto i : chosen) ++niche[assoc[i]];
    std::vector<char> excluded(dirs.size(), 0);
    std::vector<std::size_t> remaining = last;
    while (chosen.size() < target) {
        std::size_t lo = std::numeric_limits<std::size_t>::max();
        for (std::size_t d = 0; d < dirs.size(); ++d)
            if (!excluded[d]) lo = std::min(lo, niche[d]);
        std::vector<std::size_t> cands;
        for (std::size_t d = 0; d < dirs.size(); ++d)
            if (!excluded[d] && niche[d] == lo) cands.push_back(d);
        const auto d = cands[rng.below(cands.size())];
        std::vector<std::size_t> members;
        for (std::size_t k = 0; k < remaining.size(); ++k)
            if (assoc[remaining[k]] == d) members.push_back(k);
        if (members.empty()) {
            excluded[d] = 1;
            continue;
        }
        std::size_t pick = members.front();
        if (niche[d] == 0) {
            for (auto k : members)
                if (dist[remaining[k]] < dist[remaining[pick]]) pick = k;
        } else {
            pick = members[rng.below(members.size())];
        }
        chosen.push_back(remaining[pick]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
        ++niche[d];
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

double tchebycheff(const ObjectiveVector& f, const std::vector<double>& w, const ObjectiveVector& z) {
    if (f.size() != w.size() || f.size() != z.size()) throw DimensionError("tchebycheff dimension mismatch");
    double v = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double wi = w[i] == 0.0 ? 1e-6 : w[i];
        v = std::max(v, wi * std::abs(f[i] - z[i]));
    }
    return v;
}

MoeadState moead_init(std::vector<Individual> population, std::vector<std::vector<double>> weights,
                      std::size_t neighborhood) {
    if (population.size() != weights.size()) throw ContractError("one individual per weight vector expected");
    if (population.empty()) throw ContractError("empty MOEA/D population");
    MoeadState s;
    s.weights = std::move(weights);
    s.population = std::move(population);
    const std::size_t n = s.weights.size();
    const std::size_t t = std::min(neighborhood, n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::pair<double, std::size_t>> d;
        for (std::size_t j = 0; j < n; ++j) {
            double s2 = 0.0;
            for (std::size_t k = 0; k < s.weights[i].size(); ++k) {
                const double diff = s.weights[i][k] - s.weights[j][k];
                s2 += diff * diff;
            }
            d.emplace_back(s2, j);
        }
        std::sort(d.begin(), d.end());
        std::vector<std::size_t> nb;
        for (std::size_t k = 0; k < t; ++k) nb.push_back(d[k].second);
        s.neighbors.push_back(std::move(nb));
    }
    s.ideal = s.population.front().f;
    for (const auto& ind : s.population)
        for (std::size_t k = 0; k < s.ideal.size(); ++k) s.ideal[k] = std::min(s.ideal[k], ind.f[k]);
    return s;
}

std::vector<std::size_t> moead_update(MoeadState& state, std::span<const std::size_t> order,
                                      const Individual& child, int cap) {
    for (std::size_t k = 0; k < state.ideal.size(); ++k) state.ideal[k] = std::min(state.ideal[k], child.f[k]);
    std::vector<std::size_t> replaced;
    for (auto j : order) {
        if (static_cast<int>(replaced.size()) >= cap) break;
        const auto& w = state.weights[j];
        if (tchebycheff(child.f, w, state.ideal) < tchebycheff(state.population[j].f, w, state.ideal)) {
            state.population[j] = child;
            replaced.push_back(j);
        }
    }
    return replaced;
}

std::vector<std::size_t> moead_step(MoeadState& state, std::size_t i, Variation& var,
                                    const problems::Problem& problem, const MoeaConfig& cfg, Rng& rng) {
    std::vector<std::size_t> pool;
    if (rng.bernoulli(cfg.neighbor_prob)) {
        pool = state.neighbors[i];
    } else {
        pool.resize(state.population.size());
        std::iota(pool.begin(), pool.end(), std::size_t{0});
    }
    const auto [p, q] = rng.distinct_pair(pool.size());
    auto child = make_individual(
        var.offspring(state.population[pool[p]].genome, state.population[pool[q]].genome, rng), problem);
    rng.shuffle(pool);
    return moead_update(state, pool, child, cfg.max_replacements);
}

namespace {

struct Recorder {
    const RunOptions& opts;
    RunResult& out;

    void operator()(const std::vector<Individual>& pop) {
        if (!opts.ctx && !opts.keep_history) return;
        const auto pts = objectives_of(pop);
        auto front = moo::ParetoArchive::from_points(pts);
        if (opts.ctx) out.hv_trajectory.push_back(moo::hypervolume(front, *opts.ctx).value);
        if (opts.keep_history) out.history.push_back(std::move(front));
    }
};

std::size_t tournament(const std::vector<int>& rank, const std::vector<double>& crowd, Rng& rng) {
    const auto [a, b] = rng.distinct_pair(rank.size());
    if (rank[a] != rank[b]) return rank[a] < rank[b] ? a : b;
    if (crowd[a] != crowd[b]) return crowd[a] > crowd[b] ? a : b;
    return std::min(a, b);
}

void rank_and_crowd(const std::vector<Individual>& pop, std::vector<int>& rank, std::vector<double>& crowd) {
    const auto pts = objectives_of(pop);
    rank.assign(pop.size(), 0);
    crowd.assign(pop.size(), 0.0);
    const auto fronts = moo::non_dominated_sort(pts);
    for (std::size_t r = 0; r < fronts.size(); ++r) {
        std::vector<ObjectiveVector> fp;
        for (auto i : fronts[r]) fp.push_back(pts[i]);
        const auto cd = moo::crowding_distance(fp);
        for (std::size_t k = 0; k < fronts[r].size(); ++k) {
            rank[fronts[r][k]] = static_cast<int>(r);
            crowd[fronts[r][k]] = cd[k];
        }
    }
}

std::vector<Individual> initial_population(const problems::Problem& problem, std::size_t n, Rng& rng) {
    std::vector<Individual> pop;
    pop.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pop.push_back(make_individual(problem.random_genome(rng), problem));
    return pop;
}

}  // namespace

RunResult run_moea(const problems::Problem& problem, const operators::OperatorCombination& combo,
                   const MoeaConfig& cfg, const RunOptions& opts) {
    cfg.validate();
    if (opts.ctx && opts.ctx->dimension() != problem.objectives())
        throw DimensionError("HV context dimension does not match the problem");
    Variation var(combo, problem, cfg, opts.runtime);
    Rng rng(derive_seed(cfg.seed, "moea-run"));
    RunResult out;
    out.seed = cfg.seed;
    Recorder record{opts, out};
    const std::size_t m = problem.objectives();

    std::vector<Individual> pop;
    if (cfg.engine == EngineKind::moead) {
        const auto h = cfg.divisions ? cfg.divisions : auto_divisions(m, cfg.population);
        auto weights = das_dennis(m, h);
        if (weights.size() <= cfg.neighborhood)
            throw ConfigError("MOEA/D weight count must exceed the neighbourhood size");
        auto init = initial_population(problem, weights.size(), rng);
        auto state = moead_init(std::move(init), std::move(weights), cfg.neighborhood);
        out.evaluations = static_cast<long long>(state.population.size());
        record(state.population);
        for (std::size_t g = 0; g < cfg.generations; ++g) {
            for (std::size_t i = 0; i < state.population.size(); ++i) {
                moead_step(state, i, var, problem, cfg, rng);
                ++out.evaluations;
            }
            record(state.population);
        }
        pop = std::move(state.population);
    } else {
        std::vector<std::vector<double>> dirs;
        if (cfg.engine == EngineKind::nsga3)
            dirs = das_dennis(m, cfg.divisions ? cfg.divisions : auto_divisions(m, cfg.population));
        pop = initial_population(problem, cfg.population, rng);
        out.evaluations = static_cast<long long>(pop.size());
        record(pop);
        std::vector<int> rank;
        std::vector<double> crowd;
        for (std::size_t g = 0; g < cfg.generations; ++g) {
            if (cfg.engine == EngineKind::nsga2) rank_and_crowd(pop, rank, crowd);
            std::vector<Individual> pool = pop;
            for (std::size_t k = 0; k < cfg.population; ++k) {
                std::size_t a, b;
                if (cfg.engine == EngineKind::nsga2) {
                    a = tournament(rank, crowd, rng);
                    b = tournament(rank, crowd, rng);
                } else {
                    std::tie(a, b) = rng.distinct_pair(pop.size());
                }
                pool.push_back(make_individual(var.offspring(pop[a].genome, pop[b].genome, rng), problem));
                ++out.evaluations;
            }
            const auto pts = objectives_of(pool);
            const auto keep = cfg.engine == EngineKind::nsga2
                                  ? nsga2_environmental_selection(pts, cfg.population)
                                  : nsga3_environmental_selection(pts, cfg.population, dirs, rng);
            std::vector<Individual> next;
            next.reserve(keep.size());
            for (auto i : keep) next.push_back(std::move(pool[i]));
            pop = std::move(next);
            record(pop);
        }
    }
    out.front = moo::ParetoArchive::from_points(objectives_of(pop));
    out.stats = var.stats();
    return out;
}

}  // namespace e2oc::engines
