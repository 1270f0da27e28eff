#include "e2oc/operators/catalog.hpp"

#include <algorithm>
#include <numeric>

#include "e2oc/common/error.hpp"

namespace e2oc::operators {

namespace {

constexpr double kEps = 1e-12;

double wdist(const problems::DistanceTables& d, std::span<const double> w, int a, int b) {
    double s = 0.0;
    for (std::size_t m = 0; m < w.size(); ++m) s += w[m] * d(m, a, b);
    return s;
}

Tour rotated(const Tour& t, std::size_t r) {
    Tour out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = t[(i + r) % t.size()];
    return out;
}

int param_int(const Params& p, const char* key, int fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : static_cast<int>(it->second);
}

double param_real(const Params& p, const char* key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

const problems::TspProblem& as_tsp(const problems::Problem& p) {
    auto* t = dynamic_cast<const problems::TspProblem*>(&p);
    if (!t) throw ContractError("TSP operator applied to " + std::string(problems::problem_name(p.kind())));
    return *t;
}

const problems::FjspInstance& as_fjsp(const problems::Problem& p) {
    auto* f = dynamic_cast<const problems::FjspProblem*>(&p);
    if (!f) throw ContractError("FJSP operator applied to " + std::string(problems::problem_name(p.kind())));
    return f->instance();
}

}  // namespace

Tour reverse_segment(const Tour& t, std::size_t i, std::size_t j) {
    Tour out = t;
    std::reverse(out.begin() + static_cast<std::ptrdiff_t>(i), out.begin() + static_cast<std::ptrdiff_t>(j) + 1);
    return out;
}

Tour move_segment(const Tour& t, std::size_t i, std::size_t len, std::size_t after) {
    Tour seg(t.begin() + static_cast<std::ptrdiff_t>(i), t.begin() + static_cast<std::ptrdiff_t>(i + len));
    const int anchor = t[after];
    Tour rest;
    rest.reserve(t.size());
    for (std::size_t p = 0; p < t.size(); ++p)
        if (p < i || p >= i + len) rest.push_back(t[p]);
    auto at = std::find(rest.begin(), rest.end(), anchor) + 1;
    rest.insert(at, seg.begin(), seg.end());
    return rest;
}

Tour order_crossover_slice(const Tour& a, const Tour& b, std::size_t i, std::size_t j) {
    const std::size_t n = a.size();
    Tour child(n, -1);
    std::vector<char> used(n, 0);
    for (std::size_t p = i; p <= j; ++p) {
        child[p] = a[p];
        used[static_cast<std::size_t>(a[p])] = 1;
    }
    std::size_t w = (j + 1) % n;
    for (std::size_t s = 0; s < n; ++s) {
        const int v = b[(j + 1 + s) % n];
        if (used[static_cast<std::size_t>(v)]) continue;
        child[w] = v;
        w = (w + 1) % n;
    }
    return child;
}

Tour order_crossover(const Tour& a, const Tour& b, Rng& rng) {
    if (a.size() != b.size()) throw ContractError("order crossover on tours of different length");
    if (a.size() < 2) return a;
    auto i = static_cast<std::size_t>(rng.below(a.size()));
    auto j = static_cast<std::size_t>(rng.below(a.size()));
    if (i > j) std::swap(i, j);
    return order_crossover_slice(a, b, i, j);
}

Tour tsp_swap(const Tour& t, Rng& rng) {
    if (t.size() < 2) return t;
    auto [i, j] = rng.distinct_pair(t.size());
    Tour out = t;
    std::swap(out[i], out[j]);
    return out;
}

double scalarized_length(const Tour& t, const problems::DistanceTables& d, std::span<const double> w) {
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) s += wdist(d, w, t[i], t[(i + 1) % t.size()]);
    return s;
}

Tour two_opt_pass(const Tour& t, const problems::DistanceTables& d, std::span<const double> w, Rng& rng,
                  int max_moves) {
    const std::size_t n = t.size();
    if (n < 4) return t;
    Tour cur = t;
    for (int move = 0; move < max_moves; ++move) {
        // Work on a rotation so the scan starts at a random edge.
        const auto r = static_cast<std::size_t>(rng.below(n));
        Tour x = rotated(cur, r);
        bool improved = false;
        for (std::size_t i = 0; i + 2 < n && !improved; ++i) {
            for (std::size_t j = i + 2; j < n && !improved; ++j) {
                if (i == 0 && j == n - 1) continue;
                const int a = x[i], b = x[i + 1], c = x[j], e = x[(j + 1) % n];
                const double delta = wdist(d, w, a, c) + wdist(d, w, b, e) - wdist(d, w, a, b) - wdist(d, w, c, e);
                if (delta < -kEps) {
                    x = reverse_segment(x, i + 1, j);
                    improved = true;
                }
            }
        }
        if (!improved) break;
        cur = rotated(x, n - r);
    }
    return cur;
}

Tour or_opt_pass(const Tour& t, const problems::DistanceTables& d, std::span<const double> w, Rng& rng,
                 int max_moves, int max_segment) {
    const std::size_t n = t.size();
    if (n < 4) return t;
    Tour cur = t;
    for (int move = 0; move < max_moves; ++move) {
        const auto r = static_cast<std::size_t>(rng.below(n));
        Tour x = rotated(cur, r);
        bool improved = false;
        // Segment x[i..i+len-1] with 1 <= i so that x[i-1] exists linearly.
        for (std::size_t i = 1; i < n && !improved; ++i) {
            for (std::size_t len = 1; len <= static_cast<std::size_t>(max_segment) && i + len < n && !improved; ++len) {
                const int prev = x[i - 1], s0 = x[i], s1 = x[i + len - 1], next = x[i + len];
                const double removed = wdist(d, w, prev, s0) + wdist(d, w, s1, next) - wdist(d, w, prev, next);
                for (std::size_t p = 0; p < n && !improved; ++p) {
                    if (p + 1 >= i && p < i + len) continue;  // edge touches the segment or is (prev, s0)
                    const int u = x[p], v = x[(p + 1) % n];
                    const double added = wdist(d, w, u, s0) + wdist(d, w, s1, v) - wdist(d, w, u, v);
                    if (added - removed < -kEps) {
                        x = move_segment(x, i, len, p);
                        improved = true;
                    }
                }
            }
        }
        if (!improved) break;
        cur = x;
    }
    return cur;
}

Tour three_opt_pass(const Tour& t, const problems::DistanceTables& d, std::span<const double> w, Rng& rng,
                    int max_moves, std::size_t max_checks) {
    const std::size_t n = t.size();
    if (n < 4) return t;
    Tour cur = t;
    for (int move = 0; move < max_moves; ++move) {
        const auto r = static_cast<std::size_t>(rng.below(n));
        Tour x = rotated(cur, r);
        bool improved = false;
        std::size_t checks = 0;
        // Segments: A = x[0..i], B = x[i+1..j], C = x[j+1..k], D = x[k+1..n-1].
        for (std::size_t i = 0; i + 2 < n && !improved; ++i) {
            for (std::size_t j = i + 1; j + 1 < n && !improved; ++j) {
                for (std::size_t k = j + 1; k < n && !improved; ++k) {
                    if (max_checks && ++checks > max_checks) goto done;
                    const int a = x[i], b = x[i + 1], c = x[j], e = x[j + 1], f = x[k], g = x[(k + 1) % n];
                    const double base = wdist(d, w, a, b) + wdist(d, w, c, e) + wdist(d, w, f, g);
                    // Candidate reconnections, as (new edge sum, layout id).
                    const double cand[7] = {
                        wdist(d, w, a, c) + wdist(d, w, b, e) + wdist(d, w, f, g),  // A B' C D
                        wdist(d, w, a, b) + wdist(d, w, c, f) + wdist(d, w, e, g),  // A B C' D
                        wdist(d, w, a, f) + wdist(d, w, e, c) + wdist(d, w, b, g),  // A C' B' D
                        wdist(d, w, a, c) + wdist(d, w, b, f) + wdist(d, w, e, g),  // A B' C' D
                        wdist(d, w, a, e) + wdist(d, w, f, b) + wdist(d, w, c, g),  // A C B D
                        wdist(d, w, a, e) + wdist(d, w, f, c) + wdist(d, w, b, g),  // A C B' D
                        wdist(d, w, a, f) + wdist(d, w, e, b) + wdist(d, w, c, g),  // A C' B D
                    };
                    for (int o = 0; o < 7 && !improved; ++o) {
                        if (cand[o] - base >= -kEps) continue;
                        Tour B(x.begin() + static_cast<std::ptrdiff_t>(i + 1), x.begin() + static_cast<std::ptrdiff_t>(j + 1));
                        Tour C(x.begin() + static_cast<std::ptrdiff_t>(j + 1), x.begin() + static_cast<std::ptrdiff_t>(k + 1));
                        Tour Br(B.rbegin(), B.rend()), Cr(C.rbegin(), C.rend());
                        const Tour* first = nullptr;
                        const Tour* second = nullptr;
                        switch (o) {
                            case 0: first = &Br; second = &C; break;
                            case 1: first = &B; second = &Cr; break;
                            case 2: first = &Cr; second = &Br; break;
                            case 3: first = &Br; second = &Cr; break;
                            case 4: first = &C; second = &B; break;
                            case 5: first = &C; second = &Br; break;
                            default: first = &Cr; second = &B; break;
                        }
                        Tour y(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(i + 1));
                        y.insert(y.end(), first->begin(), first->end());
                        y.insert(y.end(), second->begin(), second->end());
                        y.insert(y.end(), x.begin() + static_cast<std::ptrdiff_t>(k + 1), x.end());
                        x = std::move(y);
                        improved = true;
                    }
                }
            }
        }
    done:
        if (!improved) break;
        cur = x;
    }
    return cur;
}

Tour tsp_two_opt(const Tour& t, const problems::DistanceTables& d, Rng& rng, int max_moves) {
    const auto w = random_simplex_weights(d.spaces(), rng);
    return two_opt_pass(t, d, w, rng, max_moves);
}

Tour tsp_or_opt(const Tour& t, const problems::DistanceTables& d, Rng& rng, int max_moves, int max_segment) {
    const auto w = random_simplex_weights(d.spaces(), rng);
    return or_opt_pass(t, d, w, rng, max_moves, max_segment);
}

Tour tsp_three_opt(const Tour& t, const problems::DistanceTables& d, Rng& rng, int max_moves,
                   std::size_t max_checks) {
    const auto w = random_simplex_weights(d.spaces(), rng);
    return three_opt_pass(t, d, w, rng, max_moves, max_checks);
}

std::vector<int> pox_sequence(const std::vector<int>& a, const std::vector<int>& b, const std::vector<char>& keep) {
    std::vector<int> child(a.size(), -1);
    std::size_t from = 0;
    for (std::size_t p = 0; p < a.size(); ++p) {
        if (keep[static_cast<std::size_t>(a[p])]) {
            child[p] = a[p];
            continue;
        }
        while (from < b.size() && keep[static_cast<std::size_t>(b[from])]) ++from;
        child[p] = b[from++];
    }
    return child;
}

Genome fjsp_pox(const Genome& a, const Genome& b, const problems::FjspInstance& inst, Rng& rng) {
    std::vector<char> keep(inst.job_count());
    for (auto& k : keep) k = rng.bernoulli(0.5) ? 1 : 0;
    return {pox_sequence(a.sequence, b.sequence, keep), a.assignment};
}

Genome fjsp_sequence_swap(const Genome& a, Rng& rng) {
    Genome c = a;
    if (c.sequence.size() < 2) return c;
    auto [i, j] = rng.distinct_pair(c.sequence.size());
    std::swap(c.sequence[i], c.sequence[j]);
    return c;
}

Genome fjsp_machine_one_point(const Genome& a, const Genome& b, Rng& rng) {
    Genome c = a;
    const std::size_t n = a.assignment.size();
    if (n < 2) return c;
    const auto cut = 1 + static_cast<std::size_t>(rng.below(n - 1));
    std::copy(b.assignment.begin() + static_cast<std::ptrdiff_t>(cut), b.assignment.end(),
              c.assignment.begin() + static_cast<std::ptrdiff_t>(cut));
    return c;
}

Genome fjsp_machine_reassign(const Genome& a, const problems::FjspInstance& inst, Rng& rng) {
    Genome c = a;
    if (c.assignment.empty()) return c;
    const auto pos = static_cast<std::size_t>(rng.below(c.assignment.size()));
    const auto offsets = inst.job_offsets();
    std::size_t j = 0;
    while (offsets[j + 1] <= pos) ++j;
    c.assignment[pos] = static_cast<int>(rng.below(inst.jobs[j][pos - offsets[j]].size()));
    return c;
}

namespace {

// Greedy variant of reassignment: with probability `greedy` picks the shortest option.
Genome machine_reassign_param(const Genome& a, const problems::FjspInstance& inst, const Params& p, Rng& rng) {
    const int count = std::max(1, param_int(p, "count", 1));
    const double greedy = param_real(p, "greedy", 0.0);
    Genome c = a;
    const auto offsets = inst.job_offsets();
    for (int k = 0; k < count && !c.assignment.empty(); ++k) {
        const auto pos = static_cast<std::size_t>(rng.below(c.assignment.size()));
        std::size_t j = 0;
        while (offsets[j + 1] <= pos) ++j;
        const auto& op = inst.jobs[j][pos - offsets[j]];
        if (greedy > 0.0 && rng.bernoulli(greedy)) {
            std::size_t best = 0;
            for (std::size_t e = 1; e < op.size(); ++e)
                if (op[e].duration < op[best].duration) best = e;
            c.assignment[pos] = static_cast<int>(best);
        } else {
            c.assignment[pos] = static_cast<int>(rng.below(op.size()));
        }
    }
    return c;
}

Genome seq_insert(const Genome& a, Rng& rng) {
    Genome c = a;
    if (c.sequence.size() < 2) return c;
    auto [i, j] = rng.distinct_pair(c.sequence.size());
    const int v = c.sequence[i];
    c.sequence.erase(c.sequence.begin() + static_cast<std::ptrdiff_t>(i));
    c.sequence.insert(c.sequence.begin() + static_cast<std::ptrdiff_t>(j), v);
    return c;
}

Genome machine_uniform(const Genome& a, const Genome& b, const Params& p, Rng& rng) {
    const double mix = param_real(p, "mix", 0.5);
    Genome c = a;
    for (std::size_t i = 0; i < c.assignment.size(); ++i)
        if (rng.bernoulli(mix)) c.assignment[i] = b.assignment[i];
    return c;
}

Tour inversion(const Tour& t, Rng& rng) {
    if (t.size() < 2) return t;
    auto [i, j] = rng.distinct_pair(t.size());
    if (i > j) std::swap(i, j);
    return reverse_segment(t, i, j);
}

Tour insertion(const Tour& t, Rng& rng) {
    if (t.size() < 2) return t;
    auto [i, j] = rng.distinct_pair(t.size());
    Tour out = t;
    const int v = out[i];
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(j), v);
    return out;
}

Genome tour_genome(Tour t) { return Genome{std::move(t), {}}; }

std::vector<CatalogEntry> build_catalog() {
    using R = Role;
    std::vector<CatalogEntry> c;
    const std::vector<Role> all{R::fjsp_op_crossover, R::fjsp_op_mutation, R::fjsp_machine_crossover,
                                R::fjsp_machine_mutation, R::tsp_crossover, R::tsp_mutation, R::tsp_local_search};
    c.push_back({"identity", all, [](auto parents, auto&, auto&, auto&) { return parents[0]; }});

    // TSP
    c.push_back({"ox", {R::tsp_crossover}, [](auto ps, auto&, auto&, Rng& rng) {
                     return tour_genome(order_crossover(ps[0].sequence, ps[1].sequence, rng));
                 }});
    c.push_back({"swap", {R::tsp_mutation}, [](auto ps, auto&, const Params& p, Rng& rng) {
                     Tour t = ps[0].sequence;
                     for (int k = 0; k < std::max(1, param_int(p, "count", 1)); ++k) t = tsp_swap(t, rng);
                     return tour_genome(std::move(t));
                 }});
    c.push_back({"inversion", {R::tsp_mutation}, [](auto ps, auto&, auto&, Rng& rng) {
                     return tour_genome(inversion(ps[0].sequence, rng));
                 }});
    c.push_back({"insertion", {R::tsp_mutation}, [](auto ps, auto&, auto&, Rng& rng) {
                     return tour_genome(insertion(ps[0].sequence, rng));
                 }});
    c.push_back({"two_opt", {R::tsp_local_search}, [](auto ps, auto& prob, const Params& p, Rng& rng) {
                     return tour_genome(tsp_two_opt(ps[0].sequence, as_tsp(prob).distances(), rng,
                                                    param_int(p, "max_moves", 1)));
                 }});
    c.push_back({"or_opt", {R::tsp_local_search}, [](auto ps, auto& prob, const Params& p, Rng& rng) {
                     return tour_genome(tsp_or_opt(ps[0].sequence, as_tsp(prob).distances(), rng,
                                                   param_int(p, "max_moves", 1), param_int(p, "max_segment", 3)));
                 }});
    c.push_back({"three_opt", {R::tsp_local_search}, [](auto ps, auto& prob, const Params& p, Rng& rng) {
                     const auto& d = as_tsp(prob).distances();
                     const auto cap = static_cast<std::size_t>(param_real(p, "max_checks", 4.0 * double(d.nodes() * d.nodes())));
                     return tour_genome(tsp_three_opt(ps[0].sequence, d, rng, param_int(p, "max_moves", 1), cap));
                 }});
    c.push_back({"broken_tour", {R::tsp_crossover, R::tsp_mutation, R::tsp_local_search},
                 [](auto ps, auto&, auto&, Rng& rng) {
                     Tour t = ps[0].sequence;
                     const auto i = static_cast<std::size_t>(rng.below(t.size()));
                     t[i] = t[(i + 1) % t.size()];
                     return tour_genome(std::move(t));
                 },
                 true});

    // FJSP
    c.push_back({"pox", {R::fjsp_op_crossover}, [](auto ps, auto& prob, auto&, Rng& rng) {
                     return fjsp_pox(ps[0], ps[1], as_fjsp(prob), rng);
                 }});
    c.push_back({"seq_swap", {R::fjsp_op_mutation}, [](auto ps, auto&, const Params& p, Rng& rng) {
                     Genome g = ps[0];
                     for (int k = 0; k < std::max(1, param_int(p, "count", 1)); ++k) g = fjsp_sequence_swap(g, rng);
                     return g;
                 }});
    c.push_back({"seq_insert", {R::fjsp_op_mutation}, [](auto ps, auto&, auto&, Rng& rng) {
                     return seq_insert(ps[0], rng);
                 }});
    c.push_back({"machine_one_point", {R::fjsp_machine_crossover}, [](auto ps, auto&, auto&, Rng& rng) {
                     return fjsp_machine_one_point(ps[0], ps[1], rng);
                 }});
    c.push_back({"machine_uniform", {R::fjsp_machine_crossover}, [](auto ps, auto&, const Params& p, Rng& rng) {
                     return machine_uniform(ps[0], ps[1], p, rng);
                 }});
    c.push_back({"machine_reassign", {R::fjsp_machine_mutation}, [](auto ps, auto& prob, const Params& p, Rng& rng) {
                     return machine_reassign_param(ps[0], as_fjsp(prob), p, rng);
                 }});
    c.push_back({"broken_sequence", {R::fjsp_op_crossover, R::fjsp_op_mutation},
                 [](auto ps, auto&, auto&, auto&) {
                     Genome g = ps[0];
                     if (!g.sequence.empty()) g.sequence.back() = -1;
                     return g;
                 },
                 true});
    c.push_back({"broken_assignment", {R::fjsp_machine_crossover, R::fjsp_machine_mutation},
                 [](auto ps, auto&, auto&, auto&) {
                     Genome g = ps[0];
                     if (!g.assignment.empty()) g.assignment.front() = 1 << 20;
                     return g;
                 },
                 true});
    return c;
}

}  // namespace

const std::vector<CatalogEntry>& native_catalog() {
    static const std::vector<CatalogEntry> catalog = build_catalog();
    return catalog;
}

const CatalogEntry& find_entry(const std::string& entry) {
    for (const auto& e : native_catalog())
        if (e.entry == entry) return e;
    throw ConfigError("unknown native operator '" + entry + "'");
}

std::vector<const CatalogEntry*> entries_for(Role role, bool include_broken) {
    std::vector<const CatalogEntry*> out;
    for (const auto& e : native_catalog()) {
        if (e.broken && !include_broken) continue;
        if (e.entry == "identity") continue;
        if (std::find(e.roles.begin(), e.roles.end(), role) != e.roles.end()) out.push_back(&e);
    }
    return out;
}

Operator expert_operator(Role role) {
    switch (role) {
        case Role::fjsp_op_crossover: return make_native("expert-v1/pox", role, "pox");
        case Role::fjsp_op_mutation: return make_native("expert-v1/seq_swap", role, "seq_swap");
        case Role::fjsp_machine_crossover: return make_native("expert-v1/machine_one_point", role, "machine_one_point");
        case Role::fjsp_machine_mutation: return make_native("expert-v1/machine_reassign", role, "machine_reassign");
        case Role::tsp_crossover: return make_native("expert-v1/ox", role, "ox");
        case Role::tsp_mutation: return make_native("expert-v1/swap", role, "swap");
        case Role::tsp_local_search: return make_native("expert-v1/two_opt", role, "two_opt");
    }
    throw ContractError("unknown role");
}

}  // namespace e2oc::operators
