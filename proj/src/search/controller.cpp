#include "e2oc/search/controller.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include "e2oc/common/error.hpp"
#include "e2oc/common/kv.hpp"
#include "e2oc/genesis/prompt.hpp"
#include "e2oc/search/bandit.hpp"
#include "e2oc/search/landscape.hpp"

namespace e2oc::search {

using operators::OperatorPtr;
using operators::Role;

std::string controller_name(ControllerKind k) {
    switch (k) {
        case ControllerKind::e2oc: return "e2oc";
        case ControllerKind::mcts_oc: return "mcts_oc";
        case ControllerKind::mcts_tuple: return "mcts_tuple";
        case ControllerKind::mcts_sample: return "mcts_sample";
        case ControllerKind::cd: return "cd";
        case ControllerKind::ucb: return "ucb";
        case ControllerKind::win_ucb: return "win_ucb";
    }
    return "?";
}

ControllerKind parse_controller(const std::string& name) {
    std::string n = name;
    std::replace(n.begin(), n.end(), '-', '_');
    for (auto k : {ControllerKind::e2oc, ControllerKind::mcts_oc, ControllerKind::mcts_tuple, ControllerKind::mcts_sample,
                   ControllerKind::cd, ControllerKind::ucb, ControllerKind::win_ucb})
        if (controller_name(k) == n) return k;
    throw ConfigError("unknown controller '" + name + "'");
}

bool is_baseline(ControllerKind k) noexcept {
    return k == ControllerKind::cd || k == ControllerKind::ucb || k == ControllerKind::win_ucb;
}

// ---------------------------------------------------------------------------

SearchSession::SearchSession(const SearchStart& start, const SearchSettings& settings, SearchEnv env)
    : settings_(settings),
      env_(std::move(env)),
      ledger_(0),
      initial_(start.combo),
      best_(start.combo),
      rng_(derive_seed(settings.seed, "search")) {
    if (!env_.backend || !env_.evaluator) throw ContractError("search needs a backend and an evaluator");
    if (start.combo.size() == 0) throw ContractError("initial combination is empty");
    if (settings_.ap < 0) throw ConfigError("AP must be non-negative");
    if (settings_.eval_workers < 1) throw ConfigError("eval_workers must be at least 1");
    settings_.budget.k = static_cast<int>(start.combo.size());
    settings_.budget.validate();
    ledger_ = BudgetLedger(settings_.budget.limit());
    if (start.thoughts) {
        thoughts_ = *start.thoughts;
        for (auto r : start.combo.schema())
            if (!thoughts_.has(r)) throw ConfigError("thought space lacks role " + std::string(operators::role_name(r)));
    } else {
        thoughts_ = PromptStorage(start.combo.schema());
    }
    if (start.fit) {
        best_fit_ = *start.fit;
        records_.push_back({"carried", best_.id(), 0, best_fit_, false});
    } else {
        best_fit_ = -1.0;
        evaluate(best_, "initial");
    }
}

std::uint64_t SearchSession::next_seed(const char* label) {
    const std::string l = label;
    auto& ctr = l == "eval" ? eval_counter_ : gen_counter_;
    return derive_seed(settings_.seed, l, ctr++);
}

void SearchSession::log(const std::string& msg) {
    if (env_.log) env_.log(msg);
}

std::vector<double> SearchSession::evaluate_all(const std::vector<OperatorCombination>& combos,
                                                const std::string& stage) {
    std::vector<std::uint64_t> seeds;
    for (std::size_t i = 0; i < combos.size(); ++i) seeds.push_back(next_seed("eval"));
    std::vector<engines::EvaluationRecord> recs(combos.size());
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(settings_.eval_workers), combos.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < combos.size(); ++i) recs[i] = env_.evaluator->evaluate(combos[i], seeds[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errs(workers);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i; (i = next++) < combos.size();)
                        recs[i] = env_.evaluator->evaluate(combos[i], seeds[i]);
                } catch (...) {
                    errs[w] = std::current_exception();
                }
            });
        for (auto& t : pool) t.join();
        for (auto& e : errs)
            if (e) std::rethrow_exception(e);
    }
    std::vector<double> fits;
    for (std::size_t i = 0; i < combos.size(); ++i) {
        records_.push_back({stage, recs[i].combination, seeds[i], recs[i].fit, recs[i].flagged});
        fits.push_back(recs[i].fit);
        if (recs[i].fit > best_fit_) best_ = combos[i], best_fit_ = recs[i].fit;
    }
    return fits;
}

double SearchSession::evaluate(const OperatorCombination& combo, const std::string& stage) {
    return evaluate_all({combo}, stage).front();
}

bool SearchSession::offer(const OperatorCombination& combo, double fit) {
    if (fit < best_fit_) return false;
    best_ = combo;
    best_fit_ = fit;
    return true;
}

std::vector<Elite> SearchSession::design_task(std::size_t slot, const DesignThought& thought,
                                              const OperatorCombination& base, const std::string& stage, int cap) {
    const auto& b = settings_.budget;
    int target = b.per_task();
    if (cap >= 0) target = std::min(target, cap);
    std::string elite_code = base[slot].code;
    std::vector<Elite> scored;
    int generated = 0;
    for (int it = 0; it < b.inner && generated < target; ++it) {
        const int n = std::min(b.population, target - generated);
        ledger_.charge(stage, static_cast<int>(slot), n);
        genesis::GenerationTask task{thought.role, thought.key(), genesis::build_generation_prompt(thought, {elite_code, {}})};
        auto opts = env_.generation;
        opts.sam_max = std::max(opts.sam_max, n);
        const auto batch = genesis::generate_candidates(*env_.backend, task, n, next_seed("gen"), opts);
        generated += n;
        std::vector<Elite> fresh;
        std::vector<OperatorCombination> combos;
        for (const auto& c : batch.candidates) {
            if (c.validation.status == operators::Validity::invalid) continue;
            fresh.push_back({c, 0.0});
            combos.push_back(base.with_slot(slot, std::make_shared<const Operator>(c)));
        }
        const auto fits = evaluate_all(combos, stage);
        for (std::size_t i = 0; i < fresh.size(); ++i) fresh[i].fit = fits[i];
        scored.insert(scored.end(), fresh.begin(), fresh.end());
        std::stable_sort(scored.begin(), scored.end(), [](const Elite& x, const Elite& y) { return x.fit > y.fit; });
        if (!scored.empty()) elite_code = scored.front().op.code;
    }
    return scored;
}

std::vector<std::vector<Elite>> SearchSession::warm_start(int ap, int on_max, bool extract) {
    std::vector<std::vector<Elite>> elites(k());
    for (std::size_t i = 0; i < k(); ++i) {
        const Role role = initial_.schema()[i];
        const auto& t0 = thoughts_.at(role, 0);
        std::vector<Elite> all;
        for (int generated = 0; generated < on_max;) {
            const auto before = ledger_.consumed();
            auto part = design_task(i, t0, initial_, "warm-start", on_max - generated);
            const auto used = static_cast<int>(ledger_.consumed() - before);
            if (used == 0) break;
            generated += used;
            all.insert(all.end(), part.begin(), part.end());
        }
        std::stable_sort(all.begin(), all.end(), [](const Elite& x, const Elite& y) { return x.fit > y.fit; });
        std::set<std::string> seen;
        for (auto& e : all) {
            if (static_cast<int>(elites[i].size()) >= ap) break;
            if (!seen.insert(e.op.code).second) continue;
            elites[i].push_back(e);
        }
        if (static_cast<int>(elites[i].size()) < ap) {
            const auto msg = std::string(operators::role_name(role)) + ": " + std::to_string(elites[i].size()) +
                             " valid elites for AP=" + std::to_string(ap);
            partial.warnings.push_back(msg);
            log("warning: " + msg);
        }
        if (extract)
            for (const auto& e : elites[i])
                thoughts_.add(genesis::extract_design_thought(e.op, e.fit, *env_.backend, next_seed("extract")));
    }
    return elites;
}

RotationOutcome SearchSession::rotate(const std::vector<int>& strategy, int sweeps, const std::string& stage) {
    if (strategy.size() != k()) throw ContractError("strategy length differs from K");
    if (sweeps < 0) sweeps = settings_.budget.iter_mid;
    std::vector<double> traj{best_fit_};
    RotationOutcome out;
    double score = -1.0;
    try {
        for (int s = 0; s < sweeps; ++s) {
            for (std::size_t i = 0; i < k(); ++i) {
                const auto& t = thoughts_.at(best_.schema()[i], strategy[i]);
                const auto base = best_;
                const auto cands = design_task(i, t, base, stage);
                out.valid += static_cast<int>(cands.size());
                if (cands.empty()) {
                    ++partial.skipped_slots;
                } else {
                    score = std::max(score, cands.front().fit);
                    offer(base.with_slot(i, std::make_shared<const Operator>(cands.front().op)), cands.front().fit);
                }
                traj.push_back(best_fit_);
            }
        }
    } catch (...) {
        partial.rotations.push_back(std::move(traj));
        throw;
    }
    partial.rotations.push_back(std::move(traj));
    out.fit = std::max(score, 0.0);
    out.combination = best_.id();
    return out;
}

void SearchSession::snapshot(int iteration, const std::string& tree_json) {
    if (!env_.snapshot_dir) return;
    char name[32];
    std::snprintf(name, sizeof name, "iter_%03d", iteration);
    const auto dir = *env_.snapshot_dir / name;
    std::filesystem::create_directories(dir);
    if (!tree_json.empty()) write_text(dir / "tree.json", tree_json);
    auto kv = ledger_.to_kv();
    kv.set("best_fit", best_fit_);
    kv.set("best_combination", best_.id());
    kv.save(dir / "ledger.kv");
}

StrategyResult SearchSession::finish(const std::string& controller) {
    StrategyResult r = partial;
    r.controller = controller;
    r.best = best_;
    r.best_fit = best_fit_;
    r.best_strategy.clear();
    for (std::size_t i = 0; i < best_.size(); ++i) r.best_strategy.push_back(thought_index(best_[i]));
    r.records = records_;
    r.thoughts = thoughts_;
    r.generated = ledger_.consumed();
    r.budget_limit = ledger_.limit();
    r.ledger = ledger_.to_kv();
    r.seed = settings_.seed;
    return r;
}

// ---------------------------------------------------------------------------

namespace {

int domain_of(const SearchSession& s, int depth) {
    return static_cast<int>(s.thoughts().size(s.best().schema()[static_cast<std::size_t>(depth)]));
}

void run_tree(SearchSession& s, MctsTree& tree, const ExpandHook& on_expand) {
    const int k = static_cast<int>(s.k());
    const auto domain = [&](int d) { return domain_of(s, d); };
    const auto hook = [&](const std::vector<int>& st) { return s.rotate(st); };
    for (int it = 1; it <= s.settings().budget.iter_out; ++it) {
        const auto out = mcts_iteration(tree, k, domain, hook, s.rng(), on_expand);
        if (out.exhausted) {
            s.partial.stop_reason = "tree-exhausted";
            break;
        }
        if (out.failed) ++s.partial.failed_rotations;
        s.partial.history.push_back({it, out.fit, s.best_fit(), out.strategy});
        s.partial.tree_json = tree.to_json();
        s.snapshot(it, s.partial.tree_json);
    }
}

void run_e2oc(SearchSession& s, bool warm) {
    const auto& b = s.settings().budget;
    if (warm) s.warm_start(s.settings().ap, b.iter_mid * b.sam_max, true);
    MctsTree tree(s.settings().exploration);
    s.partial.tree_json = tree.to_json();
    run_tree(s, tree, {});
}

void run_sample(SearchSession& s, bool warm) {
    const auto& b = s.settings().budget;
    std::vector<std::vector<Elite>> elites(s.k());
    if (warm) elites = s.warm_start(s.settings().ap, b.iter_mid * b.sam_max, false);
    std::vector<std::size_t> used(s.k(), 0);
    const auto on_expand = [&](int depth) {
        const auto d = static_cast<std::size_t>(depth);
        const Role role = s.best().schema()[d];
        if (static_cast<int>(s.thoughts().size(role)) > s.settings().ap) return;
        Elite src = used[d] < elites[d].size() ? elites[d][used[d]++] : Elite{s.best()[d], s.best_fit()};
        s.thoughts().add(genesis::extract_design_thought(src.op, src.fit, *s.env().backend, s.next_seed("extract")));
    };
    MctsTree tree(s.settings().exploration);
    s.partial.tree_json = tree.to_json();
    run_tree(s, tree, on_expand);
}

void run_tuple(SearchSession& s, bool warm) {
    const auto& b = s.settings().budget;
    if (warm) s.warm_start(s.settings().ap, b.iter_mid * b.sam_max, true);
    const int k = static_cast<int>(s.k());
    MctsTree tree(s.settings().exploration, std::vector<int>(s.k(), 0));
    s.partial.tree_json = tree.to_json();
    const auto hook = [&](const std::vector<int>& st) { return s.rotate(st); };

    const auto mutate = [&](int node) -> std::vector<int> {
        std::vector<int> slots;
        for (int d = 0; d < k; ++d)
            if (domain_of(s, d) > 1) slots.push_back(d);
        if (slots.empty()) return {};
        std::set<std::vector<int>> taken{tree.node(node).state};
        for (int c : tree.node(node).children) taken.insert(tree.node(c).state);
        for (int attempt = 0; attempt < 32; ++attempt) {
            auto st = tree.node(node).state;
            const int d = slots[s.rng().below(slots.size())];
            const int n = domain_of(s, d);
            st[static_cast<std::size_t>(d)] =
                (st[static_cast<std::size_t>(d)] + 1 + static_cast<int>(s.rng().below(static_cast<std::uint64_t>(n - 1)))) % n;
            if (!taken.count(st)) return st;
        }
        return {};
    };

    for (int it = 1; it <= b.iter_out; ++it) {
        if (tree.node(0).dead) {
            s.partial.stop_reason = "tree-exhausted";
            break;
        }
        int cur = 0;
        while (tree.node(cur).vs > 0) {
            if (static_cast<int>(tree.node(cur).children.size()) < s.settings().tuple_children) {
                auto st = mutate(cur);
                if (!st.empty()) {
                    cur = tree.add_child(cur, std::move(st));
                    break;
                }
            }
            const int next = tree.select_child(cur);
            if (next < 0) break;
            cur = next;
        }
        IterationOutcome out;
        out.node = cur;
        out.strategy = tree.node(cur).state;
        simulate_and_backpropagate(tree, out, hook);
        if (out.failed) ++s.partial.failed_rotations;
        s.partial.history.push_back({it, out.fit, s.best_fit(), out.strategy});
        s.partial.tree_json = tree.to_json();
        s.snapshot(it, s.partial.tree_json);
    }
}

void run_operator_tree(SearchSession& s) {
    const auto& b = s.settings().budget;
    const int k = static_cast<int>(s.k());
    const long long iterations = static_cast<long long>(b.iter_out + 1) * b.iter_mid * k;
    std::vector<OperatorPtr> pool;
    MctsTree tree(s.settings().exploration);
    s.partial.tree_json = tree.to_json();

    const auto combo_of = [&](int node) {
        auto c = s.best();
        const auto& st = tree.node(node).state;
        for (std::size_t d = 0; d < st.size(); ++d) c = c.with_slot(d, pool[static_cast<std::size_t>(st[d])]);
        return c;
    };

    for (long long it = 1; it <= iterations; ++it) {
        if (tree.node(0).dead) {
            s.partial.stop_reason = "tree-exhausted";
            break;
        }
        int cur = 0;
        double fit = 0.0;
        bool evaluated = false;
        while (static_cast<int>(tree.node(cur).state.size()) < k) {
            if (tree.node(cur).children.empty()) {
                const auto depth = tree.node(cur).state.size();
                const auto base = combo_of(cur);
                const auto& t0 = s.thoughts().at(base.schema()[depth], 0);
                const auto cands = s.design_task(depth, t0, base, "mcts-oc");
                std::set<std::string> seen;
                for (const auto& e : cands) {
                    if (static_cast<int>(tree.node(cur).children.size()) >= s.settings().oc_width) break;
                    if (!seen.insert(e.op.code).second) continue;
                    pool.push_back(std::make_shared<const Operator>(e.op));
                    auto st = tree.node(cur).state;
                    st.push_back(static_cast<int>(pool.size() - 1));
                    const int child = tree.add_child(cur, std::move(st));
                    tree.node(child).best_fit = e.fit;
                    s.offer(base.with_slot(depth, pool.back()), e.fit);
                }
                if (tree.node(cur).children.empty()) {
                    auto& nd = tree.node(cur);
                    nd.flagged = true;
                    if (++nd.zero_valid >= 2) nd.dead = true;
                    evaluated = true;
                    break;
                }
                cur = tree.node(cur).children.front();
                fit = tree.node(cur).best_fit;
                evaluated = true;
                break;
            }
            const int next = tree.select_child(cur);
            if (next < 0) {
                tree.node(cur).dead = true;
                break;
            }
            cur = next;
            if (tree.node(cur).vs == 0) {
                fit = tree.node(cur).best_fit;
                evaluated = true;
                break;
            }
        }
        if (!evaluated) {
            const auto c = combo_of(cur);
            fit = s.evaluate(c, "mcts-oc");
            s.offer(c, fit);
        }
        tree.backpropagate(cur, std::max(fit, 0.0));
        s.partial.history.push_back({static_cast<int>(it), fit, s.best_fit(), tree.node(cur).state});
        if (it % (static_cast<long long>(b.iter_mid) * k) == 0) {
            s.partial.tree_json = tree.to_json();
            s.snapshot(static_cast<int>(it / (static_cast<long long>(b.iter_mid) * k)), s.partial.tree_json);
        }
    }
    s.partial.tree_json = tree.to_json();
}

void run_cd(SearchSession& s) {
    const auto& b = s.settings().budget;
    const std::vector<int> zeros(s.k(), 0);
    const int sweeps = (b.iter_out + 1) * b.iter_mid;
    for (int it = 1; it <= sweeps; ++it) {
        const auto out = s.rotate(zeros, 1, "cd");
        s.partial.history.push_back({it, out.fit, s.best_fit(), zeros});
        if (it % b.iter_mid == 0) s.snapshot(it / b.iter_mid, {});
    }
}

void run_bandit(SearchSession& s, bool windowed) {
    const auto& b = s.settings().budget;
    const auto k = s.k();
    const long long pulls = static_cast<long long>(b.iter_out + 1) * b.iter_mid * static_cast<long long>(k);
    Ucb1 ucb(k, s.settings().exploration);
    SlidingWindowUcb win(k, static_cast<std::size_t>(std::max(1, s.settings().window)), s.settings().exploration);
    std::vector<int> current(k, 0);
    const std::string stage = windowed ? "win-ucb" : "ucb";
    for (long long t = 1; t <= pulls; ++t) {
        const auto arm = windowed ? win.select() : ucb.select();
        const Role role = s.best().schema()[arm];
        const auto before = s.best_fit();
        const auto base = s.best();
        const auto cands = s.design_task(arm, s.thoughts().at(role, current[arm]), base, stage);
        double score = 0.0;
        if (cands.empty()) {
            ++s.partial.skipped_slots;
        } else {
            score = cands.front().fit;
            s.offer(base.with_slot(arm, std::make_shared<const Operator>(cands.front().op)), score);
        }
        const double reward = score > before ? 1.0 : 0.0;
        if (windowed) {
            win.update(arm, reward);
            if (reward > 0.0 && static_cast<int>(s.thoughts().size(role)) <= s.settings().ap) {
                const auto& added = s.thoughts().add(
                    genesis::extract_design_thought(s.best()[arm], s.best_fit(), *s.env().backend, s.next_seed("extract")));
                current[arm] = added.index;
            }
        } else {
            ucb.update(arm, reward);
        }
        s.partial.history.push_back({static_cast<int>(t), score, s.best_fit(), {static_cast<int>(arm)}});
        if (t % (static_cast<long long>(b.iter_mid) * static_cast<long long>(k)) == 0)
            s.snapshot(static_cast<int>(t / (static_cast<long long>(b.iter_mid) * static_cast<long long>(k))), {});
    }
}

}  // namespace

StrategyResult run_search(ControllerKind kind, const SearchStart& start, const SearchSettings& settings,
                          const SearchEnv& env) {
    SearchSession s(start, settings, env);
    const bool warm = !start.thoughts.has_value();
    try {
        switch (kind) {
            case ControllerKind::e2oc: run_e2oc(s, warm); break;
            case ControllerKind::mcts_sample: run_sample(s, warm); break;
            case ControllerKind::mcts_tuple: run_tuple(s, warm); break;
            case ControllerKind::mcts_oc: run_operator_tree(s); break;
            case ControllerKind::cd: run_cd(s); break;
            case ControllerKind::ucb: run_bandit(s, false); break;
            case ControllerKind::win_ucb: run_bandit(s, true); break;
        }
    } catch (const BudgetExhausted& e) {
        s.partial.stop_reason = "budget-exhausted";
        s.log(e.what());
    }
    return s.finish(controller_name(kind));
}

StrategyResult run_chain(const StrategyResult& previous, ControllerKind kind, const SearchSettings& settings,
                         const SearchEnv& env) {
    SearchStart start{previous.best, previous.best_fit, previous.thoughts};
    return run_search(kind, start, settings, env);
}

// ---------------------------------------------------------------------------

namespace {

std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

std::vector<int> split_ints(const std::string& s) {
    std::vector<int> out;
    std::stringstream in(s);
    for (std::string tok; std::getline(in, tok, ',');)
        if (!tok.empty()) out.push_back(std::stoi(tok));
    return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream in(line);
    for (std::string tok; std::getline(in, tok, '\t');) out.push_back(tok);
    if (!line.empty() && line.back() == '\t') out.emplace_back();
    return out;
}

}  // namespace

void save_result(const std::filesystem::path& dir, const StrategyResult& r) {
    std::filesystem::create_directories(dir);
    KeyValue kv;
    kv.set("schema_version", static_cast<long long>(kResultSchemaVersion));
    kv.set("controller", r.controller);
    kv.set("best_fit", r.best_fit);
    kv.set("best_combination", r.best.id());
    kv.set("best_strategy", join_ints(r.best_strategy));
    std::string roles;
    for (auto role : r.best.schema()) roles += (roles.empty() ? "" : ",") + std::string(operators::role_name(role));
    kv.set("roles", roles);
    kv.set("generated", r.generated);
    kv.set("budget_limit", r.budget_limit);
    kv.set("skipped_slots", static_cast<long long>(r.skipped_slots));
    kv.set("failed_rotations", static_cast<long long>(r.failed_rotations));
    kv.set("stop_reason", r.stop_reason);
    kv.set("seed", std::to_string(r.seed));
    for (std::size_t i = 0; i < r.warnings.size(); ++i) kv.set("warning." + std::to_string(i), r.warnings[i]);
    kv.save(dir / "result.kv");
    for (std::size_t i = 0; i < r.best.size(); ++i) operators::save_operator(dir / "best" / ("slot" + std::to_string(i)), r.best[i]);
    r.thoughts.save(dir / "thoughts.json");
    r.ledger.save(dir / "ledger.kv");
    if (!r.tree_json.empty()) write_text(dir / "tree.json", r.tree_json);

    std::ostringstream rec;
    rec << "stage\tcombination\tseed\tfit\tflagged\n";
    for (const auto& x : r.records)
        rec << x.stage << '\t' << x.combination << '\t' << x.seed << '\t' << format_real(x.fit) << '\t'
            << (x.flagged ? 1 : 0) << '\n';
    write_text(dir / "records.tsv", rec.str());

    std::ostringstream hist;
    hist << "iteration\tscore\tbest_fit\tstrategy\n";
    for (const auto& h : r.history)
        hist << h.iteration << '\t' << format_real(h.score) << '\t' << format_real(h.best_fit) << '\t'
             << join_ints(h.strategy) << '\n';
    write_text(dir / "history.tsv", hist.str());

    std::ostringstream rot;
    for (const auto& series : r.rotations) {
        for (std::size_t i = 0; i < series.size(); ++i) rot << (i ? "\t" : "") << format_real(series[i]);
        rot << '\n';
    }
    write_text(dir / "rotations.tsv", rot.str());
}

StrategyResult load_result(const std::filesystem::path& dir) {
    if (!std::filesystem::exists(dir / "result.kv"))
        throw ConfigError("no search result in " + dir.string() + " (result.kv missing)");
    const auto kv = KeyValue::load(dir / "result.kv");
    const auto version = kv.integer("schema_version", 0);
    if (version != kResultSchemaVersion)
        throw ConfigError("result in " + dir.string() + " has schema version " + std::to_string(version) +
                          ", expected " + std::to_string(kResultSchemaVersion) +
                          "; re-run the search with this build or convert result.kv and records.tsv to the current layout");
    StrategyResult r;
    r.controller = kv.str("controller");
    r.best_fit = kv.real("best_fit");
    r.best_strategy = split_ints(kv.str("best_strategy", ""));
    operators::Schema schema;
    for (const auto& name : kv.list("roles")) schema.push_back(operators::parse_role(name));
    std::vector<OperatorPtr> ops;
    for (std::size_t i = 0; i < schema.size(); ++i)
        ops.push_back(std::make_shared<const Operator>(operators::load_operator(dir / "best" / ("slot" + std::to_string(i)))));
    r.best = OperatorCombination(schema, ops);
    r.generated = kv.integer("generated");
    r.budget_limit = kv.integer("budget_limit");
    r.skipped_slots = static_cast<int>(kv.integer("skipped_slots", 0));
    r.failed_rotations = static_cast<int>(kv.integer("failed_rotations", 0));
    r.stop_reason = kv.str("stop_reason", "completed");
    r.seed = std::stoull(kv.str("seed", "0"));
    for (int i = 0; kv.has("warning." + std::to_string(i)); ++i) r.warnings.push_back(kv.str("warning." + std::to_string(i)));
    r.thoughts = PromptStorage::load(dir / "thoughts.json");
    if (std::filesystem::exists(dir / "ledger.kv")) r.ledger = KeyValue::load(dir / "ledger.kv");
    if (std::filesystem::exists(dir / "tree.json")) r.tree_json = read_text(dir / "tree.json");

    std::istringstream rec(read_text(dir / "records.tsv"));
    std::string line;
    std::getline(rec, line);
    while (std::getline(rec, line)) {
        const auto f = split_tabs(line);
        if (f.size() != 5) throw ParseError("malformed record row", 0);
        r.records.push_back({f[0], f[1], std::stoull(f[2]), std::stod(f[3]), f[4] == "1"});
    }
    std::istringstream hist(read_text(dir / "history.tsv"));
    std::getline(hist, line);
    while (std::getline(hist, line)) {
        const auto f = split_tabs(line);
        if (f.size() < 3) throw ParseError("malformed history row", 0);
        r.history.push_back({std::stoi(f[0]), std::stod(f[1]), std::stod(f[2]), split_ints(f.size() > 3 ? f[3] : "")});
    }
    if (std::filesystem::exists(dir / "rotations.tsv")) {
        std::istringstream rot(read_text(dir / "rotations.tsv"));
        while (std::getline(rot, line)) {
            std::vector<double> series;
            for (const auto& x : split_tabs(line)) series.push_back(std::stod(x));
            r.rotations.push_back(std::move(series));
        }
    }
    return r;
}

}  // namespace e2oc::search
