#include "e2oc/search/tree.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "e2oc/common/error.hpp"

namespace e2oc::search {

MctsTree::MctsTree(double c, std::vector<int> root_state) : c_(c) {
    MctsNode root;
    root.state = std::move(root_state);
    nodes_.push_back(std::move(root));
}

int MctsTree::add_child(int parent, std::vector<int> state) {
    const int id = static_cast<int>(nodes_.size());
    MctsNode n;
    n.id = id;
    n.parent = parent;
    n.state = std::move(state);
    nodes_.push_back(std::move(n));
    node(parent).children.push_back(id);
    return id;
}

double MctsTree::ucb(int child) const {
    const auto& n = node(child);
    if (n.parent < 0) throw ContractError("the root has no UCB score");
    return ucb_score(n.sco, n.vs, node(n.parent).vs, c_);
}

int MctsTree::select_child(int parent) const {
    int best = -1;
    double best_v = 0.0;
    for (int c : node(parent).children) {
        if (node(c).dead) continue;
        const double v = ucb(c);
        if (best < 0 || v > best_v) best = c, best_v = v;
    }
    return best;
}

void MctsTree::backpropagate(int leaf, double fit) {
    for (int i = leaf; i >= 0; i = node(i).parent) {
        node(i).sco += fit;
        ++node(i).vs;
    }
}

std::vector<int> MctsTree::path(int leaf) const {
    std::vector<int> p;
    for (int i = leaf; i >= 0; i = node(i).parent) p.insert(p.begin(), i);
    return p;
}

bool MctsTree::well_formed(bool prefix_states) const {
    for (const auto& n : nodes_) {
        if (!std::isfinite(n.sco) || n.sco < 0.0) return false;
        long long child_visits = 0;
        for (int c : n.children) {
            const auto& ch = node(c);
            if (ch.parent != n.id) return false;
            child_visits += ch.vs;
            if (prefix_states) {
                if (ch.state.size() != n.state.size() + 1) return false;
                if (!std::equal(n.state.begin(), n.state.end(), ch.state.begin())) return false;
            }
        }
        if (n.vs < child_visits) return false;
    }
    return true;
}

std::string MctsTree::to_json() const {
    nlohmann::ordered_json j;
    j["exploration"] = c_;
    auto& arr = j["nodes"] = nlohmann::ordered_json::array();
    for (const auto& n : nodes_) {
        nlohmann::ordered_json o;
        o["id"] = n.id;
        o["parent"] = n.parent;
        o["state"] = n.state;
        o["sco"] = n.sco;
        o["vs"] = n.vs;
        o["children"] = n.children;
        o["dead"] = n.dead;
        o["flagged"] = n.flagged;
        o["best_fit"] = n.best_fit;
        o["best_combination"] = n.best_combination;
        arr.push_back(std::move(o));
    }
    return j.dump(1);
}

void simulate_and_backpropagate(MctsTree& tree, IterationOutcome& out, const RotationHook& hook) {
    RotationOutcome r;
    try {
        r = hook(out.strategy);
    } catch (const BackendError&) {
        throw;
    } catch (const BudgetExhausted&) {
        throw;
    } catch (const Error&) {
        out.failed = true;
    }
    auto& nd = tree.node(out.node);
    if (out.failed) {
        nd.flagged = true;
        out.fit = 0.0;
    } else {
        out.fit = r.fit;
        if (r.valid == 0) {
            nd.flagged = true;
            if (++nd.zero_valid >= 2) nd.dead = true;
        }
        if (r.fit > nd.best_fit) nd.best_fit = r.fit, nd.best_combination = r.combination;
    }
    tree.backpropagate(out.node, out.fit);
}

IterationOutcome mcts_iteration(MctsTree& tree, int k, const DomainSize& domain, const RotationHook& hook, Rng& rng,
                                const ExpandHook& on_expand) {
    IterationOutcome out;
    int cur = 0;
    while (true) {
        if (tree.node(0).dead) {
            out.exhausted = true;
            return out;
        }
        const int depth = static_cast<int>(tree.node(cur).state.size());
        if (depth >= k) break;
        if (on_expand) {
            const auto& ch = tree.node(cur).children;
            if (std::all_of(ch.begin(), ch.end(), [&](int c) { return tree.node(c).vs > 0; })) on_expand(depth);
        }
        // Expansion: one child per thought of the next domain (lazily topped
        // up when the domain has grown since).
        const int n = domain(depth);
        for (int g = static_cast<int>(tree.node(cur).children.size()); g < n; ++g) {
            auto s = tree.node(cur).state;
            s.push_back(g);
            tree.add_child(cur, std::move(s));
        }
        const int next = tree.select_child(cur);
        if (next < 0) {
            tree.node(cur).dead = true;
            cur = 0;
            continue;
        }
        cur = next;
        if (tree.node(cur).vs == 0) break;
    }

    out.node = cur;
    out.strategy = tree.node(cur).state;
    for (int d = static_cast<int>(out.strategy.size()); d < k; ++d)
        out.strategy.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, domain(d))))));

    simulate_and_backpropagate(tree, out, hook);
    return out;
}

}  // namespace e2oc::search
