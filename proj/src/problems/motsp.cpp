#include "e2oc/problems/motsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "e2oc/common/error.hpp"
#include "e2oc/common/kv.hpp"
#include "e2oc/kernels/kernels.hpp"

namespace e2oc::problems {

void MotspInstance::validate() const {
    if (spaces.size() < 2) throw ContractError("MoTSP needs at least two coordinate spaces");
    const auto k = spaces.front().size();
    if (k < 3) throw ContractError("MoTSP needs at least three nodes");
    for (const auto& s : spaces) {
        if (s.size() != k) throw ContractError("coordinate spaces differ in node count");
        for (const auto& p : s)
            if (!std::isfinite(p[0]) || !std::isfinite(p[1])) throw ContractError("non-finite coordinate");
    }
}

MotspInstance generate_motsp(std::uint64_t seed, std::size_t k, std::size_t m, std::string id) {
    if (k < 3) throw ConfigError("MoTSP needs k >= 3");
    if (m != 2 && m != 3) throw ConfigError("MoTSP supports M = 2 or 3");
    MotspInstance inst;
    inst.id = id.empty() ? "tsp" + std::to_string(k) + "-m" + std::to_string(m) + "-s" + std::to_string(seed) : std::move(id);
    inst.seed = seed;
    Rng rng(seed);
    inst.spaces.assign(m, std::vector<Point2>(k));
    for (auto& space : inst.spaces)
        for (auto& p : space) {
            p[0] = rng.uniform();
            p[1] = rng.uniform();
        }
    return inst;
}

std::string format_motsp(const MotspInstance& inst) {
    std::string out;
    out += "k " + std::to_string(inst.nodes()) + "\n";
    out += "M " + std::to_string(inst.objectives()) + "\n";
    out += "seed " + std::to_string(inst.seed) + "\n";
    out += "generator " + inst.generator + "\n";
    for (std::size_t m = 0; m < inst.spaces.size(); ++m) {
        out += "space " + std::to_string(m) + "\n";
        for (const auto& p : inst.spaces[m]) out += format_real(p[0]) + " " + format_real(p[1]) + "\n";
    }
    return out;
}

MotspInstance parse_motsp(const std::string& text, std::string id) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto next_line = [&]() -> std::string {
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.find_first_not_of(" \t") != std::string::npos) return line;
        }
        throw ParseError("truncated MoTSP file", lineno);
    };
    auto header = [&](const std::string& key) {
        std::istringstream s(next_line());
        std::string k, v;
        if (!(s >> k >> v) || k != key) throw ParseError("expected '" + key + " <value>'", lineno);
        return v;
    };
    MotspInstance inst;
    std::size_t k = 0, m = 0;
    try {
        k = std::stoul(header("k"));
        m = std::stoul(header("M"));
        inst.seed = std::stoull(header("seed"));
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("bad header value", lineno);
    }
    inst.generator = header("generator");
    if (k < 3 || m < 2) throw ParseError("need k >= 3 and M >= 2", lineno);
    inst.spaces.assign(m, std::vector<Point2>(k));
    for (std::size_t s = 0; s < m; ++s) {
        if (header("space") != std::to_string(s)) throw ParseError("spaces out of order", lineno);
        for (std::size_t i = 0; i < k; ++i) {
            std::istringstream row(next_line());
            std::string x, y, extra;
            if (!(row >> x >> y) || (row >> extra)) throw ParseError("expected 'x y'", lineno);
            try {
                inst.spaces[s][i] = {std::stod(x), std::stod(y)};
            } catch (const std::exception&) {
                throw ParseError("bad coordinate", lineno);
            }
        }
    }
    inst.id = id.empty() ? "tsp" + std::to_string(k) + "-m" + std::to_string(m) + "-s" + std::to_string(inst.seed)
                         : std::move(id);
    inst.validate();
    return inst;
}

DistanceTables::DistanceTables(const MotspInstance& inst) : k_(inst.nodes()) {
    tables_.resize(inst.objectives());
    std::vector<double> xs(k_), ys(k_);
    for (std::size_t m = 0; m < tables_.size(); ++m) {
        for (std::size_t i = 0; i < k_; ++i) {
            xs[i] = inst.spaces[m][i][0];
            ys[i] = inst.spaces[m][i][1];
        }
        tables_[m].resize(k_ * k_);
        for (std::size_t i = 0; i < k_; ++i)
            kernels::distance_row(xs.data(), ys.data(), k_, xs[i], ys[i], tables_[m].data() + i * k_);
    }
}

bool is_tour(const Tour& t, std::size_t k) noexcept {
    if (t.size() != k) return false;
    std::vector<char> seen(k, 0);
    for (int v : t) {
        if (v < 0 || static_cast<std::size_t>(v) >= k || seen[static_cast<std::size_t>(v)]) return false;
        seen[static_cast<std::size_t>(v)] = 1;
    }
    return true;
}

double tour_length(const Tour& t, const DistanceTables& d, std::size_t m) noexcept {
    // Sum in a canonical order (from node 0, towards its smaller neighbour) so
    // rotations and reversals of one cycle give bit-identical lengths.
    const std::size_t n = t.size();
    if (n == 0) return 0.0;
    const auto zero = static_cast<std::size_t>(std::find(t.begin(), t.end(), 0) - t.begin());
    const std::size_t start = zero == n ? 0 : zero;
    const bool forward = t[(start + 1) % n] <= t[(start + n - 1) % n];
    double len = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        const std::size_t i = forward ? (start + s) % n : (start + n - s) % n;
        const std::size_t j = forward ? (i + 1) % n : (i + n - 1) % n;
        len += d(m, t[i], t[j]);
    }
    return len;
}

moo::ObjectiveVector tour_objectives(const Tour& t, const DistanceTables& d) {
    if (!is_tour(t, d.nodes())) throw InfeasibleEncoding("tour is not a permutation of 0.." + std::to_string(d.nodes() - 1));
    moo::ObjectiveVector f(d.spaces());
    for (std::size_t m = 0; m < f.size(); ++m) f[m] = tour_length(t, d, m);
    return f;
}

moo::ObjectiveVector tour_objectives(const Tour& t, const MotspInstance& inst) {
    return tour_objectives(t, DistanceTables(inst));
}

moo::ObjectiveVector motsp_lower_bound(const DistanceTables& d) {
    const std::size_t k = d.nodes();
    moo::ObjectiveVector f(d.spaces(), 0.0);
    for (std::size_t m = 0; m < f.size(); ++m) {
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            double a = std::numeric_limits<double>::infinity(), b = a;
            for (std::size_t j = 0; j < k; ++j) {
                if (j == i) continue;
                const double e = d(m, static_cast<int>(i), static_cast<int>(j));
                if (e < a) {
                    b = a;
                    a = e;
                } else if (e < b) {
                    b = e;
                }
            }
            sum += a + b;
        }
        f[m] = sum / 2.0;
    }
    return f;
}

TspProblem::TspProblem(std::shared_ptr<const MotspInstance> inst, ProblemKind kind)
    : inst_(std::move(inst)), kind_(kind), dist_(*inst_) {
    if (is_fjsp(kind)) throw ConfigError("MoTSP instance bound to an FJSP objective set");
    inst_->validate();
    if (inst_->objectives() != objective_count(kind))
        throw ConfigError("instance " + inst_->id + " has " + std::to_string(inst_->objectives()) +
                          " coordinate spaces, problem needs " + std::to_string(objective_count(kind)));
}

Genome TspProblem::random_genome(Rng& rng) const {
    Genome g;
    g.sequence.resize(inst_->nodes());
    for (std::size_t i = 0; i < g.sequence.size(); ++i) g.sequence[i] = static_cast<int>(i);
    rng.shuffle(g.sequence);
    return g;
}

bool TspProblem::feasible(const Genome& g) const noexcept {
    return g.assignment.empty() && is_tour(g.sequence, inst_->nodes());
}

moo::ObjectiveVector TspProblem::evaluate(const Genome& g) const {
    if (!g.assignment.empty()) throw InfeasibleEncoding("TSP genome carries a machine assignment");
    return tour_objectives(g.sequence, dist_);
}

}  // namespace e2oc::problems
