#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "e2oc/problems/problem.hpp"

namespace e2oc::problems {

using Point2 = std::array<double, 2>;
using Tour = std::vector<int>;

struct MotspInstance {
    std::string id;
    std::uint64_t seed = 0;
    std::string generator = std::string(kRngName);
    /// spaces[m][i] = coordinates of node i in space m.
    std::vector<std::vector<Point2>> spaces;

    std::size_t nodes() const noexcept { return spaces.empty() ? 0 : spaces.front().size(); }
    std::size_t objectives() const noexcept { return spaces.size(); }
    void validate() const;  // throws ContractError

    bool operator==(const MotspInstance&) const = default;
};

/// M sets of k points i.i.d. uniform on [0,1]^2, drawn in (space, node, x, y) order.
MotspInstance generate_motsp(std::uint64_t seed, std::size_t k, std::size_t m, std::string id = "");

std::string format_motsp(const MotspInstance& inst);
MotspInstance parse_motsp(const std::string& text, std::string id = "");

/// Row-major k x k Euclidean distance matrix of every space.
class DistanceTables {
public:
    explicit DistanceTables(const MotspInstance& inst);

    std::size_t nodes() const noexcept { return k_; }
    std::size_t spaces() const noexcept { return tables_.size(); }
    double operator()(std::size_t m, int a, int b) const noexcept {
        return tables_[m][static_cast<std::size_t>(a) * k_ + static_cast<std::size_t>(b)];
    }

private:
    std::size_t k_;
    std::vector<std::vector<double>> tables_;
};

bool is_tour(const Tour& t, std::size_t k) noexcept;
double tour_length(const Tour& t, const DistanceTables& d, std::size_t m) noexcept;

/// Cyclic tour length per space. Throws InfeasibleEncoding on a non-permutation.
moo::ObjectiveVector tour_objectives(const Tour& t, const DistanceTables& d);
moo::ObjectiveVector tour_objectives(const Tour& t, const MotspInstance& inst);

/// Half the sum over nodes of the two shortest incident edges, per space.
moo::ObjectiveVector motsp_lower_bound(const DistanceTables& d);

class TspProblem final : public Problem {
public:
    TspProblem(std::shared_ptr<const MotspInstance> inst, ProblemKind kind);

    ProblemKind kind() const noexcept override { return kind_; }
    const std::string& id() const noexcept override { return inst_->id; }
    Genome random_genome(Rng& rng) const override;
    bool feasible(const Genome& g) const noexcept override;
    moo::ObjectiveVector evaluate(const Genome& g) const override;
    moo::ObjectiveVector ideal() const override { return motsp_lower_bound(dist_); }

    const MotspInstance& instance() const noexcept { return *inst_; }
    const DistanceTables& distances() const noexcept { return dist_; }

private:
    std::shared_ptr<const MotspInstance> inst_;
    ProblemKind kind_;
    DistanceTables dist_;
};

}  // namespace e2oc::problems
