#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "e2oc/common/rng.hpp"
#include "e2oc/moo/archive.hpp"

namespace e2oc::problems {

enum class ProblemKind { bi_fjsp, tri_fjsp, bi_tsp, tri_tsp };

std::string_view problem_name(ProblemKind kind) noexcept;
ProblemKind parse_problem_kind(std::string_view name);  // throws ConfigError
std::size_t objective_count(ProblemKind kind) noexcept;
bool is_fjsp(ProblemKind kind) noexcept;

/// Integer encoding shared by both problems. FJSP: `sequence` is the
/// job-repetition op-sequence, `assignment` the eligible-set index per
/// operation in canonical (job, op) order. TSP: `sequence` is the tour and
/// `assignment` is empty.
struct Genome {
    std::vector<int> sequence;
    std::vector<int> assignment;

    bool operator==(const Genome&) const = default;
};

/// An instance bound to its objective set.
class Problem {
public:
    virtual ~Problem() = default;

    virtual ProblemKind kind() const noexcept = 0;
    virtual const std::string& id() const noexcept = 0;
    std::size_t objectives() const noexcept { return objective_count(kind()); }

    virtual Genome random_genome(Rng& rng) const = 0;
    virtual bool feasible(const Genome& g) const noexcept = 0;

    /// Throws InfeasibleEncoding when `g` is not feasible.
    virtual moo::ObjectiveVector evaluate(const Genome& g) const = 0;

    /// Coordinate-wise lower bound on every feasible objective vector.
    virtual moo::ObjectiveVector ideal() const = 0;
};

}  // namespace e2oc::problems
