#pragma once

#include <memory>
#include <string>
#include <vector>

#include "e2oc/problems/problem.hpp"

namespace e2oc::problems {

struct FjspOption {
    int machine = 0;  // 0-based
    int duration = 0;

    bool operator==(const FjspOption&) const = default;
};

struct FjspInstance {
    std::string id;
    int machines = 0;
    /// jobs[j][t] = eligible (machine, duration) pairs of operation t of job j.
    std::vector<std::vector<std::vector<FjspOption>>> jobs;

    std::size_t job_count() const noexcept { return jobs.size(); }
    std::size_t operation_count() const noexcept;
    /// Position of (job, 0) in canonical order.
    std::vector<std::size_t> job_offsets() const;
    void validate() const;  // throws ContractError

    bool operator==(const FjspInstance&) const = default;
};

using FjspSolution = Genome;

/// Brandimarte .fjs text. Machine ids in the file are 1-based.
FjspInstance parse_brandimarte(const std::string& text, std::string id = "fjsp");
std::string serialize_brandimarte(const FjspInstance& inst);

struct FjspGeneratorParams {
    int jobs = 10;
    int machines = 6;
    int min_ops = 5;
    int max_ops = 7;
    int max_eligible = 3;
    int min_duration = 1;
    int max_duration = 10;
};

/// Random instance in the style of the Brandimarte set.
FjspInstance generate_fjsp(std::uint64_t seed, const FjspGeneratorParams& params, std::string id);

/// Throws InfeasibleEncoding with the violated invariant.
void check_fjsp_solution(const FjspSolution& sol, const FjspInstance& inst);
bool fjsp_feasible(const FjspSolution& sol, const FjspInstance& inst) noexcept;
FjspSolution random_fjsp_solution(const FjspInstance& inst, Rng& rng);

struct ScheduledOperation {
    int job = 0;
    int op = 0;
    int machine = 0;
    long long start = 0;
    long long end = 0;
};

struct FjspSchedule {
    std::vector<ScheduledOperation> operations;  // in decoding order
    std::vector<long long> machine_load;
    long long makespan = 0;

    long long max_load() const noexcept;
    long long total_load() const noexcept;
};

/// Earliest-gap insertion decoding. Throws InfeasibleEncoding.
FjspSchedule decode_schedule(const FjspSolution& sol, const FjspInstance& inst);

/// (makespan, max load) for M = 2, plus total load for M = 3.
moo::ObjectiveVector schedule_objectives(const FjspSchedule& s, std::size_t m);
moo::ObjectiveVector decode_fjsp(const FjspSolution& sol, const FjspInstance& inst, std::size_t m);

moo::ObjectiveVector fjsp_lower_bound(const FjspInstance& inst, std::size_t m);

class FjspProblem final : public Problem {
public:
    FjspProblem(std::shared_ptr<const FjspInstance> inst, ProblemKind kind);

    ProblemKind kind() const noexcept override { return kind_; }
    const std::string& id() const noexcept override { return inst_->id; }
    Genome random_genome(Rng& rng) const override { return random_fjsp_solution(*inst_, rng); }
    bool feasible(const Genome& g) const noexcept override { return fjsp_feasible(g, *inst_); }
    moo::ObjectiveVector evaluate(const Genome& g) const override {
        return decode_fjsp(g, *inst_, objectives());
    }
    moo::ObjectiveVector ideal() const override { return fjsp_lower_bound(*inst_, objectives()); }

    const FjspInstance& instance() const noexcept { return *inst_; }

private:
    std::shared_ptr<const FjspInstance> inst_;
    ProblemKind kind_;
};

}  // namespace e2oc::problems
