#include "e2oc/problems/fjsp.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "e2oc/common/error.hpp"

namespace e2oc::problems {

std::size_t FjspInstance::operation_count() const noexcept {
    std::size_t n = 0;
    for (const auto& j : jobs) n += j.size();
    return n;
}

std::vector<std::size_t> FjspInstance::job_offsets() const {
    std::vector<std::size_t> off(jobs.size() + 1, 0);
    for (std::size_t j = 0; j < jobs.size(); ++j) off[j + 1] = off[j] + jobs[j].size();
    return off;
}

void FjspInstance::validate() const {
    if (machines <= 0) throw ContractError("instance " + id + " has no machines");
    if (jobs.empty()) throw ContractError("instance " + id + " has no jobs");
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        if (jobs[j].empty()) throw ContractError("job " + std::to_string(j) + " has no operations");
        for (const auto& op : jobs[j]) {
            if (op.empty()) throw ContractError("operation without eligible machines");
            for (const auto& o : op) {
                if (o.machine < 0 || o.machine >= machines) throw ContractError("machine id out of range");
                if (o.duration <= 0) throw ContractError("non-positive duration");
            }
        }
    }
}

namespace {

struct TokenReader {
    std::vector<std::pair<long long, int>> tokens;  // value, line
    std::size_t pos = 0;

    long long next(const char* what) {
        if (pos >= tokens.size()) {
            const int line = tokens.empty() ? 1 : tokens.back().second;
            throw ParseError(std::string("truncated file, expected ") + what, line);
        }
        return tokens[pos++].first;
    }
    int line() const { return pos == 0 ? 1 : tokens[pos - 1].second; }
};

}  // namespace

FjspInstance parse_brandimarte(const std::string& text, std::string id) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    FjspInstance inst;
    inst.id = std::move(id);

    // Header: jobs machines [average flexibility, possibly fractional].
    bool header = false;
    std::size_t jobs = 0;
    std::vector<std::pair<std::string, int>> job_lines;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (!header) {
            std::istringstream h(line);
            long long nj = 0, nm = 0;
            if (!(h >> nj >> nm) || nj <= 0 || nm <= 0) throw ParseError("bad header", lineno);
            jobs = static_cast<std::size_t>(nj);
            inst.machines = static_cast<int>(nm);
            header = true;
            continue;
        }
        job_lines.emplace_back(line, lineno);
    }
    if (!header) throw ParseError("empty file", lineno == 0 ? 1 : lineno);

    TokenReader tr;
    for (const auto& [l, n] : job_lines) {
        std::istringstream s(l);
        std::string tok;
        while (s >> tok) {
            long long v = 0;
            try {
                std::size_t used = 0;
                v = std::stoll(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw ParseError("not an integer: '" + tok + "'", n);
            }
            tr.tokens.emplace_back(v, n);
        }
    }

    inst.jobs.resize(jobs);
    for (std::size_t j = 0; j < jobs; ++j) {
        const long long ops = tr.next("operation count");
        if (ops <= 0) throw ParseError("job without operations", tr.line());
        inst.jobs[j].resize(static_cast<std::size_t>(ops));
        for (auto& op : inst.jobs[j]) {
            const long long k = tr.next("eligible machine count");
            if (k <= 0) throw ParseError("operation with zero eligible machines", tr.line());
            for (long long e = 0; e < k; ++e) {
                const long long m = tr.next("machine id");
                const long long d = tr.next("duration");
                if (m < 1 || m > inst.machines)
                    throw ParseError("machine id " + std::to_string(m) + " out of range", tr.line());
                if (d <= 0) throw ParseError("non-positive duration", tr.line());
                op.push_back({static_cast<int>(m - 1), static_cast<int>(d)});
            }
        }
    }
    if (tr.pos != tr.tokens.size()) throw ParseError("trailing data after last job", tr.tokens[tr.pos].second);
    return inst;
}

std::string serialize_brandimarte(const FjspInstance& inst) {
    std::size_t options = 0;
    for (const auto& j : inst.jobs)
        for (const auto& op : j) options += op.size();
    const auto ops = inst.operation_count();
    std::ostringstream out;
    out << inst.job_count() << ' ' << inst.machines;
    if (ops) {
        // Average flexibility with two decimals, as in the public files.
        const long long centi = static_cast<long long>(options * 100 + ops / 2) / static_cast<long long>(ops);
        out << ' ' << centi / 100 << '.' << (centi % 100 < 10 ? "0" : "") << centi % 100;
    }
    out << '\n';
    for (const auto& j : inst.jobs) {
        out << j.size();
        for (const auto& op : j) {
            out << "  " << op.size();
            for (const auto& o : op) out << ' ' << o.machine + 1 << ' ' << o.duration;
        }
        out << '\n';
    }
    return out.str();
}

FjspInstance generate_fjsp(std::uint64_t seed, const FjspGeneratorParams& p, std::string id) {
    if (p.jobs < 1 || p.machines < 1 || p.min_ops < 1 || p.max_ops < p.min_ops || p.max_eligible < 1 ||
        p.min_duration < 1 || p.max_duration < p.min_duration)
        throw ConfigError("invalid FJSP generator parameters");
    Rng rng(derive_seed(seed, "fjsp-instance"));
    FjspInstance inst;
    inst.id = std::move(id);
    inst.machines = p.machines;
    inst.jobs.resize(static_cast<std::size_t>(p.jobs));
    std::vector<int> machines(static_cast<std::size_t>(p.machines));
    for (auto& job : inst.jobs) {
        job.resize(static_cast<std::size_t>(rng.between(p.min_ops, p.max_ops)));
        for (auto& op : job) {
            const auto k = rng.between(1, std::min(p.max_eligible, p.machines));
            std::iota(machines.begin(), machines.end(), 0);
            rng.shuffle(machines);
            std::sort(machines.begin(), machines.begin() + k);
            for (long long e = 0; e < k; ++e)
                op.push_back({machines[static_cast<std::size_t>(e)],
                              static_cast<int>(rng.between(p.min_duration, p.max_duration))});
        }
    }
    return inst;
}

void check_fjsp_solution(const FjspSolution& sol, const FjspInstance& inst) {
    const auto ops = inst.operation_count();
    if (sol.sequence.size() != ops)
        throw InfeasibleEncoding("op-sequence has length " + std::to_string(sol.sequence.size()) + ", expected " +
                                 std::to_string(ops));
    if (sol.assignment.size() != ops)
        throw InfeasibleEncoding("machine assignment has length " + std::to_string(sol.assignment.size()) +
                                 ", expected " + std::to_string(ops));
    std::vector<std::size_t> seen(inst.job_count(), 0);
    for (int j : sol.sequence) {
        if (j < 0 || static_cast<std::size_t>(j) >= inst.job_count())
            throw InfeasibleEncoding("job id " + std::to_string(j) + " out of range");
        ++seen[static_cast<std::size_t>(j)];
    }
    for (std::size_t j = 0; j < inst.job_count(); ++j)
        if (seen[j] != inst.jobs[j].size())
            throw InfeasibleEncoding("job " + std::to_string(j) + " appears " + std::to_string(seen[j]) +
                                     " times, expected " + std::to_string(inst.jobs[j].size()));
    std::size_t pos = 0;
    for (const auto& job : inst.jobs)
        for (const auto& op : job) {
            const int a = sol.assignment[pos];
            if (a < 0 || static_cast<std::size_t>(a) >= op.size())
                throw InfeasibleEncoding("assignment index " + std::to_string(a) + " at position " +
                                         std::to_string(pos) + " outside the eligible set");
            ++pos;
        }
}

bool fjsp_feasible(const FjspSolution& sol, const FjspInstance& inst) noexcept {
    try {
        check_fjsp_solution(sol, inst);
        return true;
    } catch (...) {
        return false;
    }
}

FjspSolution random_fjsp_solution(const FjspInstance& inst, Rng& rng) {
    FjspSolution s;
    for (std::size_t j = 0; j < inst.job_count(); ++j) {
        s.sequence.insert(s.sequence.end(), inst.jobs[j].size(), static_cast<int>(j));
        for (const auto& op : inst.jobs[j]) s.assignment.push_back(static_cast<int>(rng.below(op.size())));
    }
    rng.shuffle(s.sequence);
    return s;
}

long long FjspSchedule::max_load() const noexcept {
    return machine_load.empty() ? 0 : *std::max_element(machine_load.begin(), machine_load.end());
}

long long FjspSchedule::total_load() const noexcept {
    return std::accumulate(machine_load.begin(), machine_load.end(), 0LL);
}

FjspSchedule decode_schedule(const FjspSolution& sol, const FjspInstance& inst) {
    check_fjsp_solution(sol, inst);
    const auto offsets = inst.job_offsets();
    struct Interval {
        long long start, end;
    };
    std::vector<std::vector<Interval>> busy(static_cast<std::size_t>(inst.machines));
    std::vector<std::size_t> next_op(inst.job_count(), 0);
    std::vector<long long> job_ready(inst.job_count(), 0);

    FjspSchedule s;
    s.machine_load.assign(static_cast<std::size_t>(inst.machines), 0);
    s.operations.reserve(sol.sequence.size());
    for (int j : sol.sequence) {
        const auto ju = static_cast<std::size_t>(j);
        const std::size_t t = next_op[ju]++;
        const auto& opt = inst.jobs[ju][t][static_cast<std::size_t>(sol.assignment[offsets[ju] + t])];
        auto& line = busy[static_cast<std::size_t>(opt.machine)];

        // Earliest idle gap on the machine that starts no earlier than the job release.
        long long start = job_ready[ju];
        std::size_t at = 0;
        for (; at < line.size(); ++at) {
            if (start + opt.duration <= line[at].start) break;
            start = std::max(start, line[at].end);
        }
        line.insert(line.begin() + static_cast<std::ptrdiff_t>(at), {start, start + opt.duration});

        const long long end = start + opt.duration;
        job_ready[ju] = end;
        s.machine_load[static_cast<std::size_t>(opt.machine)] += opt.duration;
        s.makespan = std::max(s.makespan, end);
        s.operations.push_back({j, static_cast<int>(t), opt.machine, start, end});
    }
    return s;
}

moo::ObjectiveVector schedule_objectives(const FjspSchedule& s, std::size_t m) {
    if (m != 2 && m != 3) throw DimensionError("FJSP has 2 or 3 objectives");
    moo::ObjectiveVector f{static_cast<double>(s.makespan), static_cast<double>(s.max_load())};
    if (m == 3) f.push_back(static_cast<double>(s.total_load()));
    return f;
}

moo::ObjectiveVector decode_fjsp(const FjspSolution& sol, const FjspInstance& inst, std::size_t m) {
    return schedule_objectives(decode_schedule(sol, inst), m);
}

moo::ObjectiveVector fjsp_lower_bound(const FjspInstance& inst, std::size_t m) {
    long long total_min = 0, longest_job = 0, longest_op = 0;
    for (const auto& job : inst.jobs) {
        long long job_min = 0;
        for (const auto& op : job) {
            int d = op.front().duration;
            for (const auto& o : op) d = std::min(d, o.duration);
            job_min += d;
            longest_op = std::max<long long>(longest_op, d);
        }
        total_min += job_min;
        longest_job = std::max(longest_job, job_min);
    }
    const double per_machine = static_cast<double>(total_min) / inst.machines;
    const double load = std::max(per_machine, static_cast<double>(longest_op));
    moo::ObjectiveVector f{std::max(static_cast<double>(longest_job), load), load};
    if (m == 3) f.push_back(static_cast<double>(total_min));
    return f;
}

FjspProblem::FjspProblem(std::shared_ptr<const FjspInstance> inst, ProblemKind kind)
    : inst_(std::move(inst)), kind_(kind) {
    if (!is_fjsp(kind)) throw ConfigError("FJSP instance bound to a TSP objective set");
    inst_->validate();
}

}  // namespace e2oc::problems
