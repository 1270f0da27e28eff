#include "e2oc/problems/problem.hpp"

#include "e2oc/common/error.hpp"

namespace e2oc::problems {

std::string_view problem_name(ProblemKind kind) noexcept {
    switch (kind) {
        case ProblemKind::bi_fjsp: return "bi-fjsp";
        case ProblemKind::tri_fjsp: return "tri-fjsp";
        case ProblemKind::bi_tsp: return "bi-tsp";
        case ProblemKind::tri_tsp: return "tri-tsp";
    }
    return "?";
}

ProblemKind parse_problem_kind(std::string_view name) {
    for (auto k : {ProblemKind::bi_fjsp, ProblemKind::tri_fjsp, ProblemKind::bi_tsp, ProblemKind::tri_tsp})
        if (problem_name(k) == name) return k;
    throw ConfigError("unknown problem '" + std::string(name) + "'");
}

std::size_t objective_count(ProblemKind kind) noexcept {
    return kind == ProblemKind::bi_fjsp || kind == ProblemKind::bi_tsp ? 2 : 3;
}

bool is_fjsp(ProblemKind kind) noexcept {
    return kind == ProblemKind::bi_fjsp || kind == ProblemKind::tri_fjsp;
}

}  // namespace e2oc::problems
