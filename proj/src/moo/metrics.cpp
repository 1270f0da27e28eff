#include "e2oc/moo/metrics.hpp"

#include <cmath>
#include <limits>

#include "e2oc/common/error.hpp"
#include "e2oc/kernels/kernels.hpp"
#include "e2oc/moo/dominance.hpp"
#include "e2oc/moo/hypervolume.hpp"

namespace e2oc::moo {

double igd_raw(std::span<const ObjectiveVector> front, std::span<const ObjectiveVector> reference) {
    if (reference.empty()) throw ContractError("IGD reference front is empty");
    if (front.empty()) return std::numeric_limits<double>::infinity();
    const std::size_t n = front.size(), m = front.front().size();
    const auto cols = to_columns(front);
    double total = 0.0;
    for (const auto& r : reference) {
        if (r.size() != m) throw DimensionError("IGD reference and front dimensions differ");
        total += std::sqrt(kernels::min_sq_distance(cols.data(), n, m, r.data()));
    }
    return total / static_cast<double>(reference.size());
}

double igd(const ParetoArchive& front, const ReferenceFront& ref, const HvContext& ctx) {
    const auto pts = front.points();
    const auto a = normalize(pts, ctx, false);
    const auto b = normalize(ref.points, ctx, false);
    return igd_raw(a.points, b.points);
}

double relative_improvement(double a, double b) {
    if (b == 0.0) throw UndefinedBaseline("relative improvement against a zero baseline");
    return (a - b) / b * 100.0;
}

AggregateFitness aggregate_fitness(std::span<const ParetoArchive> runs, const HvContext& ctx) {
    AggregateFitness out;
    if (runs.empty()) {
        out.flagged = true;
        return out;
    }
    double sum = 0.0;
    for (const auto& run : runs) {
        if (run.empty()) {
            out.flagged = true;
            continue;
        }
        sum += hypervolume(run, ctx).value;
    }
    out.value = sum / static_cast<double>(runs.size());
    return out;
}

}  // namespace e2oc::moo
