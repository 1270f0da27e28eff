#pragma once

#include <span>

#include "e2oc/moo/archive.hpp"

namespace e2oc::moo {

/// Mean over reference points of the Euclidean distance to the nearest front
/// point, on raw coordinates. Empty front gives +inf.
double igd_raw(std::span<const ObjectiveVector> front, std::span<const ObjectiveVector> reference);

/// IGD in the HV-normalized space of `ctx` (no clamping).
double igd(const ParetoArchive& front, const ReferenceFront& ref, const HvContext& ctx);

/// (a - b) / b * 100. Throws UndefinedBaseline when b == 0.
double relative_improvement(double a, double b);

struct AggregateFitness {
    double value = 0.0;
    /// At least one run was empty and contributed 0.
    bool flagged = false;
};

/// Mean normalized HV over independent runs (empty runs count as 0).
AggregateFitness aggregate_fitness(std::span<const ParetoArchive> runs, const HvContext& ctx);

}  // namespace e2oc::moo
