#pragma once

#include <span>
#include <vector>

#include "e2oc/moo/archive.hpp"

namespace e2oc::moo {

/// a dominates b: a <= b componentwise and a < b somewhere. Throws DimensionError
/// on length mismatch.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

/// Fast non-dominated sort. Fronts partition [0, n); indices inside a front are
/// ascending.
std::vector<std::vector<std::size_t>> non_dominated_sort(std::span<const ObjectiveVector> pop);

/// Rank of every point (0 = first front).
std::vector<int> pareto_ranks(std::span<const ObjectiveVector> pop);

/// Crowding distance per point, same order as the input. Boundary points of
/// each objective get +inf; fronts of size <= 2 are all +inf. Sorting ties are
/// broken by input index.
std::vector<double> crowding_distance(std::span<const ObjectiveVector> front);

/// Column-major copy of a point set, the layout the kernels consume.
std::vector<double> to_columns(std::span<const ObjectiveVector> pts);

}  // namespace e2oc::moo
