#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "e2oc/moo/archive.hpp"

namespace e2oc::moo {

struct HvResult {
    double value = 0.0;
    /// Some point lay outside [ideal, reference] and was clamped.
    bool clamped = false;
};

struct Normalized {
    std::vector<ObjectiveVector> points;
    bool clamped = false;
};

/// (f - ideal) / (reference - ideal), optionally clamped to [0, 1].
Normalized normalize(std::span<const ObjectiveVector> pts, const HvContext& ctx, bool clamp);

/// Normalized hypervolume in [0, 1]: exact for M = 2 (sweep) and M = 3
/// (slicing over a 2-D sweep); M >= 4 falls back to a fixed-seed Monte Carlo
/// estimate. Empty front gives 0.
HvResult hypervolume(const ParetoArchive& front, const HvContext& ctx);
HvResult hypervolume(std::span<const ObjectiveVector> front, const HvContext& ctx);

/// Exact 2-D hypervolume by sweep, points need not be non-dominated.
double hv2d_sweep(std::span<const ObjectiveVector> pts, const ObjectiveVector& ref);

/// Exact 3-D hypervolume: slices along the third objective, each slice a 2-D sweep.
double hv3d_slicing(std::span<const ObjectiveVector> pts, const ObjectiveVector& ref);

/// Generic recursive slicing (HSO) for any M; exponential in M, used as a
/// cross-check and for small sets.
double hv_slicing(std::span<const ObjectiveVector> pts, const ObjectiveVector& ref);

/// Monte Carlo estimate inside the box [lower, ref].
double hv_monte_carlo(std::span<const ObjectiveVector> pts, const ObjectiveVector& lower,
                      const ObjectiveVector& ref, std::size_t samples, std::uint64_t seed);

}  // namespace e2oc::moo
