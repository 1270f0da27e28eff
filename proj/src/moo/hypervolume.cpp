#include "e2oc/moo/hypervolume.hpp"

#include <algorithm>
#include <numeric>

#include "e2oc/common/error.hpp"
#include "e2oc/common/rng.hpp"

namespace e2oc::moo {

namespace {

constexpr std::size_t kMonteCarloSamples = 200000;
constexpr std::uint64_t kMonteCarloSeed = 0x48565f4d43ULL;

bool strictly_inside(const ObjectiveVector& p, const ObjectiveVector& ref, std::size_t m) {
    for (std::size_t j = 0; j < m; ++j)
        if (!(p[j] < ref[j])) return false;
    return true;
}

// HSO on the first `m` coordinates.
double slice(std::vector<const ObjectiveVector*> pts, const ObjectiveVector& ref, std::size_t m) {
    if (pts.empty()) return 0.0;
    if (m == 1) {
        double lo = ref[0];
        for (auto* p : pts) lo = std::min(lo, (*p)[0]);
        return ref[0] - lo;
    }
    if (m == 2) {
        std::sort(pts.begin(), pts.end(), [](auto* a, auto* b) {
            return (*a)[0] < (*b)[0] || ((*a)[0] == (*b)[0] && (*a)[1] < (*b)[1]);
        });
        double vol = 0.0, y = ref[1];
        for (auto* p : pts) {
            if ((*p)[1] < y) {
                vol += (ref[0] - (*p)[0]) * (y - (*p)[1]);
                y = (*p)[1];
            }
        }
        return vol;
    }
    const std::size_t k = m - 1;
    std::sort(pts.begin(), pts.end(), [k](auto* a, auto* b) { return (*a)[k] < (*b)[k]; });
    double vol = 0.0;
    std::vector<const ObjectiveVector*> active;
    for (std::size_t i = 0; i < pts.size();) {
        const double z = (*pts[i])[k];
        while (i < pts.size() && (*pts[i])[k] == z) active.push_back(pts[i++]);
        const double next = i < pts.size() ? (*pts[i])[k] : ref[k];
        if (next > z) vol += slice(active, ref, k) * (next - z);
    }
    return vol;
}

std::vector<const ObjectiveVector*> inside(std::span<const ObjectiveVector> pts,
                                           const ObjectiveVector& ref) {
    std::vector<const ObjectiveVector*> out;
    for (const auto& p : pts) {
        if (p.size() != ref.size()) throw DimensionError("point and reference dimensions differ");
        if (strictly_inside(p, ref, ref.size())) out.push_back(&p);
    }
    return out;
}

}  // namespace

Normalized normalize(std::span<const ObjectiveVector> pts, const HvContext& ctx, bool clamp) {
    ctx.validate();
    Normalized out;
    out.points.reserve(pts.size());
    const std::size_t m = ctx.dimension();
    for (const auto& p : pts) {
        if (p.size() != m) throw DimensionError("front dimension does not match HV context");
        ObjectiveVector q(m);
        for (std::size_t j = 0; j < m; ++j) {
            double v = (p[j] - ctx.ideal[j]) / (ctx.reference[j] - ctx.ideal[j]);
            if (clamp && (v < 0.0 || v > 1.0)) {
                out.clamped = true;
                v = std::clamp(v, 0.0, 1.0);
            }
            q[j] = v;
        }
        out.points.push_back(std::move(q));
    }
    return out;
}

double hv2d_sweep(std::span<const ObjectiveVector> pts, const ObjectiveVector& ref) {
    if (ref.size() != 2) throw DimensionError("hv2d_sweep needs M = 2");
    return slice(inside(pts, ref), ref, 2);
}

double hv3d_slicing(std::span<const ObjectiveVector> pts, const ObjectiveVector& ref) {
    if (ref.size() != 3) throw DimensionError("hv3d_slicing needs M = 3");
    return slice(inside(pts, ref), ref, 3);
}

double hv_slicing(std::span<const ObjectiveVector> pts, const ObjectiveVector& ref) {
    if (ref.empty()) throw DimensionError("empty reference point");
    return slice(inside(pts, ref), ref, ref.size());
}

double hv_monte_carlo(std::span<const ObjectiveVector> pts, const ObjectiveVector& lower,
                      const ObjectiveVector& ref, std::size_t samples, std::uint64_t seed) {
    if (lower.size() != ref.size()) throw DimensionError("box corners differ in dimension");
    const auto in = inside(pts, ref);
    if (in.empty() || samples == 0) return 0.0;
    const std::size_t m = ref.size();
    Rng rng(seed);
    ObjectiveVector x(m);
    std::size_t hits = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t j = 0; j < m; ++j) x[j] = rng.uniform(lower[j], ref[j]);
        for (auto* p : in) {
            bool covers = true;
            for (std::size_t j = 0; j < m && covers; ++j) covers = (*p)[j] <= x[j];
            if (covers) {
                ++hits;
                break;
            }
        }
    }
    double box = 1.0;
    for (std::size_t j = 0; j < m; ++j) box *= ref[j] - lower[j];
    return box * static_cast<double>(hits) / static_cast<double>(samples);
}

HvResult hypervolume(std::span<const ObjectiveVector> front, const HvContext& ctx) {
    const auto norm = normalize(front, ctx, true);
    const std::size_t m = ctx.dimension();
    const ObjectiveVector ones(m, 1.0);
    HvResult r;
    r.clamped = norm.clamped;
    if (norm.points.empty()) return r;
    if (m == 2)
        r.value = hv2d_sweep(norm.points, ones);
    else if (m == 3)
        r.value = hv3d_slicing(norm.points, ones);
    else
        r.value = hv_monte_carlo(norm.points, ObjectiveVector(m, 0.0), ones, kMonteCarloSamples,
                                 kMonteCarloSeed);
    return r;
}

HvResult hypervolume(const ParetoArchive& front, const HvContext& ctx) {
    const auto pts = front.points();
    return hypervolume(std::span<const ObjectiveVector>(pts), ctx);
}

}  // namespace e2oc::moo
