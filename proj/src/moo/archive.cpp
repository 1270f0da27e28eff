#include "e2oc/moo/archive.hpp"

#include <algorithm>
#include <cmath>

#include "e2oc/common/error.hpp"
#include "e2oc/moo/dominance.hpp"

namespace e2oc::moo {

void check_comparable(const ObjectiveVector& a, const ObjectiveVector& b) {
    if (a.size() != b.size())
        throw DimensionError("objective vectors of length " + std::to_string(a.size()) + " and " +
                             std::to_string(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!std::isfinite(a[i]) || !std::isfinite(b[i]))
            throw DimensionError("non-finite objective value");
}

ParetoArchive ParetoArchive::from_points(std::span<const ObjectiveVector> points,
                                         const std::string& prefix) {
    ParetoArchive out;
    if (points.empty()) return out;
    const auto fronts = non_dominated_sort(points);
    for (auto i : fronts.front()) {
        const auto& f = points[i];
        const bool dup = std::any_of(out.entries_.begin(), out.entries_.end(),
                                     [&](const ArchiveEntry& e) { return e.f == f; });
        if (!dup) out.entries_.push_back({prefix + std::to_string(i), f});
    }
    return out;
}

bool ParetoArchive::insert(std::string id, ObjectiveVector f) {
    for (const auto& e : entries_) {
        check_comparable(e.f, f);
        if (e.id == id) throw ContractError("duplicate archive id " + id);
        if (e.f == f || dominates(e.f, f)) return false;
    }
    std::erase_if(entries_, [&](const ArchiveEntry& e) { return dominates(f, e.f); });
    entries_.push_back({std::move(id), std::move(f)});
    return true;
}

std::vector<ObjectiveVector> ParetoArchive::points() const {
    std::vector<ObjectiveVector> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.f);
    return out;
}

ParetoArchive ParetoArchive::sorted() const {
    ParetoArchive out = *this;
    std::stable_sort(out.entries_.begin(), out.entries_.end(),
                     [](const ArchiveEntry& a, const ArchiveEntry& b) { return a.f < b.f; });
    return out;
}

void HvContext::validate() const {
    if (ideal.size() != reference.size() || ideal.size() < 2)
        throw DimensionError("HV context needs ideal and reference of equal length >= 2");
    for (std::size_t i = 0; i < ideal.size(); ++i) {
        if (!std::isfinite(ideal[i]) || !std::isfinite(reference[i]))
            throw DimensionError("HV context has non-finite coordinates");
        if (!(reference[i] > ideal[i]))
            throw DimensionError("HV reference must be strictly worse than the ideal point");
    }
}

HvContext make_hv_context(ObjectiveVector ideal, std::span<const ObjectiveVector> baseline_front,
                          double factor) {
    if (baseline_front.empty()) throw ContractError("baseline front is empty");
    ObjectiveVector nadir = baseline_front.front();
    if (nadir.size() != ideal.size()) throw DimensionError("ideal and front dimensions differ");
    for (const auto& p : baseline_front) {
        check_comparable(p, nadir);
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] < ideal[i]) throw ContractError("ideal is not a lower bound of the baseline front");
            nadir[i] = std::max(nadir[i], p[i]);
        }
    }
    HvContext ctx{std::move(ideal), {}};
    ctx.reference.resize(nadir.size());
    for (std::size_t i = 0; i < nadir.size(); ++i) {
        double r = nadir[i] * factor;
        // Degenerate coordinate (nadir at the ideal): open the box by one unit.
        if (!(r > ctx.ideal[i])) r = ctx.ideal[i] + std::max(1.0, std::abs(ctx.ideal[i]) * (factor - 1.0));
        ctx.reference[i] = r;
    }
    ctx.validate();
    return ctx;
}

ReferenceFront ReferenceFront::from_union(std::span<const ParetoArchive> fronts,
                                          std::string provenance) {
    std::vector<ObjectiveVector> all;
    for (const auto& f : fronts)
        for (const auto& e : f.entries()) all.push_back(e.f);
    ReferenceFront rf;
    rf.provenance = std::move(provenance);
    rf.points = ParetoArchive::from_points(all).sorted().points();
    return rf;
}

}  // namespace e2oc::moo
