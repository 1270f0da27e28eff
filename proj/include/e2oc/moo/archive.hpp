#pragma once

#include <span>
#include <string>
#include <vector>

namespace e2oc::moo {

/// Minimization objective tuple, M >= 2, all values finite.
using ObjectiveVector = std::vector<double>;

/// Throws DimensionError on length mismatch or non-finite values.
void check_comparable(const ObjectiveVector& a, const ObjectiveVector& b);

struct ArchiveEntry {
    std::string id;
    ObjectiveVector f;
};

/// Set of mutually non-dominated objective vectors with unique ids. Duplicate
/// objective vectors are kept once (the first id wins), so the archive is the
/// distinct image of a non-dominated set.
class ParetoArchive {
public:
    ParetoArchive() = default;

    /// Non-dominated, de-duplicated subset of `points`; ids are
    /// `prefix + index` of the source position.
    static ParetoArchive from_points(std::span<const ObjectiveVector> points,
                                     const std::string& prefix = "p");

    /// Inserts unless dominated by (or equal to) an existing entry; evicts
    /// entries the new point dominates. Returns whether it was inserted.
    bool insert(std::string id, ObjectiveVector f);

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    std::size_t dimension() const noexcept { return entries_.empty() ? 0 : entries_.front().f.size(); }
    const std::vector<ArchiveEntry>& entries() const noexcept { return entries_; }
    std::vector<ObjectiveVector> points() const;

    /// Entries sorted lexicographically by objective vector (canonical order for
    /// persistence and comparison).
    ParetoArchive sorted() const;

private:
    std::vector<ArchiveEntry> entries_;
};

/// Per-instance normalization box for HV and IGD. `reference` is strictly
/// worse than `ideal` in every coordinate.
struct HvContext {
    ObjectiveVector ideal;
    ObjectiveVector reference;

    void validate() const;
    std::size_t dimension() const noexcept { return ideal.size(); }
    bool operator==(const HvContext&) const = default;
};

/// Reference point = nadir of `baseline_front` scaled by `factor` per
/// coordinate (the fronts used here are positive-valued). The ideal must be a
/// valid lower bound for the instance.
HvContext make_hv_context(ObjectiveVector ideal, std::span<const ObjectiveVector> baseline_front,
                          double factor = 1.1);

/// Reference front P* for IGD plus a note on which runs were unioned.
struct ReferenceFront {
    std::vector<ObjectiveVector> points;
    std::string provenance;

    /// Union of several fronts, reduced to its non-dominated distinct subset.
    static ReferenceFront from_union(std::span<const ParetoArchive> fronts, std::string provenance);
};

}  // namespace e2oc::moo
