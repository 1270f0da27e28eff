#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "e2oc/common/rng.hpp"
#include "e2oc/operators/operator.hpp"
#include "e2oc/problems/fjsp.hpp"
#include "e2oc/problems/motsp.hpp"

namespace e2oc::operators {

using problems::Genome;
using problems::Tour;

// ---- TSP ----

/// Reverses positions i..j inclusive.
Tour reverse_segment(const Tour& t, std::size_t i, std::size_t j);
/// Moves the segment [i, i+len) so that it follows the node now at position `after`.
Tour move_segment(const Tour& t, std::size_t i, std::size_t len, std::size_t after);

/// Copies a[i..j] into the child, fills the rest in parent-b order starting after j.
Tour order_crossover_slice(const Tour& a, const Tour& b, std::size_t i, std::size_t j);
Tour order_crossover(const Tour& a, const Tour& b, Rng& rng);
Tour tsp_swap(const Tour& t, Rng& rng);

/// Local search under fixed scalarizing weights `w`. Moves are scanned from a
/// random offset; the first improving one is applied, up to `max_moves` per call.
Tour two_opt_pass(const Tour& t, const problems::DistanceTables& d, std::span<const double> w, Rng& rng,
                  int max_moves = 1);
Tour or_opt_pass(const Tour& t, const problems::DistanceTables& d, std::span<const double> w, Rng& rng,
                 int max_moves = 1, int max_segment = 3);
/// `max_checks` bounds the number of (i, j, k) triples examined (0 = all).
Tour three_opt_pass(const Tour& t, const problems::DistanceTables& d, std::span<const double> w, Rng& rng,
                    int max_moves = 1, std::size_t max_checks = 0);

/// Same with a random simplex weight vector drawn from `rng` first.
Tour tsp_two_opt(const Tour& t, const problems::DistanceTables& d, Rng& rng, int max_moves = 1);
Tour tsp_or_opt(const Tour& t, const problems::DistanceTables& d, Rng& rng, int max_moves = 1, int max_segment = 3);
Tour tsp_three_opt(const Tour& t, const problems::DistanceTables& d, Rng& rng, int max_moves = 1,
                   std::size_t max_checks = 0);

/// Weighted sum of per-space tour lengths.
double scalarized_length(const Tour& t, const problems::DistanceTables& d, std::span<const double> w);

// ---- FJSP ----

/// Precedence-preserving order crossover: jobs in `keep` hold their positions
/// from a, remaining positions take b's other jobs in order.
std::vector<int> pox_sequence(const std::vector<int>& a, const std::vector<int>& b, const std::vector<char>& keep);
Genome fjsp_pox(const Genome& a, const Genome& b, const problems::FjspInstance& inst, Rng& rng);
Genome fjsp_sequence_swap(const Genome& a, Rng& rng);
Genome fjsp_machine_one_point(const Genome& a, const Genome& b, Rng& rng);
Genome fjsp_machine_reassign(const Genome& a, const problems::FjspInstance& inst, Rng& rng);

// ---- registry ----

using NativeFn = std::function<Genome(std::span<const Genome> parents, const problems::Problem& problem,
                                      const Params& params, Rng& rng)>;

struct CatalogEntry {
    std::string entry;
    std::vector<Role> roles;
    NativeFn fn;
    /// Deliberately emits infeasible encodings (exercises the rejection path).
    bool broken = false;
};

const std::vector<CatalogEntry>& native_catalog();
const CatalogEntry& find_entry(const std::string& entry);  // throws ConfigError
std::vector<const CatalogEntry*> entries_for(Role role, bool include_broken);

/// Expert baseline ("v1") operator for a role.
Operator expert_operator(Role role);

}  // namespace e2oc::operators
