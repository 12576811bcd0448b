#pragma once

#include <functional>
#include <limits>
#include <optional>

#include "capclust/types.hpp"

namespace capclust {

// Marks an edge that a matching must not use.
inline constexpr Cost kForbidden = std::numeric_limits<Cost>::max();

struct MatchingResult {
    Cost total = 0;
    std::vector<int> col_of_row;  // row i is matched to column col_of_row[i]
};

// Minimum-weight perfect matching on an n x n bipartite graph with
// nonnegative integer weights; entries equal to kForbidden are unusable.
// Returns std::nullopt when no perfect matching avoids forbidden entries.
// O(n^3) via the potential (primal-dual) method; forbidden entries are
// replaced internally by a sentinel strictly above any feasible total, which
// keeps the arithmetic exact.
std::optional<MatchingResult> min_weight_perfect_matching(
    int n, const std::function<Cost(int, int)>& weight);

std::optional<MatchingResult> min_weight_perfect_matching(
    const std::vector<std::vector<Cost>>& weights);

// Cheapest assignment of all columns to the given centers such that every
// cluster ends up with between p and q columns. The returned cost is against
// the given medians, not re-optimized. Returns std::nullopt iff no size-
// feasible assignment exists, i.e. unless k*p <= n <= k*q.
//
// Reduction to matching: each center contributes q slots, of which the first
// p must receive real columns; kq - n filler items may only occupy the
// remaining optional slots at zero weight. Slot weights are read from a
// k x n center-to-column distance table, so the kq x kq matrix is never
// materialized.
std::optional<Clustering> assign_with_medians(const CategoricalMatrix& matrix,
                                              int p, int q,
                                              const std::vector<std::vector<Symbol>>& medians);

// Nearest-center assignment without size constraints (ties go to the lowest
// center index). Clusters may end up empty.
Clustering greedy_assign(const CategoricalMatrix& matrix,
                         const std::vector<std::vector<Symbol>>& medians);

}  // namespace capclust
