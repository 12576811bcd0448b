#pragma once

#include "capclust/types.hpp"

namespace capclust {

// Number of positions where a and b differ. Both vectors must have equal
// length.
Cost hamming_distance(const std::vector<Symbol>& a, const std::vector<Symbol>& b);

// Coordinate-wise majority vector of a weighted multiset of columns:
// entry r is the symbol with the highest total weight among
// {columns[i][r] : i}, ties broken toward the smallest symbol. A majority
// vector minimizes the total Hamming cost to the multiset, so it is an
// optimal center for a cluster.
//
// `items` is a list of (column, weight) pairs with positive weights.
std::vector<Symbol> majority_median(
    const std::vector<std::pair<const std::vector<Symbol>*, long long>>& items);

// Convenience overload: unit weight per column index of `matrix`.
std::vector<Symbol> majority_median(const CategoricalMatrix& matrix,
                                    const std::vector<int>& cluster);

// Total Hamming cost of one cluster against a fixed center.
Cost cluster_cost(const CategoricalMatrix& matrix, const std::vector<int>& cluster,
                  const std::vector<Symbol>& median);

// Total cost of a partition against per-cluster optimal (majority) medians.
// Returns the cost and, via `medians_out` if nonnull, the medians used.
Cost clustering_cost(const CategoricalMatrix& matrix,
                     const std::vector<std::vector<int>>& clusters,
                     std::vector<std::vector<Symbol>>* medians_out = nullptr);

// All pairwise column distances of `matrix`: result[i][j] = d_H(col i, col j).
std::vector<std::vector<Cost>> column_distance_table(const CategoricalMatrix& matrix);

// Distances from each candidate vector to each column:
// result[c][j] = d_H(candidates[c], col j).
std::vector<std::vector<Cost>> candidate_distance_table(
    const CategoricalMatrix& matrix, const std::vector<std::vector<Symbol>>& candidates);

// Empty string when `c` is a valid witness for `inst`: exactly k clusters
// partitioning the columns, sizes satisfying the constraint, and c.cost
// equal to the recomputed optimal-median cost and within budget. Otherwise
// a one-line description of the first violation found.
std::string witness_error(const Instance& inst, const Clustering& c);

}  // namespace capclust
