#pragma once

#include <optional>
#include <vector>

#include "capclust/types.hpp"

namespace capclust {

struct OracleCaps {
    int max_columns = 12;                      // brute_force_partitions
    long long max_center_tuples = 5'000'000;   // brute_force_medians
};

// Reads CAPCLUST_ORACLE_MAX_COLUMNS / CAPCLUST_ORACLE_MAX_TUPLES if set.
OracleCaps oracle_caps_from_env();

// Exact decision by enumerating every partition of the columns into exactly
// k nonempty clusters (min(k, n) blocks padded with empty clusters for
// Unconstrained), keeping those that satisfy the size constraint, and
// scoring each with optimal (majority) medians. Returns a cheapest witness
// within budget or std::nullopt. Throws ResourceError past the column cap.
std::optional<Clustering> brute_force_partitions(const Instance& inst,
                                                 const OracleCaps& caps = {});

// Exact decision by enumerating every k-multiset of the given centers and
// completing each into a cheapest size-feasible assignment. Exact whenever
// `centers` covers some optimal median tuple (e.g. all vectors over the
// alphabet). Capacitated instances only.
std::optional<Clustering> brute_force_medians(
    const Instance& inst, const std::vector<std::vector<Symbol>>& centers,
    const OracleCaps& caps = {});

// Every vector of the given length over symbols {0..sigma-1}.
std::vector<std::vector<Symbol>> all_vectors(int length, int sigma,
                                             long long cap = 20'000'000);

// Removes cycles from the cluster/group intersection graph by rotating
// columns around each cycle in whichever direction does not increase the
// fixed-center cost, until an edge of the cycle disappears. Cluster sizes
// are preserved, the (majority-median) cost never increases, and the
// resulting intersection graph is a forest.
Clustering uncross(const CategoricalMatrix& matrix, Clustering clustering);

}  // namespace capclust
