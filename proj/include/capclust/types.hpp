#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace capclust {

using Symbol = int;
using Cost = long long;

// Thrown when user-supplied data violates a documented precondition.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Thrown when a request exceeds a configured enumeration cap.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Alphabet {0, 1, ..., size-1}.
struct Alphabet {
    int size = 0;
};

// An m x n matrix over a finite alphabet, stored column-wise: the objects
// being clustered are the n columns, each a vector of m symbols.
class CategoricalMatrix {
public:
    CategoricalMatrix() = default;
    CategoricalMatrix(int rows, std::vector<std::vector<Symbol>> columns);

    int rows() const { return rows_; }
    int cols() const { return static_cast<int>(columns_.size()); }
    const std::vector<Symbol>& column(int j) const { return columns_[j]; }
    const std::vector<std::vector<Symbol>>& columns() const { return columns_; }

    Symbol max_symbol() const;

private:
    int rows_ = 0;
    std::vector<std::vector<Symbol>> columns_;
};

// Cluster size constraints. Every constrained variant requires nonempty
// clusters; Unconstrained permits empty ones.
struct Unconstrained {};
struct Capacitated {
    int p = 1;  // lower size bound, >= 1
    int q = 1;  // upper size bound, >= p
};
struct Balanced {
    int delta = 0;  // max size difference, >= 0
};
struct FactorBalanced {
    // max size <= alpha * min size, alpha = num/den >= 1, exact rational.
    long long num = 1;
    long long den = 1;
};
struct Equal {};

using SizeConstraint =
    std::variant<Unconstrained, Capacitated, Balanced, FactorBalanced, Equal>;

std::string constraint_name(const SizeConstraint& c);

// True iff the cluster sizes satisfy the constraint. `sizes` must sum to n.
// Constrained variants additionally require every cluster nonempty.
bool check_constraint(const std::vector<int>& sizes, const SizeConstraint& c);

// A decision instance: cluster the columns of `matrix` into k clusters of
// total cost at most `budget`, subject to `constraint`.
struct Instance {
    CategoricalMatrix matrix;
    Alphabet alphabet;
    int k = 1;
    Cost budget = 0;
    SizeConstraint constraint = Unconstrained{};

    int n() const { return matrix.cols(); }
    int m() const { return matrix.rows(); }

    // Throws InputError on malformed data (symbol out of range, k < 1,
    // budget < 0, p > q, alpha < 1, ...).
    void validate() const;
};

// A concrete clustering: clusters partition {0..n-1}; medians[i] is the
// center vector cluster i is costed against; cost is the total Hamming
// cost of the clusters against these medians (not re-optimized).
struct Clustering {
    std::vector<std::vector<int>> clusters;
    std::vector<std::vector<Symbol>> medians;
    Cost cost = 0;

    std::vector<int> sizes() const;
};

// Maximal groups of pairwise identical columns, in order of first
// occurrence; columns within a group are listed in increasing index order.
struct ColumnGroups {
    std::vector<std::vector<int>> members;  // group -> column indices
    std::vector<int> group_of;              // column -> group index

    int count() const { return static_cast<int>(members.size()); }
    int size_of(int g) const { return static_cast<int>(members[g].size()); }
    // Any member works as the group's common column; we use the first.
    int representative(int g) const { return members[g][0]; }
};

ColumnGroups group_identical_columns(const CategoricalMatrix& matrix);

// Bipartite intersection structure between the clusters of a clustering and
// the column groups: edge (i, g) iff cluster i contains a column of group g.
struct IntersectionGraph {
    int num_clusters = 0;
    int num_groups = 0;
    std::vector<std::pair<int, int>> edges;          // (cluster, group)
    std::vector<std::vector<int>> groups_of_cluster;  // cluster -> group ids
    std::vector<std::vector<int>> clusters_of_group;  // group -> cluster ids

    bool is_forest() const;
};

IntersectionGraph intersection_graph(const std::vector<std::vector<int>>& clusters,
                                     const ColumnGroups& groups);

// Sorts each cluster ascending and orders clusters by first element,
// permuting medians alongside. Canonical form for output and comparison.
void canonicalize(Clustering& c);

}  // namespace capclust
