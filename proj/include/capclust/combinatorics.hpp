#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>

#include "capclust/types.hpp"

namespace capclust {

// ============================================================
// Size-window block partitions
// ============================================================

// True iff `size` identical elements can be split into exactly `blocks`
// blocks with every block size in [p, q], i.e. blocks*p <= size <= blocks*q.
bool block_partition_feasible(long long size, long long blocks, int p, int q);

// True iff groups of the given sizes can simultaneously be split into
// exactly `total_blocks` single-group blocks, each of size in [p, q].
bool simple_split_feasible(const std::vector<int>& group_sizes, int total_blocks,
                           int p, int q);

// Per-group block counts realizing such a split: every group starts at its
// minimum feasible count and the remaining blocks are handed out in group
// order. std::nullopt iff infeasible.
std::optional<std::vector<int>> simple_split_counts(const std::vector<int>& group_sizes,
                                                    int total_blocks, int p, int q);

// Splits `members` into `blocks` blocks with sizes in [p, q]: every block
// is filled to p, then leftovers are topped up left to right. Precondition:
// block_partition_feasible(members.size(), blocks, p, q).
std::vector<std::vector<int>> greedy_blocks(const std::vector<int>& members, int blocks,
                                            int p, int q);

// ============================================================
// Forest templates
// ============================================================

// A forest shape on two vertex kinds: center nodes (future mixed clusters)
// and group nodes (the column groups those clusters touch). Vertices
// 0..num_centers-1 are centers, the rest are group nodes; edges connect the
// kinds only. Every center has degree >= 2, so all leaves are group nodes
// and every component has >= 3 vertices.
struct ForestTemplate {
    int num_centers = 0;
    int num_groups = 0;
    std::vector<std::pair<int, int>> edges;  // (center id, group-node id)
    std::vector<std::vector<int>> adj;

    struct Component {
        std::vector<int> vertices;  // global ids
        int root = -1;              // designated center: smallest encoding
        int centers = 0;
        int groups = 0;
    };
    std::vector<Component> components;

    bool is_center(int v) const { return v < num_centers; }
    int total_vertices() const { return num_centers + num_groups; }
};

// All templates with exactly `t` centers and `ell` group nodes, up to
// kind-respecting isomorphism, in a fixed canonical order. Cached per
// (t, ell); the reference stays valid for the process lifetime.
const std::vector<ForestTemplate>& enumerate_forest_templates(int t, int ell);

// ============================================================
// Colorings
// ============================================================

using Coloring = std::vector<std::uint8_t>;  // item -> color in [0, ell)

enum class ColoringMode { Exhaustive, Random };

// Streams colorings of s items with ell colors.
class ColoringFamily {
public:
    // Every one of the ell^s colorings; throws ResourceError when ell^s
    // exceeds `cap`.
    static ColoringFamily exhaustive(int s, int ell, std::uint64_t cap);

    // One canonical representative per partition of the s items into exactly
    // ell nonempty classes (class labels by first occurrence). The solver's
    // deterministic mode uses this family: it covers every surjective
    // coloring up to color renaming, and colors enter the downstream
    // decision only through the partition they induce. In particular any
    // ell-subset of items is rainbow under some member.
    static ColoringFamily surjective_partitions(int s, int ell);

    // `trials` colorings drawn uniformly at random from ell^s.
    static ColoringFamily random(int s, int ell, long long trials, std::uint64_t seed);

    // ceil(e^ell * ln 4): with rainbow probability >= e^-ell per draw this
    // keeps the per-call miss rate at most 25%, and far lower in practice.
    static long long default_trials(int ell);

    // Fills `out` with the next coloring; false once exhausted.
    bool next(Coloring& out);

private:
    ColoringFamily() = default;
    enum class Kind { Exhaustive, Partitions, Random };
    Kind kind_ = Kind::Exhaustive;
    int s_ = 0;
    int ell_ = 0;
    bool done_ = false;
    bool started_ = false;
    std::vector<int> state_;
    long long remaining_ = 0;
    std::mt19937_64 rng_;
};

// ============================================================
// Set partitions
// ============================================================

// Visits every partition of {0..n-1} into exactly `blocks` nonempty classes
// as a restricted growth string (element -> class, classes numbered by first
// occurrence), in lexicographic order. `visit` returns false to stop early;
// the function returns false iff stopped.
bool for_each_partition(int n, int blocks,
                        const std::function<bool(const std::vector<int>&)>& visit);

}  // namespace capclust
