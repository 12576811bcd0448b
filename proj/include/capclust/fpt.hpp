#pragma once

#include <cstdint>
#include <optional>

#include "capclust/combinatorics.hpp"
#include "capclust/median_enum.hpp"
#include "capclust/types.hpp"

namespace capclust {

struct SolveOptions {
    // Exhaustive mode is exact. Random mode never accepts a no-instance and
    // finds a yes-instance witness with high probability per trial budget.
    ColoringMode coloring = ColoringMode::Exhaustive;
    long long trials = -1;   // random mode trial count; -1 = default per ell
    std::uint64_t seed = 0;  // random mode base seed
    int threads = 1;         // colorings are evaluated in parallel waves
};

struct SolveStats {
    long long colorings = 0;
    long long dp_runs = 0;  // (coloring, template) evaluations
    int accepted_t = -1;
    int accepted_ell = -1;
    long long accepted_coloring = -1;
};

// Exact decision for Capacitated instances: is there a partition of the
// columns into k clusters, each of size in [p, q], of total Hamming cost at
// most the budget? Returns a witness clustering (with optimal majority
// medians) or std::nullopt.
//
// Search structure: a witness, if one exists, can be assumed to have a
// forest-shaped intersection graph between its mixed clusters (clusters
// drawing from >= 2 column groups) and the groups they touch. The solver
// tries every count t of mixed clusters and every count ell of touched
// groups, colors the groups, and for each forest template runs a tree DP
// that only finds solutions whose touched groups carry distinct colors.
// The deterministic coloring family covers every partition of groups into
// ell classes, so no solution shape is missed.
std::optional<Clustering> solve_capacitated(const Instance& inst,
                                            const SolveOptions& opts = {},
                                            SolveStats* stats = nullptr);

// The no-mixed-cluster special case: every cluster is a block of one column
// group. Feasibility is arithmetic on group sizes; any witness has cost 0.
std::optional<Clustering> solve_all_simple(const Instance& inst);

// Probe for clusterings with exactly t mixed clusters touching exactly ell
// groups that are rainbow (pairwise distinctly colored) under psi. Exact
// for that restricted question; the cheapest such clustering within budget
// is returned across all forest templates, or std::nullopt.
std::optional<Clustering> colorful_solve(const Instance& inst, int t, int ell,
                                         const Coloring& psi,
                                         const CandidateMedianSet& medians);

}  // namespace capclust
