#pragma once

#include "capclust/types.hpp"

namespace capclust {

enum class MedianProvenance { Column, MultisetMajority };

// Candidate cluster centers for budget-B instances on `matrix`.
struct CandidateMedianSet {
    std::vector<std::vector<Symbol>> vectors;
    std::vector<MedianProvenance> provenance;  // aligned with vectors

    int size() const { return static_cast<int>(vectors.size()); }
};

// Candidate centers sufficient for any clustering of total cost <= budget:
// for every such clustering, each cluster's majority median appears in the
// returned set.
//
// Composition: all distinct columns, plus the majority vectors of every
// multiset of distinct column types of size 2..budget (per-type multiplicity
// capped by both the type's occurrence count and the budget). Majority
// vectors farther than `budget` from every column are dropped: a center
// whose cluster costs <= budget in total is within budget of at least one
// of its members.
//
// Why this covers everything: a cluster with more members than the budget
// must reuse one of its own columns as an optimal center (at most `budget`
// members can disagree with the center), and a smaller cluster is a multiset
// of the enumerated shape whose majority vector we include verbatim.
CandidateMedianSet candidate_medians(const CategoricalMatrix& matrix, Cost budget);

// Admissible centers for a single cluster in a clustering of total cost
// <= budget, derived from disagreement counting:
//  - |cluster| >= 2*budget + 1: a feasible center must equal more than half
//    the members, so there is at most one candidate (possibly none).
//  - budget + 1 <= |cluster| <= 2*budget: every column equal to at least
//    |cluster| - budget members qualifies.
//  - smaller clusters: counting gives no restriction; all distinct member
//    columns are returned.
std::vector<std::vector<Symbol>> big_cluster_median_check(
    const CategoricalMatrix& matrix, const std::vector<int>& cluster, Cost budget);

}  // namespace capclust
