#include "capclust/median_enum.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "capclust/metric.hpp"

namespace capclust {

namespace {

// Walk all multisets over the column types with the given per-type caps and
// total size in [2, max_size]; each multiset is visited exactly once, as a
// list of (type index, multiplicity) pairs.
void walk_multisets(const std::vector<long long>& caps, long long max_size,
                    std::size_t idx, long long size_so_far,
                    std::vector<std::pair<int, long long>>& picked,
                    const std::function<void(const std::vector<std::pair<int, long long>>&)>& emit) {
    if (idx == caps.size()) {
        if (size_so_far >= 2) emit(picked);
        return;
    }
    for (long long mult = 0; mult <= caps[idx] && size_so_far + mult <= max_size; ++mult) {
        if (mult > 0) picked.emplace_back(static_cast<int>(idx), mult);
        walk_multisets(caps, max_size, idx + 1, size_so_far + mult, picked, emit);
        if (mult > 0) picked.pop_back();
    }
}

}  // namespace

CandidateMedianSet candidate_medians(const CategoricalMatrix& matrix, Cost budget) {
    if (budget < 0) throw InputError("candidate_medians: budget must be nonnegative");
    const ColumnGroups groups = group_identical_columns(matrix);

    CandidateMedianSet out;
    std::map<std::vector<Symbol>, bool> seen;
    for (int g = 0; g < groups.count(); ++g) {
        const auto& col = matrix.column(groups.representative(g));
        if (seen.try_emplace(col, true).second) {
            out.vectors.push_back(col);
            out.provenance.push_back(MedianProvenance::Column);
        }
    }

    if (budget >= 2) {
        std::vector<long long> caps(groups.count());
        for (int g = 0; g < groups.count(); ++g)
            caps[g] = std::min<long long>(groups.size_of(g), budget);
        std::vector<std::pair<int, long long>> picked;
        walk_multisets(caps, budget, 0, 0, picked,
                       [&](const std::vector<std::pair<int, long long>>& multiset) {
            std::vector<std::pair<const std::vector<Symbol>*, long long>> items;
            items.reserve(multiset.size());
            for (const auto& [g, mult] : multiset)
                items.emplace_back(&matrix.column(groups.representative(g)), mult);
            auto med = majority_median(items);
            if (seen.count(med)) return;
            // Keep only centers a budget-respecting cluster could use: such
            // a center lies within the budget of at least one member column.
            Cost nearest = budget + 1;
            for (int g = 0; g < groups.count() && nearest > budget; ++g)
                nearest = std::min(nearest,
                                   hamming_distance(med, matrix.column(groups.representative(g))));
            if (nearest > budget) return;
            seen.emplace(med, true);
            out.vectors.push_back(std::move(med));
            out.provenance.push_back(MedianProvenance::MultisetMajority);
        });
    }
    return out;
}

std::vector<std::vector<Symbol>> big_cluster_median_check(
    const CategoricalMatrix& matrix, const std::vector<int>& cluster, Cost budget) {
    if (cluster.empty()) throw InputError("big_cluster_median_check: empty cluster");
    if (budget < 0) throw InputError("big_cluster_median_check: budget must be nonnegative");
    std::map<std::vector<Symbol>, long long> freq;
    for (int j : cluster) ++freq[matrix.column(j)];

    const long long size = static_cast<long long>(cluster.size());
    long long threshold;
    if (size >= 2 * budget + 1) {
        threshold = size / 2 + 1;  // strict majority; at most one candidate
    } else if (size >= budget + 1) {
        threshold = size - budget;
    } else {
        threshold = 1;  // no restriction below budget + 1 members
    }
    std::vector<std::vector<Symbol>> result;
    for (const auto& [col, count] : freq)
        if (count >= threshold) result.push_back(col);
    return result;
}

}  // namespace capclust
