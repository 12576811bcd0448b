#include "capclust/metric.hpp"

#include <algorithm>

namespace capclust {

Cost hamming_distance(const std::vector<Symbol>& a, const std::vector<Symbol>& b) {
    if (a.size() != b.size()) throw InputError("hamming_distance: length mismatch");
    Cost d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
    return d;
}

std::vector<Symbol> majority_median(
    const std::vector<std::pair<const std::vector<Symbol>*, long long>>& items) {
    if (items.empty()) throw InputError("majority_median: empty multiset");
    const std::size_t m = items[0].first->size();
    std::vector<Symbol> median(m, 0);
    for (std::size_t r = 0; r < m; ++r) {
        // Tally weights per symbol in this row; rows are short and symbol
        // values small, so a flat map via sorted pairs is plenty.
        std::vector<std::pair<Symbol, long long>> tally;
        for (const auto& [col, w] : items) {
            if (col->size() != m) throw InputError("majority_median: length mismatch");
            if (w <= 0) throw InputError("majority_median: nonpositive weight");
            Symbol s = (*col)[r];
            auto it = std::find_if(tally.begin(), tally.end(),
                                   [s](const auto& p) { return p.first == s; });
            if (it == tally.end())
                tally.emplace_back(s, w);
            else
                it->second += w;
        }
        Symbol best = tally[0].first;
        long long best_w = tally[0].second;
        for (const auto& [s, w] : tally) {
            if (w > best_w || (w == best_w && s < best)) {
                best = s;
                best_w = w;
            }
        }
        median[r] = best;
    }
    return median;
}

std::vector<Symbol> majority_median(const CategoricalMatrix& matrix,
                                    const std::vector<int>& cluster) {
    std::vector<std::pair<const std::vector<Symbol>*, long long>> items;
    items.reserve(cluster.size());
    for (int j : cluster) items.emplace_back(&matrix.column(j), 1);
    return majority_median(items);
}

Cost cluster_cost(const CategoricalMatrix& matrix, const std::vector<int>& cluster,
                  const std::vector<Symbol>& median) {
    Cost total = 0;
    for (int j : cluster) total += hamming_distance(median, matrix.column(j));
    return total;
}

Cost clustering_cost(const CategoricalMatrix& matrix,
                     const std::vector<std::vector<int>>& clusters,
                     std::vector<std::vector<Symbol>>* medians_out) {
    Cost total = 0;
    if (medians_out) medians_out->clear();
    for (const auto& cl : clusters) {
        if (cl.empty()) {
            // An empty cluster contributes nothing; give it an all-zero
            // center so the output stays rectangular.
            if (medians_out) medians_out->emplace_back(matrix.rows(), 0);
            continue;
        }
        auto med = majority_median(matrix, cl);
        total += cluster_cost(matrix, cl, med);
        if (medians_out) medians_out->push_back(std::move(med));
    }
    return total;
}

std::vector<std::vector<Cost>> column_distance_table(const CategoricalMatrix& matrix) {
    const int n = matrix.cols();
    std::vector<std::vector<Cost>> table(n, std::vector<Cost>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            table[i][j] = table[j][i] = hamming_distance(matrix.column(i), matrix.column(j));
    return table;
}

std::vector<std::vector<Cost>> candidate_distance_table(
    const CategoricalMatrix& matrix, const std::vector<std::vector<Symbol>>& candidates) {
    std::vector<std::vector<Cost>> table(candidates.size(),
                                         std::vector<Cost>(matrix.cols(), 0));
    for (std::size_t c = 0; c < candidates.size(); ++c)
        for (int j = 0; j < matrix.cols(); ++j)
            table[c][j] = hamming_distance(candidates[c], matrix.column(j));
    return table;
}

std::string witness_error(const Instance& inst, const Clustering& c) {
    int n = inst.n();
    if (static_cast<int>(c.clusters.size()) != inst.k)
        return "expected " + std::to_string(inst.k) + " clusters, got " +
               std::to_string(c.clusters.size());
    std::vector<char> seen(n, 0);
    for (const auto& cluster : c.clusters)
        for (int j : cluster) {
            if (j < 0 || j >= n) return "column index out of range: " + std::to_string(j);
            if (seen[j]) return "column appears twice: " + std::to_string(j);
            seen[j] = 1;
        }
    for (int j = 0; j < n; ++j)
        if (!seen[j]) return "column missing from every cluster: " + std::to_string(j);
    if (!check_constraint(c.sizes(), inst.constraint))
        return "cluster sizes violate the " + constraint_name(inst.constraint) +
               " constraint";
    Cost actual = clustering_cost(inst.matrix, c.clusters);
    if (actual != c.cost)
        return "stated cost " + std::to_string(c.cost) + " differs from recomputed " +
               std::to_string(actual);
    if (actual > inst.budget)
        return "cost " + std::to_string(actual) + " exceeds budget " +
               std::to_string(inst.budget);
    return {};
}

}  // namespace capclust
