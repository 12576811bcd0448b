#include "capclust/assignment.hpp"

#include <algorithm>

#include "capclust/metric.hpp"

namespace capclust {

namespace {

// Classic potential-based Hungarian method, 1-based internally.
MatchingResult hungarian(int n, const std::function<Cost(int, int)>& w) {
    std::vector<Cost> u(n + 1, 0), v(n + 1, 0);
    std::vector<int> match(n + 1, 0), way(n + 1, 0);
    const Cost inf = std::numeric_limits<Cost>::max();
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<Cost> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            int i0 = match[j0], j1 = -1;
            Cost delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                Cost cur = w(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0);
    }
    MatchingResult res;
    res.col_of_row.assign(n, -1);
    for (int j = 1; j <= n; ++j) res.col_of_row[match[j] - 1] = j - 1;
    for (int i = 0; i < n; ++i) res.total += w(i, res.col_of_row[i]);
    return res;
}

}  // namespace

std::optional<MatchingResult> min_weight_perfect_matching(
    int n, const std::function<Cost(int, int)>& weight) {
    if (n <= 0) throw InputError("matching dimension must be positive");
    // Sentinel above any matching that uses only real edges.
    Cost max_real = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Cost c = weight(i, j);
            if (c == kForbidden) continue;
            if (c < 0) throw InputError("matching weights must be nonnegative");
            max_real = std::max(max_real, c);
        }
    const Cost sentinel = max_real * n + 1;
    auto w = [&](int i, int j) {
        Cost c = weight(i, j);
        return c == kForbidden ? sentinel : c;
    };
    MatchingResult res = hungarian(n, w);
    if (res.total >= sentinel) return std::nullopt;
    return res;
}

std::optional<MatchingResult> min_weight_perfect_matching(
    const std::vector<std::vector<Cost>>& weights) {
    const int n = static_cast<int>(weights.size());
    for (const auto& row : weights)
        if (static_cast<int>(row.size()) != n)
            throw InputError("matching weight matrix must be square");
    return min_weight_perfect_matching(
        n, [&](int i, int j) { return weights[i][j]; });
}

std::optional<Clustering> assign_with_medians(const CategoricalMatrix& matrix,
                                              int p, int q,
                                              const std::vector<std::vector<Symbol>>& medians) {
    const int n = matrix.cols();
    const int k = static_cast<int>(medians.size());
    if (k < 1) throw InputError("assign_with_medians: need at least one center");
    if (p < 1 || q < p) throw InputError("assign_with_medians: need 1 <= p <= q");
    if (static_cast<long long>(k) * p > n || static_cast<long long>(k) * q < n)
        return std::nullopt;

    auto dist = candidate_distance_table(matrix, medians);

    // Rows: n real columns then kq - n fillers. Columns: q slots per center;
    // the first p slots of each block demand a real column.
    const int total = k * q;
    auto weight = [&](int row, int slot) -> Cost {
        const int center = slot / q;
        const int offset = slot % q;
        if (row < n) return dist[center][row];
        return offset >= p ? 0 : kForbidden;
    };
    auto res = min_weight_perfect_matching(total, weight);
    if (!res) return std::nullopt;  // cannot happen once k*p <= n <= k*q

    Clustering out;
    out.clusters.assign(k, {});
    out.medians = medians;
    for (int row = 0; row < n; ++row) {
        const int center = res->col_of_row[row] / q;
        out.clusters[center].push_back(row);
        out.cost += dist[center][row];
    }
    for (auto& cl : out.clusters) std::sort(cl.begin(), cl.end());
    return out;
}

Clustering greedy_assign(const CategoricalMatrix& matrix,
                         const std::vector<std::vector<Symbol>>& medians) {
    if (medians.empty()) throw InputError("greedy_assign: need at least one center");
    auto dist = candidate_distance_table(matrix, medians);
    Clustering out;
    out.clusters.assign(medians.size(), {});
    out.medians = medians;
    for (int j = 0; j < matrix.cols(); ++j) {
        int best = 0;
        for (std::size_t c = 1; c < medians.size(); ++c)
            if (dist[c][j] < dist[best][j]) best = static_cast<int>(c);
        out.clusters[best].push_back(j);
        out.cost += dist[best][j];
    }
    return out;
}

}  // namespace capclust
