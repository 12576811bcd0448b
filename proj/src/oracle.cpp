#include "capclust/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "capclust/assignment.hpp"
#include "capclust/combinatorics.hpp"
#include "capclust/metric.hpp"

namespace capclust {
namespace {

long long env_ll(const char* name, long long fallback) {
    const char* raw = std::getenv(name);
    if (!raw || !*raw) return fallback;
    try {
        return std::stoll(raw);
    } catch (const std::exception&) {
        throw InputError(std::string(name) + " is not an integer: " + raw);
    }
}

// Cost of the partition with optimal medians, aborting once `bound` is
// exceeded. Returns bound + 1 on abort.
Cost bounded_cost(const CategoricalMatrix& matrix,
                  const std::vector<std::vector<int>>& clusters, Cost bound) {
    Cost total = 0;
    for (const auto& cluster : clusters) {
        auto med = majority_median(matrix, cluster);
        total += cluster_cost(matrix, cluster, med);
        if (total > bound) return bound + 1;
    }
    return total;
}

}  // namespace

OracleCaps oracle_caps_from_env() {
    OracleCaps caps;
    caps.max_columns = static_cast<int>(
        env_ll("CAPCLUST_ORACLE_MAX_COLUMNS", caps.max_columns));
    caps.max_center_tuples =
        env_ll("CAPCLUST_ORACLE_MAX_TUPLES", caps.max_center_tuples);
    return caps;
}

std::optional<Clustering> brute_force_partitions(const Instance& inst,
                                                 const OracleCaps& caps) {
    inst.validate();
    int n = inst.n();
    if (n > caps.max_columns)
        throw ResourceError("brute_force_partitions: " + std::to_string(n) +
                            " columns exceeds cap " +
                            std::to_string(caps.max_columns));
    // Constrained variants forbid empty clusters, so exactly k nonempty
    // blocks are enumerated. Unconstrained allows them; since splitting a
    // cluster never raises the cost, min(k, n) blocks plus empty padding is
    // optimal there.
    bool unconstrained = std::holds_alternative<Unconstrained>(inst.constraint);
    int blocks = unconstrained ? std::min(inst.k, n) : inst.k;
    std::optional<Clustering> best;
    std::vector<std::vector<int>> clusters(blocks);
    std::vector<int> sizes(blocks);
    for_each_partition(n, blocks, [&](const std::vector<int>& label) {
        std::fill(sizes.begin(), sizes.end(), 0);
        for (int j = 0; j < n; ++j) ++sizes[label[j]];
        if (!unconstrained && !check_constraint(sizes, inst.constraint)) return true;
        for (auto& c : clusters) c.clear();
        for (int j = 0; j < n; ++j) clusters[label[j]].push_back(j);
        Cost bound = best ? best->cost - 1 : inst.budget;
        Cost cost = bounded_cost(inst.matrix, clusters, bound);
        if (cost > bound) return true;
        Clustering found;
        found.clusters = clusters;
        found.clusters.resize(inst.k);
        found.cost = clustering_cost(inst.matrix, found.clusters, &found.medians);
        best = std::move(found);
        return true;
    });
    return best;
}

std::optional<Clustering> brute_force_medians(
    const Instance& inst, const std::vector<std::vector<Symbol>>& centers,
    const OracleCaps& caps) {
    inst.validate();
    const auto* cap = std::get_if<Capacitated>(&inst.constraint);
    if (!cap) throw InputError("brute_force_medians requires a Capacitated instance");
    for (const auto& c : centers)
        if (static_cast<int>(c.size()) != inst.m())
            throw InputError("center length does not match the row count");
    // Number of k-multisets: C(|centers| + k - 1, k), checked incrementally.
    long long combos = 1;
    long long cnt = static_cast<long long>(centers.size());
    for (int i = 1; i <= inst.k; ++i) {
        combos = combos * (cnt + i - 1) / i;
        if (combos > caps.max_center_tuples)
            throw ResourceError("brute_force_medians: center tuple count exceeds cap");
    }
    std::optional<Clustering> best;
    std::vector<int> pick(inst.k, 0);
    std::vector<std::vector<Symbol>> meds(inst.k);
    // Assigning every column to its nearest picked center ignores the size
    // window, so it lower-bounds the matching cost; tuples whose bound
    // already exceeds the target are skipped without running the matching.
    const auto center_dist = candidate_distance_table(inst.matrix, centers);
    const int n = inst.n();
    auto try_tuple = [&]() {
        Cost bound = best ? best->cost - 1 : inst.budget;
        Cost lower = 0;
        for (int j = 0; j < n && lower <= bound; ++j) {
            Cost nearest = center_dist[pick[0]][j];
            for (int i = 1; i < inst.k; ++i)
                nearest = std::min(nearest, center_dist[pick[i]][j]);
            lower += nearest;
        }
        if (lower > bound) return;
        for (int i = 0; i < inst.k; ++i) meds[i] = centers[pick[i]];
        auto assigned = assign_with_medians(inst.matrix, cap->p, cap->q, meds);
        if (!assigned) return;
        if (assigned->cost > bound) return;
        best = std::move(*assigned);
    };
    // Non-decreasing index tuples enumerate each multiset once.
    auto rec = [&](auto&& self, int slot, int from) -> void {
        if (slot == inst.k) {
            try_tuple();
            return;
        }
        for (int idx = from; idx < static_cast<int>(centers.size()); ++idx) {
            pick[slot] = idx;
            self(self, slot + 1, idx);
        }
    };
    if (!centers.empty()) rec(rec, 0, 0);
    if (best) {
        // Report the achievable cost with optimal medians for the witness.
        best->cost = clustering_cost(inst.matrix, best->clusters, &best->medians);
    }
    return best;
}

std::vector<std::vector<Symbol>> all_vectors(int length, int sigma, long long cap) {
    if (length < 1 || sigma < 1) throw InputError("all_vectors: bad dimensions");
    long long total = 1;
    for (int i = 0; i < length; ++i) {
        if (total > cap / sigma) throw ResourceError("all_vectors: sigma^length exceeds cap");
        total *= sigma;
    }
    std::vector<std::vector<Symbol>> out;
    out.reserve(static_cast<std::size_t>(total));
    std::vector<Symbol> cur(length, 0);
    while (true) {
        out.push_back(cur);
        int pos = length - 1;
        while (pos >= 0 && cur[pos] == sigma - 1) cur[pos--] = 0;
        if (pos < 0) break;
        ++cur[pos];
    }
    return out;
}

namespace {

// Finds one cycle in an undirected graph as a vertex sequence (consecutive
// entries adjacent, last adjacent to first), or empty if the graph is a
// forest. Deterministic: DFS from the smallest vertex, neighbors ascending.
std::vector<int> find_cycle(const std::vector<std::vector<int>>& adj) {
    int n = static_cast<int>(adj.size());
    std::vector<int> parent(n, -2);
    std::vector<char> on_stack(n, 0);
    for (int start = 0; start < n; ++start) {
        if (parent[start] != -2) continue;
        parent[start] = -1;
        std::vector<std::pair<int, std::size_t>> stack{{start, 0}};
        on_stack[start] = 1;
        while (!stack.empty()) {
            auto& [v, idx] = stack.back();
            if (idx == adj[v].size()) {
                on_stack[v] = 0;
                stack.pop_back();
                continue;
            }
            int w = adj[v][idx++];
            if (parent[w] == -2) {
                parent[w] = v;
                on_stack[w] = 1;
                stack.emplace_back(w, 0);
            } else if (w != parent[v] && on_stack[w]) {
                std::vector<int> cycle;
                for (int u = v; u != w; u = parent[u]) cycle.push_back(u);
                cycle.push_back(w);
                return cycle;
            }
        }
    }
    return {};
}

}  // namespace

Clustering uncross(const CategoricalMatrix& matrix, Clustering clustering) {
    int n = matrix.cols();
    int k = static_cast<int>(clustering.clusters.size());
    std::vector<char> seen(n, 0);
    for (const auto& cluster : clustering.clusters)
        for (int j : cluster) {
            if (j < 0 || j >= n || seen[j])
                throw InputError("uncross: clusters must partition the columns");
            seen[j] = 1;
        }
    for (int j = 0; j < n; ++j)
        if (!seen[j]) throw InputError("uncross: clusters must partition the columns");

    ColumnGroups groups = group_identical_columns(matrix);
    int s = groups.count();

    // Centers stay fixed at the input clusters' majority medians; moves are
    // judged against them, so the true (re-optimized) cost can only drop.
    std::vector<std::vector<Symbol>> med(k);
    for (int i = 0; i < k; ++i)
        med[i] = clustering.clusters[i].empty()
                     ? std::vector<Symbol>(matrix.rows(), 0)
                     : majority_median(matrix, clustering.clusters[i]);
    std::vector<std::vector<Cost>> dist(k, std::vector<Cost>(s, 0));
    for (int i = 0; i < k; ++i)
        for (int g = 0; g < s; ++g)
            dist[i][g] = hamming_distance(med[i],
                                          matrix.column(groups.representative(g)));

    std::vector<std::vector<long long>> count(k, std::vector<long long>(s, 0));
    for (int i = 0; i < k; ++i)
        for (int j : clustering.clusters[i]) ++count[i][groups.group_of[j]];

    while (true) {
        std::vector<std::vector<int>> adj(k + s);
        for (int i = 0; i < k; ++i)
            for (int g = 0; g < s; ++g)
                if (count[i][g] > 0) {
                    adj[i].push_back(k + g);
                    adj[k + g].push_back(i);
                }
        auto cycle = find_cycle(adj);
        if (cycle.empty()) break;
        if (cycle.size() % 2 != 0 || cycle.size() < 4)
            throw std::logic_error("uncross: malformed cycle");
        if (cycle[0] >= k) std::rotate(cycle.begin(), cycle.begin() + 1, cycle.end());
        int t = static_cast<int>(cycle.size()) / 2;
        std::vector<int> C(t), G(t);
        for (int h = 0; h < t; ++h) {
            C[h] = cycle[2 * h];
            G[h] = cycle[2 * h + 1] - k;
            if (C[h] >= k || G[h] < 0) throw std::logic_error("uncross: cycle not alternating");
        }
        // Cluster C[h] intersects G[h] and G[h-1]. Compare the two ways of
        // rotating columns around the cycle and take the cheaper one.
        Cost same = 0, prev = 0;
        for (int h = 0; h < t; ++h) {
            same += dist[C[h]][G[h]];
            prev += dist[C[h]][G[(h + t - 1) % t]];
        }
        if (same <= prev) {
            // Shift each cluster's G[h-1] columns back to C[h-1]: the unit
            // delta is `same - prev` <= 0.
            long long r = std::numeric_limits<long long>::max();
            for (int h = 0; h < t; ++h)
                r = std::min(r, count[C[h]][G[(h + t - 1) % t]]);
            for (int h = 0; h < t; ++h) {
                int g = G[(h + t - 1) % t];
                count[C[h]][g] -= r;
                count[C[(h + t - 1) % t]][g] += r;
            }
        } else {
            // Shift each cluster's G[h] columns forward to C[h+1].
            long long r = std::numeric_limits<long long>::max();
            for (int h = 0; h < t; ++h) r = std::min(r, count[C[h]][G[h]]);
            for (int h = 0; h < t; ++h) {
                int g = G[h];
                count[C[h]][g] -= r;
                count[C[(h + 1) % t]][g] += r;
            }
        }
    }

    Clustering result;
    result.clusters.assign(k, {});
    std::vector<std::size_t> head(s, 0);
    for (int i = 0; i < k; ++i)
        for (int g = 0; g < s; ++g)
            for (long long c = 0; c < count[i][g]; ++c)
                result.clusters[i].push_back(groups.members[g][head[g]++]);
    for (int g = 0; g < s; ++g)
        if (head[g] != groups.members[g].size())
            throw std::logic_error("uncross: column accounting failed");
    for (auto& cluster : result.clusters)
        std::sort(cluster.begin(), cluster.end());
    result.cost = clustering_cost(matrix, result.clusters, &result.medians);
    return result;
}

}  // namespace capclust
