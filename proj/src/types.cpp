#include "capclust/types.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace capclust {

CategoricalMatrix::CategoricalMatrix(int rows, std::vector<std::vector<Symbol>> columns)
    : rows_(rows), columns_(std::move(columns)) {
    if (rows_ < 0) throw InputError("matrix row count must be nonnegative");
    if (rows_ < 1 && !columns_.empty())
        throw InputError("matrix with columns must have at least one row");
    for (const auto& col : columns_) {
        if (static_cast<int>(col.size()) != rows_)
            throw InputError("matrix columns must all have the row count");
    }
}

Symbol CategoricalMatrix::max_symbol() const {
    Symbol mx = -1;
    for (const auto& col : columns_)
        for (Symbol s : col) mx = std::max(mx, s);
    return mx;
}

std::string constraint_name(const SizeConstraint& c) {
    struct Namer {
        std::string operator()(const Unconstrained&) const { return "unconstrained"; }
        std::string operator()(const Capacitated&) const { return "capacitated"; }
        std::string operator()(const Balanced&) const { return "balanced"; }
        std::string operator()(const FactorBalanced&) const { return "factor"; }
        std::string operator()(const Equal&) const { return "equal"; }
    };
    return std::visit(Namer{}, c);
}

bool check_constraint(const std::vector<int>& sizes, const SizeConstraint& c) {
    if (std::holds_alternative<Unconstrained>(c)) return true;
    if (sizes.empty()) return false;
    for (int s : sizes)
        if (s < 1) return false;
    auto [mn, mx] = std::minmax_element(sizes.begin(), sizes.end());
    if (const auto* cap = std::get_if<Capacitated>(&c))
        return *mn >= cap->p && *mx <= cap->q;
    if (const auto* bal = std::get_if<Balanced>(&c))
        return *mx - *mn <= bal->delta;
    if (const auto* fac = std::get_if<FactorBalanced>(&c))
        return static_cast<long long>(*mx) * fac->den <= fac->num * static_cast<long long>(*mn);
    // Equal
    return *mn == *mx;
}

void Instance::validate() const {
    if (alphabet.size < 1) throw InputError("alphabet size must be at least 1");
    if (k < 1) throw InputError("cluster count k must be at least 1");
    if (budget < 0) throw InputError("budget must be nonnegative");
    if (matrix.cols() < 1) throw InputError("matrix must have at least one column");
    for (int j = 0; j < matrix.cols(); ++j)
        for (Symbol s : matrix.column(j))
            if (s < 0 || s >= alphabet.size)
                throw InputError("matrix entry out of alphabet range");
    if (const auto* cap = std::get_if<Capacitated>(&constraint)) {
        if (cap->p < 1) throw InputError("capacity lower bound p must be at least 1");
        if (cap->q < cap->p) throw InputError("capacity bounds must satisfy p <= q");
    } else if (const auto* bal = std::get_if<Balanced>(&constraint)) {
        if (bal->delta < 0) throw InputError("delta must be nonnegative");
    } else if (const auto* fac = std::get_if<FactorBalanced>(&constraint)) {
        if (fac->den < 1 || fac->num < fac->den)
            throw InputError("alpha must be a rational number >= 1");
    }
}

std::vector<int> Clustering::sizes() const {
    std::vector<int> out;
    out.reserve(clusters.size());
    for (const auto& cl : clusters) out.push_back(static_cast<int>(cl.size()));
    return out;
}

ColumnGroups group_identical_columns(const CategoricalMatrix& matrix) {
    ColumnGroups groups;
    groups.group_of.resize(matrix.cols());
    std::map<std::vector<Symbol>, int> seen;
    for (int j = 0; j < matrix.cols(); ++j) {
        auto [it, inserted] = seen.try_emplace(matrix.column(j), groups.count());
        if (inserted) groups.members.emplace_back();
        groups.members[it->second].push_back(j);
        groups.group_of[j] = it->second;
    }
    return groups;
}

IntersectionGraph intersection_graph(const std::vector<std::vector<int>>& clusters,
                                     const ColumnGroups& groups) {
    IntersectionGraph g;
    g.num_clusters = static_cast<int>(clusters.size());
    g.num_groups = groups.count();
    g.groups_of_cluster.resize(g.num_clusters);
    g.clusters_of_group.resize(g.num_groups);
    for (int i = 0; i < g.num_clusters; ++i) {
        std::vector<bool> hit(g.num_groups, false);
        for (int col : clusters[i]) hit[groups.group_of[col]] = true;
        for (int gg = 0; gg < g.num_groups; ++gg) {
            if (!hit[gg]) continue;
            g.edges.emplace_back(i, gg);
            g.groups_of_cluster[i].push_back(gg);
            g.clusters_of_group[gg].push_back(i);
        }
    }
    return g;
}

bool IntersectionGraph::is_forest() const {
    // Union-find over cluster vertices [0, num_clusters) and group vertices
    // [num_clusters, num_clusters + num_groups); a repeated union inside one
    // component witnesses a cycle.
    std::vector<int> parent(num_clusters + num_groups);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [i, g] : edges) {
        int a = find(i), b = find(num_clusters + g);
        if (a == b) return false;
        parent[a] = b;
    }
    return true;
}

void canonicalize(Clustering& c) {
    std::vector<int> order(c.clusters.size());
    std::iota(order.begin(), order.end(), 0);
    for (auto& cl : c.clusters) std::sort(cl.begin(), cl.end());
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const auto& ca = c.clusters[a];
        const auto& cb = c.clusters[b];
        if (ca.empty() || cb.empty()) return cb.empty() && !ca.empty();
        return ca[0] < cb[0];
    });
    std::vector<std::vector<int>> clusters;
    std::vector<std::vector<Symbol>> medians;
    clusters.reserve(order.size());
    medians.reserve(order.size());
    for (int idx : order) {
        clusters.push_back(std::move(c.clusters[idx]));
        if (idx < static_cast<int>(c.medians.size()))
            medians.push_back(std::move(c.medians[idx]));
    }
    c.clusters = std::move(clusters);
    c.medians = std::move(medians);
}

}  // namespace capclust
