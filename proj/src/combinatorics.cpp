#include "capclust/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

namespace capclust {

// ============================================================
// Block partitions
// ============================================================

bool block_partition_feasible(long long size, long long blocks, int p, int q) {
    if (size < 0 || blocks < 0) return false;
    return blocks * p <= size && size <= blocks * q;
}

std::optional<std::vector<int>> simple_split_counts(const std::vector<int>& group_sizes,
                                                    int total_blocks, int p, int q) {
    if (p < 1 || q < p) throw InputError("simple_split_counts: need 1 <= p <= q");
    long long lo_sum = 0, hi_sum = 0;
    std::vector<int> lo(group_sizes.size()), hi(group_sizes.size());
    for (std::size_t i = 0; i < group_sizes.size(); ++i) {
        const int g = group_sizes[i];
        if (g < 1) throw InputError("simple_split_counts: group sizes must be positive");
        lo[i] = (g + q - 1) / q;
        hi[i] = g / p;
        if (lo[i] > hi[i]) return std::nullopt;
        lo_sum += lo[i];
        hi_sum += hi[i];
    }
    if (total_blocks < lo_sum || total_blocks > hi_sum) return std::nullopt;
    std::vector<int> counts = lo;
    long long spare = total_blocks - lo_sum;
    for (std::size_t i = 0; i < counts.size() && spare > 0; ++i) {
        const long long take = std::min<long long>(spare, hi[i] - lo[i]);
        counts[i] += static_cast<int>(take);
        spare -= take;
    }
    return counts;
}

bool simple_split_feasible(const std::vector<int>& group_sizes, int total_blocks,
                           int p, int q) {
    return simple_split_counts(group_sizes, total_blocks, p, q).has_value();
}

std::vector<std::vector<int>> greedy_blocks(const std::vector<int>& members, int blocks,
                                            int p, int q) {
    const long long size = static_cast<long long>(members.size());
    if (!block_partition_feasible(size, blocks, p, q))
        throw InputError("greedy_blocks: infeasible block count");
    std::vector<int> block_size(blocks, p);
    long long spare = size - static_cast<long long>(blocks) * p;
    for (int b = 0; b < blocks && spare > 0; ++b) {
        const long long take = std::min<long long>(spare, q - p);
        block_size[b] += static_cast<int>(take);
        spare -= take;
    }
    std::vector<std::vector<int>> out(blocks);
    std::size_t pos = 0;
    for (int b = 0; b < blocks; ++b)
        for (int r = 0; r < block_size[b]; ++r) out[b].push_back(members[pos++]);
    return out;
}

// ============================================================
// Forest templates
// ============================================================

namespace {

// A rooted subtree shape. Children alternate kinds with the root.
struct Shape {
    bool center_root = false;
    int centers = 0;
    int groups = 0;
    std::string enc;  // canonical rooted encoding
    std::vector<int> children;  // indices into the owning pool

    bool operator<(const Shape& o) const { return enc < o.enc; }
};

// Shapes are stored in pools so children can reference them by index.
struct ShapeStore {
    std::vector<Shape> shapes;

    int add(Shape s) {
        shapes.push_back(std::move(s));
        return static_cast<int>(shapes.size()) - 1;
    }
};

std::string encode(const ShapeStore& store, bool center_root,
                   std::vector<std::string> child_encs) {
    std::sort(child_encs.begin(), child_encs.end());
    std::string enc(center_root ? "c(" : "g(");
    for (auto& c : child_encs) enc += c;
    enc += ')';
    (void)store;
    return enc;
}

class ShapeGenerator {
public:
    explicit ShapeGenerator(ShapeStore& store) : store_(store) {}

    // Shapes rooted at a group node with the given totals (root included).
    const std::vector<int>& group_shapes(int centers, int groups) {
        auto key = std::make_pair(centers, groups);
        auto it = group_memo_.find(key);
        if (it != group_memo_.end()) return it->second;
        std::vector<int> result;
        if (groups >= 1 && centers >= 0) {
            // Children are center subtrees consuming (centers, groups - 1).
            auto pool = center_child_pool(centers, groups - 1);
            std::vector<int> picked;
            collect_multisets(pool, 0, centers, groups - 1, 0, picked,
                              [&](const std::vector<int>& kids) {
                result.push_back(make_shape(false, kids));
            });
        }
        return group_memo_.emplace(key, std::move(result)).first->second;
    }

    // Shapes rooted at a center with >= min_children group-subtree children.
    const std::vector<int>& center_shapes(int centers, int groups, int min_children) {
        auto key = std::make_tuple(centers, groups, min_children);
        auto it = center_memo_.find(key);
        if (it != center_memo_.end()) return it->second;
        std::vector<int> result;
        if (centers >= 1 && groups >= min_children) {
            auto pool = group_child_pool(centers - 1, groups);
            std::vector<int> picked;
            collect_multisets(pool, 0, centers - 1, groups, min_children, picked,
                              [&](const std::vector<int>& kids) {
                result.push_back(make_shape(true, kids));
            });
        }
        return center_memo_.emplace(key, std::move(result)).first->second;
    }

private:
    // Candidate children sorted by encoding: center subtrees with at least
    // one child each, any size within the remaining budget.
    std::vector<int> center_child_pool(int max_centers, int max_groups) {
        std::vector<int> pool;
        for (int a = 1; a <= max_centers; ++a)
            for (int b = 1; b <= max_groups; ++b)
                for (int idx : center_shapes(a, b, 1)) pool.push_back(idx);
        sort_pool(pool);
        return pool;
    }

    std::vector<int> group_child_pool(int max_centers, int max_groups) {
        std::vector<int> pool;
        for (int a = 0; a <= max_centers; ++a)
            for (int b = 1; b <= max_groups; ++b)
                for (int idx : group_shapes(a, b)) pool.push_back(idx);
        sort_pool(pool);
        return pool;
    }

    void sort_pool(std::vector<int>& pool) {
        std::sort(pool.begin(), pool.end(), [&](int a, int b) {
            return store_.shapes[a].enc < store_.shapes[b].enc;
        });
    }

    // Multisets over `pool` (non-decreasing index sequences) that consume
    // exactly (centers, groups) and have at least min_count members.
    void collect_multisets(const std::vector<int>& pool, std::size_t start,
                           int centers, int groups, int min_count,
                           std::vector<int>& picked,
                           const std::function<void(const std::vector<int>&)>& emit) {
        if (centers == 0 && groups == 0) {
            if (static_cast<int>(picked.size()) >= min_count) emit(picked);
            return;
        }
        for (std::size_t i = start; i < pool.size(); ++i) {
            const Shape& sh = store_.shapes[pool[i]];
            if (sh.centers > centers || sh.groups > groups) continue;
            picked.push_back(pool[i]);
            collect_multisets(pool, i, centers - sh.centers, groups - sh.groups,
                              min_count, picked, emit);
            picked.pop_back();
        }
    }

    int make_shape(bool center_root, const std::vector<int>& kids) {
        Shape sh;
        sh.center_root = center_root;
        sh.centers = center_root ? 1 : 0;
        sh.groups = center_root ? 0 : 1;
        std::vector<std::string> encs;
        for (int kid : kids) {
            sh.centers += store_.shapes[kid].centers;
            sh.groups += store_.shapes[kid].groups;
            encs.push_back(store_.shapes[kid].enc);
        }
        sh.children = kids;
        sh.enc = encode(store_, center_root, std::move(encs));
        return store_.add(sh);
    }

    ShapeStore& store_;
    std::map<std::pair<int, int>, std::vector<int>> group_memo_;
    std::map<std::tuple<int, int, int>, std::vector<int>> center_memo_;
};

// A materialized free tree for one component.
struct BuiltTree {
    std::vector<bool> is_center;             // vertex kind
    std::vector<std::vector<int>> adj;
    int centers = 0, groups = 0;
    std::string canon;  // free canonical encoding
    int canon_root = -1;

    int size() const { return static_cast<int>(is_center.size()); }
};

int materialize(const ShapeStore& store, int shape_idx, int parent, BuiltTree& t) {
    const Shape& sh = store.shapes[shape_idx];
    const int v = t.size();
    t.is_center.push_back(sh.center_root);
    t.adj.emplace_back();
    (sh.center_root ? t.centers : t.groups) += 1;
    if (parent >= 0) {
        t.adj[parent].push_back(v);
        t.adj[v].push_back(parent);
    }
    for (int kid : sh.children) materialize(store, kid, v, t);
    return v;
}

std::string rooted_encoding(const BuiltTree& t, int v, int parent) {
    std::vector<std::string> child_encs;
    for (int w : t.adj[v])
        if (w != parent) child_encs.push_back(rooted_encoding(t, w, v));
    std::sort(child_encs.begin(), child_encs.end());
    std::string enc(t.is_center[v] ? "c(" : "g(");
    for (auto& c : child_encs) enc += c;
    enc += ')';
    return enc;
}

void free_canonicalize(BuiltTree& t) {
    t.canon.clear();
    for (int v = 0; v < t.size(); ++v) {
        if (!t.is_center[v]) continue;
        std::string enc = rooted_encoding(t, v, -1);
        if (t.canon.empty() || enc < t.canon) {
            t.canon = enc;
            t.canon_root = v;
        }
    }
}

// All free component trees with exactly (centers, groups) vertices of each
// kind, deduplicated and sorted by canonical encoding.
std::vector<BuiltTree> component_trees(ShapeStore& store, ShapeGenerator& gen,
                                       int centers, int groups) {
    std::map<std::string, BuiltTree> dedup;
    for (int idx : gen.center_shapes(centers, groups, 2)) {
        BuiltTree t;
        materialize(store, idx, -1, t);
        free_canonicalize(t);
        dedup.try_emplace(t.canon, std::move(t));
    }
    std::vector<BuiltTree> out;
    out.reserve(dedup.size());
    for (auto& [enc, tree] : dedup) out.push_back(std::move(tree));
    return out;
}

ForestTemplate assemble(const std::vector<const BuiltTree*>& comps) {
    ForestTemplate f;
    for (const BuiltTree* t : comps) {
        f.num_centers += t->centers;
        f.num_groups += t->groups;
    }
    f.adj.resize(f.num_centers + f.num_groups);
    int next_center = 0, next_group = f.num_centers;
    for (const BuiltTree* t : comps) {
        std::vector<int> id(t->size());
        ForestTemplate::Component comp;
        comp.centers = t->centers;
        comp.groups = t->groups;
        for (int v = 0; v < t->size(); ++v) {
            id[v] = t->is_center[v] ? next_center++ : next_group++;
            comp.vertices.push_back(id[v]);
        }
        comp.root = id[t->canon_root];
        std::sort(comp.vertices.begin(), comp.vertices.end());
        for (int v = 0; v < t->size(); ++v)
            for (int w : t->adj[v])
                if (v < w) {
                    const int c = t->is_center[v] ? id[v] : id[w];
                    const int g = t->is_center[v] ? id[w] : id[v];
                    f.edges.emplace_back(c, g);
                    f.adj[c].push_back(g);
                    f.adj[g].push_back(c);
                }
        f.components.push_back(std::move(comp));
    }
    std::sort(f.edges.begin(), f.edges.end());
    for (auto& a : f.adj) std::sort(a.begin(), a.end());
    return f;
}

std::vector<ForestTemplate> build_templates(int t, int ell) {
    std::vector<ForestTemplate> result;
    if (t < 1 || ell < 2) return result;

    ShapeStore store;
    ShapeGenerator gen(store);

    // Candidate components, globally ordered: a tree with a centers needs at
    // least a+1 group nodes (every center has degree >= 2).
    struct Entry {
        int centers, groups;
        BuiltTree tree;
    };
    std::vector<Entry> pool;
    for (int a = 1; a <= t; ++a)
        for (int b = a + 1; b <= ell; ++b)
            for (auto& tree : component_trees(store, gen, a, b))
                pool.push_back({a, b, std::move(tree)});

    // Forests = non-decreasing sequences from the pool consuming (t, ell).
    std::vector<const BuiltTree*> picked;
    std::function<void(std::size_t, int, int)> rec = [&](std::size_t start, int rc, int rg) {
        if (rc == 0 && rg == 0) {
            result.push_back(assemble(picked));
            return;
        }
        for (std::size_t i = start; i < pool.size(); ++i) {
            if (pool[i].centers > rc || pool[i].groups > rg) continue;
            picked.push_back(&pool[i].tree);
            rec(i, rc - pool[i].centers, rg - pool[i].groups);
            picked.pop_back();
        }
    };
    rec(0, t, ell);
    return result;
}

}  // namespace

const std::vector<ForestTemplate>& enumerate_forest_templates(int t, int ell) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::vector<ForestTemplate>> cache;
    std::scoped_lock lock(mu);
    auto key = std::make_pair(t, ell);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_templates(t, ell)).first;
    return it->second;
}

// ============================================================
// Colorings
// ============================================================

namespace {

// Advances a restricted growth string whose labels are capped at max_label;
// false once exhausted. Lexicographic order.
bool advance_rgs(std::vector<int>& a, int max_label) {
    const int n = static_cast<int>(a.size());
    for (int i = n - 1; i >= 1; --i) {
        int prefix_max = 0;
        for (int j = 0; j < i; ++j) prefix_max = std::max(prefix_max, a[j]);
        if (a[i] < std::min(prefix_max + 1, max_label)) {
            ++a[i];
            std::fill(a.begin() + i + 1, a.end(), 0);
            return true;
        }
    }
    return false;
}

int rgs_blocks(const std::vector<int>& a) {
    return a.empty() ? 0 : *std::max_element(a.begin(), a.end()) + 1;
}

}  // namespace

ColoringFamily ColoringFamily::exhaustive(int s, int ell, std::uint64_t cap) {
    if (s < 1 || ell < 1) throw InputError("coloring family: need s >= 1 and ell >= 1");
    std::uint64_t count = 1;
    for (int i = 0; i < s; ++i) {
        if (count > cap / static_cast<std::uint64_t>(ell)) {
            if (static_cast<std::uint64_t>(ell) != 1)
                throw ResourceError("exhaustive coloring family exceeds the configured cap");
        }
        count *= static_cast<std::uint64_t>(ell);
        if (count > cap)
            throw ResourceError("exhaustive coloring family exceeds the configured cap");
    }
    ColoringFamily f;
    f.kind_ = Kind::Exhaustive;
    f.s_ = s;
    f.ell_ = ell;
    f.state_.assign(s, 0);
    return f;
}

ColoringFamily ColoringFamily::surjective_partitions(int s, int ell) {
    if (s < 1 || ell < 1) throw InputError("coloring family: need s >= 1 and ell >= 1");
    ColoringFamily f;
    f.kind_ = Kind::Partitions;
    f.s_ = s;
    f.ell_ = ell;
    f.state_.assign(s, 0);
    if (ell > s) f.done_ = true;
    return f;
}

ColoringFamily ColoringFamily::random(int s, int ell, long long trials, std::uint64_t seed) {
    if (s < 1 || ell < 1) throw InputError("coloring family: need s >= 1 and ell >= 1");
    if (trials < 0) throw InputError("coloring family: trials must be nonnegative");
    ColoringFamily f;
    f.kind_ = Kind::Random;
    f.s_ = s;
    f.ell_ = ell;
    f.remaining_ = trials;
    f.rng_.seed(seed);
    return f;
}

long long ColoringFamily::default_trials(int ell) {
    return static_cast<long long>(std::ceil(std::exp(static_cast<double>(ell)) * std::log(4.0)));
}

bool ColoringFamily::next(Coloring& out) {
    if (done_) return false;
    switch (kind_) {
        case Kind::Exhaustive: {
            if (started_) {
                int i = s_ - 1;
                while (i >= 0 && state_[i] == ell_ - 1) state_[i--] = 0;
                if (i < 0) {
                    done_ = true;
                    return false;
                }
                ++state_[i];
            }
            started_ = true;
            break;
        }
        case Kind::Partitions: {
            if (!started_) {
                started_ = true;
                if (rgs_blocks(state_) == ell_) break;
            }
            bool found = false;
            while (advance_rgs(state_, ell_ - 1)) {
                if (rgs_blocks(state_) == ell_) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                done_ = true;
                return false;
            }
            break;
        }
        case Kind::Random: {
            if (remaining_ <= 0) {
                done_ = true;
                return false;
            }
            --remaining_;
            out.resize(s_);
            for (int i = 0; i < s_; ++i)
                out[i] = static_cast<std::uint8_t>(rng_() % static_cast<std::uint64_t>(ell_));
            return true;
        }
    }
    out.resize(s_);
    for (int i = 0; i < s_; ++i) out[i] = static_cast<std::uint8_t>(state_[i]);
    return true;
}

// ============================================================
// Set partitions
// ============================================================

bool for_each_partition(int n, int blocks,
                        const std::function<bool(const std::vector<int>&)>& visit) {
    if (n < 1 || blocks < 1 || blocks > n) return true;
    std::vector<int> a(n, 0);
    do {
        if (rgs_blocks(a) == blocks && !visit(a)) return false;
    } while (advance_rgs(a, blocks - 1));
    return true;
}

}  // namespace capclust
