#include "capclust/fpt.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "capclust/assignment.hpp"
#include "capclust/metric.hpp"

namespace capclust {
namespace {

using Cost32 = std::int32_t;
constexpr Cost32 kInf = std::numeric_limits<Cost32>::max() / 4;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Shared solver state for one instance.
struct Ctx {
    const CategoricalMatrix* matrix = nullptr;
    ColumnGroups groups;
    const CandidateMedianSet* medians = nullptr;
    // med_dist[c][g]: Hamming distance from candidate c to the column type
    // of group g.
    std::vector<std::vector<Cost32>> med_dist;
    std::vector<int> gsize;
    int n = 0, m = 0, k = 0, p = 0, q = 0, s = 0;
    Cost32 budget = 0;
};

// Values above the budget all behave identically for the decision, so every
// addition saturates there. This keeps tables small in int32 and prunes
// dead states early.
inline Cost32 cadd(const Ctx& c, Cost32 a, Cost32 b) {
    if (a >= kInf || b >= kInf) return kInf;
    long long s = static_cast<long long>(a) + b;
    return s > c.budget ? kInf : static_cast<Cost32>(s);
}

inline Cost32 cmul(const Ctx& c, Cost32 a, long long times) {
    if (a >= kInf) return times == 0 ? 0 : kInf;
    long long s = static_cast<long long>(a) * times;
    return s > c.budget ? kInf : static_cast<Cost32>(s);
}

class Flat2 {
  public:
    Flat2() = default;
    Flat2(int a, int b) : d2_(b), v_(static_cast<std::size_t>(a) * b, kInf) {}
    Cost32& at(int i, int j) { return v_[static_cast<std::size_t>(i) * d2_ + j]; }
    Cost32 get(int i, int j) const { return v_[static_cast<std::size_t>(i) * d2_ + j]; }

  private:
    int d2_ = 0;
    std::vector<Cost32> v_;
};

class Flat3 {
  public:
    Flat3() = default;
    Flat3(int a, int b, int c)
        : d2_(b), d3_(c), v_(static_cast<std::size_t>(a) * b * c, kInf) {}
    Cost32& at(int i, int j, int k) {
        return v_[(static_cast<std::size_t>(i) * d2_ + j) * d3_ + k];
    }
    Cost32 get(int i, int j, int k) const {
        return v_[(static_cast<std::size_t>(i) * d2_ + j) * d3_ + k];
    }

  private:
    int d2_ = 0, d3_ = 0;
    std::vector<Cost32> v_;
};

class Flat4 {
  public:
    Flat4() = default;
    Flat4(int a, int b, int c, int d)
        : d2_(b), d3_(c), d4_(d), v_(static_cast<std::size_t>(a) * b * c * d, kInf) {}
    Cost32& at(int i, int j, int k, int l) {
        return v_[((static_cast<std::size_t>(i) * d2_ + j) * d3_ + k) * d4_ + l];
    }
    Cost32 get(int i, int j, int k, int l) const {
        return v_[((static_cast<std::size_t>(i) * d2_ + j) * d3_ + k) * d4_ + l];
    }

  private:
    int d2_ = 0, d3_ = 0, d4_ = 0;
    std::vector<Cost32> v_;
};

// One cluster of the reconstructed witness: how many columns it draws from
// each group, plus its center (candidate index, or -1 for a single-group
// cluster that takes its own column as center).
struct ClusterRecord {
    std::vector<std::pair<int, int>> demand;  // (group, count)
    int med = -1;
};

// State for evaluating one (coloring, template) pair.
struct TemplateRun {
    const Ctx* ctx = nullptr;
    const ForestTemplate* tmpl = nullptr;
    int t = 0, ell = 0;
    Coloring psi;                                 // color of each group
    std::vector<std::vector<int>> color_groups;   // color -> group ids
    std::vector<std::vector<int>> by_popcount;    // over 2^ell

    // Orientation of each template component at its designated root.
    std::vector<int> parent;                 // per template vertex
    std::vector<std::vector<int>> children;  // per template vertex
    std::vector<int> sub_groups;             // group vertices in subtree

    // DP tables, indexed by template vertex id.
    // Group vertex x: gtab[x](h, mask, J, lend) = min cost of a sub-forest
    // handling the color classes of `mask` with designated group J at x,
    // where lend columns of J are withheld for the parent center's cluster.
    std::vector<Flat4> gtab;
    // Non-root center vertex x: cfold[x](h, mask, reserve, g) = min cost of
    // the subtree at x whose cluster additionally receives `reserve` columns
    // of parent group g, the center choice already folded in (including the
    // reserve * dist(center, g) charge).
    std::vector<Flat4> cfold;
    // Component roots: root_val[comp](h, mask).
    std::vector<Flat2> root_val;

    // Cross-component combination: comb[j](mask, h) over the first j
    // components; final answer at comb[f]((1<<ell)-1, k).
    std::vector<Flat2> comb;
    Cost32 final_cost = kInf;
};

void build_popcount_lists(TemplateRun& run) {
    run.by_popcount.assign(run.ell + 1, {});
    for (int mask = 0; mask < (1 << run.ell); ++mask)
        run.by_popcount[std::popcount(static_cast<unsigned>(mask))].push_back(mask);
}

void orient(TemplateRun& run) {
    const ForestTemplate& f = *run.tmpl;
    int total = f.total_vertices();
    run.parent.assign(total, -1);
    run.children.assign(total, {});
    run.sub_groups.assign(total, 0);
    for (const auto& comp : f.components) {
        // Iterative DFS from the root fixes parent/children order by the
        // sorted adjacency lists, which keeps retracing deterministic.
        std::vector<int> stack = {comp.root};
        std::vector<int> order;
        std::vector<char> seen(total, 0);
        seen[comp.root] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            order.push_back(v);
            for (int w : f.adj[v]) {
                if (seen[w]) continue;
                seen[w] = 1;
                run.parent[w] = v;
                run.children[v].push_back(w);
                stack.push_back(w);
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            int v = *it;
            run.sub_groups[v] = f.is_center(v) ? 0 : 1;
            for (int w : run.children[v]) run.sub_groups[v] += run.sub_groups[w];
        }
    }
}

// Sizes of the single-group pieces available to simple clusters inside the
// color class of group J once `keep` columns of J stay in that scope:
// every other group of the class in full, plus the kept remainder of J.
std::vector<std::pair<int, int>> class_remainder(const TemplateRun& run, int J, int keep) {
    std::vector<std::pair<int, int>> out;
    for (int g : run.color_groups[run.psi[J]]) {
        if (g == J) continue;
        out.emplace_back(g, run.ctx->gsize[g]);
    }
    if (keep > 0) out.emplace_back(J, keep);
    return out;
}

// Chain DP over the children of a group vertex x with designated group J.
// Stage i state (h, jin, mask): the color class of J plus the subtrees of
// the first i children are fully handled by h clusters, jin columns of J
// among them, and mask is the union of handled color classes. Each child
// center's cluster takes at least one column of J.
struct GroupChain {
    std::vector<Flat3> stage;  // stage[i](h, jin, mask)
};

GroupChain build_group_chain(const TemplateRun& run, int x, int J) {
    const Ctx& ctx = *run.ctx;
    int jn = ctx.gsize[J];
    int masks = 1 << run.ell;
    int c = run.psi[J];
    GroupChain chain;
    chain.stage.emplace_back(ctx.k + 1, jn + 1, masks);
    Flat3& base = chain.stage[0];
    for (int keep = 0; keep <= jn; ++keep) {
        auto pieces = class_remainder(run, J, keep);
        std::vector<int> sizes;
        sizes.reserve(pieces.size());
        for (auto& pr : pieces) sizes.push_back(pr.second);
        for (int h = 0; h <= ctx.k; ++h) {
            if (simple_split_feasible(sizes, h, ctx.p, ctx.q))
                base.at(h, keep, 1 << c) = 0;
        }
    }
    int pc = 1;
    for (std::size_t i = 0; i < run.children[x].size(); ++i) {
        int y = run.children[x][i];
        int sub = run.sub_groups[y];
        const Flat4& child = run.cfold[y];
        chain.stage.emplace_back(ctx.k + 1, jn + 1, masks);
        Flat3& cur = chain.stage.back();
        const Flat3& prev = chain.stage[chain.stage.size() - 2];
        for (int zhat : run.by_popcount[sub]) {
            if (zhat & (1 << c)) continue;
            for (int hc = 0; hc <= ctx.k; ++hc) {
                for (int take = 1; take <= std::min(ctx.q, jn); ++take) {
                    Cost32 cv = child.get(hc, zhat, take, J);
                    if (cv >= kInf) continue;
                    for (int zprev : run.by_popcount[pc]) {
                        if (zprev & zhat) continue;
                        int z = zprev | zhat;
                        for (int h = hc; h <= ctx.k; ++h) {
                            for (int jin = take; jin <= jn; ++jin) {
                                Cost32 pv = prev.get(h - hc, jin - take, zprev);
                                if (pv >= kInf) continue;
                                Cost32 v = cadd(ctx, pv, cv);
                                Cost32& slot = cur.at(h, jin, z);
                                if (v < slot) slot = v;
                            }
                        }
                    }
                }
            }
        }
        pc += sub;
    }
    return chain;
}

// Chain DP over the children of a center vertex x for a fixed candidate
// center. Stage i state (h, take, mask): the subtrees of the first i
// children are handled by h - 1 clusters plus the cluster at x itself,
// which so far contains `take` columns drawn from the children's groups.
struct CenterChain {
    std::vector<Flat3> stage;  // stage[i](h, take, mask)
};

CenterChain build_center_chain(const TemplateRun& run, int x, int med) {
    const Ctx& ctx = *run.ctx;
    int masks = 1 << run.ell;
    CenterChain chain;
    chain.stage.emplace_back(ctx.k + 1, ctx.q + 1, masks);
    chain.stage[0].at(1, 0, 0) = 0;
    int pc = 0;
    for (std::size_t i = 0; i < run.children[x].size(); ++i) {
        int y = run.children[x][i];
        int sub = run.sub_groups[y];
        const Flat4& child = run.gtab[y];
        chain.stage.emplace_back(ctx.k + 1, ctx.q + 1, masks);
        Flat3& cur = chain.stage.back();
        const Flat3& prev = chain.stage[chain.stage.size() - 2];
        for (int zhat : run.by_popcount[sub]) {
            for (int color = 0; color < run.ell; ++color) {
                if (!(zhat & (1 << color))) continue;
                for (int J : run.color_groups[color]) {
                    Cost32 d = ctx.med_dist[med][J];
                    int tmax = std::min(ctx.q, ctx.gsize[J]);
                    for (int hc = 0; hc <= ctx.k; ++hc) {
                        for (int tc = 1; tc <= tmax; ++tc) {
                            Cost32 gv = child.get(hc, zhat, J, tc);
                            if (gv >= kInf) continue;
                            Cost32 piece = cadd(ctx, gv, cmul(ctx, d, tc));
                            if (piece >= kInf) continue;
                            for (int zprev : run.by_popcount[pc]) {
                                if (zprev & zhat) continue;
                                int z = zprev | zhat;
                                for (int h = hc; h <= ctx.k; ++h) {
                                    for (int take = tc; take <= ctx.q; ++take) {
                                        Cost32 pv = prev.get(h - hc, take - tc, zprev);
                                        if (pv >= kInf) continue;
                                        Cost32 v = cadd(ctx, pv, piece);
                                        Cost32& slot = cur.at(h, take, z);
                                        if (v < slot) slot = v;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        pc += sub;
    }
    return chain;
}

void fill_group_vertex(TemplateRun& run, int x) {
    const Ctx& ctx = *run.ctx;
    int masks = 1 << run.ell;
    run.gtab[x] = Flat4(ctx.k + 1, masks, ctx.s, std::min(ctx.q, *std::max_element(
                            ctx.gsize.begin(), ctx.gsize.end())) + 1);
    for (int J = 0; J < ctx.s; ++J) {
        GroupChain chain = build_group_chain(run, x, J);
        const Flat3& last = chain.stage.back();
        int jn = ctx.gsize[J];
        int lmax = std::min(ctx.q, jn);
        for (int h = 0; h <= ctx.k; ++h) {
            for (int mask : run.by_popcount[run.sub_groups[x]]) {
                if (!(mask & (1 << run.psi[J]))) continue;
                for (int lend = 0; lend <= lmax; ++lend)
                    run.gtab[x].at(h, mask, J, lend) = last.get(h, jn - lend, mask);
            }
        }
    }
}

void fill_center_vertex(TemplateRun& run, int x, int comp_index) {
    const Ctx& ctx = *run.ctx;
    int masks = 1 << run.ell;
    bool is_root = run.parent[x] < 0;
    if (is_root)
        run.root_val[comp_index] = Flat2(ctx.k + 1, masks);
    else
        run.cfold[x] = Flat4(ctx.k + 1, masks, ctx.q + 1, ctx.s);
    int med_count = static_cast<int>(run.ctx->medians->vectors.size());
    for (int med = 0; med < med_count; ++med) {
        CenterChain chain = build_center_chain(run, x, med);
        const Flat3& last = chain.stage.back();
        for (int h = 1; h <= ctx.k; ++h) {
            for (int mask : run.by_popcount[run.sub_groups[x]]) {
                if (is_root) {
                    Cost32 best = kInf;
                    for (int take = ctx.p; take <= ctx.q; ++take)
                        best = std::min(best, last.get(h, take, mask));
                    Cost32& slot = run.root_val[comp_index].at(h, mask);
                    if (best < slot) slot = best;
                } else {
                    for (int reserve = 1; reserve <= ctx.q; ++reserve) {
                        int lo = std::max(ctx.p - reserve, 0);
                        int hi = ctx.q - reserve;
                        if (hi < 0) break;
                        Cost32 best = kInf;
                        for (int take = lo; take <= hi; ++take)
                            best = std::min(best, last.get(h, take, mask));
                        if (best >= kInf) continue;
                        for (int g = 0; g < ctx.s; ++g) {
                            Cost32 v = cadd(ctx, best,
                                            cmul(ctx, ctx.med_dist[med][g], reserve));
                            Cost32& slot = run.cfold[x].at(h, mask, reserve, g);
                            if (v < slot) slot = v;
                        }
                    }
                }
            }
        }
    }
}

Cost32 run_template(TemplateRun& run) {
    const Ctx& ctx = *run.ctx;
    const ForestTemplate& f = *run.tmpl;
    orient(run);
    int total = f.total_vertices();
    run.gtab.assign(total, Flat4());
    run.cfold.assign(total, Flat4());
    run.root_val.assign(f.components.size(), Flat2());
    for (std::size_t ci = 0; ci < f.components.size(); ++ci) {
        const auto& comp = f.components[ci];
        // Post-order: children before parents.
        std::vector<int> order;
        std::vector<int> stack = {comp.root};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            order.push_back(v);
            for (int w : run.children[v]) stack.push_back(w);
        }
        std::reverse(order.begin(), order.end());
        for (int v : order) {
            if (f.is_center(v))
                fill_center_vertex(run, v, static_cast<int>(ci));
            else
                fill_group_vertex(run, v);
        }
    }
    // Combine the components: partition the colors and the cluster count.
    int masks = 1 << run.ell;
    run.comb.assign(f.components.size() + 1, Flat2());
    run.comb[0] = Flat2(masks, ctx.k + 1);
    run.comb[0].at(0, 0) = 0;
    int pc = 0;
    for (std::size_t j = 0; j < f.components.size(); ++j) {
        int sub = f.components[j].groups;
        run.comb[j + 1] = Flat2(masks, ctx.k + 1);
        for (int xprev : run.by_popcount[pc]) {
            for (int h0 = 0; h0 <= ctx.k; ++h0) {
                Cost32 pv = run.comb[j].get(xprev, h0);
                if (pv >= kInf) continue;
                for (int y : run.by_popcount[sub]) {
                    if (y & xprev) continue;
                    for (int hc = 1; h0 + hc <= ctx.k; ++hc) {
                        Cost32 rv = run.root_val[j].get(hc, y);
                        if (rv >= kInf) continue;
                        Cost32 v = cadd(ctx, pv, rv);
                        Cost32& slot = run.comb[j + 1].at(xprev | y, h0 + hc);
                        if (v < slot) slot = v;
                    }
                }
            }
        }
        pc += sub;
    }
    run.final_cost = run.comb[f.components.size()].get(masks - 1, ctx.k);
    return run.final_cost;
}

// --- Witness reconstruction --------------------------------------------
//
// All retracing re-derives the choices by scanning candidate decompositions
// in a fixed order and matching table values exactly; the tables themselves
// are already filled.

void retrace_center(TemplateRun& run, int x, int h, int mask, int reserve,
                    int parent_group, Cost32 target, std::vector<ClusterRecord>& out);

void retrace_group(TemplateRun& run, int x, int h, int mask, int J, int lend,
                   std::vector<ClusterRecord>& out) {
    const Ctx& ctx = *run.ctx;
    GroupChain chain = build_group_chain(run, x, J);
    int jn = ctx.gsize[J];
    int c = run.psi[J];
    int jin = jn - lend;
    Cost32 target = run.gtab[x].get(h, mask, J, lend);
    if (target >= kInf) throw std::logic_error("retrace: dead group state");
    int stages = static_cast<int>(run.children[x].size());
    int cur_h = h, cur_jin = jin, cur_mask = mask;
    Cost32 cur_val = target;
    for (int i = stages; i >= 1; --i) {
        int y = run.children[x][i - 1];
        int sub = run.sub_groups[y];
        const Flat3& prev = chain.stage[i - 1];
        const Flat4& child = run.cfold[y];
        bool found = false;
        for (int zhat : run.by_popcount[sub]) {
            if (found) break;
            if ((zhat & cur_mask) != zhat || (zhat & (1 << c))) continue;
            int zprev = cur_mask ^ zhat;
            for (int hc = 0; hc <= cur_h && !found; ++hc) {
                for (int take = 1; take <= std::min({ctx.q, jn, cur_jin}); ++take) {
                    Cost32 cv = child.get(hc, zhat, take, J);
                    if (cv >= kInf) continue;
                    Cost32 pv = prev.get(cur_h - hc, cur_jin - take, zprev);
                    if (pv >= kInf) continue;
                    if (cadd(ctx, pv, cv) != cur_val) continue;
                    retrace_center(run, y, hc, zhat, take, J, cv, out);
                    cur_h -= hc;
                    cur_jin -= take;
                    cur_mask = zprev;
                    cur_val = pv;
                    found = true;
                    break;
                }
            }
        }
        if (!found) throw std::logic_error("retrace: no group decomposition");
    }
    if (cur_mask != (1 << c) || cur_val != 0)
        throw std::logic_error("retrace: bad group base state");
    // Remaining scope: simple clusters over the class remainder.
    auto pieces = class_remainder(run, J, cur_jin);
    std::vector<int> sizes;
    for (auto& pr : pieces) sizes.push_back(pr.second);
    auto counts = simple_split_counts(sizes, cur_h, ctx.p, ctx.q);
    if (!counts) throw std::logic_error("retrace: base split vanished");
    for (std::size_t e = 0; e < pieces.size(); ++e) {
        std::vector<int> dummy(pieces[e].second);
        // Only block sizes matter here; actual columns are drawn later.
        for (int b = 0; b < (*counts)[e]; ++b) out.push_back(ClusterRecord{});
        auto blocks = greedy_blocks(dummy, (*counts)[e], ctx.p, ctx.q);
        std::size_t base = out.size() - blocks.size();
        for (std::size_t b = 0; b < blocks.size(); ++b)
            out[base + b].demand.emplace_back(pieces[e].first,
                                              static_cast<int>(blocks[b].size()));
    }
}

void retrace_center(TemplateRun& run, int x, int h, int mask, int reserve,
                    int parent_group, Cost32 target, std::vector<ClusterRecord>& out) {
    const Ctx& ctx = *run.ctx;
    int med_count = static_cast<int>(run.ctx->medians->vectors.size());
    for (int med = 0; med < med_count; ++med) {
        CenterChain chain = build_center_chain(run, x, med);
        const Flat3& last = chain.stage.back();
        Cost32 carry = parent_group >= 0
                           ? cmul(ctx, ctx.med_dist[med][parent_group], reserve)
                           : 0;
        int lo = std::max(ctx.p - reserve, 0);
        int hi = ctx.q - reserve;
        for (int take = lo; take <= hi; ++take) {
            Cost32 v = last.get(h, take, mask);
            if (v >= kInf || cadd(ctx, v, carry) != target) continue;
            // Found the center and its own-cluster size; unwind the chain.
            out.push_back(ClusterRecord{});
            std::size_t rec = out.size() - 1;
            out[rec].med = med;
            if (reserve > 0) out[rec].demand.emplace_back(parent_group, reserve);
            int stages = static_cast<int>(run.children[x].size());
            int cur_h = h, cur_take = take, cur_mask = mask;
            Cost32 cur_val = v;
            for (int i = stages; i >= 1; --i) {
                int y = run.children[x][i - 1];
                int sub = run.sub_groups[y];
                const Flat3& prev = chain.stage[i - 1];
                const Flat4& child = run.gtab[y];
                bool found = false;
                for (int zhat : run.by_popcount[sub]) {
                    if (found) break;
                    if ((zhat & cur_mask) != zhat) continue;
                    int zprev = cur_mask ^ zhat;
                    for (int color = 0; color < run.ell && !found; ++color) {
                        if (!(zhat & (1 << color))) continue;
                        for (int J : run.color_groups[color]) {
                            Cost32 d = ctx.med_dist[med][J];
                            int tmax = std::min({ctx.q, ctx.gsize[J], cur_take});
                            bool inner = false;
                            for (int hc = 0; hc <= cur_h && !inner; ++hc) {
                                for (int tc = 1; tc <= tmax; ++tc) {
                                    Cost32 gv = child.get(hc, zhat, J, tc);
                                    if (gv >= kInf) continue;
                                    Cost32 piece = cadd(ctx, gv, cmul(ctx, d, tc));
                                    if (piece >= kInf) continue;
                                    Cost32 pv =
                                        prev.get(cur_h - hc, cur_take - tc, zprev);
                                    if (pv >= kInf) continue;
                                    if (cadd(ctx, pv, piece) != cur_val) continue;
                                    out[rec].demand.emplace_back(J, tc);
                                    retrace_group(run, y, hc, zhat, J, tc, out);
                                    cur_h -= hc;
                                    cur_take -= tc;
                                    cur_mask = zprev;
                                    cur_val = pv;
                                    inner = found = true;
                                    break;
                                }
                            }
                            if (inner) break;
                        }
                    }
                }
                if (!found) throw std::logic_error("retrace: no center decomposition");
            }
            if (cur_h != 1 || cur_take != 0 || cur_mask != 0 || cur_val != 0)
                throw std::logic_error("retrace: bad center base state");
            return;
        }
    }
    throw std::logic_error("retrace: no center achieves target");
}

std::vector<ClusterRecord> retrace(TemplateRun& run) {
    const Ctx& ctx = *run.ctx;
    const ForestTemplate& f = *run.tmpl;
    std::vector<ClusterRecord> out;
    int fcomp = static_cast<int>(f.components.size());
    int cur_mask = (1 << run.ell) - 1;
    int cur_h = ctx.k;
    Cost32 cur_val = run.final_cost;
    for (int j = fcomp; j >= 1; --j) {
        int sub = f.components[j - 1].groups;
        bool found = false;
        for (int y : run.by_popcount[sub]) {
            if (found) break;
            if ((y & cur_mask) != y) continue;
            for (int hc = 1; hc <= cur_h; ++hc) {
                Cost32 rv = run.root_val[j - 1].get(hc, y);
                if (rv >= kInf) continue;
                Cost32 pv = run.comb[j - 1].get(cur_mask ^ y, cur_h - hc);
                if (pv >= kInf) continue;
                if (cadd(ctx, pv, rv) != cur_val) continue;
                retrace_center(run, f.components[j - 1].root, hc, y, 0, -1, rv, out);
                cur_mask ^= y;
                cur_h -= hc;
                cur_val = pv;
                found = true;
                break;
            }
        }
        if (!found) throw std::logic_error("retrace: no component decomposition");
    }
    if (cur_mask != 0 || cur_h != 0 || cur_val != 0)
        throw std::logic_error("retrace: bad combine base state");
    return out;
}

// Turn demand records into concrete clusters, drawing ascending column
// indices from each group's pool in record order.
Clustering assemble(const Ctx& ctx, const std::vector<ClusterRecord>& records) {
    std::vector<std::size_t> head(ctx.s, 0);
    Clustering result;
    for (const auto& rec : records) {
        std::vector<int> cluster;
        for (auto [g, cnt] : rec.demand) {
            const auto& pool = ctx.groups.members[g];
            if (head[g] + cnt > pool.size())
                throw std::logic_error("assemble: group pool exhausted");
            for (int i = 0; i < cnt; ++i) cluster.push_back(pool[head[g]++]);
        }
        std::sort(cluster.begin(), cluster.end());
        result.clusters.push_back(std::move(cluster));
    }
    for (int g = 0; g < ctx.s; ++g)
        if (head[g] != ctx.groups.members[g].size())
            throw std::logic_error("assemble: leftover columns");
    result.cost = clustering_cost(*ctx.matrix, result.clusters, &result.medians);
    return result;
}

Ctx make_ctx(const Instance& inst, const ColumnGroups& groups,
             const CandidateMedianSet& medians, int p, int q) {
    Ctx ctx;
    ctx.matrix = &inst.matrix;
    ctx.groups = groups;
    ctx.medians = &medians;
    ctx.n = inst.n();
    ctx.m = inst.m();
    ctx.k = inst.k;
    ctx.p = p;
    ctx.q = q;
    ctx.s = groups.count();
    long long clamp = std::min<long long>(static_cast<long long>(ctx.n) * ctx.m,
                                          kInf - 1);
    ctx.budget = static_cast<Cost32>(std::min<long long>(inst.budget, clamp));
    ctx.gsize.resize(ctx.s);
    for (int g = 0; g < ctx.s; ++g) ctx.gsize[g] = groups.size_of(g);
    ctx.med_dist.assign(medians.vectors.size(), std::vector<Cost32>(ctx.s, 0));
    for (std::size_t c = 0; c < medians.vectors.size(); ++c)
        for (int g = 0; g < ctx.s; ++g)
            ctx.med_dist[c][g] = static_cast<Cost32>(hamming_distance(
                medians.vectors[c], inst.matrix.column(groups.representative(g))));
    return ctx;
}

struct CellResult {
    Cost32 cost = kInf;
    int template_index = -1;
};

// Evaluate one coloring against every template of the cell; returns the
// cheapest completion and the first template index achieving it.
CellResult test_coloring(const Ctx& ctx, const std::vector<ForestTemplate>& templates,
                         int t, int ell, const Coloring& psi) {
    CellResult best;
    TemplateRun run;
    run.ctx = &ctx;
    run.t = t;
    run.ell = ell;
    run.psi = psi;
    run.color_groups.assign(ell, {});
    for (int g = 0; g < ctx.s; ++g) run.color_groups[psi[g]].push_back(g);
    build_popcount_lists(run);
    for (std::size_t ti = 0; ti < templates.size(); ++ti) {
        run.tmpl = &templates[ti];
        Cost32 v = run_template(run);
        if (v < best.cost) {
            best.cost = v;
            best.template_index = static_cast<int>(ti);
        }
    }
    return best;
}

std::optional<Clustering> rebuild_witness(const Ctx& ctx,
                                          const std::vector<ForestTemplate>& templates,
                                          int t, int ell, const Coloring& psi,
                                          const CellResult& found) {
    TemplateRun run;
    run.ctx = &ctx;
    run.t = t;
    run.ell = ell;
    run.psi = psi;
    run.color_groups.assign(ell, {});
    for (int g = 0; g < ctx.s; ++g) run.color_groups[psi[g]].push_back(g);
    build_popcount_lists(run);
    run.tmpl = &templates[found.template_index];
    Cost32 v = run_template(run);
    if (v != found.cost) throw std::logic_error("witness rerun disagrees");
    auto records = retrace(run);
    if (static_cast<int>(records.size()) != ctx.k)
        throw std::logic_error("witness has wrong cluster count");
    Clustering result = assemble(ctx, records);
    if (result.cost > ctx.budget) throw std::logic_error("witness exceeds budget");
    canonicalize(result);
    return result;
}

bool surjective(const Coloring& psi, int ell) {
    unsigned seen = 0;
    for (int c : psi) seen |= 1u << c;
    return seen == (1u << ell) - 1u;
}

long long cell_guard(const Ctx& ctx, int ell) {
    // Rough table-size bound so absurd parameter combinations fail fast
    // instead of exhausting memory.
    long long masks = 1LL << ell;
    return masks * (ctx.k + 1) * ctx.s * (ctx.q + 1);
}

}  // namespace

std::optional<Clustering> solve_all_simple(const Instance& inst) {
    inst.validate();
    const auto* cap = std::get_if<Capacitated>(&inst.constraint);
    if (!cap) throw InputError("solve_all_simple requires a Capacitated instance");
    ColumnGroups groups = group_identical_columns(inst.matrix);
    std::vector<int> sizes;
    for (int g = 0; g < groups.count(); ++g) sizes.push_back(groups.size_of(g));
    auto counts = simple_split_counts(sizes, inst.k, cap->p, cap->q);
    if (!counts) return std::nullopt;
    Clustering result;
    for (int g = 0; g < groups.count(); ++g) {
        auto blocks = greedy_blocks(groups.members[g], (*counts)[g], cap->p, cap->q);
        for (auto& b : blocks) result.clusters.push_back(std::move(b));
    }
    result.cost = clustering_cost(inst.matrix, result.clusters, &result.medians);
    canonicalize(result);
    return result;
}

std::optional<Clustering> colorful_solve(const Instance& inst, int t, int ell,
                                         const Coloring& psi,
                                         const CandidateMedianSet& medians) {
    inst.validate();
    const auto* cap = std::get_if<Capacitated>(&inst.constraint);
    if (!cap) throw InputError("colorful_solve requires a Capacitated instance");
    if (t < 1 || ell < t + 1) throw InputError("need t >= 1 and ell >= t + 1");
    ColumnGroups groups = group_identical_columns(inst.matrix);
    if (static_cast<int>(psi.size()) != groups.count())
        throw InputError("coloring size must match the number of column groups");
    for (int c : psi)
        if (c < 0 || c >= ell) throw InputError("coloring value out of range");
    Ctx ctx = make_ctx(inst, groups, medians, cap->p, cap->q);
    const auto& templates = enumerate_forest_templates(t, ell);
    if (templates.empty()) return std::nullopt;
    CellResult best = test_coloring(ctx, templates, t, ell, psi);
    if (best.cost > ctx.budget) return std::nullopt;
    return rebuild_witness(ctx, templates, t, ell, psi, best);
}

std::optional<Clustering> solve_capacitated(const Instance& inst,
                                            const SolveOptions& opts,
                                            SolveStats* stats) {
    inst.validate();
    const auto* cap = std::get_if<Capacitated>(&inst.constraint);
    if (!cap) throw InputError("solve_capacitated requires a Capacitated instance");
    if (opts.threads < 1) throw InputError("threads must be >= 1");
    int n = inst.n(), k = inst.k, p = cap->p, q = cap->q;
    if (static_cast<long long>(k) * p > n || static_cast<long long>(k) * q < n)
        return std::nullopt;

    ColumnGroups groups = group_identical_columns(inst.matrix);
    int s = groups.count();
    long long budget = std::min<Cost>(inst.budget,
                                      static_cast<Cost>(n) * inst.m());
    // Any clustering collapses each cluster to >= 1 group type for free and
    // pays >= 1 per extra type, so cost >= s - k.
    if (s > budget + k) return std::nullopt;

    if (auto simple = solve_all_simple(inst)) {
        if (stats) {
            stats->accepted_t = 0;
            stats->accepted_ell = 0;
        }
        return simple;
    }
    if (budget == 0) return std::nullopt;

    CandidateMedianSet medians = candidate_medians(inst.matrix, budget);
    Ctx ctx = make_ctx(inst, groups, medians, p, q);

    int tmax = static_cast<int>(std::min<long long>(budget, k));
    for (int t = 1; t <= tmax; ++t) {
        // Mixed clusters pay >= 1 per touched group beyond one each, so
        // ell <= budget + t; ell <= s trivially.
        int ell_hi = static_cast<int>(std::min<long long>(budget + t, s));
        for (int ell = t + 1; ell <= ell_hi; ++ell) {
            const auto& templates = enumerate_forest_templates(t, ell);
            if (templates.empty()) continue;
            if (cell_guard(ctx, ell) > (1LL << 31))
                throw ResourceError("parameter combination too large for the solver");

            ColoringFamily family =
                opts.coloring == ColoringMode::Random
                    ? ColoringFamily::random(
                          s, ell,
                          opts.trials > 0 ? opts.trials
                                          : ColoringFamily::default_trials(ell),
                          splitmix64(opts.seed ^ splitmix64(
                              static_cast<std::uint64_t>(t) * 1000003ULL + ell)))
                    : ColoringFamily::surjective_partitions(s, ell);

            long long coloring_index = -1;
            std::size_t wave = static_cast<std::size_t>(std::max(opts.threads, 1)) * 4;
            while (true) {
                std::vector<Coloring> batch;
                std::vector<long long> batch_index;
                Coloring psi;
                while (batch.size() < wave && family.next(psi)) {
                    ++coloring_index;
                    if (opts.coloring == ColoringMode::Random && !surjective(psi, ell))
                        continue;  // cannot make ell touched groups rainbow
                    batch.push_back(psi);
                    batch_index.push_back(coloring_index);
                }
                if (batch.empty()) break;
                if (stats) {
                    stats->colorings += static_cast<long long>(batch.size());
                    stats->dp_runs +=
                        static_cast<long long>(batch.size() * templates.size());
                }
                std::vector<CellResult> results(batch.size());
                if (opts.threads <= 1 || batch.size() == 1) {
                    for (std::size_t i = 0; i < batch.size(); ++i)
                        results[i] = test_coloring(ctx, templates, t, ell, batch[i]);
                } else {
                    std::atomic<std::size_t> next{0};
                    auto worker = [&] {
                        for (std::size_t i = next.fetch_add(1); i < batch.size();
                             i = next.fetch_add(1))
                            results[i] = test_coloring(ctx, templates, t, ell, batch[i]);
                    };
                    std::vector<std::thread> pool;
                    std::size_t nthreads =
                        std::min<std::size_t>(opts.threads, batch.size());
                    pool.reserve(nthreads);
                    for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
                    for (auto& th : pool) th.join();
                }
                for (std::size_t i = 0; i < batch.size(); ++i) {
                    if (results[i].cost > ctx.budget) continue;
                    if (stats) {
                        stats->accepted_t = t;
                        stats->accepted_ell = ell;
                        stats->accepted_coloring = batch_index[i];
                    }
                    return rebuild_witness(ctx, templates, t, ell, batch[i], results[i]);
                }
            }
        }
    }
    return std::nullopt;
}

}  // namespace capclust
