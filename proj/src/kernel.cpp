#include "capclust/kernel.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <variant>
#include <vector>

#include "capclust/assignment.hpp"
#include "capclust/metric.hpp"
#include "capclust/variants.hpp"

namespace capclust {

long long median_count(long long size, long long s, int k, int delta, Cost budget) {
    if (size < 1 || s < 1) throw InputError("median_count: sizes must be positive");
    long long r = size % s;
    long long slack = budget + 1 + static_cast<long long>(k - 1) * delta;
    return r >= slack ? size / s + 1 : size / s;
}

std::optional<Clustering> solve_large_balanced(const Instance& inst) {
    inst.validate();
    const auto* bal = std::get_if<Balanced>(&inst.constraint);
    if (!bal) throw InputError("solve_large_balanced requires a Balanced instance");
    long long n = inst.n(), k = inst.k, delta = bal->delta;
    long long min_avg = (n + k - 1) / k;
    if (min_avg < 2 * inst.budget + 1 + delta * k)
        throw InputError("solve_large_balanced requires forced-large clusters");

    ColumnGroups groups = group_identical_columns(inst.matrix);
    long long p_lo = std::max<long long>(1, min_avg - delta);
    long long p_hi = n / k;
    for (long long s = p_lo; s <= p_hi; ++s) {
        std::vector<std::vector<Symbol>> centers;
        long long total = 0;
        for (int g = 0; g < groups.count() && total <= k; ++g) {
            long long c = median_count(groups.size_of(g), s, inst.k,
                                       bal->delta, inst.budget);
            total += c;
            for (long long i = 0; i < c && total <= k; ++i)
                centers.push_back(inst.matrix.column(groups.representative(g)));
        }
        if (total != k) continue;
        for (long long p = p_lo; p <= p_hi; ++p) {
            long long q = std::min(n, p + delta);
            auto assigned = assign_with_medians(inst.matrix, static_cast<int>(p),
                                                static_cast<int>(q), centers);
            if (!assigned || assigned->cost > inst.budget) continue;
            if (!check_constraint(assigned->sizes(), inst.constraint))
                throw std::logic_error("large-balanced witness out of window");
            assigned->cost =
                clustering_cost(inst.matrix, assigned->clusters, &assigned->medians);
            canonicalize(*assigned);
            return assigned;
        }
    }
    return std::nullopt;
}

KernelOutcome kernelize_balanced(const Instance& inst) {
    inst.validate();
    const auto* bal = std::get_if<Balanced>(&inst.constraint);
    if (!bal) throw InputError("kernelize_balanced requires a Balanced instance");
    long long n = inst.n(), k = inst.k, delta = bal->delta;

    KernelOutcome out;
    if (k > n) {
        // k nonempty clusters cannot exist.
        out.kind = KernelOutcome::Kind::Resolved;
        out.answer = false;
        return out;
    }
    if ((n + k - 1) / k >= 2 * inst.budget + 1 + delta * k) {
        out.kind = KernelOutcome::Kind::Resolved;
        out.witness = solve_large_balanced(inst);
        out.answer = out.witness.has_value();
        return out;
    }
    ColumnGroups groups = group_identical_columns(inst.matrix);
    if (groups.count() > inst.budget + k) {
        // Each cluster absorbs one column type for free and pays >= 1 per
        // additional type it contains.
        out.kind = KernelOutcome::Kind::Resolved;
        out.answer = false;
        return out;
    }

    // Here n <= 2*budget*k + delta*k^2. Shrink the alphabet: relabeling the
    // symbols of a row injectively changes no Hamming distance between
    // columns, so each row can use first-occurrence labels. At most
    // budget + k distinct columns exist, so that many labels suffice.
    out.kind = KernelOutcome::Kind::Reduced;
    if (inst.alphabet.size > inst.budget + k) {
        int m = inst.m();
        int cols = inst.n();
        std::vector<std::vector<Symbol>> relabeled(
            cols, std::vector<Symbol>(m, 0));
        int widest = 1;
        for (int r = 0; r < m; ++r) {
            std::map<Symbol, Symbol> relabel;
            for (int j = 0; j < cols; ++j) {
                Symbol v = inst.matrix.column(j)[r];
                auto it = relabel.emplace(v, static_cast<Symbol>(relabel.size())).first;
                relabeled[j][r] = it->second;
            }
            widest = std::max(widest, static_cast<int>(relabel.size()));
        }
        Instance reduced = inst;
        reduced.matrix = CategoricalMatrix(m, std::move(relabeled));
        reduced.alphabet = Alphabet{widest};
        reduced.validate();
        out.instance = std::move(reduced);
    } else {
        out.instance = inst;
    }
    return out;
}

std::optional<Clustering> solve_balanced_via_kernel(const Instance& inst,
                                                    const SolveOptions& opts,
                                                    SolveStats* stats) {
    KernelOutcome outcome = kernelize_balanced(inst);
    if (outcome.kind == KernelOutcome::Kind::Resolved) {
        if (!outcome.answer) return std::nullopt;
        return std::move(outcome.witness);
    }
    auto found = solve(*outcome.instance, opts, stats);
    if (!found) return std::nullopt;
    // Columns are shared index-for-index; re-score on the original matrix.
    found->cost = clustering_cost(inst.matrix, found->clusters, &found->medians);
    if (found->cost > inst.budget)
        throw std::logic_error("kernel witness cost changed on the original matrix");
    return found;
}

}  // namespace capclust
