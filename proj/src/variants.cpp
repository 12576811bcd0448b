#include "capclust/variants.hpp"

#include <algorithm>
#include <stdexcept>
#include <variant>
#include <vector>

#include "capclust/metric.hpp"

namespace capclust {
namespace {

Instance with_window(const Instance& inst, int p, int q) {
    Instance sub = inst;
    sub.constraint = Capacitated{p, q};
    return sub;
}

std::optional<Clustering> check_native(const Instance& inst,
                                       std::optional<Clustering> found) {
    if (!found) return std::nullopt;
    if (!check_constraint(found->sizes(), inst.constraint))
        throw std::logic_error("window witness violates the native constraint");
    return found;
}

std::optional<Clustering> solve_unconstrained(const Instance& inst,
                                              const SolveOptions& opts,
                                              SolveStats* stats) {
    int n = inst.n();
    if (inst.k >= n) {
        // Singletons cost nothing; pad with empty clusters.
        Clustering result;
        result.clusters.assign(inst.k, {});
        for (int j = 0; j < n; ++j) result.clusters[j] = {j};
        result.cost = clustering_cost(inst.matrix, result.clusters, &result.medians);
        canonicalize(result);
        return result;
    }
    // Splitting a cluster never raises the cost, so the best partition into
    // at most k nonempty parts uses exactly k.
    return solve_capacitated(with_window(inst, 1, n), opts, stats);
}

std::optional<Clustering> solve_balanced(const Instance& inst, int delta,
                                         const SolveOptions& opts,
                                         SolveStats* stats) {
    int n = inst.n(), k = inst.k;
    int lo = std::max<long long>(1, (n + k - 1) / k - delta);
    int hi = n / k;
    for (int p = lo; p <= hi; ++p) {
        int q = std::min(n, p + delta);
        if (auto found = solve_capacitated(with_window(inst, p, q), opts, stats))
            return check_native(inst, std::move(found));
    }
    return std::nullopt;
}

std::optional<Clustering> solve_factor(const Instance& inst, long long num,
                                       long long den, const SolveOptions& opts,
                                       SolveStats* stats) {
    long long n = inst.n(), k = inst.k;
    // ceil(n / (alpha k)) with alpha = num/den, exactly in integers.
    long long lo = std::max<long long>(1, (n * den + num * k - 1) / (num * k));
    long long hi = n / k;
    for (long long p = lo; p <= hi; ++p) {
        long long q = std::min<long long>(n, num * p / den);
        if (q < p) continue;
        if (auto found = solve_capacitated(
                with_window(inst, static_cast<int>(p), static_cast<int>(q)), opts,
                stats))
            return check_native(inst, std::move(found));
    }
    return std::nullopt;
}

std::optional<Clustering> solve_equal(const Instance& inst, const SolveOptions& opts,
                                      SolveStats* stats) {
    int n = inst.n(), k = inst.k;
    if (n % k != 0) return std::nullopt;
    return check_native(inst,
                        solve_capacitated(with_window(inst, n / k, n / k), opts, stats));
}

}  // namespace

std::optional<Clustering> solve(const Instance& inst, const SolveOptions& opts,
                                SolveStats* stats) {
    inst.validate();
    if (std::holds_alternative<Capacitated>(inst.constraint))
        return solve_capacitated(inst, opts, stats);
    if (std::holds_alternative<Unconstrained>(inst.constraint))
        return solve_unconstrained(inst, opts, stats);
    if (const auto* bal = std::get_if<Balanced>(&inst.constraint))
        return solve_balanced(inst, bal->delta, opts, stats);
    if (const auto* fac = std::get_if<FactorBalanced>(&inst.constraint))
        return solve_factor(inst, fac->num, fac->den, opts, stats);
    return solve_equal(inst, opts, stats);
}

}  // namespace capclust
