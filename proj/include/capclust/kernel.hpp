#pragma once

#include <optional>

#include "capclust/fpt.hpp"
#include "capclust/types.hpp"

namespace capclust {

// Number of cluster centers a group of `size` identical columns supplies
// when every cluster holds at least `s` columns, sizes vary by at most
// `delta`, and the total budget is `budget`. With the remainder
// r = size mod s, the group rounds up exactly when r is too large to be
// absorbed by other clusters' slack: r >= budget + 1 + (k - 1) * delta.
// Meaningful under the large-cluster precondition s >= 2*budget + 1 +
// (k - 1) * delta.
long long median_count(long long size, long long s, int k, int delta, Cost budget);

// Decision for Balanced instances whose clusters are forced to be large:
// requires ceil(n/k) >= 2*budget + 1 + delta*k (throws InputError
// otherwise). In that regime every cluster's median is the type of some
// column group, and the group-to-center multiplicities are fixed by
// median_count once the minimum cluster size s is guessed. The solver
// sweeps s, discards guesses whose center multiset is not exactly k, and
// completes survivors with a cheapest size-window assignment.
std::optional<Clustering> solve_large_balanced(const Instance& inst);

struct KernelOutcome {
    enum class Kind { Resolved, Reduced };
    Kind kind = Kind::Resolved;
    // Resolved: the decision, plus a witness when the answer is yes.
    bool answer = false;
    std::optional<Clustering> witness;
    // Reduced: an equivalent Balanced instance with at most
    // 2*budget*k + delta*k^2 columns and a per-row compressed alphabet.
    std::optional<Instance> instance;
};

// Kernelization for Balanced instances. Either resolves the decision
// outright (k > n; forced-large clusters via solve_large_balanced; more
// than budget + k column groups) or returns an equivalent instance obeying
// the size bound above. Column identity is preserved in reduced instances,
// so clusterings carry over index-for-index.
KernelOutcome kernelize_balanced(const Instance& inst);

// kernelize_balanced followed by the generic solver on the reduced
// instance; witnesses are re-scored against the original matrix.
std::optional<Clustering> solve_balanced_via_kernel(const Instance& inst,
                                                    const SolveOptions& opts = {},
                                                    SolveStats* stats = nullptr);

}  // namespace capclust
