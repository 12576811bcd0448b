#pragma once

#include <optional>

#include "capclust/fpt.hpp"
#include "capclust/types.hpp"

namespace capclust {

// Decides the instance under whichever size constraint it carries.
//
// Every constrained flavor reduces to capacitated windows: a witness whose
// smallest cluster has m0 columns fits the window [p, q] generated by
// p = m0, so sweeping p over its admissible range and deriving q from the
// variant's rule covers all witnesses. Each returned clustering is
// re-checked against the native constraint predicate before it is emitted.
//
//   balanced(delta): p in [max(1, ceil(n/k) - delta), floor(n/k)],
//                    q = min(n, p + delta)
//   factor(alpha):   p in [ceil(n / (alpha k)), floor(n/k)],
//                    q = floor(alpha p)
//   equal:           requires k | n, single window p = q = n/k
//   unconstrained:   window [1, n] after padding with empty clusters when
//                    k exceeds n
std::optional<Clustering> solve(const Instance& inst, const SolveOptions& opts = {},
                                SolveStats* stats = nullptr);

}  // namespace capclust
