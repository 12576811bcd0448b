#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "capclust/fpt.hpp"
#include "capclust/types.hpp"

namespace capclust {

// Text instance format: a header line "m n sigma", then m lines of n
// symbols in [0, sigma). Parse errors carry 1-based line numbers.
CategoricalMatrix read_matrix(std::istream& in, Alphabet* alphabet = nullptr);
CategoricalMatrix read_matrix_file(const std::string& path,
                                   Alphabet* alphabet = nullptr);
void write_matrix(std::ostream& out, const CategoricalMatrix& matrix,
                  const Alphabet& alphabet);

// Decision report as pretty-printed JSON with a fixed key order:
// answer, cost, clusters, medians, solver, params, elapsed_ms.
// Cluster members are 1-based column indices; `params` holds the
// decision-relevant inputs only, so reports from repeated runs differ at
// most in elapsed_ms.
std::string report_json(const Instance& inst,
                        const std::optional<Clustering>& result,
                        const std::string& solver_name, const SolveOptions& opts,
                        double elapsed_ms);

struct GeneratorParams {
    int m = 4;
    int n = 8;
    int sigma = 2;
    int k = 2;
    int edits = 1;  // per column, at distinct row positions
    std::uint64_t seed = 0;
};

struct Generated {
    CategoricalMatrix matrix;
    Alphabet alphabet;
    std::vector<std::vector<Symbol>> centers;  // planted, one per cluster
    std::vector<int> planted_cluster;          // column -> cluster
    Cost planted_cost = 0;                     // against the planted centers
};

// Draws k random centers, assigns column j to cluster j mod k, and corrupts
// each column at `edits` distinct positions (new symbol always differs).
// Fully determined by the seed.
Generated generate_planted(const GeneratorParams& params);

// Sidecar JSON describing what was planted (1-based column indices).
std::string planted_json(const GeneratorParams& params, const Generated& gen);

}  // namespace capclust
