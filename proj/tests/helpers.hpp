#pragma once

#include <random>
#include <vector>

#include "capclust/types.hpp"

namespace test_helpers {

using namespace capclust;

// Tests read most naturally row by row; the matrix stores columns.
inline CategoricalMatrix from_rows(const std::vector<std::vector<Symbol>>& rows) {
    int m = static_cast<int>(rows.size());
    int n = static_cast<int>(rows[0].size());
    std::vector<std::vector<Symbol>> cols(n, std::vector<Symbol>(m));
    for (int r = 0; r < m; ++r)
        for (int j = 0; j < n; ++j) cols[j][r] = rows[r][j];
    return CategoricalMatrix(m, std::move(cols));
}

inline CategoricalMatrix random_matrix(std::mt19937_64& rng, int m, int n, int sigma) {
    std::vector<std::vector<Symbol>> cols(n, std::vector<Symbol>(m));
    for (auto& col : cols)
        for (auto& v : col) v = static_cast<Symbol>(rng() % sigma);
    return CategoricalMatrix(m, std::move(cols));
}

inline Instance make_instance(CategoricalMatrix matrix, int sigma, int k, Cost budget,
                              SizeConstraint constraint) {
    Instance inst;
    inst.matrix = std::move(matrix);
    inst.alphabet = Alphabet{sigma};
    inst.k = k;
    inst.budget = budget;
    inst.constraint = std::move(constraint);
    return inst;
}

}  // namespace test_helpers
