#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "capclust/assignment.hpp"
#include "capclust/combinatorics.hpp"
#include "capclust/metric.hpp"

#include "helpers.hpp"

using namespace capclust;
using test_helpers::from_rows;
using test_helpers::random_matrix;

namespace {

// Reference matcher: try all n! row-to-column bijections.
std::optional<Cost> brute_matching(const std::vector<std::vector<Cost>>& w) {
    int n = static_cast<int>(w.size());
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::optional<Cost> best;
    do {
        Cost total = 0;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            if (w[i][perm[i]] == kForbidden)
                ok = false;
            else
                total += w[i][perm[i]];
        }
        if (ok && (!best || total < *best)) best = total;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace

TEST_CASE("matching agrees with permutation brute force on random instances") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 3 + static_cast<int>(rng() % 4);  // 3..6
        std::vector<std::vector<Cost>> w(n, std::vector<Cost>(n));
        for (auto& row : w)
            for (auto& x : row) {
                x = static_cast<Cost>(rng() % 20);
                if (rng() % 5 == 0) x = kForbidden;
            }
        auto expect = brute_matching(w);
        auto got = min_weight_perfect_matching(w);
        REQUIRE(got.has_value() == expect.has_value());
        if (got) {
            CHECK(got->total == *expect);
            // The reported matching must be a bijection realizing the total.
            std::vector<char> used(n, 0);
            Cost realized = 0;
            for (int i = 0; i < n; ++i) {
                int j = got->col_of_row[i];
                REQUIRE(j >= 0);
                REQUIRE(j < n);
                CHECK(!used[j]);
                used[j] = 1;
                CHECK(w[i][j] != kForbidden);
                realized += w[i][j];
            }
            CHECK(realized == got->total);
        }
    }
}

TEST_CASE("matching rejects negative weights and all-forbidden rows") {
    CHECK_THROWS_AS(min_weight_perfect_matching({{-1}}), InputError);
    auto none = min_weight_perfect_matching(
        {{kForbidden, kForbidden}, {1, 2}});
    CHECK(!none.has_value());
    CHECK_THROWS_AS(min_weight_perfect_matching(0, [](int, int) -> Cost { return 0; }),
                    InputError);
    auto single = min_weight_perfect_matching({{7}});
    REQUIRE(single.has_value());
    CHECK(single->total == 7);
}

TEST_CASE("size-constrained assignment matches exhaustive partition search") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 4 + static_cast<int>(rng() % 3);  // 4..6
        int k = 2;
        int p = 1 + static_cast<int>(rng() % 2);
        int q = p + static_cast<int>(rng() % 3);
        auto matrix = random_matrix(rng, 3, n, 2);
        std::vector<std::vector<Symbol>> medians(k);
        for (auto& med : medians) {
            med.resize(3);
            for (auto& s : med) s = static_cast<Symbol>(rng() % 2);
        }
        auto got = assign_with_medians(matrix, p, q, medians);

        // Exhaustive reference over all assignments of columns to k labeled
        // clusters with per-cluster sizes in [p, q].
        std::optional<Cost> best;
        std::vector<int> label(n, 0);
        while (true) {
            std::vector<int> sizes(k, 0);
            for (int j = 0; j < n; ++j) ++sizes[label[j]];
            bool ok = true;
            for (int h = 0; h < k; ++h)
                if (sizes[h] < p || sizes[h] > q) ok = false;
            if (ok) {
                Cost total = 0;
                for (int j = 0; j < n; ++j)
                    total += hamming_distance(matrix.column(j), medians[label[j]]);
                if (!best || total < *best) best = total;
            }
            int pos = n - 1;
            while (pos >= 0 && label[pos] == k - 1) label[pos--] = 0;
            if (pos < 0) break;
            ++label[pos];
        }

        REQUIRE(got.has_value() == best.has_value());
        if (got) {
            CHECK(got->cost == *best);
            auto sizes = got->sizes();
            for (int h = 0; h < k; ++h) {
                CHECK(sizes[h] >= p);
                CHECK(sizes[h] <= q);
            }
            // Cost is against the supplied centers.
            Cost recomputed = 0;
            for (int h = 0; h < k; ++h)
                recomputed += cluster_cost(matrix, got->clusters[h], medians[h]);
            CHECK(recomputed == got->cost);
        }
    }
}

TEST_CASE("size-constrained assignment reports infeasible windows") {
    auto matrix = from_rows({{0, 1, 0}});
    std::vector<std::vector<Symbol>> medians{{0}, {1}};
    CHECK(!assign_with_medians(matrix, 2, 3, medians).has_value());  // 2k > n
    CHECK(!assign_with_medians(matrix, 1, 1, medians).has_value());  // 2k < n
    auto ok = assign_with_medians(matrix, 1, 2, medians);
    REQUIRE(ok.has_value());
    CHECK(ok->cost == 0);
}

TEST_CASE("greedy assignment breaks ties toward the lowest center index") {
    auto matrix = from_rows({{0, 1}});
    std::vector<std::vector<Symbol>> medians{{0}, {0}, {1}};
    auto c = greedy_assign(matrix, medians);
    REQUIRE(c.clusters.size() == 3);
    CHECK(c.clusters[0] == std::vector<int>{0});
    CHECK(c.clusters[1].empty());
    CHECK(c.clusters[2] == std::vector<int>{1});
    CHECK(c.cost == 0);
}
