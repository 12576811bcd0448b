#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "capclust/metric.hpp"
#include "capclust/oracle.hpp"

#include "helpers.hpp"

using namespace capclust;
using test_helpers::from_rows;
using test_helpers::make_instance;
using test_helpers::random_matrix;

namespace {

// Three identical columns plus one distant column; with two clusters of
// exactly two columns each, someone must pair with the outlier.
CategoricalMatrix worked_matrix() {
    return from_rows({{0, 0, 0, 1},
                      {0, 0, 0, 1}});
}

}  // namespace

TEST_CASE("partition oracle decides the worked example") {
    auto m = worked_matrix();
    auto yes = brute_force_partitions(make_instance(m, 2, 2, 2, Capacitated{2, 2}));
    REQUIRE(yes.has_value());
    CHECK(yes->cost == 2);
    CHECK(witness_error(make_instance(m, 2, 2, 2, Capacitated{2, 2}), *yes).empty());

    auto no = brute_force_partitions(make_instance(m, 2, 2, 1, Capacitated{2, 2}));
    CHECK(!no.has_value());
}

TEST_CASE("partition oracle refuses oversized inputs") {
    std::mt19937_64 rng(41);
    auto big = random_matrix(rng, 2, 13, 2);
    auto inst = make_instance(big, 2, 2, 100, Capacitated{1, 13});
    CHECK_THROWS_AS(brute_force_partitions(inst), ResourceError);
    OracleCaps wide;
    wide.max_columns = 13;
    CHECK(brute_force_partitions(inst, wide).has_value());
}

TEST_CASE("unconstrained oracle pads with empty clusters when k exceeds n") {
    auto m = from_rows({{0, 1}});
    auto inst = make_instance(m, 2, 5, 0, Unconstrained{});
    auto got = brute_force_partitions(inst);
    REQUIRE(got.has_value());
    CHECK(got->cost == 0);
    CHECK(got->clusters.size() == 5);
    int empty = 0;
    for (const auto& c : got->clusters) empty += c.empty();
    CHECK(empty == 3);
    CHECK(witness_error(inst, *got).empty());
}

TEST_CASE("center-tuple oracle agrees with the partition oracle") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 4 + static_cast<int>(rng() % 3);
        int sigma = 2 + static_cast<int>(rng() % 2);
        auto matrix = random_matrix(rng, 3, n, sigma);
        int k = 2;
        int p = 1, q = n;
        if (rng() % 2) {
            p = 2;
            q = n - 1;
        }
        Cost budget = static_cast<Cost>(rng() % 6);
        auto inst = make_instance(matrix, sigma, k, budget, Capacitated{p, q});
        auto by_partition = brute_force_partitions(inst);
        auto by_centers = brute_force_medians(inst, all_vectors(3, sigma));
        CAPTURE(trial);
        REQUIRE(by_partition.has_value() == by_centers.has_value());
        if (by_partition) {
            CHECK(by_partition->cost == by_centers->cost);
            CHECK(witness_error(inst, *by_centers).empty());
        }
    }
}

TEST_CASE("center-tuple oracle enforces its tuple cap") {
    auto m = from_rows({{0, 1, 0, 1}});
    auto inst = make_instance(m, 2, 2, 4, Capacitated{1, 4});
    OracleCaps tiny;
    tiny.max_center_tuples = 1;
    CHECK_THROWS_AS(brute_force_medians(inst, all_vectors(1, 2), tiny), ResourceError);
}

TEST_CASE("all_vectors enumerates the full cube") {
    auto vs = all_vectors(2, 3);
    CHECK(vs.size() == 9);
    std::set<std::vector<Symbol>> unique(vs.begin(), vs.end());
    CHECK(unique.size() == 9);
    CHECK(vs.front() == std::vector<Symbol>{0, 0});
    CHECK(vs.back() == std::vector<Symbol>{2, 2});
    CHECK_THROWS_AS(all_vectors(30, 3, 1000), ResourceError);
}

TEST_CASE("uncross removes a crossing between two clusters") {
    // Columns 0,1 identical and 2,3 identical; the split {0,2}/{1,3} makes
    // both clusters touch both groups (a 4-cycle). Uncrossing must align
    // clusters with groups without raising cost or changing sizes.
    auto m = from_rows({{0, 0, 1, 1},
                        {0, 0, 1, 1},
                        {0, 0, 1, 1}});
    Clustering crossed;
    crossed.clusters = {{0, 2}, {1, 3}};
    crossed.cost = clustering_cost(m, crossed.clusters, &crossed.medians);
    REQUIRE(crossed.cost == 6);

    auto fixed = uncross(m, crossed);
    CHECK(fixed.cost == 0);
    CHECK(intersection_graph(fixed.clusters, group_identical_columns(m)).is_forest());
    auto sizes = fixed.sizes();
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<int>{2, 2});
}

TEST_CASE("uncross yields a forest without raising cost on random clusterings") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 5 + static_cast<int>(rng() % 4);
        int k = 2 + static_cast<int>(rng() % 2);
        auto matrix = random_matrix(rng, 3, n, 2);

        Clustering input;
        input.clusters.assign(k, {});
        for (int j = 0; j < n; ++j)
            input.clusters[rng() % k].push_back(j);
        input.cost = clustering_cost(matrix, input.clusters, &input.medians);

        auto out = uncross(matrix, input);
        CAPTURE(trial);

        CHECK(out.cost <= input.cost);
        auto groups = group_identical_columns(matrix);
        CHECK(intersection_graph(out.clusters, groups).is_forest());

        // Same multiset of cluster sizes.
        auto in_sizes = input.sizes();
        auto out_sizes = out.sizes();
        std::sort(in_sizes.begin(), in_sizes.end());
        std::sort(out_sizes.begin(), out_sizes.end());
        CHECK(in_sizes == out_sizes);

        // Still a partition of all columns.
        std::vector<int> seen(n, 0);
        for (const auto& c : out.clusters)
            for (int j : c) {
                REQUIRE(j >= 0);
                REQUIRE(j < n);
                ++seen[j];
            }
        CHECK(std::count(seen.begin(), seen.end(), 1) == n);

        // Reported cost is the recomputed optimal-median cost.
        CHECK(out.cost == clustering_cost(matrix, out.clusters));

        // Deterministic.
        auto again = uncross(matrix, input);
        CHECK(again.clusters == out.clusters);
    }
}
