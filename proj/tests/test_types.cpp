#include "doctest.h"

#include "capclust/types.hpp"

#include "helpers.hpp"

using namespace capclust;
using test_helpers::from_rows;
using test_helpers::make_instance;

TEST_CASE("matrix shape is validated") {
    CHECK_THROWS_AS(CategoricalMatrix(2, {{0, 1}, {0}}), InputError);
    CHECK_THROWS_AS(CategoricalMatrix(0, {{}}), InputError);
    CategoricalMatrix m(2, {{0, 1}, {1, 1}});
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 2);
    CHECK(m.max_symbol() == 1);
}

TEST_CASE("check_constraint per variant") {
    SUBCASE("unconstrained accepts anything, even empty clusters") {
        CHECK(check_constraint({0, 5, 1}, Unconstrained{}));
        CHECK(check_constraint({}, Unconstrained{}));
    }
    SUBCASE("capacitated window") {
        CHECK(check_constraint({2, 3, 4}, Capacitated{2, 4}));
        CHECK_FALSE(check_constraint({1, 3, 4}, Capacitated{2, 4}));
        CHECK_FALSE(check_constraint({2, 5}, Capacitated{2, 4}));
        CHECK_FALSE(check_constraint({0, 2}, Capacitated{0, 4}));
    }
    SUBCASE("balanced spread") {
        CHECK(check_constraint({3, 4}, Balanced{1}));
        CHECK_FALSE(check_constraint({2, 4}, Balanced{1}));
        CHECK(check_constraint({4, 4}, Balanced{0}));
        CHECK_FALSE(check_constraint({0, 4}, Balanced{4}));
    }
    SUBCASE("factor ratio is exact rational arithmetic") {
        CHECK(check_constraint({2, 3}, FactorBalanced{3, 2}));
        CHECK_FALSE(check_constraint({2, 4}, FactorBalanced{3, 2}));
        CHECK(check_constraint({3, 3}, FactorBalanced{1, 1}));
        CHECK(check_constraint({2, 4}, FactorBalanced{2, 1}));
    }
    SUBCASE("equal") {
        CHECK(check_constraint({3, 3, 3}, Equal{}));
        CHECK_FALSE(check_constraint({3, 4, 2}, Equal{}));
    }
}

TEST_CASE("constraint names") {
    CHECK(constraint_name(Unconstrained{}) == "unconstrained");
    CHECK(constraint_name(Capacitated{1, 2}) == "capacitated");
    CHECK(constraint_name(Balanced{0}) == "balanced");
    CHECK(constraint_name(FactorBalanced{3, 2}) == "factor");
    CHECK(constraint_name(Equal{}) == "equal");
}

TEST_CASE("instance validation rejects malformed data") {
    auto m = from_rows({{0, 1, 2}});
    CHECK_THROWS_AS(make_instance(m, 2, 1, 0, Unconstrained{}).validate(),
                    InputError);  // symbol 2 outside [0, 2)
    CHECK_THROWS_AS(make_instance(m, 3, 0, 0, Unconstrained{}).validate(),
                    InputError);  // k < 1
    CHECK_THROWS_AS(make_instance(m, 3, 1, -1, Unconstrained{}).validate(),
                    InputError);  // negative budget
    CHECK_THROWS_AS(make_instance(m, 3, 1, 0, Capacitated{3, 2}).validate(),
                    InputError);  // p > q
    CHECK_THROWS_AS(make_instance(m, 3, 1, 0, Capacitated{0, 2}).validate(),
                    InputError);  // p < 1
    CHECK_THROWS_AS(make_instance(m, 3, 1, 0, Balanced{-1}).validate(), InputError);
    CHECK_THROWS_AS(make_instance(m, 3, 1, 0, FactorBalanced{1, 2}).validate(),
                    InputError);  // alpha < 1
    CHECK_THROWS_AS(make_instance(m, 3, 1, 0, FactorBalanced{1, 0}).validate(),
                    InputError);  // zero denominator
    CHECK_NOTHROW(make_instance(m, 3, 1, 0, FactorBalanced{3, 2}).validate());
}

TEST_CASE("identical columns are grouped in first-occurrence order") {
    // Columns: a b a c b  ->  groups a={0,2}, b={1,4}, c={3}.
    auto m = from_rows({{0, 1, 0, 2, 1},
                        {0, 0, 0, 1, 0}});
    ColumnGroups g = group_identical_columns(m);
    REQUIRE(g.count() == 3);
    CHECK(g.members[0] == std::vector<int>{0, 2});
    CHECK(g.members[1] == std::vector<int>{1, 4});
    CHECK(g.members[2] == std::vector<int>{3});
    CHECK(g.group_of == std::vector<int>{0, 1, 0, 2, 1});
    CHECK(g.representative(1) == 1);
    CHECK(g.size_of(0) == 2);
}

TEST_CASE("intersection graph and forest detection") {
    // Two groups (columns 0,1 identical; 2,3 identical).
    auto m = from_rows({{0, 0, 1, 1}});
    ColumnGroups g = group_identical_columns(m);
    REQUIRE(g.count() == 2);

    SUBCASE("crossing clusters form a 4-cycle") {
        IntersectionGraph ig = intersection_graph({{0, 2}, {1, 3}}, g);
        CHECK(ig.edges.size() == 4);
        CHECK_FALSE(ig.is_forest());
    }
    SUBCASE("aligned clusters form a forest") {
        IntersectionGraph ig = intersection_graph({{0, 1}, {2, 3}}, g);
        CHECK(ig.edges.size() == 2);
        CHECK(ig.is_forest());
    }
    SUBCASE("one mixed cluster keeps the graph a tree") {
        IntersectionGraph ig = intersection_graph({{0, 1, 2}, {3}}, g);
        CHECK(ig.is_forest());
    }
}

TEST_CASE("canonicalize sorts members and orders clusters by first element") {
    Clustering c;
    c.clusters = {{3, 1}, {}, {2, 0}};
    c.medians = {{9}, {7}, {8}};
    canonicalize(c);
    CHECK(c.clusters == std::vector<std::vector<int>>{{0, 2}, {1, 3}, {}});
    CHECK(c.medians == std::vector<std::vector<Symbol>>{{8}, {9}, {7}});
}
