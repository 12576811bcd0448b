#include "doctest.h"

#include <sstream>

#include "json.hpp"

#include "capclust/io.hpp"
#include "capclust/metric.hpp"

#include "helpers.hpp"

using namespace capclust;
using test_helpers::from_rows;
using test_helpers::make_instance;

TEST_CASE("matrix text round-trips through write and read") {
    auto original = from_rows({{0, 1, 2},
                               {2, 0, 1}});
    Alphabet alpha{3};
    std::ostringstream out;
    write_matrix(out, original, alpha);

    std::istringstream in(out.str());
    Alphabet back;
    auto parsed = read_matrix(in, &back);
    CHECK(back.size == 3);
    REQUIRE(parsed.rows() == 2);
    REQUIRE(parsed.cols() == 3);
    CHECK(parsed.columns() == original.columns());
}

TEST_CASE("matrix reader skips blank lines and reports precise errors") {
    SUBCASE("blank lines are permitted anywhere") {
        std::istringstream in("\n2 2 2\n\n0 1\n\n1 0\n\n");
        auto m = read_matrix(in);
        CHECK(m.rows() == 2);
        CHECK(m.cols() == 2);
    }
    auto expect_error = [](const std::string& text, const std::string& needle) {
        std::istringstream in(text);
        try {
            read_matrix(in);
            FAIL_CHECK("expected InputError for: " << text);
        } catch (const InputError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    SUBCASE("bad header") {
        expect_error("", "header");
        expect_error("2 2\n0 0\n0 0\n", "header");
        expect_error("0 2 2\n", "positive");
    }
    SUBCASE("bad rows carry their line number") {
        expect_error("2 2 2\n0 1\n", "rows");            // missing second row
        expect_error("1 3 2\n0 1\n", "line 2");          // short row
        expect_error("1 2 2\n0 1 1\n", "line 2");        // long row
        expect_error("1 2 2\n0 x\n", "line 2");          // not a number
        expect_error("1 2 2\n0 5\n", "outside");         // symbol out of range
        expect_error("1 2 2\n0 1\ntrailing\n", "line 3");  // junk after data
    }
}

TEST_CASE("reports use a fixed key order with 1-based columns") {
    auto m = from_rows({{0, 0, 1, 1}});
    auto inst = make_instance(m, 2, 2, 1, Capacitated{2, 2});

    Clustering witness;
    witness.clusters = {{0, 1}, {2, 3}};
    witness.cost = clustering_cost(m, witness.clusters, &witness.medians);

    SolveOptions opts;
    auto text = report_json(inst, witness, "fpt", opts, 12.5);
    auto doc = nlohmann::ordered_json::parse(text);

    std::vector<std::string> keys;
    for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{"answer", "cost", "clusters", "medians",
                                           "solver", "params", "elapsed_ms"});

    CHECK(doc["answer"] == "yes");
    CHECK(doc["cost"] == 0);
    CHECK(doc["clusters"][0] == nlohmann::ordered_json::array({1, 2}));
    CHECK(doc["clusters"][1] == nlohmann::ordered_json::array({3, 4}));
    CHECK(doc["solver"] == "fpt");
    CHECK(doc["params"]["variant"] == "capacitated");
    CHECK(doc["params"]["k"] == 2);
    CHECK(doc["params"]["budget"] == 1);
    CHECK(doc["params"]["p"] == 2);
    CHECK(doc["params"]["q"] == 2);
    CHECK_FALSE(doc["params"].contains("threads"));
    CHECK(doc["elapsed_ms"] == 13);  // rounded to whole milliseconds

    SUBCASE("no-instances carry null result fields") {
        auto no = report_json(inst, std::nullopt, "fpt", opts, 1.0);
        auto nd = nlohmann::ordered_json::parse(no);
        CHECK(nd["answer"] == "no");
        CHECK(nd["cost"].is_null());
        CHECK(nd["clusters"].is_null());
        CHECK(nd["medians"].is_null());
    }

    SUBCASE("random mode advertises trials and seed") {
        SolveOptions rnd;
        rnd.coloring = ColoringMode::Random;
        rnd.trials = 64;
        rnd.seed = 9;
        auto text2 = report_json(inst, witness, "fpt", rnd, 1.0);
        auto d2 = nlohmann::ordered_json::parse(text2);
        CHECK(d2["params"]["coloring"] == "random");
        CHECK(d2["params"]["trials"] == 64);
        CHECK(d2["params"]["seed"] == 9);
    }

    SUBCASE("variant parameters follow the constraint") {
        auto bal = make_instance(m, 2, 2, 1, Balanced{3});
        auto d3 = nlohmann::ordered_json::parse(
            report_json(bal, std::nullopt, "fpt", opts, 1.0));
        CHECK(d3["params"]["variant"] == "balanced");
        CHECK(d3["params"]["delta"] == 3);

        auto fac = make_instance(m, 2, 2, 1, FactorBalanced{3, 2});
        auto d4 = nlohmann::ordered_json::parse(
            report_json(fac, std::nullopt, "fpt", opts, 1.0));
        CHECK(d4["params"]["variant"] == "factor");
        CHECK(d4["params"]["alpha"] == "3/2");
    }
}

TEST_CASE("planted generator is seed-deterministic and cost-exact") {
    GeneratorParams params;
    params.m = 5;
    params.n = 9;
    params.sigma = 3;
    params.k = 3;
    params.edits = 2;
    params.seed = 42;

    auto a = generate_planted(params);
    auto b = generate_planted(params);
    CHECK(a.matrix.columns() == b.matrix.columns());
    CHECK(a.centers == b.centers);

    auto c = generate_planted([&] {
        auto p = params;
        p.seed = 43;
        return p;
    }());
    CHECK(a.matrix.columns() != c.matrix.columns());

    REQUIRE(a.matrix.cols() == 9);
    REQUIRE(a.centers.size() == 3);
    for (int j = 0; j < 9; ++j) {
        CHECK(a.planted_cluster[j] == j % 3);
        // Exactly `edits` corrupted positions per column.
        CHECK(hamming_distance(a.matrix.column(j), a.centers[j % 3]) == 2);
    }
    CHECK(a.planted_cost == 9 * 2);

    SUBCASE("sidecar JSON names the plant") {
        auto doc = nlohmann::ordered_json::parse(planted_json(params, a));
        CHECK(doc["planted_cost"] == 18);
        CHECK(doc["clusters"].size() == 3);
        CHECK(doc["clusters"][0][0] == 1);  // column indices are 1-based
        CHECK(doc["centers"].size() == 3);
        CHECK(doc["seed"] == 42);
        CHECK(doc["edits"] == 2);
    }

    SUBCASE("degenerate parameters are rejected") {
        GeneratorParams bad = params;
        bad.edits = 6;  // more edits than rows
        CHECK_THROWS_AS(generate_planted(bad), InputError);
        GeneratorParams mono = params;
        mono.sigma = 1;
        CHECK_THROWS_AS(generate_planted(mono), InputError);
    }
}
