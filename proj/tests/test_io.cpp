#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "plsheaf/io.hpp"

using namespace plsheaf;

TEST_CASE("rational literals parse exactly or not at all", "[io]") {
    CHECK(parse_rational("3/4") == rat(3, 4));
    CHECK(parse_rational("-7") == rat(-7));
    CHECK(parse_rational("-6/4") == rat(-3, 2));
    CHECK(rational_str(rat(-3, 2)) == "-3/2");
    CHECK(rational_str(rat(5)) == "5");
    CHECK_THROWS_AS(parse_rational("1.5"), FormatError);
    CHECK_THROWS_AS(parse_rational("1/0"), FormatError);
    CHECK_THROWS_AS(parse_rational("abc"), FormatError);
    CHECK_THROWS_AS(parse_rational(""), FormatError);
}

TEST_CASE("points parse from comma-separated rationals", "[io]") {
    CHECK(point_from_string("1/2,-3,0") == QVec{rat(1, 2), rat(-3), rat(0)});
    CHECK_THROWS_AS(point_from_string("1,,2"), FormatError);
}

TEST_CASE("set and object documents round-trip semantically", "[io][property]") {
    std::mt19937_64 rng(71);
    for (int round = 0; round < 4; ++round) {
        const int dim = 1 + static_cast<int>(rng() % 2);
        const PLSet s = testutil::random_plset(rng, dim);
        const PLSet back = plset_from_json(json::parse(plset_to_json(s).dump()), "set");
        const auto f = make_object(
            dim, {{testutil::random_plset(rng, dim), static_cast<int>(rng() % 3) - 1, 1 + static_cast<long>(rng() % 3)},
                  {testutil::random_plset(rng, dim), 0, 1}});
        const auto fback = object_from_json(json::parse(object_to_json(f).dump()), "object");
        for (int i = 0; i < 100; ++i) {
            const QVec p = testutil::random_point(rng, dim);
            CHECK(member(back, p) == member(s, p));
            CHECK(stalk(fback, p) == stalk(f, p));
        }
    }
}

TEST_CASE("kernel and pairing documents round-trip", "[io]") {
    const auto k = make_kernel(
        constant_object(make_plset(2, {Cell{2, {{{rat(1), rat(-1)}, rat(0), Rel::le}}}})), 1, 1);
    const auto kb = kernel_from_json(json::parse(kernel_to_json(k).dump()), "kernel");
    CHECK(kb.dim_first == 1);
    CHECK(kb.dim_second == 1);
    std::mt19937_64 rng(73);
    for (int i = 0; i < 50; ++i) {
        const QVec w = testutil::random_point(rng, 1);
        const QVec p = testutil::random_point(rng, 1);
        CHECK(stalk(kernel_fiber(kb, w), p) == stalk(kernel_fiber(k, w), p));
    }
    const Pairing B = pairing_from_json(json::parse(R"({"matrix": [["0","1"],["1","0"]]})"), "pairing");
    CHECK(B.matrix[0][1] == 1);
    CHECK_THROWS_AS(pairing_from_json(json::parse(R"({"matrix": [["1","0"]]})"), "pairing"), FormatError);
}

TEST_CASE("graded dimension maps use string degree keys", "[io]") {
    GradedDims g;
    g.add(0, 1);
    g.add(-2, 3);
    const json j = graded_to_json(g);
    CHECK(j.at("dims").at("0") == 1);
    CHECK(j.at("dims").at("-2") == 3);
    CHECK(graded_from_json(j, "dims") == g);
    CHECK(graded_to_json(GradedDims{}).at("dims").empty());
}

TEST_CASE("malformed documents carry field diagnostics", "[io]") {
    CHECK_THROWS_AS(plset_from_json(json::parse(R"({"cells": []})"), "set"), FormatError);
    try {
        plset_from_json(json::parse(R"({"ambient_dim": 1, "cells": [{"constraints": [{"coeffs": ["1"], "rel": "??", "rhs": "0"}]}]})"),
                        "set");
        FAIL("expected a format error");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find(".rel") != std::string::npos);
    }
    CHECK_THROWS_AS(object_from_json(json::parse(R"({"ambient_dim": 1, "terms": [{"shift": 0}]})"), "object"),
                    FormatError);
}

TEST_CASE("report documents are byte-identical for a fixed seed", "[io]") {
    const auto a = report_to_json(run_scenario("embedded-cone-point-dim1", 42, 30)).dump();
    const auto b = report_to_json(run_scenario("embedded-cone-point-dim1", 42, 30)).dump();
    CHECK(a == b);
    // wall time stays zeroed unless timing was requested
    CHECK(report_to_json(run_scenario("embedded-cone-point-dim1", 42, 5)).at("wall_time_ms") == 0.0);
}
