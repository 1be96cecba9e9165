#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "fixtures.hpp"
#include "njt/io.hpp"

using namespace njt;
using namespace njt::testing;

namespace {

const char* kChainJson = R"({
  "variables": [
    {"name": "A", "states": ["no", "yes"]},
    {"name": "B", "states": ["no", "yes"]}
  ],
  "cpts": [
    {"child": "A", "table": [0.4, 0.6]},
    {"child": "B", "parents": ["A"], "table": [0.9, 0.1, 0.2, 0.8]}
  ]
})";

const char* kScenarioJson = R"({
  "variables": [
    {"name": "u", "card": 2},
    {"name": "v", "card": 3},
    {"name": "w", "card": 4}
  ],
  "potentials": [["u", "v"], ["v", "w"]],
  "target": ["u", "w"]
})";

}  // namespace

TEST_CASE("network parsing maps names to dense ids") {
    const NetworkSpec spec = parse_network(kChainJson);
    REQUIRE(spec.variables.size() == 2);
    CHECK(spec.variables[0].name == "A");
    CHECK(spec.variables[0].id == 0);
    CHECK(spec.variables[0].cardinality == 2);
    CHECK(spec.variables[0].states == std::vector<std::string>{"no", "yes"});
    REQUIRE(spec.cpts.size() == 2);
    CHECK(spec.cpts[1].child == 1);
    CHECK(spec.cpts[1].parents == std::vector<VarId>{0});
    CHECK(spec.cpts[1].table == std::vector<double>{0.9, 0.1, 0.2, 0.8});
    CHECK(spec.find_variable("B") == 1);
    CHECK(spec.find_variable("C") == -1);
}

TEST_CASE("parse errors carry the source and the json position") {
    auto expect_error = [](const std::string& text, const std::string& fragment) {
        try {
            parse_network(text, "net.json");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("net.json") != std::string::npos);
            CHECK(msg.find(fragment) != std::string::npos);
        }
    };

    expect_error("{not json", "");
    expect_error(R"({"cpts": []})", "/variables");
    expect_error(R"({"variables": [{"name": "A"}], "cpts": []})", "/variables[0]");
    expect_error(R"({"variables": [{"name": "A", "states": ["x","y"]}]})", "/cpts");
    expect_error(
        R"({"variables": [{"name": "A", "states": ["x","y"]}],
            "cpts": [{"child": "Z", "table": [1, 0]}]})",
        "/cpts[0]");
}

TEST_CASE("invalid networks are rejected with every violation listed") {
    const char* bad = R"({
      "variables": [{"name": "A", "states": ["x", "y"]}],
      "cpts": [{"child": "A", "table": [0.7, 0.7]}]
    })";
    try {
        parse_network(bad, "bad.json");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("invalid network") != std::string::npos);
        CHECK(msg.find("normalization") != std::string::npos);
    }
}

TEST_CASE("scenario parsing and detection") {
    CHECK(looks_like_scenario(kScenarioJson));
    CHECK(!looks_like_scenario(kChainJson));
    CHECK(!looks_like_scenario("{nonsense"));

    const Scenario sc = parse_scenario(kScenarioJson);
    REQUIRE(sc.variables.size() == 3);
    CHECK(sc.variables[2].cardinality == 4);
    REQUIRE(sc.potential_domains.size() == 2);
    CHECK(sc.potential_domains[0] == std::vector<VarId>{0, 1});
    CHECK(sc.potential_domains[1] == std::vector<VarId>{1, 2});
    CHECK(sc.target == std::vector<VarId>{0, 2});
}

TEST_CASE("scenario potentials are deterministic in the seed") {
    const Scenario sc = parse_scenario(kScenarioJson);
    const auto a = scenario_potentials(sc, 42);
    const auto b = scenario_potentials(sc, 42);
    const auto c = scenario_potentials(sc, 43);
    REQUIRE(a.size() == 2);
    CHECK(a[0].size() == 6);
    CHECK(a[1].size() == 12);
    CHECK(a[0].values() == b[0].values());
    CHECK(a[1].values() == b[1].values());
    CHECK(a[0].values() != c[0].values());
    for (const auto& p : a)
        for (double x : p.values()) {
            CHECK(x >= 0.1);
            CHECK(x < 1.0);
        }
}

TEST_CASE("file reading round-trips and reports missing files") {
    const std::string path = "test_io_roundtrip.json";
    {
        std::ofstream out(path, std::ios::binary);
        out << kChainJson;
    }
    CHECK(read_file(path) == kChainJson);
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_file("does_not_exist.json"), ParseError);
}
