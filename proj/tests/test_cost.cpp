#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "fixtures.hpp"
#include "njt/cost.hpp"
#include "njt/graph.hpp"
#include "njt/nest.hpp"

using namespace njt;
using namespace njt::testing;

TEST_CASE("multiplication cost is k times the table, free for one factor") {
    CHECK(mult_cost(1, 1'000'000) == 0);
    CHECK(mult_cost(2, 100) == 200);
    CHECK(mult_cost(4, 2'625'000) == 10'500'000);
    CHECK_THROWS_AS(mult_cost(0, 10), DomainError);
}

TEST_CASE("conventional send cost on the worked message") {
    // Four potentials onto the full nine-variable table, marginalized to the
    // eight-variable target.
    const CostPair c = flat_send_cost(4, 2'625'000, 525'000);
    CHECK(c.space == 2'625'000);
    CHECK(c.time == 13'125'000);

    // A lone potential costs only the marginalization.
    const CostPair lone = flat_send_cost(1, 5'250, 750);
    CHECK(lone.space == 5'250);
    CHECK(lone.time == 5'250);

    // Marginalization is charged as the larger of the two tables.
    const CostPair up = flat_send_cost(2, 8, 16);
    CHECK(up.time == 16 + 16);
}

TEST_CASE("two-stage flat computation of a three-potential chain") {
    // Potentials over {a b}, {b c}, {c d}, all binary, target {a d}.
    // One stage: product table of 16 entries.
    const CostPair one = flat_send_cost(3, 16, 4);
    CHECK(one.space == 16);
    CHECK(one.time == 3 * 16 + 16);

    // Two stages through intermediate tables of 8 entries each.
    const CostPair stage1 = flat_send_cost(2, 8, 4);
    const CostPair stage2 = flat_send_cost(2, 8, 4);
    CHECK(stage1.time + stage2.time == 48);
    CHECK(std::max(stage1.space, stage2.space) == 8);
}

TEST_CASE("cost collect totals the incoming messages plus the root combine") {
    const NetworkSpec spec = chain4_network();
    const JunctionTree jt = make_network_tree(spec);
    REQUIRE(jt.cliques.size() == 3);

    const NestingPolicy flat{0.0, true};
    const CostReport report = cost_collect(jt, spec.cards(), 0, flat);

    // Chain of cliques {X1 X2} - {X2 X3} - {X3 X4}, all tables 4, seps 2.
    // Leaf {X3 X4}: one potential, marginalize only.
    // Middle {X2 X3}: potential + incoming message, then marginalize.
    const std::uint64_t leaf = flat_send_cost(1, 4, 2).time;
    const std::uint64_t middle = flat_send_cost(2, 4, 2).time;
    CHECK(report.messages.size() == 2);

    // Total = leaf + middle + root combine (k = assigned + neighbours).
    const int k_root = static_cast<int>(jt.assignment[0].size() + jt.neighbors(0).size());
    const std::uint64_t combine = mult_cost(k_root, 4) + 4;
    CHECK(report.total.time == leaf + middle + combine);
}

TEST_CASE("cost distribute equals per-root collect on random trees") {
    for (std::uint32_t seed = 1; seed <= 10; ++seed) {
        const NetworkSpec spec = random_network(seed, 8);
        const JunctionTree jt = make_network_tree(spec);
        const Cards cards = spec.cards();
        for (const NestingPolicy policy :
             {NestingPolicy{0.0, false}, NestingPolicy{0.3, false}, NestingPolicy{0.0, true}}) {
            const std::vector<CostPair> totals = cost_distribute(jt, cards, policy);
            REQUIRE(totals.size() == jt.cliques.size());
            for (int d = 0; d < static_cast<int>(jt.cliques.size()); ++d) {
                const CostReport rep = cost_collect(jt, cards, d, policy);
                CHECK(totals[static_cast<std::size_t>(d)] == rep.total);
            }
        }
    }
}

TEST_CASE("cost messages are independent of the chosen root") {
    const NetworkSpec spec = random_network(4, 9);
    const JunctionTree jt = make_network_tree(spec);
    const Cards cards = spec.cards();
    const NestingPolicy policy{0.0};

    const CostReport a = cost_collect(jt, cards, 0, policy);
    const CostReport b =
        cost_collect(jt, cards, static_cast<int>(jt.cliques.size()) - 1, policy);
    for (const auto& [edge, cost] : a.messages) {
        const auto it = b.messages.find(edge);
        if (it != b.messages.end()) CHECK(it->second == cost);
    }
}

TEST_CASE("nesting never raises the scored cost") {
    for (std::uint32_t seed = 1; seed <= 8; ++seed) {
        const NetworkSpec spec = random_network(seed, 9);
        const JunctionTree jt = make_network_tree(spec);
        const Cards cards = spec.cards();
        for (const double gamma : {0.0, 0.3, 1.0}) {
            const auto nested = cost_distribute(jt, cards, NestingPolicy{gamma, false});
            const auto flat = cost_distribute(jt, cards, NestingPolicy{gamma, true});
            for (std::size_t d = 0; d < nested.size(); ++d)
                CHECK(nested[d].score(gamma) <= flat[d].score(gamma));
        }
    }
}
