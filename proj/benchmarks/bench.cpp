#include <benchmark/benchmark.h>

#include <vector>

#include "fixtures.hpp"
#include "njt/graph.hpp"
#include "njt/io.hpp"
#include "njt/nest.hpp"
#include "njt/potential.hpp"

using namespace njt;
using namespace njt::testing;

namespace {

void BM_multiply(benchmark::State& state) {
    const Scenario sc = reduced_scenario();
    const auto pots = scenario_potentials(sc, 1);
    for (auto _ : state) {
        Potential p = multiply(pots[0], pots[1]);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_multiply);

void BM_marginalize(benchmark::State& state) {
    const Scenario sc = reduced_scenario();
    const auto pots = scenario_potentials(sc, 1);
    const Potential prod = multiply(pots[0], pots[1]);
    std::vector<VarId> keep(prod.domain().begin(), prod.domain().begin() + 3);
    for (auto _ : state) {
        Potential p = marginalize(prod, keep);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_marginalize);

void BM_flat_message(benchmark::State& state) {
    const Scenario sc = reduced_scenario();
    const Cards cards = scenario_cards(sc);
    const auto pots = scenario_potentials(sc, 1);
    const auto res = build_nested_plan(sc.potential_domains, cards, sc.target,
                                       NestingPolicy{0.0, true});
    for (auto _ : state) {
        Potential p = execute_plan(*res.plan, pots, cards);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_flat_message);

void BM_nested_message(benchmark::State& state) {
    const Scenario sc = reduced_scenario();
    const Cards cards = scenario_cards(sc);
    const auto pots = scenario_potentials(sc, 1);
    const auto res = build_nested_plan(sc.potential_domains, cards, sc.target,
                                       NestingPolicy{0.0});
    for (auto _ : state) {
        Potential p = execute_plan(*res.plan, pots, cards);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_nested_message);

void BM_plan_build(benchmark::State& state) {
    const Scenario sc = message_scenario();
    const Cards cards = scenario_cards(sc);
    for (auto _ : state) {
        auto res = build_nested_plan(sc.potential_domains, cards, sc.target, NestingPolicy{0.0});
        benchmark::DoNotOptimize(res);
    }
}
BENCHMARK(BM_plan_build);

void BM_network_tree(benchmark::State& state) {
    const NetworkSpec spec = random_network(7, 12);
    for (auto _ : state) {
        JunctionTree jt = make_network_tree(spec);
        benchmark::DoNotOptimize(jt);
    }
}
BENCHMARK(BM_network_tree);

}  // namespace

BENCHMARK_MAIN();
