#ifndef NJT_COST_HPP
#define NJT_COST_HPP

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "njt/graph.hpp"
#include "njt/types.hpp"

namespace njt {

class NestedPlan;
struct NestingPolicy;

// Worst-case accounting in table-size units: space is table entries held,
// time is arithmetic operations. All integer, no floating point.
struct CostPair {
    std::uint64_t space = 0;
    std::uint64_t time = 0;

    CostPair& operator+=(const CostPair& o) {
        space += o.space;
        time += o.time;
        return *this;
    }
    friend CostPair operator+(CostPair a, const CostPair& b) { return a += b; }
    bool operator==(const CostPair&) const = default;

    double score(double gamma) const {
        return static_cast<double>(space) + gamma * static_cast<double>(time);
    }
};

// Multiplying k potentials onto a table of the given size: k * size when
// k >= 2, free for a lone potential.
std::uint64_t mult_cost(int k, std::uint64_t table_size);

// Cost of a conventional send: multiply k potentials onto the clique table,
// then marginalize (charged as the larger of clique and target table).
CostPair flat_send_cost(int k, std::uint64_t clique_size, std::uint64_t target_size);

// Independent recomputation of a plan's send cost from its structure.
CostPair plan_cost(const NestedPlan& plan, const Cards& cards);

struct CostReport {
    // Directed inward cost messages, keyed (from, to).
    std::map<std::pair<int, int>, CostPair> messages;
    // Total cost of an inward propagation to the root.
    CostPair total;
};

// Propagate cost messages inward: each clique's message is its own send cost
// plus the cost messages from its remaining neighbours. The total adds the
// root-marginal combine cost.
CostReport cost_collect(const JunctionTree& jt, const Cards& cards, int root,
                        const NestingPolicy& policy);

// Inward propagation total for every possible root, via an outward pass of
// cost messages. Entry d equals cost_collect(jt, cards, d, policy).total.
std::vector<CostPair> cost_distribute(const JunctionTree& jt, const Cards& cards,
                                      const NestingPolicy& policy);

}  // namespace njt

#endif
