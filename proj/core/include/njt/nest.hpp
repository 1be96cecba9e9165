#ifndef NJT_NEST_HPP
#define NJT_NEST_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "njt/cost.hpp"
#include "njt/graph.hpp"
#include "njt/potential.hpp"
#include "njt/types.hpp"

namespace njt {

struct NestingPolicy {
    double gamma = 0.0;      // time factor in the space + gamma * time criterion
    bool flat_only = false;  // conventional representation regardless of score
};

// Recursive plan for computing one message: either a flat table (multiply
// everything, marginalize) or a junction tree over the message's potentials
// with a chosen root, whose non-root cliques carry their own send plans.
class NestedPlan {
public:
    struct InnerClique {
        std::vector<VarId> vars;  // sorted
        std::vector<int> inputs;  // positions in this node's input list
        int parent = -1;          // clique index toward root, -1 at the root
        std::vector<int> children;
        std::vector<VarId> separator;  // to parent, sorted
        // Plan for the message toward the parent. Its inputs are this
        // clique's local inputs followed by the child messages, in order.
        std::shared_ptr<const NestedPlan> send;
    };

    bool flat = true;
    std::vector<VarId> target;                     // sorted
    std::vector<std::vector<VarId>> input_domains; // expected input potentials
    std::vector<VarId> flat_vars;                  // table domain when flat

    std::vector<InnerClique> cliques;  // empty when flat
    int root = -1;
    std::uint64_t configurations = 1;  // product of card(target \ root)
    CostPair cost;                     // send cost under the worst-case model
};

struct PlanBuildResult {
    std::shared_ptr<const NestedPlan> plan;
    CostPair flat_cost;
    // Per inner-root candidate cost (empty when no break-down was possible).
    std::vector<std::pair<int, CostPair>> candidates;
};

// Build the plan for computing a message over `target` from the given
// potentials. Every inner root choice is evaluated recursively; the nested
// candidate minimizing space + gamma * time is adopted unless the flat
// representation scores no worse. `clique_vars` widens the flat table to a
// known clique domain (the outer clique the message is computed in).
PlanBuildResult build_nested_plan(const std::vector<std::vector<VarId>>& input_domains,
                                  const Cards& cards, const std::vector<VarId>& target,
                                  const NestingPolicy& policy,
                                  const std::vector<VarId>& clique_vars = {});

// Root clique index chosen for the inner tree of the given potentials, with
// the per-candidate costs. Throws StructuralError when no break-down exists.
std::pair<int, std::vector<std::pair<int, CostPair>>> select_root(
    const std::vector<std::vector<VarId>>& input_domains, const Cards& cards,
    const std::vector<VarId>& target, const NestingPolicy& policy);

struct ExecStats {
    // Inner inward passes run by the top-level plan node (1 for flat).
    std::uint64_t configurations = 0;
    std::uint64_t multiplications = 0;  // pairwise table products
    std::uint64_t marginalizations = 0;
};

// Execute a plan against concrete potentials (positionally matching the
// domains the plan was built from, possibly sliced by an enclosing
// configuration loop). The result equals the flat computation.
Potential execute_plan(const NestedPlan& plan, const std::vector<Potential>& inputs,
                       const Cards& cards, ExecStats* stats = nullptr);

// Indented plan dump with table sizes, chosen roots and per-level costs.
std::string dump_plan(const NestedPlan& plan, const Cards& cards,
                      const std::vector<std::string>& names, int indent = 0);

}  // namespace njt

#endif
