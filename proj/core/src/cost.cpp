#include "njt/cost.hpp"

#include <algorithm>
#include <functional>

#include "njt/nest.hpp"

namespace njt {

std::uint64_t mult_cost(int k, std::uint64_t table_size) {
    if (k < 1) throw DomainError("mult_cost: potential count must be >= 1");
    return k >= 2 ? static_cast<std::uint64_t>(k) * table_size : 0;
}

CostPair flat_send_cost(int k, std::uint64_t clique_size, std::uint64_t target_size) {
    if (clique_size < 1 || target_size < 1)
        throw DomainError("flat_send_cost: table sizes must be >= 1");
    CostPair c;
    c.space = clique_size;
    c.time = mult_cost(k, clique_size) + std::max(clique_size, target_size);
    return c;
}

CostPair plan_cost(const NestedPlan& plan, const Cards& cards) {
    if (plan.flat)
        return flat_send_cost(std::max<int>(1, static_cast<int>(plan.input_domains.size())),
                              table_entries(plan.flat_vars, cards),
                              table_entries(plan.target, cards));

    const auto& root_cl = plan.cliques[static_cast<std::size_t>(plan.root)];
    CostPair total;
    std::uint64_t per_config = 0;
    total.space = table_entries(root_cl.vars, cards);
    for (std::size_t c = 0; c < plan.cliques.size(); ++c) {
        const auto& cl = plan.cliques[c];
        if (static_cast<int>(c) != plan.root) {
            const CostPair send = plan_cost(*cl.send, cards);
            total.space += send.space;
            per_config += send.time;
        }
        if (cl.parent >= 0) total.space += table_entries(cl.separator, cards);
    }
    const std::uint64_t root_size = table_entries(root_cl.vars, cards);
    const int k_root =
        static_cast<int>(root_cl.inputs.size()) + static_cast<int>(root_cl.children.size());
    per_config += mult_cost(k_root, root_size);
    per_config += std::max(root_size, table_entries(plan.target, cards));

    std::vector<VarId> outside;
    std::set_difference(plan.target.begin(), plan.target.end(), root_cl.vars.begin(),
                        root_cl.vars.end(), std::back_inserter(outside));
    total.time = table_entries(outside, cards) * per_config;
    return total;
}

namespace {

// Cost of the best plan for the message a clique sends toward one neighbour,
// given the messages it has received from all of its other neighbours.
CostPair send_cost(const JunctionTree& jt, const Cards& cards, int from, int to,
                   const NestingPolicy& policy) {
    std::vector<std::vector<VarId>> domains;
    for (int p : jt.assignment[static_cast<std::size_t>(from)])
        domains.push_back(jt.potentials[static_cast<std::size_t>(p)].domain());
    for (int nb : jt.neighbors(from))
        if (nb != to) domains.push_back(jt.separator(from, nb));
    const auto res = build_nested_plan(domains, cards, jt.separator(from, to), policy,
                                       jt.cliques[static_cast<std::size_t>(from)]);
    return res.plan->cost;
}

// Combining the root's potentials and incoming messages into its marginal.
CostPair root_combine_cost(const JunctionTree& jt, const Cards& cards, int root) {
    const std::uint64_t size = table_entries(jt.cliques[static_cast<std::size_t>(root)], cards);
    const int k = static_cast<int>(jt.assignment[static_cast<std::size_t>(root)].size()) +
                  static_cast<int>(jt.neighbors(root).size());
    CostPair c;
    c.space = size;
    c.time = mult_cost(std::max(1, k), size) + size;
    return c;
}

}  // namespace

CostReport cost_collect(const JunctionTree& jt, const Cards& cards, int root,
                        const NestingPolicy& policy) {
    CostReport report;
    std::function<CostPair(int, int)> message = [&](int from, int to) {
        CostPair c = send_cost(jt, cards, from, to, policy);
        for (int nb : jt.neighbors(from))
            if (nb != to) c += message(nb, from);
        report.messages[{from, to}] = c;
        return c;
    };
    report.total = root_combine_cost(jt, cards, root);
    for (int nb : jt.neighbors(root)) report.total += message(nb, root);
    return report;
}

std::vector<CostPair> cost_distribute(const JunctionTree& jt, const Cards& cards,
                                      const NestingPolicy& policy) {
    const int n = static_cast<int>(jt.cliques.size());
    std::map<std::pair<int, int>, CostPair> msg;
    // Cost messages are root independent, so one inward pass to clique 0 and
    // one outward pass from it yield every directed message.
    std::function<CostPair(int, int)> inward = [&](int from, int to) {
        CostPair c = send_cost(jt, cards, from, to, policy);
        for (int nb : jt.neighbors(from))
            if (nb != to) c += inward(nb, from);
        msg[{from, to}] = c;
        return c;
    };
    if (n > 0)
        for (int nb : jt.neighbors(0)) inward(nb, 0);
    std::function<void(int, int)> outward = [&](int from, int parent) {
        for (int nb : jt.neighbors(from)) {
            if (nb == parent) continue;
            CostPair c = send_cost(jt, cards, from, nb, policy);
            for (int other : jt.neighbors(from))
                if (other != nb) c += msg.at({other, from});
            msg[{from, nb}] = c;
            outward(nb, from);
        }
    };
    if (n > 0) outward(0, -1);

    std::vector<CostPair> totals(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
        CostPair t = root_combine_cost(jt, cards, d);
        for (int nb : jt.neighbors(d)) t += msg.at({nb, d});
        totals[static_cast<std::size_t>(d)] = t;
    }
    return totals;
}

}  // namespace njt
