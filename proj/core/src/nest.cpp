#include "njt/nest.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace njt {

namespace {

std::vector<VarId> sorted_union(const std::vector<std::vector<VarId>>& sets) {
    std::vector<VarId> out;
    for (const auto& s : sets) out.insert(out.end(), s.begin(), s.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<VarId> set_minus(const std::vector<VarId>& a, const std::vector<VarId>& b) {
    std::vector<VarId> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<VarId> set_and(const std::vector<VarId>& a, const std::vector<VarId>& b) {
    std::vector<VarId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool subset(const std::vector<VarId>& a, const std::vector<VarId>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::string key_of(const std::vector<std::vector<VarId>>& domains,
                   const std::vector<VarId>& target, const std::vector<VarId>& clique_vars) {
    std::ostringstream os;
    std::vector<std::string> parts;
    for (const auto& d : domains) {
        std::ostringstream p;
        for (VarId v : d) p << v << ",";
        parts.push_back(p.str());
    }
    std::sort(parts.begin(), parts.end());
    for (const auto& p : parts) os << p << ";";
    os << "|";
    for (VarId v : target) os << v << ",";
    os << "|";
    for (VarId v : clique_vars) os << v << ",";
    return os.str();
}

// Lexicographic (score, time, index) candidate comparison. Ties on the
// gamma-score are broken toward the cheaper-in-time candidate so that a
// pure space policy (gamma = 0) still picks the faster of two equal-space
// plans, then toward the lower clique index for determinism.
bool better(const CostPair& a, int ia, const CostPair& b, int ib, double gamma) {
    const double sa = a.score(gamma), sb = b.score(gamma);
    if (sa != sb) return sa < sb;
    if (a.time != b.time) return a.time < b.time;
    return ia < ib;
}

class PlanBuilder {
public:
    PlanBuilder(const Cards& cards, const NestingPolicy& policy)
        : cards_(cards), policy_(policy) {}

    PlanBuildResult build(const std::vector<std::vector<VarId>>& input_domains,
                          std::vector<VarId> target, const std::vector<VarId>& clique_vars) {
        std::sort(target.begin(), target.end());
        const std::string key = key_of(input_domains, target, clique_vars);
        const auto hit = memo_.find(key);
        if (hit != memo_.end()) return hit->second;
        PlanBuildResult res = build_uncached(input_domains, target, clique_vars);
        memo_.emplace(key, res);
        return res;
    }

private:
    PlanBuildResult make_flat(const std::vector<std::vector<VarId>>& input_domains,
                              const std::vector<VarId>& target,
                              const std::vector<VarId>& clique_vars) {
        auto plan = std::make_shared<NestedPlan>();
        plan->flat = true;
        plan->target = target;
        plan->input_domains = input_domains;
        plan->flat_vars = clique_vars.empty() ? sorted_union(input_domains)
                                              : sorted_union({clique_vars});
        if (plan->flat_vars.empty()) plan->flat_vars = target;
        const int k = std::max<int>(1, static_cast<int>(input_domains.size()));
        plan->cost = flat_send_cost(k, table_entries(plan->flat_vars, cards_),
                                    table_entries(target, cards_));
        PlanBuildResult res;
        res.flat_cost = plan->cost;
        res.plan = std::move(plan);
        return res;
    }

    PlanBuildResult build_uncached(const std::vector<std::vector<VarId>>& input_domains,
                                   const std::vector<VarId>& target,
                                   const std::vector<VarId>& clique_vars) {
        const std::vector<VarId> covered = sorted_union(input_domains);
        {
            std::vector<VarId> reachable = covered;
            reachable.insert(reachable.end(), clique_vars.begin(), clique_vars.end());
            std::sort(reachable.begin(), reachable.end());
            reachable.erase(std::unique(reachable.begin(), reachable.end()), reachable.end());
            if (!subset(target, reachable))
                throw StructuralError("nested plan: target is not covered by the potentials");
        }

        PlanBuildResult flat = make_flat(input_domains, target, clique_vars);
        if (policy_.flat_only || input_domains.size() <= 1) return flat;

        const UndirectedGraph g = induced_graph(input_domains);
        auto [filled, order] = triangulate(g, cards_);
        const auto cliques = max_cliques(filled, order);
        if (cliques.size() <= 1) {
            flat.candidates.emplace_back(0, flat.flat_cost);
            return flat;
        }

        // Assign every input to its lowest-indexed containing clique.
        std::vector<std::vector<int>> local(cliques.size());
        for (std::size_t i = 0; i < input_domains.size(); ++i) {
            int home = -1;
            for (std::size_t c = 0; c < cliques.size(); ++c)
                if (subset(input_domains[i], cliques[c])) {
                    home = static_cast<int>(c);
                    break;
                }
            if (home < 0)
                throw StructuralError("nested plan: input not covered by any inner clique");
            local[static_cast<std::size_t>(home)].push_back(static_cast<int>(i));
        }

        const auto tree_edges = max_spanning_edges(cliques);
        std::vector<std::vector<int>> adj(cliques.size());
        for (const auto& e : tree_edges) {
            adj[static_cast<std::size_t>(e.a)].push_back(e.b);
            adj[static_cast<std::size_t>(e.b)].push_back(e.a);
        }
        for (auto& a : adj) std::sort(a.begin(), a.end());
        std::uint64_t sep_space = 0;
        for (const auto& e : tree_edges) sep_space += table_entries(e.separator, cards_);

        PlanBuildResult result = flat;
        std::shared_ptr<NestedPlan> best;
        CostPair best_cost;
        int best_root = -1;

        for (int r = 0; r < static_cast<int>(cliques.size()); ++r) {
            auto cand = std::make_shared<NestedPlan>();
            cand->flat = false;
            cand->target = target;
            cand->input_domains = input_domains;
            cand->root = r;
            cand->cliques.resize(cliques.size());
            for (std::size_t c = 0; c < cliques.size(); ++c) {
                cand->cliques[c].vars = cliques[c];
                cand->cliques[c].inputs = local[c];
            }
            // Orient toward the root (children in ascending clique index).
            std::vector<int> stack{r}, topo;
            std::vector<bool> seen(cliques.size(), false);
            seen[static_cast<std::size_t>(r)] = true;
            while (!stack.empty()) {
                const int c = stack.back();
                stack.pop_back();
                topo.push_back(c);
                for (int nb : adj[static_cast<std::size_t>(c)])
                    if (!seen[static_cast<std::size_t>(nb)]) {
                        seen[static_cast<std::size_t>(nb)] = true;
                        cand->cliques[static_cast<std::size_t>(nb)].parent = c;
                        cand->cliques[static_cast<std::size_t>(c)].children.push_back(nb);
                        cand->cliques[static_cast<std::size_t>(nb)].separator =
                            set_and(cliques[static_cast<std::size_t>(nb)],
                                    cliques[static_cast<std::size_t>(c)]);
                        stack.push_back(nb);
                    }
            }
            for (auto& cl : cand->cliques) std::sort(cl.children.begin(), cl.children.end());

            // Build send plans bottom-up and accumulate costs.
            CostPair cost;
            cost.space = table_entries(cliques[static_cast<std::size_t>(r)], cards_) + sep_space;
            std::uint64_t per_config_time = 0;
            for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
                const int c = *it;
                if (c == r) continue;
                auto& cl = cand->cliques[static_cast<std::size_t>(c)];
                std::vector<std::vector<VarId>> sub;
                for (int idx : cl.inputs) sub.push_back(input_domains[static_cast<std::size_t>(idx)]);
                for (int ch : cl.children)
                    sub.push_back(cand->cliques[static_cast<std::size_t>(ch)].separator);
                cl.send = build(sub, cl.separator, cl.vars).plan;
                cost.space += cl.send->cost.space;
                per_config_time += cl.send->cost.time;
            }
            const auto& root_cl = cand->cliques[static_cast<std::size_t>(r)];
            const std::uint64_t root_size = table_entries(root_cl.vars, cards_);
            const int k_root =
                static_cast<int>(root_cl.inputs.size()) + static_cast<int>(root_cl.children.size());
            per_config_time += mult_cost(k_root, root_size);
            per_config_time += std::max(root_size, table_entries(target, cards_));

            cand->configurations = table_entries(set_minus(target, root_cl.vars), cards_);
            cost.time = cand->configurations * per_config_time;
            cand->cost = cost;

            result.candidates.emplace_back(r, cost);
            if (best_root < 0 || better(cost, r, best_cost, best_root, policy_.gamma)) {
                best = std::move(cand);
                best_cost = cost;
                best_root = r;
            }
        }

        if (best && best_cost.score(policy_.gamma) < flat.flat_cost.score(policy_.gamma))
            result.plan = std::move(best);
        // Plan gate: the adopted plan never scores worse than the flat one.
        assert(result.plan->cost.score(policy_.gamma) <= flat.flat_cost.score(policy_.gamma));
        return result;
    }

    const Cards& cards_;
    const NestingPolicy& policy_;
    std::map<std::string, PlanBuildResult> memo_;
};

}  // namespace

PlanBuildResult build_nested_plan(const std::vector<std::vector<VarId>>& input_domains,
                                  const Cards& cards, const std::vector<VarId>& target,
                                  const NestingPolicy& policy,
                                  const std::vector<VarId>& clique_vars) {
    std::vector<VarId> cv = clique_vars;
    std::sort(cv.begin(), cv.end());
    std::vector<std::vector<VarId>> doms = input_domains;
    for (auto& d : doms) std::sort(d.begin(), d.end());
    std::vector<VarId> t = target;
    std::sort(t.begin(), t.end());
    PlanBuilder builder(cards, policy);
    return builder.build(doms, t, cv);
}

std::pair<int, std::vector<std::pair<int, CostPair>>> select_root(
    const std::vector<std::vector<VarId>>& input_domains, const Cards& cards,
    const std::vector<VarId>& target, const NestingPolicy& policy) {
    PlanBuildResult res = build_nested_plan(input_domains, cards, target, policy);
    if (res.candidates.empty()) return {0, {{0, res.flat_cost}}};
    int best = -1;
    CostPair best_cost;
    for (const auto& [r, c] : res.candidates)
        if (best < 0 || better(c, r, best_cost, best, policy.gamma)) {
            best = r;
            best_cost = c;
        }
    return {best, res.candidates};
}

namespace {

std::map<VarId, int> restrict_assignment(const std::map<VarId, int>& a, const Potential& p) {
    std::map<VarId, int> out;
    for (const auto& [v, s] : a)
        if (p.has(v)) out.emplace(v, s);
    return out;
}

Potential combine(const std::vector<Potential>& pots, ExecStats* stats) {
    if (pots.empty()) return Potential::unit();
    Potential prod = pots[0];
    for (std::size_t i = 1; i < pots.size(); ++i) {
        prod = multiply(prod, pots[i]);
        if (stats) ++stats->multiplications;
    }
    return prod;
}

}  // namespace

Potential execute_plan(const NestedPlan& plan, const std::vector<Potential>& inputs,
                       const Cards& cards, ExecStats* stats) {
    if (inputs.size() != plan.input_domains.size())
        throw DomainError("execute_plan: expected " + std::to_string(plan.input_domains.size()) +
                          " inputs, got " + std::to_string(inputs.size()));

    if (plan.flat) {
        Potential prod = combine(inputs, stats);
        const std::vector<VarId> keep = set_and(plan.target, prod.domain());
        if (stats) {
            ++stats->marginalizations;
            stats->configurations = 1;
        }
        return marginalize(prod, keep);
    }

    std::vector<std::vector<VarId>> present_doms;
    present_doms.reserve(inputs.size());
    for (const auto& p : inputs) present_doms.push_back(p.domain());
    const std::vector<VarId> present = sorted_union(present_doms);
    const std::vector<VarId> effective_target = set_and(plan.target, present);
    const auto& root_cl = plan.cliques[static_cast<std::size_t>(plan.root)];
    const std::vector<VarId> loop_vars = set_minus(effective_target, root_cl.vars);
    const std::vector<VarId> root_part = set_and(effective_target, root_cl.vars);

    std::vector<int> loop_cards;
    for (VarId v : loop_vars) loop_cards.push_back(cards.at(static_cast<std::size_t>(v)));

    Potential result = Potential::ones(effective_target, [&] {
        std::vector<int> cs;
        for (VarId v : effective_target) cs.push_back(cards.at(static_cast<std::size_t>(v)));
        return cs;
    }());

    // Result strides per variable of the effective target.
    std::vector<std::size_t> res_stride(effective_target.size());
    {
        std::size_t acc = 1;
        for (int i = static_cast<int>(effective_target.size()) - 1; i >= 0; --i) {
            res_stride[static_cast<std::size_t>(i)] = acc;
            acc *= static_cast<std::size_t>(result.cards()[static_cast<std::size_t>(i)]);
        }
    }
    auto stride_of = [&](VarId v) {
        for (std::size_t i = 0; i < effective_target.size(); ++i)
            if (effective_target[i] == v) return res_stride[i];
        throw DomainError("execute_plan: internal stride lookup failed");
    };

    std::uint64_t n_configs = 1;
    for (int c : loop_cards) n_configs *= static_cast<std::uint64_t>(c);

    std::vector<int> digits(loop_vars.size(), 0);
    for (std::uint64_t conf = 0; conf < n_configs; ++conf) {
        std::map<VarId, int> assignment;
        for (std::size_t i = 0; i < loop_vars.size(); ++i) assignment[loop_vars[i]] = digits[i];

        // Inward pass: every non-root clique sends via its own plan.
        std::function<Potential(int)> send_of = [&](int ci) {
            const auto& cl = plan.cliques[static_cast<std::size_t>(ci)];
            std::vector<Potential> sub;
            for (int idx : cl.inputs)
                sub.push_back(slice(inputs[static_cast<std::size_t>(idx)],
                                    restrict_assignment(assignment,
                                                        inputs[static_cast<std::size_t>(idx)])));
            for (int ch : cl.children) sub.push_back(send_of(ch));
            return execute_plan(*cl.send, sub, cards, nullptr);
        };

        std::vector<Potential> at_root;
        for (int idx : root_cl.inputs)
            at_root.push_back(slice(inputs[static_cast<std::size_t>(idx)],
                                    restrict_assignment(assignment,
                                                        inputs[static_cast<std::size_t>(idx)])));
        for (int ch : root_cl.children) at_root.push_back(send_of(ch));
        Potential prod = combine(at_root, stats);
        Potential part = marginalize(prod, set_and(root_part, prod.domain()));
        if (stats) ++stats->marginalizations;
        if (part.domain() != root_part)
            throw StructuralError("execute_plan: root product does not cover the target");

        // Write this configuration's slice of the output.
        std::size_t base = 0;
        for (std::size_t i = 0; i < loop_vars.size(); ++i)
            base += stride_of(loop_vars[i]) * static_cast<std::size_t>(digits[i]);
        std::vector<std::size_t> part_stride(root_part.size());
        for (std::size_t i = 0; i < root_part.size(); ++i) part_stride[i] = stride_of(root_part[i]);
        std::vector<int> pdig(root_part.size(), 0);
        std::size_t off = base;
        for (std::size_t i = 0; i < part.size(); ++i) {
            result.values()[off] = part.values()[i];
            for (int d = static_cast<int>(pdig.size()) - 1; d >= 0; --d) {
                const std::size_t dd = static_cast<std::size_t>(d);
                ++pdig[dd];
                off += part_stride[dd];
                if (pdig[dd] < part.cards()[dd]) break;
                pdig[dd] = 0;
                off -= part_stride[dd] * static_cast<std::size_t>(part.cards()[dd]);
            }
        }

        // Next configuration (last variable fastest).
        for (int d = static_cast<int>(digits.size()) - 1; d >= 0; --d) {
            const std::size_t dd = static_cast<std::size_t>(d);
            ++digits[dd];
            if (digits[dd] < loop_cards[dd]) break;
            digits[dd] = 0;
        }
    }

    if (stats) stats->configurations = n_configs;
    return result;
}

std::string dump_plan(const NestedPlan& plan, const Cards& cards,
                      const std::vector<std::string>& names, int indent) {
    auto name_of = [&](VarId v) {
        return static_cast<std::size_t>(v) < names.size() ? names[static_cast<std::size_t>(v)]
                                                          : std::to_string(v);
    };
    auto var_set = [&](const std::vector<VarId>& vars) {
        std::ostringstream os;
        os << "{";
        for (std::size_t i = 0; i < vars.size(); ++i) os << (i ? " " : "") << name_of(vars[i]);
        os << "}";
        return os.str();
    };
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');

    std::ostringstream os;
    if (plan.flat) {
        os << pad << "flat table " << var_set(plan.flat_vars) << " size="
           << table_entries(plan.flat_vars, cards) << " k=" << plan.input_domains.size()
           << " space=" << plan.cost.space << " time=" << plan.cost.time << "\n";
        return os.str();
    }
    os << pad << "nested space=" << plan.cost.space << " time=" << plan.cost.time
       << " configs=" << plan.configurations << "\n";
    const auto& root_cl = plan.cliques[static_cast<std::size_t>(plan.root)];
    os << pad << "  root clique " << var_set(root_cl.vars) << " size="
       << table_entries(root_cl.vars, cards) << "\n";
    for (std::size_t c = 0; c < plan.cliques.size(); ++c) {
        if (static_cast<int>(c) == plan.root) continue;
        const auto& cl = plan.cliques[c];
        os << pad << "  clique " << var_set(cl.vars) << " size=" << table_entries(cl.vars, cards)
           << " -> sep " << var_set(cl.separator) << " size="
           << table_entries(cl.separator, cards) << "\n";
        os << dump_plan(*cl.send, cards, names, indent + 2);
    }
    return os.str();
}

}  // namespace njt
