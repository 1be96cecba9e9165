#include "njt/propagate.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "njt/cost.hpp"

namespace njt {

namespace {

std::vector<int> cards_of(const Cards& cards, const std::vector<VarId>& vars) {
    std::vector<int> out;
    out.reserve(vars.size());
    for (VarId v : vars) out.push_back(cards.at(static_cast<std::size_t>(v)));
    return out;
}

}  // namespace

PropagationState::PropagationState(const JunctionTree& jt, Cards cards, Architecture arch,
                                   std::optional<NestingPolicy> policy)
    : jt_(jt), cards_(std::move(cards)), arch_(arch), policy_(std::move(policy)) {
    if (arch_ == Architecture::hugin) {
        // phi_C = psi_C over the full clique domain, phi_S = 1.
        phi_c_.reserve(jt_.cliques.size());
        for (std::size_t c = 0; c < jt_.cliques.size(); ++c) {
            Potential phi = Potential::ones(jt_.cliques[c], cards_of(cards_, jt_.cliques[c]));
            for (int p : jt_.assignment[c])
                phi = multiply(phi, jt_.potentials[static_cast<std::size_t>(p)]);
            phi_c_.push_back(std::move(phi));
        }
        for (const auto& e : jt_.edges)
            sep_.emplace(std::make_pair(std::min(e.a, e.b), std::max(e.a, e.b)),
                         Potential::ones(e.separator, cards_of(cards_, e.separator)));
    }
}

Potential PropagationState::compute_message(int from, int to) {
    const auto& sep_vars = jt_.separator(from, to);
    std::vector<Potential> inputs;
    std::vector<std::vector<VarId>> domains;
    for (int p : jt_.assignment[static_cast<std::size_t>(from)]) {
        inputs.push_back(jt_.potentials[static_cast<std::size_t>(p)]);
        domains.push_back(inputs.back().domain());
    }
    for (int nb : jt_.neighbors(from)) {
        if (nb == to) continue;
        const auto it = sep_.find({nb, from});
        if (it == sep_.end())
            throw StructuralError("propagate: message " + std::to_string(nb) + "->" +
                                  std::to_string(from) + " not available yet");
        inputs.push_back(it->second);
        domains.push_back(it->second.domain());
    }

    TraceEntry entry;
    entry.from = from;
    entry.to = to;
    entry.separator_size = table_entries(sep_vars, cards_);

    Potential msg;
    if (policy_) {
        const auto plan = build_nested_plan(domains, cards_, sep_vars, *policy_,
                                            jt_.cliques[static_cast<std::size_t>(from)]);
        msg = execute_plan(*plan.plan, inputs, cards_);
        entry.time_cost = plan.plan->cost.time;
    } else {
        Potential prod = inputs.empty() ? Potential::unit() : inputs[0];
        for (std::size_t i = 1; i < inputs.size(); ++i) prod = multiply(prod, inputs[i]);
        std::vector<VarId> keep;
        std::set_intersection(sep_vars.begin(), sep_vars.end(), prod.domain().begin(),
                              prod.domain().end(), std::back_inserter(keep));
        msg = marginalize(prod, keep);
        entry.time_cost = flat_send_cost(std::max<int>(1, static_cast<int>(inputs.size())),
                                         table_entries(jt_.cliques[static_cast<std::size_t>(from)],
                                                       cards_),
                                         entry.separator_size)
                              .time;
    }
    trace_.push_back(entry);
    return msg;
}

void PropagationState::collect(int root) {
    if (root < 0 || root >= static_cast<int>(jt_.cliques.size()))
        throw StructuralError("collect: no clique " + std::to_string(root));
    root_ = root;
    trace_.clear();

    std::function<void(int, int)> visit = [&](int c, int parent) {
        for (int nb : jt_.neighbors(c))
            if (nb != parent) visit(nb, c);
        if (parent < 0) return;

        if (arch_ == Architecture::hugin) {
            Potential msg;
            std::uint64_t trace_time = 0;
            const auto& sep_vars = jt_.separator(c, parent);
            if (policy_) {
                msg = compute_message(c, parent);
                // A nested message ranges over the separator variables its
                // inputs cover; broadcast to the full separator so that the
                // separator-table update stays well defined.
                if (msg.domain() != sep_vars)
                    msg = multiply(msg, Potential::ones(sep_vars, cards_of(cards_, sep_vars)));
            } else {
                msg = marginalize(phi_c_[static_cast<std::size_t>(c)], sep_vars);
                const int k = static_cast<int>(jt_.assignment[static_cast<std::size_t>(c)].size() +
                                               jt_.neighbors(c).size() - 1);
                trace_time = flat_send_cost(std::max(1, k),
                                            table_entries(jt_.cliques[static_cast<std::size_t>(c)],
                                                          cards_),
                                            table_entries(sep_vars, cards_))
                                 .time;
                trace_.push_back({"", c, parent, table_entries(sep_vars, cards_), trace_time});
            }
            const auto key = std::make_pair(std::min(c, parent), std::max(c, parent));
            Potential& phi_s = sep_.at(key);
            phi_c_[static_cast<std::size_t>(parent)] =
                multiply(phi_c_[static_cast<std::size_t>(parent)], divide(msg, phi_s));
            phi_s = msg;
            // Keep the raw message for nested sends higher up the tree.
            sep_.insert_or_assign({c, parent}, std::move(msg));
        } else {
            Potential msg = compute_message(c, parent);
            sep_.insert_or_assign({c, parent}, std::move(msg));
        }
        if (!trace_.empty()) trace_.back().pass = "collect";
    };
    visit(root, -1);
    status_ = PassStatus::collected;
}

void PropagationState::distribute() {
    if (status_ != PassStatus::collected)
        throw StructuralError("distribute: collect must run first");

    std::function<void(int, int)> visit = [&](int c, int parent) {
        for (int nb : jt_.neighbors(c)) {
            if (nb == parent) continue;
            const auto& sep_vars = jt_.separator(c, nb);
            if (arch_ == Architecture::hugin) {
                // Outward Hugin is always conventional: phi_C already holds
                // the product of every incoming message.
                Potential msg = marginalize(phi_c_[static_cast<std::size_t>(c)], sep_vars);
                const auto key = std::make_pair(std::min(c, nb), std::max(c, nb));
                Potential& phi_s = sep_.at(key);
                phi_c_[static_cast<std::size_t>(nb)] =
                    multiply(phi_c_[static_cast<std::size_t>(nb)], divide(msg, phi_s));
                const std::uint64_t time =
                    flat_send_cost(1,
                                   table_entries(jt_.cliques[static_cast<std::size_t>(c)], cards_),
                                   table_entries(sep_vars, cards_))
                        .time;
                trace_.push_back(
                    {"distribute", c, nb, table_entries(sep_vars, cards_), time});
                phi_s = std::move(msg);
            } else {
                Potential msg = compute_message(c, nb);
                trace_.back().pass = "distribute";
                sep_.insert_or_assign({c, nb}, std::move(msg));
            }
            visit(nb, c);
        }
    };
    visit(root_, -1);
    status_ = PassStatus::distributed;
}

Potential PropagationState::clique_product(int c) const {
    Potential prod = Potential::unit();
    for (int p : jt_.assignment[static_cast<std::size_t>(c)])
        prod = multiply(prod, jt_.potentials[static_cast<std::size_t>(p)]);
    for (int nb : jt_.neighbors(c)) {
        const auto it = sep_.find({nb, c});
        if (it == sep_.end())
            throw StructuralError("propagate: clique " + std::to_string(c) +
                                  " has not received all messages");
        prod = multiply(prod, it->second);
    }
    return prod;
}

Potential PropagationState::query_marginal(VarId v) const {
    if (status_ == PassStatus::initialized)
        throw StructuralError("query_marginal: collect must run first");
    int clique = -1;
    if (status_ == PassStatus::collected) {
        const auto& rc = jt_.cliques[static_cast<std::size_t>(root_)];
        if (!std::binary_search(rc.begin(), rc.end(), v))
            throw StructuralError("query_marginal: variable " + std::to_string(v) +
                                  " is not in the collect root; distribute first");
        clique = root_;
    } else {
        clique = jt_.clique_containing(v);
        if (clique < 0)
            throw StructuralError("query_marginal: variable " + std::to_string(v) +
                                  " is in no clique");
    }

    Potential marg = arch_ == Architecture::hugin
                         ? marginalize(phi_c_[static_cast<std::size_t>(clique)], {v})
                         : marginalize(clique_product(clique), {v});
    const double total = marg.sum();
    if (total <= 0.0)
        throw InconsistencyError("query_marginal: zero posterior mass (contradictory evidence)");
    for (double& x : marg.values()) x /= total;
    return marg;
}

const Potential& PropagationState::clique_table(int c) const {
    if (arch_ != Architecture::hugin)
        throw StructuralError("clique_table: only kept in the Hugin architecture");
    return phi_c_.at(static_cast<std::size_t>(c));
}

const Potential& PropagationState::separator_table(int a, int b) const {
    if (arch_ != Architecture::hugin)
        throw StructuralError("separator_table: only kept in the Hugin architecture");
    return sep_.at({std::min(a, b), std::max(a, b)});
}

const Potential& PropagationState::message(int from, int to) const {
    const auto it = sep_.find({from, to});
    if (it == sep_.end())
        throw StructuralError("message: " + std::to_string(from) + "->" + std::to_string(to) +
                              " has not been sent");
    return it->second;
}

std::string format_trace(const std::vector<TraceEntry>& trace) {
    std::ostringstream os;
    for (const auto& e : trace)
        os << e.pass << " C" << e.from << " -> C" << e.to << " " << e.separator_size << " "
           << e.time_cost << "\n";
    return os.str();
}

}  // namespace njt
