// Command-line front end: posteriors, nested message plans, cost reports,
// and brute-force oracle marginals for discrete networks.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "njt/cost.hpp"
#include "njt/graph.hpp"
#include "njt/io.hpp"
#include "njt/nest.hpp"
#include "njt/oracle.hpp"
#include "njt/potential.hpp"
#include "njt/propagate.hpp"

using njt::Architecture;
using njt::Cards;
using njt::CostPair;
using njt::Evidence;
using njt::JunctionTree;
using njt::NestingPolicy;
using njt::NetworkSpec;
using njt::Potential;
using njt::Scenario;
using njt::VarId;

namespace {

struct Options {
    std::string path;
    std::vector<std::string> evidence;
    std::vector<std::string> variables;
    std::string method = "hugin";
    std::vector<double> gammas;
    std::string format = "text";
    bool trace = false;
    std::uint32_t seed = 1;
};

Evidence parse_evidence(const NetworkSpec& spec, const std::vector<std::string>& items) {
    Evidence ev;
    for (const std::string& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw njt::ParseError("evidence '" + item + "': expected NAME=STATE");
        const std::string name = item.substr(0, eq);
        const std::string state = item.substr(eq + 1);
        const VarId v = spec.find_variable(name);
        if (v < 0) throw njt::ParseError("evidence '" + item + "': unknown variable '" + name + "'");
        const auto& var = spec.variables[static_cast<std::size_t>(v)];
        int s = -1;
        for (std::size_t i = 0; i < var.states.size(); ++i)
            if (var.states[i] == state) s = static_cast<int>(i);
        if (s < 0) {
            try {
                s = std::stoi(state);
            } catch (const std::exception&) {
                throw njt::ParseError("evidence '" + item + "': unknown state '" + state + "'");
            }
        }
        if (s < 0 || s >= var.cardinality)
            throw njt::ParseError("evidence '" + item + "': state index out of range");
        ev[v] = s;
    }
    return ev;
}

std::vector<VarId> resolve_variables(const NetworkSpec& spec, const std::vector<std::string>& names) {
    std::vector<VarId> out;
    if (names.empty()) {
        for (const auto& v : spec.variables) out.push_back(v.id);
        return out;
    }
    for (const std::string& name : names) {
        const VarId v = spec.find_variable(name);
        if (v < 0) throw njt::ParseError("unknown variable '" + name + "'");
        out.push_back(v);
    }
    return out;
}

std::string state_label(const njt::Variable& var, int s) {
    return var.states.empty() ? std::to_string(s) : var.states[static_cast<std::size_t>(s)];
}

void print_marginals(const NetworkSpec& spec, const std::vector<VarId>& vars,
                     const std::vector<Potential>& marginals, const std::string& format) {
    if (format == "json") {
        nlohmann::json doc;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            const auto& var = spec.variables[static_cast<std::size_t>(vars[i])];
            doc["marginals"][var.name] = marginals[i].values();
        }
        std::cout << doc.dump(2) << "\n";
        return;
    }
    for (std::size_t i = 0; i < vars.size(); ++i) {
        const auto& var = spec.variables[static_cast<std::size_t>(vars[i])];
        std::cout << var.name << ":";
        for (std::size_t s = 0; s < marginals[i].size(); ++s) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.12g", marginals[i].values()[s]);
            std::cout << " " << state_label(var, static_cast<int>(s)) << "=" << buf;
        }
        std::cout << "\n";
    }
}

std::string fmt_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f", x);
    return buf;
}

struct CostRow {
    double gamma = 0.0;
    double conv_space = 0.0;
    double conv_time = 0.0;
    double nested_space = 0.0;
    double nested_time = 0.0;
};

void print_costs(const std::string& network, const std::vector<CostRow>& rows,
                 const std::string& format) {
    auto space_saving = [](const CostRow& r) {
        return 100.0 * (r.conv_space - r.nested_space) / r.conv_space;
    };
    auto time_saving = [](const CostRow& r) {
        return 100.0 * (r.conv_time - r.nested_time) / r.conv_time;
    };
    if (format == "tsv") {
        std::cout << "network\tconv_space\tconv_time\tnested_space\tnested_time\t"
                     "space_saving_pct\ttime_saving_pct\tgamma\n";
        for (const CostRow& r : rows)
            std::cout << network << "\t" << fmt_number(r.conv_space) << "\t"
                      << fmt_number(r.conv_time) << "\t" << fmt_number(r.nested_space) << "\t"
                      << fmt_number(r.nested_time) << "\t" << fmt_number(space_saving(r)) << "\t"
                      << fmt_number(time_saving(r)) << "\t" << fmt_number(r.gamma) << "\n";
        return;
    }
    if (format == "json") {
        nlohmann::json doc;
        doc["network"] = network;
        for (const CostRow& r : rows) {
            nlohmann::json row;
            row["gamma"] = r.gamma;
            row["conv_space"] = r.conv_space;
            row["conv_time"] = r.conv_time;
            row["nested_space"] = r.nested_space;
            row["nested_time"] = r.nested_time;
            row["space_saving_pct"] = space_saving(r);
            row["time_saving_pct"] = time_saving(r);
            doc["rows"].push_back(row);
        }
        std::cout << doc.dump(2) << "\n";
        return;
    }
    for (const CostRow& r : rows) {
        std::cout << network << " gamma=" << fmt_number(r.gamma) << "\n"
                  << "  conventional space=" << fmt_number(r.conv_space)
                  << " time=" << fmt_number(r.conv_time) << "\n"
                  << "  nested       space=" << fmt_number(r.nested_space)
                  << " time=" << fmt_number(r.nested_time) << "\n"
                  << "  saving space=" << fmt_number(space_saving(r)) << "%"
                  << " time=" << fmt_number(time_saving(r)) << "%\n";
    }
}

std::vector<double> gammas_or_default(const Options& opt) {
    return opt.gammas.empty() ? std::vector<double>{0.0} : opt.gammas;
}

Architecture parse_method(const std::string& method) {
    if (method == "hugin") return Architecture::hugin;
    if (method == "ss") return Architecture::shafer_shenoy;
    throw njt::ParseError("unknown method '" + method + "' (expected hugin or ss)");
}

int run_marginals(const Options& opt) {
    const std::string text = njt::read_file(opt.path);
    if (njt::looks_like_scenario(text))
        throw njt::ParseError(opt.path + ": marginals requires a network, not a scenario");
    const NetworkSpec spec = njt::parse_network(text, opt.path);
    const Evidence ev = parse_evidence(spec, opt.evidence);
    const std::vector<VarId> vars = resolve_variables(spec, opt.variables);

    const NetworkSpec observed = ev.empty() ? spec : njt::apply_evidence(spec, ev);
    const JunctionTree jt = njt::make_network_tree(observed);
    std::optional<NestingPolicy> policy;
    if (!opt.gammas.empty()) policy = NestingPolicy{opt.gammas.front()};
    njt::PropagationState state(jt, observed.cards(), parse_method(opt.method), policy);
    state.collect(0);
    state.distribute();

    if (opt.trace) std::cout << njt::format_trace(state.trace());
    std::vector<Potential> marginals;
    for (VarId v : vars) marginals.push_back(state.query_marginal(v));
    print_marginals(spec, vars, marginals, opt.format);
    return 0;
}

int run_oracle(const Options& opt) {
    const std::string text = njt::read_file(opt.path);
    if (njt::looks_like_scenario(text))
        throw njt::ParseError(opt.path + ": oracle requires a network, not a scenario");
    const NetworkSpec spec = njt::parse_network(text, opt.path);
    const Evidence ev = parse_evidence(spec, opt.evidence);
    const std::vector<VarId> vars = resolve_variables(spec, opt.variables);

    std::vector<Potential> marginals;
    for (VarId v : vars) marginals.push_back(njt::oracle_marginal(spec, {v}, ev));
    print_marginals(spec, vars, marginals, opt.format == "text" ? "json" : opt.format);
    return 0;
}

int run_plan(const Options& opt) {
    const std::string text = njt::read_file(opt.path);
    if (njt::looks_like_scenario(text)) {
        const Scenario sc = njt::parse_scenario(text, opt.path);
        Cards cards;
        std::vector<std::string> names;
        for (const auto& v : sc.variables) {
            cards.push_back(v.cardinality);
            names.push_back(v.name);
        }
        for (const double gamma : gammas_or_default(opt)) {
            const auto res =
                njt::build_nested_plan(sc.potential_domains, cards, sc.target, NestingPolicy{gamma});
            std::cout << "gamma=" << fmt_number(gamma)
                      << " flat space=" << res.flat_cost.space
                      << " time=" << res.flat_cost.time << "\n";
            std::cout << njt::dump_plan(*res.plan, cards, names, 1);
        }
        return 0;
    }

    const NetworkSpec spec = njt::parse_network(text, opt.path);
    const JunctionTree jt = njt::make_network_tree(spec);
    const Cards cards = spec.cards();
    std::vector<std::string> names;
    for (const auto& v : spec.variables) names.push_back(v.name);

    std::cout << njt::dump_tree(jt, cards, names);
    for (const double gamma : gammas_or_default(opt)) {
        std::cout << "gamma=" << fmt_number(gamma) << "\n";
        for (std::size_t c = 0; c < jt.cliques.size(); ++c)
            for (int nb : jt.neighbors(static_cast<int>(c))) {
                std::vector<std::vector<VarId>> domains;
                for (int p : jt.assignment[c])
                    domains.push_back(jt.potentials[static_cast<std::size_t>(p)].domain());
                for (int other : jt.neighbors(static_cast<int>(c)))
                    if (other != nb) domains.push_back(jt.separator(static_cast<int>(c), other));
                const auto res = njt::build_nested_plan(
                    domains, cards, jt.separator(static_cast<int>(c), nb), NestingPolicy{gamma},
                    jt.cliques[c]);
                std::cout << "message C" << c << " -> C" << nb << "\n";
                std::cout << njt::dump_plan(*res.plan, cards, names, 1);
            }
    }
    return 0;
}

int run_costs(const Options& opt) {
    const std::string text = njt::read_file(opt.path);
    std::vector<CostRow> rows;
    if (njt::looks_like_scenario(text)) {
        const Scenario sc = njt::parse_scenario(text, opt.path);
        Cards cards;
        for (const auto& v : sc.variables) cards.push_back(v.cardinality);
        for (const double gamma : gammas_or_default(opt)) {
            const auto res =
                njt::build_nested_plan(sc.potential_domains, cards, sc.target, NestingPolicy{gamma});
            CostRow row;
            row.gamma = gamma;
            row.conv_space = static_cast<double>(res.flat_cost.space);
            row.conv_time = static_cast<double>(res.flat_cost.time);
            row.nested_space = static_cast<double>(res.plan->cost.space);
            row.nested_time = static_cast<double>(res.plan->cost.time);
            rows.push_back(row);
        }
    } else {
        const NetworkSpec spec = njt::parse_network(text, opt.path);
        const JunctionTree jt = njt::make_network_tree(spec);
        const Cards cards = spec.cards();
        auto average = [&](const std::vector<CostPair>& totals) {
            double space = 0.0, time = 0.0;
            for (const CostPair& t : totals) {
                space += static_cast<double>(t.space);
                time += static_cast<double>(t.time);
            }
            const double n = static_cast<double>(totals.size());
            return std::pair<double, double>{space / n, time / n};
        };
        for (const double gamma : gammas_or_default(opt)) {
            const auto conv = average(njt::cost_distribute(jt, cards, NestingPolicy{gamma, true}));
            const auto nest = average(njt::cost_distribute(jt, cards, NestingPolicy{gamma, false}));
            CostRow row;
            row.gamma = gamma;
            row.conv_space = conv.first;
            row.conv_time = conv.second;
            row.nested_space = nest.first;
            row.nested_time = nest.second;
            rows.push_back(row);
        }
    }
    print_costs(opt.path, rows, opt.format);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact inference through nested junction trees"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* cmd, bool with_method) {
        cmd->add_option("network", opt.path, "Network or scenario JSON file")->required();
        cmd->add_option("--evidence", opt.evidence, "Observed variable, NAME=STATE (repeatable)");
        cmd->add_option("--variable", opt.variables, "Variable to report (repeatable; default all)");
        cmd->add_option("--gamma", opt.gammas, "Time factor (repeatable for a sweep)")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--format", opt.format, "Output format: text | json | tsv")
            ->check(CLI::IsMember({"text", "json", "tsv"}));
        cmd->add_option("--seed", opt.seed, "Seed for generated fixture values");
        if (with_method) {
            cmd->add_option("--method", opt.method, "Propagation architecture: hugin | ss")
                ->check(CLI::IsMember({"hugin", "ss"}));
            cmd->add_flag("--trace", opt.trace, "Print one line per message sent");
        }
    };

    CLI::App* marginals = app.add_subcommand("marginals", "Posterior marginals via propagation");
    add_common(marginals, true);
    CLI::App* plan = app.add_subcommand("plan", "Junction tree and nested message plans");
    add_common(plan, false);
    CLI::App* costs = app.add_subcommand("costs", "Conventional vs nested cost report");
    add_common(costs, false);
    CLI::App* oracle = app.add_subcommand("oracle", "Brute-force posterior marginals");
    add_common(oracle, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(marginals)) return run_marginals(opt);
        if (app.got_subcommand(plan)) return run_plan(opt);
        if (app.got_subcommand(costs)) return run_costs(opt);
        if (app.got_subcommand(oracle)) return run_oracle(opt);
    } catch (const njt::InconsistencyError& e) {
        std::cerr << "inconsistency: " << e.what() << "\n";
        return 2;
    } catch (const njt::ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
