#include "njt/io.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace njt {

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(source + ": " + e.what());
    }
}

[[noreturn]] void fail(const std::string& source, const std::string& where,
                       const std::string& msg) {
    throw ParseError(source + ": " + where + ": " + msg);
}

std::vector<Variable> parse_variables(const json& doc, const std::string& source,
                                      bool with_states) {
    if (!doc.contains("variables") || !doc["variables"].is_array())
        fail(source, "/variables", "missing or not an array");
    std::vector<Variable> out;
    int id = 0;
    for (const auto& jv : doc["variables"]) {
        const std::string where = "/variables[" + std::to_string(id) + "]";
        Variable v;
        v.id = id++;
        if (!jv.contains("name") || !jv["name"].is_string()) fail(source, where, "missing name");
        v.name = jv["name"].get<std::string>();
        if (with_states) {
            if (!jv.contains("states") || !jv["states"].is_array() || jv["states"].empty())
                fail(source, where, "missing or empty states");
            for (const auto& s : jv["states"]) v.states.push_back(s.get<std::string>());
            v.cardinality = static_cast<int>(v.states.size());
        } else {
            if (!jv.contains("card") || !jv["card"].is_number_integer())
                fail(source, where, "missing integer card");
            v.cardinality = jv["card"].get<int>();
            if (v.cardinality < 1) fail(source, where, "card must be >= 1");
        }
        out.push_back(std::move(v));
    }
    return out;
}

VarId lookup(const std::vector<Variable>& vars, const std::string& name,
             const std::string& source, const std::string& where) {
    for (const auto& v : vars)
        if (v.name == name) return v.id;
    fail(source, where, "unknown variable '" + name + "'");
}

}  // namespace

NetworkSpec parse_network(const std::string& text, const std::string& source) {
    const json doc = parse_json(text, source);
    NetworkSpec spec;
    spec.variables = parse_variables(doc, source, /*with_states=*/true);

    if (!doc.contains("cpts") || !doc["cpts"].is_array())
        fail(source, "/cpts", "missing or not an array");
    int i = 0;
    for (const auto& jc : doc["cpts"]) {
        const std::string where = "/cpts[" + std::to_string(i++) + "]";
        Cpt cpt;
        if (!jc.contains("child") || !jc["child"].is_string())
            fail(source, where, "missing child");
        cpt.child = lookup(spec.variables, jc["child"].get<std::string>(), source, where);
        if (jc.contains("parents"))
            for (const auto& jp : jc["parents"])
                cpt.parents.push_back(lookup(spec.variables, jp.get<std::string>(), source, where));
        if (!jc.contains("table") || !jc["table"].is_array())
            fail(source, where, "missing table");
        for (const auto& jt : jc["table"]) {
            if (!jt.is_number()) fail(source, where, "non-numeric table entry");
            cpt.table.push_back(jt.get<double>());
        }
        spec.cpts.push_back(std::move(cpt));
    }

    const auto violations = validate_network(spec);
    if (!violations.empty()) {
        std::ostringstream os;
        os << source << ": invalid network:";
        for (const auto& v : violations) os << "\n  " << v.where << " [" << v.rule << "] " << v.detail;
        throw ParseError(os.str());
    }
    return spec;
}

bool looks_like_scenario(const std::string& text) {
    try {
        const json doc = json::parse(text);
        return doc.contains("potentials") && !doc.contains("cpts");
    } catch (const json::parse_error&) {
        return false;
    }
}

Scenario parse_scenario(const std::string& text, const std::string& source) {
    const json doc = parse_json(text, source);
    Scenario sc;
    sc.variables = parse_variables(doc, source, /*with_states=*/false);

    auto parse_domain = [&](const json& arr, const std::string& where) {
        std::vector<VarId> dom;
        for (const auto& jn : arr)
            dom.push_back(lookup(sc.variables, jn.get<std::string>(), source, where));
        return dom;
    };
    if (!doc.contains("potentials") || !doc["potentials"].is_array())
        fail(source, "/potentials", "missing or not an array");
    int i = 0;
    for (const auto& jp : doc["potentials"])
        sc.potential_domains.push_back(
            parse_domain(jp, "/potentials[" + std::to_string(i++) + "]"));
    if (!doc.contains("target") || !doc["target"].is_array())
        fail(source, "/target", "missing or not an array");
    sc.target = parse_domain(doc["target"], "/target");
    return sc;
}

std::vector<Potential> scenario_potentials(const Scenario& scenario, std::uint32_t seed) {
    std::vector<Potential> out;
    std::mt19937 gen(seed);
    for (const auto& dom : scenario.potential_domains) {
        std::vector<int> cards;
        std::uint64_t size = 1;
        for (VarId v : dom) {
            cards.push_back(scenario.variables.at(static_cast<std::size_t>(v)).cardinality);
            size *= static_cast<std::uint64_t>(cards.back());
        }
        std::vector<double> values(size);
        // Positive values in [0.1, 1.0), identical on every platform.
        for (auto& x : values) x = 0.1 + 0.9 * (static_cast<double>(gen() >> 8) / 16777216.0);
        out.emplace_back(dom, std::move(cards), std::move(values));
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace njt
