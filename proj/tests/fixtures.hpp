#ifndef NJT_TESTS_FIXTURES_HPP
#define NJT_TESTS_FIXTURES_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "njt/graph.hpp"
#include "njt/io.hpp"
#include "njt/types.hpp"

namespace njt::testing {

// Nine-variable message scenario: a clique holding three incoming messages
// and one conditional table must send a message over an eight-variable
// target. Variable names follow the node identifiers of the source network.
inline Scenario message_scenario() {
    Scenario sc;
    const std::vector<std::pair<const char*, int>> vars = {
        {"22", 4}, {"26", 5}, {"83", 5}, {"84", 5}, {"94", 5},
        {"95", 5}, {"97", 5}, {"164", 7}, {"168", 6}};
    int id = 0;
    for (const auto& [name, card] : vars) {
        Variable v;
        v.id = id++;
        v.name = name;
        v.cardinality = card;
        sc.variables.push_back(std::move(v));
    }
    sc.potential_domains = {
        {0, 1, 2, 3, 4, 5, 8},  // {22 26 83 84 94 95 168}
        {2, 3, 6, 7, 8},        // {83 84 97 164 168}
        {4, 5, 6},              // {94 95 97}
        {0, 1, 6},              // {22 26 97}
    };
    sc.target = {0, 1, 3, 4, 5, 6, 7, 8};  // {22 26 84 94 95 97 164 168}
    return sc;
}

// Same structure with cardinalities halved (rounded up) where above two;
// keeps unit tests fast.
inline Scenario reduced_scenario() {
    Scenario sc = message_scenario();
    for (auto& v : sc.variables)
        if (v.cardinality > 2) v.cardinality = (v.cardinality + 1) / 2;
    return sc;
}

inline Cards scenario_cards(const Scenario& sc) {
    Cards c;
    for (const auto& v : sc.variables) c.push_back(v.cardinality);
    return c;
}

// Platform-independent uniform draw in [0.1, 1.0).
inline double positive_draw(std::mt19937& gen) {
    return 0.1 + 0.9 * (static_cast<double>(gen() >> 8) / 16777216.0);
}

// Random DAG over n variables with cardinalities 2-3 and proper CPTs.
inline NetworkSpec random_network(std::uint32_t seed, int n_vars, int max_parents = 3) {
    std::mt19937 gen(seed);
    NetworkSpec spec;
    for (int i = 0; i < n_vars; ++i) {
        Variable v;
        v.id = i;
        v.name = "X" + std::to_string(i);
        v.cardinality = 2 + static_cast<int>(gen() % 2);
        spec.variables.push_back(std::move(v));
    }
    for (int i = 0; i < n_vars; ++i) {
        Cpt cpt;
        cpt.child = i;
        if (i > 0) {
            const int want = static_cast<int>(gen() % static_cast<unsigned>(max_parents + 1));
            std::set<int> picked;
            for (int k = 0; k < want; ++k) picked.insert(static_cast<int>(gen() % static_cast<unsigned>(i)));
            cpt.parents.assign(picked.begin(), picked.end());
        }
        std::size_t nconf = 1;
        for (VarId p : cpt.parents) nconf *= static_cast<std::size_t>(spec.card(p));
        const int cc = spec.card(i);
        for (std::size_t conf = 0; conf < nconf; ++conf) {
            std::vector<double> col(static_cast<std::size_t>(cc));
            double s = 0.0;
            for (auto& x : col) {
                x = positive_draw(gen);
                s += x;
            }
            for (auto& x : col) cpt.table.push_back(x / s);
        }
        spec.cpts.push_back(std::move(cpt));
    }
    return spec;
}

// Chordality check by exhaustive search for a perfect elimination order.
inline bool brute_is_chordal(const UndirectedGraph& g) {
    std::vector<VarId> left = g.vertices();
    std::set<std::pair<VarId, VarId>> edges;
    for (VarId v : left)
        for (VarId u : g.neighbors(v)) edges.insert({std::min(u, v), std::max(u, v)});

    while (!left.empty()) {
        bool found = false;
        for (std::size_t i = 0; i < left.size() && !found; ++i) {
            const VarId v = left[i];
            std::vector<VarId> nb;
            for (VarId u : left)
                if (u != v && edges.count({std::min(u, v), std::max(u, v)})) nb.push_back(u);
            bool simplicial = true;
            for (std::size_t a = 0; a < nb.size() && simplicial; ++a)
                for (std::size_t b = a + 1; b < nb.size() && simplicial; ++b)
                    if (!edges.count({std::min(nb[a], nb[b]), std::max(nb[a], nb[b])}))
                        simplicial = false;
            if (!simplicial) continue;
            for (VarId u : nb) edges.erase({std::min(u, v), std::max(u, v)});
            left.erase(left.begin() + static_cast<std::ptrdiff_t>(i));
            found = true;
        }
        if (!found) return false;
    }
    return true;
}

// Maximal cliques by subset enumeration (vertex count must stay small).
inline std::vector<std::vector<VarId>> brute_max_cliques(const UndirectedGraph& g) {
    const std::vector<VarId> verts = g.vertices();
    const std::size_t n = verts.size();
    std::vector<std::vector<VarId>> complete;
    for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
        std::vector<VarId> sub;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1ull << i)) sub.push_back(verts[i]);
        bool ok = true;
        for (std::size_t a = 0; a < sub.size() && ok; ++a)
            for (std::size_t b = a + 1; b < sub.size() && ok; ++b)
                if (!g.has_edge(sub[a], sub[b])) ok = false;
        if (ok) complete.push_back(std::move(sub));
    }
    std::vector<std::vector<VarId>> maximal;
    for (const auto& c : complete) {
        bool contained = false;
        for (const auto& d : complete)
            if (d.size() > c.size() &&
                std::includes(d.begin(), d.end(), c.begin(), c.end()))
                contained = true;
        if (!contained) maximal.push_back(c);
    }
    std::sort(maximal.begin(), maximal.end());
    return maximal;
}

// Four binary variables in a chain; the bundled micro example.
inline NetworkSpec chain4_network(std::uint32_t seed = 7) {
    std::mt19937 gen(seed);
    NetworkSpec spec;
    for (int i = 0; i < 4; ++i) {
        Variable v;
        v.id = i;
        v.name = "X" + std::to_string(i + 1);
        v.cardinality = 2;
        spec.variables.push_back(std::move(v));
    }
    for (int i = 0; i < 4; ++i) {
        Cpt cpt;
        cpt.child = i;
        if (i > 0) cpt.parents = {i - 1};
        const std::size_t nconf = i > 0 ? 2 : 1;
        for (std::size_t conf = 0; conf < nconf; ++conf) {
            const double a = positive_draw(gen);
            const double b = positive_draw(gen);
            cpt.table.push_back(a / (a + b));
            cpt.table.push_back(b / (a + b));
        }
        spec.cpts.push_back(std::move(cpt));
    }
    return spec;
}

inline double rel_diff(double a, double b) {
    const double d = std::abs(a - b);
    const double m = std::max(std::abs(a), std::abs(b));
    return m == 0.0 ? d : d / m;
}

}  // namespace njt::testing

#endif
