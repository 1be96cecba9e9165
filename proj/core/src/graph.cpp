#include "njt/graph.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <sstream>

namespace njt {

void UndirectedGraph::add_edge(VarId u, VarId v) {
    if (u == v) throw DomainError("graph: self-loop on vertex " + std::to_string(u));
    adj_[u].insert(v);
    adj_[v].insert(u);
}

bool UndirectedGraph::has_edge(VarId u, VarId v) const {
    const auto it = adj_.find(u);
    return it != adj_.end() && it->second.count(v) != 0;
}

const std::set<VarId>& UndirectedGraph::neighbors(VarId v) const {
    const auto it = adj_.find(v);
    if (it == adj_.end()) throw DomainError("graph: unknown vertex " + std::to_string(v));
    return it->second;
}

std::vector<VarId> UndirectedGraph::vertices() const {
    std::vector<VarId> out;
    out.reserve(adj_.size());
    for (const auto& [v, nb] : adj_) {
        (void)nb;
        out.push_back(v);
    }
    return out;
}

std::size_t UndirectedGraph::edge_count() const {
    std::size_t n = 0;
    for (const auto& [v, nb] : adj_) {
        (void)v;
        n += nb.size();
    }
    return n / 2;
}

std::vector<int> JunctionTree::neighbors(int clique) const {
    std::vector<int> out;
    for (const auto& e : edges) {
        if (e.a == clique) out.push_back(e.b);
        if (e.b == clique) out.push_back(e.a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

const std::vector<VarId>& JunctionTree::separator(int a, int b) const {
    for (const auto& e : edges)
        if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return e.separator;
    throw StructuralError("junction tree: cliques " + std::to_string(a) + " and " +
                          std::to_string(b) + " are not adjacent");
}

int JunctionTree::clique_containing(VarId v) const {
    for (std::size_t i = 0; i < cliques.size(); ++i)
        if (std::binary_search(cliques[i].begin(), cliques[i].end(), v))
            return static_cast<int>(i);
    return -1;
}

UndirectedGraph moralize(const NetworkSpec& spec) {
    std::vector<std::vector<VarId>> families;
    families.reserve(spec.cpts.size());
    for (const auto& cpt : spec.cpts) {
        std::vector<VarId> fam = cpt.parents;
        fam.push_back(cpt.child);
        families.push_back(std::move(fam));
    }
    UndirectedGraph g = induced_graph(families);
    for (const auto& v : spec.variables) g.add_vertex(v.id);
    return g;
}

UndirectedGraph induced_graph(const std::vector<std::vector<VarId>>& domains) {
    UndirectedGraph g;
    for (const auto& dom : domains) {
        for (VarId v : dom) g.add_vertex(v);
        for (std::size_t i = 0; i < dom.size(); ++i)
            for (std::size_t j = i + 1; j < dom.size(); ++j)
                if (dom[i] != dom[j]) g.add_edge(dom[i], dom[j]);
    }
    return g;
}

std::uint64_t table_entries(const std::vector<VarId>& vars, const Cards& cards) {
    std::uint64_t n = 1;
    for (VarId v : vars) n *= static_cast<std::uint64_t>(cards.at(static_cast<std::size_t>(v)));
    return n;
}

std::pair<UndirectedGraph, EliminationOrder> triangulate(const UndirectedGraph& g,
                                                         const Cards& cards) {
    // Working copy as adjacency sets over the remaining vertices.
    std::map<VarId, std::set<VarId>> adj;
    for (VarId v : g.vertices()) adj[v] = g.has_vertex(v) ? g.neighbors(v) : std::set<VarId>{};

    UndirectedGraph filled = g;
    EliminationOrder order;

    auto fill_count = [&](VarId v) {
        const auto& nb = adj[v];
        std::size_t missing = 0;
        for (auto i = nb.begin(); i != nb.end(); ++i)
            for (auto j = std::next(i); j != nb.end(); ++j)
                if (!adj[*i].count(*j)) ++missing;
        return missing;
    };
    auto cluster_size = [&](VarId v) {
        std::uint64_t n = static_cast<std::uint64_t>(cards.at(static_cast<std::size_t>(v)));
        for (VarId u : adj[v]) n *= static_cast<std::uint64_t>(cards.at(static_cast<std::size_t>(u)));
        return n;
    };

    while (!adj.empty()) {
        VarId best = -1;
        std::size_t best_fill = std::numeric_limits<std::size_t>::max();
        std::uint64_t best_size = std::numeric_limits<std::uint64_t>::max();
        for (const auto& [v, nb] : adj) {
            (void)nb;
            const std::size_t f = fill_count(v);
            if (f > best_fill) continue;
            const std::uint64_t s = cluster_size(v);
            if (f < best_fill || s < best_size) {
                best = v;
                best_fill = f;
                best_size = s;
            }
            // equal fill and size: keep the lower id (map iteration is ascending)
        }

        order.order.push_back(best);
        const std::set<VarId> nb = adj[best];
        for (auto i = nb.begin(); i != nb.end(); ++i)
            for (auto j = std::next(i); j != nb.end(); ++j)
                if (!adj[*i].count(*j)) {
                    adj[*i].insert(*j);
                    adj[*j].insert(*i);
                    filled.add_edge(*i, *j);
                    order.fill_ins.emplace_back(std::min(*i, *j), std::max(*i, *j));
                }
        for (VarId u : nb) adj[u].erase(best);
        adj.erase(best);
    }
    return {std::move(filled), std::move(order)};
}

std::vector<std::vector<VarId>> max_cliques(const UndirectedGraph& filled,
                                            const EliminationOrder& order) {
    std::map<VarId, std::size_t> position;
    for (std::size_t i = 0; i < order.order.size(); ++i) position[order.order[i]] = i;
    if (position.size() != filled.vertex_count())
        throw StructuralError("max_cliques: order is not a permutation of the vertex set");

    std::vector<std::vector<VarId>> cliques;
    for (VarId v : order.order) {
        std::vector<VarId> cluster{v};
        for (VarId u : filled.neighbors(v))
            if (position.at(u) > position.at(v)) cluster.push_back(u);
        // Perfect elimination order requires the higher neighbors to be complete.
        for (std::size_t i = 1; i < cluster.size(); ++i)
            for (std::size_t j = i + 1; j < cluster.size(); ++j)
                if (!filled.has_edge(cluster[i], cluster[j]))
                    throw StructuralError("max_cliques: graph is not chordal under the given order");
        std::sort(cluster.begin(), cluster.end());
        bool contained = false;
        for (const auto& c : cliques)
            if (std::includes(c.begin(), c.end(), cluster.begin(), cluster.end())) {
                contained = true;
                break;
            }
        if (!contained) cliques.push_back(std::move(cluster));
    }
    return cliques;
}

std::vector<JunctionTree::Edge> max_spanning_edges(const std::vector<std::vector<VarId>>& cliques) {
    // Kruskal over intersection weights, descending; ties by smallest (i, j).
    struct Cand {
        int w;
        int i;
        int j;
        std::vector<VarId> sep;
    };
    std::vector<Cand> cands;
    for (std::size_t i = 0; i < cliques.size(); ++i)
        for (std::size_t j = i + 1; j < cliques.size(); ++j) {
            std::vector<VarId> sep;
            std::set_intersection(cliques[i].begin(), cliques[i].end(), cliques[j].begin(),
                                  cliques[j].end(), std::back_inserter(sep));
            cands.push_back({static_cast<int>(sep.size()), static_cast<int>(i),
                             static_cast<int>(j), std::move(sep)});
        }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.w != b.w) return a.w > b.w;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });

    std::vector<int> parent(cliques.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    std::vector<JunctionTree::Edge> edges;
    for (auto& c : cands) {
        const int ra = find(c.i), rb = find(c.j);
        if (ra == rb) continue;
        parent[static_cast<std::size_t>(ra)] = rb;
        edges.push_back({c.i, c.j, std::move(c.sep)});
        if (edges.size() + 1 == cliques.size()) break;
    }
    if (edges.size() + 1 != cliques.size() && !cliques.empty())
        throw StructuralError("junction tree: clique intersection graph is disconnected");
    return edges;
}

JunctionTree build_junction_tree(std::vector<std::vector<VarId>> cliques,
                                 std::vector<Potential> potentials) {
    JunctionTree jt;
    jt.cliques = std::move(cliques);
    for (auto& c : jt.cliques) std::sort(c.begin(), c.end());
    jt.assignment.assign(jt.cliques.size(), {});
    jt.potentials = std::move(potentials);

    for (std::size_t p = 0; p < jt.potentials.size(); ++p) {
        const auto& dom = jt.potentials[p].domain();
        int home = -1;
        for (std::size_t c = 0; c < jt.cliques.size(); ++c)
            if (std::includes(jt.cliques[c].begin(), jt.cliques[c].end(), dom.begin(), dom.end())) {
                home = static_cast<int>(c);
                break;
            }
        if (home < 0)
            throw StructuralError("junction tree: potential " + std::to_string(p) +
                                  " is not covered by any clique");
        jt.assignment[static_cast<std::size_t>(home)].push_back(static_cast<int>(p));
    }
    jt.edges = max_spanning_edges(jt.cliques);
    return jt;
}

JunctionTree make_network_tree(const NetworkSpec& spec) {
    const Cards cards = spec.cards();
    const UndirectedGraph moral = moralize(spec);
    auto [filled, order] = triangulate(moral, cards);
    auto cliques = max_cliques(filled, order);
    std::vector<Potential> pots;
    pots.reserve(spec.cpts.size());
    for (const auto& cpt : spec.cpts) pots.push_back(cpt_potential(spec, cpt));
    return build_junction_tree(std::move(cliques), std::move(pots));
}

std::string dump_tree(const JunctionTree& jt, const Cards& cards,
                      const std::vector<std::string>& names) {
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

    std::ostringstream os;
    std::uint64_t total = 0;
    for (std::size_t c = 0; c < jt.cliques.size(); ++c) {
        const std::uint64_t sz = table_entries(jt.cliques[c], cards);
        total += sz;
        os << "clique C" << c << " " << var_set(jt.cliques[c]) << " size=" << sz << "\n";
    }
    for (const auto& e : jt.edges) {
        const std::uint64_t sz = table_entries(e.separator, cards);
        total += sz;
        os << "separator C" << e.a << "--C" << e.b << " " << var_set(e.separator) << " size=" << sz
           << "\n";
    }
    os << "total space=" << total << "\n";
    return os.str();
}

}  // namespace njt
