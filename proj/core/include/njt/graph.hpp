#ifndef NJT_GRAPH_HPP
#define NJT_GRAPH_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "njt/potential.hpp"
#include "njt/types.hpp"

namespace njt {

class UndirectedGraph {
public:
    void add_vertex(VarId v) { adj_.try_emplace(v); }
    void add_edge(VarId u, VarId v);
    bool has_edge(VarId u, VarId v) const;
    bool has_vertex(VarId v) const { return adj_.count(v) != 0; }
    const std::set<VarId>& neighbors(VarId v) const;
    std::vector<VarId> vertices() const;
    std::size_t vertex_count() const { return adj_.size(); }
    std::size_t edge_count() const;
    bool operator==(const UndirectedGraph& other) const { return adj_ == other.adj_; }

private:
    std::map<VarId, std::set<VarId>> adj_;
};

struct EliminationOrder {
    std::vector<VarId> order;
    std::vector<std::pair<VarId, VarId>> fill_ins;
};

struct JunctionTree {
    struct Edge {
        int a = -1;
        int b = -1;
        std::vector<VarId> separator;  // sorted
    };

    std::vector<std::vector<VarId>> cliques;  // sorted variable lists
    std::vector<Edge> edges;
    std::vector<std::vector<int>> assignment;  // per clique: indices into `potentials`
    std::vector<Potential> potentials;

    std::vector<int> neighbors(int clique) const;
    // Separator between two adjacent cliques; throws when not adjacent.
    const std::vector<VarId>& separator(int a, int b) const;
    int clique_containing(VarId v) const;  // lowest index, -1 when absent
};

// Marry the parents of every family and drop directions.
UndirectedGraph moralize(const NetworkSpec& spec);

// Each domain becomes a complete subgraph.
UndirectedGraph induced_graph(const std::vector<std::vector<VarId>>& domains);

// Min-fill triangulation; ties broken by smaller resulting table size, then
// by lowest variable id. Chordal inputs get zero fill-ins.
std::pair<UndirectedGraph, EliminationOrder> triangulate(const UndirectedGraph& g,
                                                         const Cards& cards);

// Maximal cliques of a chordal graph from its perfect elimination order, in
// discovery order. Throws StructuralError when the order is not perfect.
std::vector<std::vector<VarId>> max_cliques(const UndirectedGraph& filled,
                                            const EliminationOrder& order);

// Maximum-weight spanning tree over the clique intersection graph (weight =
// shared variable count, ties by lexicographically smallest index pair).
std::vector<JunctionTree::Edge> max_spanning_edges(const std::vector<std::vector<VarId>>& cliques);

// Junction tree over the given cliques; every potential is assigned to its
// lowest-indexed containing clique.
JunctionTree build_junction_tree(std::vector<std::vector<VarId>> cliques,
                                 std::vector<Potential> potentials);

// moralize -> triangulate -> max_cliques -> junction tree over the CPT
// potentials of `spec`.
JunctionTree make_network_tree(const NetworkSpec& spec);

std::uint64_t table_entries(const std::vector<VarId>& vars, const Cards& cards);

// Cliques with table sizes, separators with sizes, total space.
std::string dump_tree(const JunctionTree& jt, const Cards& cards,
                      const std::vector<std::string>& names);

}  // namespace njt

#endif
