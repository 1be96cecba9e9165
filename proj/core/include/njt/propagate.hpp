#ifndef NJT_PROPAGATE_HPP
#define NJT_PROPAGATE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "njt/graph.hpp"
#include "njt/nest.hpp"
#include "njt/potential.hpp"
#include "njt/types.hpp"

namespace njt {

enum class Architecture { hugin, shafer_shenoy };

struct TraceEntry {
    std::string pass;  // "collect" or "distribute"
    int from = -1;
    int to = -1;
    std::uint64_t separator_size = 0;
    std::uint64_t time_cost = 0;
};

enum class PassStatus { initialized, collected, distributed };

// Message passing state over a junction tree. Hugin keeps clique and
// separator tables per Table-1 absorption; Shafer-Shenoy keeps the assigned
// potentials untouched and caches directed separator messages. When a
// nesting policy is given, inward messages (and Shafer-Shenoy outward
// messages) are computed through nested plans; the Hugin outward pass is
// always conventional, since every neighbour's message is already folded
// into the clique table there.
class PropagationState {
public:
    PropagationState(const JunctionTree& jt, Cards cards, Architecture arch,
                     std::optional<NestingPolicy> policy = std::nullopt);

    void collect(int root);
    void distribute();  // from the collect root

    // Normalized posterior of one variable; requires collect (any variable in
    // the root) or distribute (any variable).
    Potential query_marginal(VarId v) const;

    Architecture architecture() const { return arch_; }
    PassStatus status() const { return status_; }
    int root() const { return root_; }
    const std::vector<TraceEntry>& trace() const { return trace_; }
    const JunctionTree& tree() const { return jt_; }

    // Hugin only: current clique and separator tables.
    const Potential& clique_table(int c) const;
    const Potential& separator_table(int a, int b) const;
    // Shafer-Shenoy only: cached directed message.
    const Potential& message(int from, int to) const;

private:
    Potential compute_message(int from, int to);
    Potential clique_product(int c) const;  // assigned potentials x all incoming messages

    JunctionTree jt_;
    Cards cards_;
    Architecture arch_;
    std::optional<NestingPolicy> policy_;
    PassStatus status_ = PassStatus::initialized;
    int root_ = -1;

    std::vector<Potential> phi_c_;                   // Hugin clique tables
    std::map<std::pair<int, int>, Potential> sep_;   // Hugin: per edge; SS: per direction
    std::vector<TraceEntry> trace_;
};

// `pass clique_from -> clique_to separator_size time_cost`, one per line.
std::string format_trace(const std::vector<TraceEntry>& trace);

}  // namespace njt

#endif
