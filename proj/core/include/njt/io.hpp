#ifndef NJT_IO_HPP
#define NJT_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "njt/potential.hpp"
#include "njt/types.hpp"

namespace njt {

// Parse a network file:
// {"variables":[{"name":"X","states":["a","b"]}...],
//  "cpts":[{"child":"X","parents":["Y","Z"],"table":[...]}...]}
// Table layout: child fastest, parents in listed order, first parent slowest.
// Any invariant violation is rejected with a ParseError naming the position.
NetworkSpec parse_network(const std::string& text, const std::string& source = "<input>");

// Standalone potential-set scenario: variables with cardinalities, a list of
// potential domains, and a target variable set. Values are not stored; they
// are generated from a seed.
struct Scenario {
    std::vector<Variable> variables;
    std::vector<std::vector<VarId>> potential_domains;
    std::vector<VarId> target;
};

Scenario parse_scenario(const std::string& text, const std::string& source = "<input>");

// True when the JSON document is a scenario rather than a network.
bool looks_like_scenario(const std::string& text);

// Seeded pseudorandom positive tables for a scenario's potentials. The draw
// is platform independent (raw mt19937 words, fixed mapping).
std::vector<Potential> scenario_potentials(const Scenario& scenario, std::uint32_t seed);

std::string read_file(const std::string& path);

}  // namespace njt

#endif
