#ifndef NJT_TYPES_HPP
#define NJT_TYPES_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace njt {

using VarId = int;

// Cardinality lookup, indexed by dense variable id.
using Cards = std::vector<int>;

struct Variable {
    VarId id = -1;
    std::string name;
    int cardinality = 0;
    std::vector<std::string> states;  // optional state labels; size == cardinality when present
};

// Conditional probability table in file layout: child varies fastest,
// parents in listed order, first parent slowest.
struct Cpt {
    VarId child = -1;
    std::vector<VarId> parents;
    std::vector<double> table;
};

struct NetworkSpec {
    std::vector<Variable> variables;
    std::vector<Cpt> cpts;

    int card(VarId v) const { return variables.at(static_cast<std::size_t>(v)).cardinality; }
    const std::string& name(VarId v) const { return variables.at(static_cast<std::size_t>(v)).name; }
    Cards cards() const {
        Cards c;
        c.reserve(variables.size());
        for (const auto& v : variables) c.push_back(v.cardinality);
        return c;
    }
    // Returns -1 when no variable has that name.
    VarId find_variable(const std::string& nm) const {
        for (const auto& v : variables)
            if (v.name == nm) return v.id;
        return -1;
    }
};

// variable id -> observed state index
using Evidence = std::map<VarId, int>;

struct Violation {
    std::string where;   // variable or CPT the rule applies to
    std::string rule;    // short rule identifier
    std::string detail;  // human-readable description
};

class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

class StructuralError : public std::runtime_error {
public:
    explicit StructuralError(const std::string& msg) : std::runtime_error(msg) {}
};

// Signals a violated propagation invariant (nonzero divided by zero,
// all-zero posterior mass under contradictory evidence).
class InconsistencyError : public std::runtime_error {
public:
    explicit InconsistencyError(const std::string& msg) : std::runtime_error(msg) {}
};

class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace njt

#endif
