#ifndef NJT_POTENTIAL_HPP
#define NJT_POTENTIAL_HPP

#include <cstddef>
#include <map>
#include <vector>

#include "njt/types.hpp"

namespace njt {

// Nonnegative table over an ordered set of discrete variables. The domain is
// kept in canonical order (ascending variable id); the constructor reorders
// the given values when necessary. Indexing is row-major over the domain
// with the last variable varying fastest.
class Potential {
public:
    // Unit potential: empty domain, single value 1.
    Potential();

    // Takes values laid out for `domain` as given (last listed variable
    // fastest) and canonicalizes to ascending variable id.
    Potential(std::vector<VarId> domain, std::vector<int> cards, std::vector<double> values);

    static Potential unit() { return Potential(); }
    // All-ones table over `domain`.
    static Potential ones(std::vector<VarId> domain, std::vector<int> cards);

    const std::vector<VarId>& domain() const { return domain_; }
    const std::vector<int>& cards() const { return cards_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    std::size_t size() const { return values_.size(); }
    double sum() const;
    int card_of(VarId v) const;
    bool has(VarId v) const;

    // Mixed-radix digits of a flat index (aligned with domain order).
    void digits_of(std::size_t index, std::vector<int>& out) const;
    std::size_t index_of(const std::vector<int>& digits) const;

private:
    std::vector<VarId> domain_;  // ascending variable id
    std::vector<int> cards_;     // parallel to domain_
    std::vector<double> values_; // length = product of cards_
};

// Entrywise product over the union domain. Overflow to infinity is reported
// as a DomainError naming the offending entry.
Potential multiply(const Potential& a, const Potential& b);

// Sum out every variable not in `keep`. keep must be a subset of the domain.
Potential marginalize(const Potential& p, const std::vector<VarId>& keep);

// Entrywise quotient with the 0/0 = 0 convention; x/0 for x > 0 throws
// InconsistencyError. b.domain must be a subset of a.domain.
Potential divide(const Potential& a, const Potential& b);

// Fix the given variables to the given states; the result ranges over the
// remaining variables.
Potential slice(const Potential& p, const std::map<VarId, int>& assignment);

// Diagnostics for every NetworkSpec invariant; empty means valid.
std::vector<Violation> validate_network(const NetworkSpec& spec);

// Potential for a CPT in canonical layout (parents listed order then child,
// child fastest, as stored in Cpt::table).
Potential cpt_potential(const NetworkSpec& spec, const Cpt& cpt);

// Zero out the rows of each observed variable's own CPT that disagree with
// the evidence. Inference on the result yields posteriors given evidence.
NetworkSpec apply_evidence(const NetworkSpec& spec, const Evidence& evidence);

}  // namespace njt

#endif
