#ifndef NJT_ORACLE_HPP
#define NJT_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "njt/potential.hpp"
#include "njt/types.hpp"

namespace njt {

// Brute-force ground truth. These functions loop over explicit full
// configurations and index the CPT tables directly; they deliberately share
// no code with the factor-algebra operations they are used to check.

// Unnormalized joint table over every variable; evidence is applied by
// zeroing non-matching entries. Throws ResourceError beyond `max_entries`.
Potential joint_table(const NetworkSpec& spec, const Evidence& evidence,
                      std::uint64_t max_entries = 10'000'000);

// Normalized marginal of the joint onto `vars`. Throws InconsistencyError on
// zero total mass.
Potential oracle_marginal(const NetworkSpec& spec, const std::vector<VarId>& vars,
                          const Evidence& evidence, std::uint64_t max_entries = 10'000'000);

}  // namespace njt

#endif
