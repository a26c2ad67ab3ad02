#pragma once

#include <optional>
#include <unordered_map>

#include "amalgam/perm_group.hpp"

namespace amalgam {

// Everything the two-group construction extracts from a transitive,
// non-semiprimitive group L: a normal subgroup K that is neither transitive
// nor semiregular and acts trivially on its own orbit partition, the induced
// action S on the cells, and a base point with nontrivial K-stabilizer.
struct WitnessData {
  PermGroup L;
  PermGroup K;                 // block kernel: normal, same orbits as the witness
  BlockPartition cells;        // the K-orbits
  PermGroup S;                 // induced action of L on cell indices
  Point lambda;                // least point with |K_lambda| >= 2
  Point delta;                 // index of the cell containing lambda
  PermGroup L_lambda;
  PermGroup K_lambda;
  PermGroup S_delta;

  // Induced cell permutation of an element of L.
  Perm pi(const Perm& g) const { return induced_cell_perm(g, cells); }
};

// nullopt iff L is semiprimitive.  L must be transitive.
std::optional<WitnessData> find_witness(const PermGroup& l,
                                        std::uint64_t cap = kDefaultCap);

// Right-coset representatives of S_delta in S: each coset is represented by
// its lexicographically least element, listed in lexicographic order, so the
// identity comes first.  tau maps s to the representative of S_delta * s.
struct TransversalTau {
  std::vector<Perm> reps;
  std::unordered_map<std::string, std::uint32_t> coset_of;  // enc(s) -> rep index

  std::uint32_t tau_index(const Perm& s) const;
  const Perm& tau(const Perm& s) const { return reps[tau_index(s)]; }
};

TransversalTau build_transversal_tau(const PermGroup& s, const PermGroup& s_delta,
                                     std::uint64_t cap = kDefaultCap);

// A section of pi restricted to L_lambda -> S_delta: for each s in S_delta the
// first preimage in the canonical enumeration order of L_lambda.  Surjectivity
// is part of the witness invariants; a gap throws std::logic_error.
struct SectionEpsilon {
  std::unordered_map<std::string, Perm> pre;  // enc(s) -> preimage in L_lambda

  const Perm& eps(const Perm& s) const;
};

SectionEpsilon build_section_epsilon(const WitnessData& w,
                                     std::uint64_t cap = kDefaultCap);

}  // namespace amalgam
