#pragma once

// Brute-force reference implementations used to cross-check the library.
// Everything here works on plain element sets closed with raw composition and
// string-keyed lookups; none of it touches the stabilizer-chain, closure, or
// classification code under test.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "amalgam/perm.hpp"
#include "amalgam/perm_group.hpp"

namespace oracle {

using amalgam::Perm;
using amalgam::PermGroup;
using amalgam::Point;

// Set closure of the generators under composition, breadth-first from the
// identity.  Throws if the closure exceeds limit.
inline std::vector<Perm> closure(std::size_t degree, const std::vector<Perm>& gens,
                                 std::size_t limit = std::size_t{1} << 14) {
  std::vector<Perm> elts{Perm::identity(degree)};
  std::unordered_set<std::string> seen{elts[0].encoded()};
  for (std::size_t k = 0; k < elts.size(); ++k) {
    for (const Perm& g : gens) {
      Perm y = amalgam::compose(elts[k], g);
      if (seen.insert(y.encoded()).second) {
        if (elts.size() + 1 > limit) throw std::runtime_error("oracle closure limit");
        elts.push_back(std::move(y));
      }
    }
  }
  return elts;
}

inline bool transitive_on_all(std::size_t degree, const std::vector<Perm>& elts) {
  std::unordered_set<Point> orbit;
  for (const Perm& g : elts) orbit.insert(g(0));
  return orbit.size() == degree;
}

inline bool semiregular(const std::vector<Perm>& elts) {
  for (const Perm& g : elts) {
    if (g.is_identity()) continue;
    for (Point p = 0; p < g.degree(); ++p)
      if (g(p) == p) return false;
  }
  return true;
}

// Normal closure of seed in the full element list, by set closure under
// multiplication and conjugation.
inline std::vector<Perm> normal_closure_in(const std::vector<Perm>& group,
                                           const Perm& seed) {
  std::vector<Perm> elts{Perm::identity(seed.degree()), seed};
  std::unordered_set<std::string> seen{elts[0].encoded(), seed.encoded()};
  auto add = [&](Perm y) {
    if (seen.insert(y.encoded()).second) elts.push_back(std::move(y));
  };
  for (std::size_t k = 0; k < elts.size(); ++k) {
    for (const Perm& g : group) add(amalgam::conjugate(elts[k], g));
    for (std::size_t j = 0; j < elts.size(); ++j) {
      add(amalgam::compose(elts[k], elts[j]));
      if (elts.size() > group.size()) throw std::runtime_error("closure escaped group");
    }
  }
  return elts;
}

// Reference semiprimitivity decision for a transitive group.  A transitive
// group fails semiprimitivity exactly when some normal subgroup is neither
// transitive nor semiregular; any such subgroup contains a non-identity
// element fixing a point, whose own normal closure is again intransitive and
// fixes that point, so scanning the normal closures of point-fixing elements
// decides the property in both directions.
inline bool semiprimitive(const PermGroup& g) {
  const std::vector<Perm> elts =
      closure(g.degree(), g.generators());
  for (const Perm& x : elts) {
    if (x.is_identity()) continue;
    bool fixes = false;
    for (Point p = 0; p < x.degree() && !fixes; ++p) fixes = x(p) == p;
    if (!fixes) continue;
    if (!transitive_on_all(g.degree(), normal_closure_in(elts, x))) return false;
  }
  return true;
}

}  // namespace oracle
