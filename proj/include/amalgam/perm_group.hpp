#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "amalgam/perm.hpp"

namespace amalgam {

inline constexpr std::uint64_t kDefaultCap = 1u << 20;

// Finite permutation group given by generators.  Order and membership go
// through a lazily built stabilizer chain; element enumeration is a separate
// breadth-first closure whose discovery order is the canonical enumeration
// order used everywhere ordering matters.
class PermGroup {
public:
  PermGroup(std::size_t degree, std::vector<Perm> gens);
  static PermGroup trivial(std::size_t degree) { return PermGroup(degree, {}); }

  std::size_t degree() const { return degree_; }
  const std::vector<Perm>& generators() const { return gens_; }

  std::uint64_t order() const;
  bool contains(const Perm& p) const;

  bool is_trivial() const { return order() == 1; }
  bool is_transitive() const;
  // Every orbit has size |G|, i.e. only the identity fixes a point.
  bool is_semiregular() const;
  bool is_regular() const { return is_transitive() && order() == degree_; }

  // Orbit cells sorted by least point, points increasing within a cell.
  std::vector<std::vector<Point>> orbits() const;

  PermGroup point_stabilizer(Point p) const;

  // All elements in breadth-first discovery order (identity first).
  // Throws cap_exceeded if the group is larger than cap.
  const std::vector<Perm>& elements(std::uint64_t cap = kDefaultCap) const;

private:
  struct Level {
    Point base;
    std::vector<Perm> gens;  // strong generators first constrained at this level
    std::vector<Point> orbit;       // discovery order; orbit of base under the
                                    // generators of this level and all deeper ones
    std::vector<int> where;         // point -> orbit position, -1 outside
    std::vector<Perm> transversal;  // u with base^u = orbit[k]
  };

  void ensure_chain() const;
  void build_chain(const std::vector<Point>& prescribed) const;
  void rebuild_level(std::size_t l) const;
  // Sifts g through levels start.., multiplying off transversal representatives;
  // returns the level it got stuck at (== size if it reduced to the identity)
  // and leaves the residue in g.
  std::size_t sift(Perm& g, std::size_t start = 0) const;

  std::size_t degree_;
  std::vector<Perm> gens_;
  mutable std::vector<Level> levels_;
  mutable bool chain_built_ = false;
  mutable std::vector<Perm> elements_;
};

// Normal closure of <seeds> in G.  Seeds must lie in G.
PermGroup normal_closure(const PermGroup& g, const std::vector<Perm>& seeds);

struct BlockPartition {
  std::vector<std::vector<Point>> cells;  // sorted by least point, sorted within
  std::vector<Point> cell_of;

  static BlockPartition from_cells(std::size_t degree,
                                   std::vector<std::vector<Point>> cells);
};

// Action of G on the cells of an invariant partition.
struct BlockAction {
  BlockPartition partition;
  PermGroup induced;            // image on cell indices
  PermGroup kernel;             // elements acting trivially on cells
};

// Throws std::invalid_argument if some generator does not permute the cells.
BlockAction kernel_on_blocks(const PermGroup& g, BlockPartition partition,
                             std::uint64_t cap = kDefaultCap);

// Cell-permutation induced by an element known to preserve the partition.
Perm induced_cell_perm(const Perm& g, const BlockPartition& p);

struct SemiprimitivityVerdict {
  bool semiprimitive;
  // When not semiprimitive: a normal subgroup that is neither transitive nor
  // semiregular (the closure of the first offending stabilizer element found).
  std::optional<PermGroup> witness;
};

// G must be transitive (hypothesis_error otherwise).  A transitive group is
// semiprimitive iff every normal subgroup is transitive or semiregular, which
// reduces to: no nontrivial element of a point stabilizer has an intransitive
// normal closure.
SemiprimitivityVerdict is_semiprimitive(const PermGroup& g,
                                        std::uint64_t cap = kDefaultCap);

// Searches for sigma with sigma^-1 G sigma = H (equality of the full groups,
// not just a generator match).  Backtracking over point images with orbit and
// stabilizer-order pruning; refuses degrees above max_degree.
std::optional<Perm> perm_isomorphic(const PermGroup& g, const PermGroup& h,
                                    std::size_t max_degree = 12);

}  // namespace amalgam
