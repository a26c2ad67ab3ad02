#pragma once

// Finite balls of the bi-regular tree on which the amalgam of P1 and P2 over
// their common subgroup B acts.  Vertices of type 1 and 2 stand for the right
// cosets of P1 and P2 in the (infinite) amalgamated product; a vertex is
// identified with the reduced alternating word of transversal steps leading
// to it from the root pair, so no infinite enumeration is ever needed.  The
// word arithmetic (normal forms, right multiplication) only uses coset
// decompositions inside the two finite groups.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "amalgam/checks.hpp"
#include "amalgam/errors.hpp"
#include "amalgam/group_spec.hpp"
#include "amalgam/perm_group.hpp"
#include "amalgam/rank2.hpp"

namespace amalgam {

// Balls refuse to grow past this many vertices (error, never truncation).
inline constexpr std::uint64_t kTreeVertexCap = 100000;

// Normal-form arithmetic in the amalgamated product of a rank-2 amalgam:
// every element is a Borel element followed by a reduced alternating word of
// non-identity transversal representatives.  Multiplying a letter in from the
// right folds it through coset decompositions, pushing the Borel byproduct
// leftward through the word (rightmost-first folding).
template <GroupContext Ctx>
class AmalgamArith {
public:
  using Element = typename Ctx::Element;

  struct Letter {
    int side;             // 1 or 2: which transversal the representative is from
    std::uint32_t index;  // position in that transversal, never 0 (reduced)
    bool operator==(const Letter&) const = default;
  };

  // The product b * rep(letters[0]) * ... * rep(letters.back()); b indexes the
  // Borel element list.  Consecutive letters alternate sides.
  struct NormalForm {
    std::uint32_t b = 0;
    std::vector<Letter> letters;
    bool operator==(const NormalForm&) const = default;
  };

  explicit AmalgamArith(Amalgam<Ctx> am, std::uint64_t cap = kDefaultCap)
      : am_(std::move(am)) {
    if (am_.rank() != 2)
      throw hypothesis_error("normal-form arithmetic needs a rank-2 amalgam");
    const Ctx& cx = am_.borel.ctx();
    for (int s = 0; s < 2; ++s) {
      CosetAction<Ctx> ca =
          coset_action(am_.groups[s], am_.embeddings[s], am_.borel, cap);
      reps_[s] = std::move(ca.transversal);
      imgs_.push_back(std::move(ca.image));
    }
    const auto& belems = am_.borel.elements(cap);
    for (std::uint32_t i = 0; i < belems.size(); ++i) {
      bindex_.emplace(cx.encode(belems[i]), i);
      for (int s = 0; s < 2; ++s) {
        bemb_[s].push_back(am_.embeddings[s](belems[i]));
        bmap_[s].emplace(cx.encode(bemb_[s].back()), i);
      }
    }
  }

  const Amalgam<Ctx>& amalgam() const { return am_; }
  std::size_t degree(int side) const { return reps_[side - 1].size(); }
  const Element& rep(int side, std::uint32_t j) const { return reps_[side - 1][j]; }
  const PermGroup& coset_image(int side) const { return imgs_[side - 1]; }
  const Element& borel_element(std::uint32_t b) const {
    return am_.borel.elements()[b];
  }

  // Multiplies one letter (an element of P1, P2, or the embedded Borel
  // subgroup) onto the right of a normal form.
  NormalForm fold(NormalForm nf, const Element& x) const {
    const Ctx& cx = am_.borel.ctx();
    const std::string key = cx.encode(x);
    for (int s = 0; s < 2; ++s) {
      auto it = bmap_[s].find(key);
      if (it != bmap_[s].end()) {
        push_b(nf, nf.letters.size(), it->second);
        return nf;
      }
    }
    for (int s = 1; s <= 2; ++s)
      if (am_.groups[s - 1].contains(x)) {
        fold_side(nf, s, x);
        return nf;
      }
    throw std::invalid_argument("letter belongs to neither group of the amalgam");
  }

  NormalForm normalize(const std::vector<Element>& word) const {
    NormalForm nf;
    for (const Element& x : word) nf = fold(std::move(nf), x);
    return nf;
  }

  // Product of the normal form in the ambient context, the head taken through
  // the first embedding (the embeddings are inclusions for the instances
  // built here).  The ambient context houses the two finite groups, not their
  // whole amalgamated product, and its mixed multiplication is partial; the
  // flattened product is guaranteed computable for the two-letter round trips
  // the validation exercises, while fold and normalize stay inside the single
  // groups' total multiplication throughout.
  Element expand(const NormalForm& nf) const {
    const Ctx& cx = am_.borel.ctx();
    Element e = am_.embeddings[0](borel_element(nf.b));
    for (const Letter& l : nf.letters) e = cx.multiply(e, rep(l.side, l.index));
    return e;
  }

private:
  // Decomposes y in P_side as (embedded Borel element) * transversal rep.
  std::pair<std::uint32_t, std::uint32_t> decompose(int side, const Element& y) const {
    const Ctx& cx = am_.borel.ctx();
    const auto& reps = reps_[side - 1];
    for (std::uint32_t j = 0; j < reps.size(); ++j) {
      auto it = bmap_[side - 1].find(cx.encode(cx.multiply(y, cx.inverse(reps[j]))));
      if (it != bmap_[side - 1].end()) return {j, it->second};
    }
    throw std::logic_error("coset decomposition failed");
  }

  int side_at(const NormalForm& nf, std::size_t i) const { return nf.letters[i].side; }

  // Pushes the Borel element b leftward from between positions pos-1 and pos,
  // rewriting each letter in place, and merges what remains into the head.
  // A letter is never absorbed here: rep * borel never lands in the Borel
  // subgroup when the rep is not the identity.
  void push_b(NormalForm& nf, std::size_t pos, std::uint32_t b) const {
    const Ctx& cx = am_.borel.ctx();
    for (std::size_t i = pos; i-- > 0;) {
      const int s = side_at(nf, i);
      const Element y =
          cx.multiply(rep(s, nf.letters[i].index), bemb_[s - 1][b]);
      auto [j, b2] = decompose(s, y);
      nf.letters[i].index = j;
      b = b2;
    }
    const Element merged =
        cx.multiply(borel_element(nf.b), borel_element(b));
    nf.b = bindex_.at(cx.encode(merged));
  }

  void fold_side(NormalForm& nf, int s, Element y) const {
    const Ctx& cx = am_.borel.ctx();
    if (!nf.letters.empty() && nf.letters.back().side == s) {
      y = cx.multiply(rep(s, nf.letters.back().index), y);
      nf.letters.pop_back();
    }
    auto [j, b] = decompose(s, y);
    const std::size_t pos = nf.letters.size();
    if (j != 0) nf.letters.push_back({s, j});
    push_b(nf, pos, b);
  }

  Amalgam<Ctx> am_;
  std::vector<Element> reps_[2];
  std::vector<PermGroup> imgs_;
  std::vector<Element> bemb_[2];  // embedded Borel elements per side
  std::unordered_map<std::string, std::uint32_t> bmap_[2];
  std::unordered_map<std::string, std::uint32_t> bindex_;
};

// One tree vertex: which coset space it lives in and the steps leading to it
// from the root of its branch.  word[k] is the transversal index of step k+1;
// the step leaving a type-t vertex draws from the type-t transversal, and the
// branch root's type alternates back from the vertex type.  Words grow left
// to right away from the root; the group element of the coset is the product
// of the step representatives in reverse order.
struct TreeVertex {
  int type;  // 1 or 2
  std::vector<std::uint32_t> word;
  bool operator==(const TreeVertex&) const = default;
};

struct RootEdgeReport {
  std::uint64_t borel_order;
  bool stabilizer_is_borel;  // elements of P1 or P2 fixing the far root are exactly B
  std::vector<std::vector<std::size_t>> sphere_orbit_sizes;  // Borel orbits per sphere
};

// The radius-r ball around the root edge.  Vertex 0 is the type-1 root,
// vertex 1 the type-2 root, and the first edge is the root edge; expansion is
// breadth-first with children ordered by transversal index.  neighbors(v)[j]
// is the vertex across the coset-j edge at v: position 0 holds the parent
// (or the other root), positions 1.. the children, so the neighbor list is
// aligned with the coset numbering that local actions permute.
class TreeBall {
public:
  using Arith = AmalgamArith<SemiCtx>;
  using Element = SemiCtx::Element;

  TreeBall(Amalgam<SemiCtx> am, std::size_t radius,
           std::uint64_t vertex_cap = kTreeVertexCap);

  std::size_t radius() const { return radius_; }
  const Arith& arith() const { return arith_; }
  const std::vector<TreeVertex>& vertices() const { return vertices_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const {
    return edges_;
  }
  const std::vector<std::size_t>& neighbors(std::size_t v) const {
    return neighbors_[v];
  }
  std::size_t depth(std::size_t v) const { return depths_[v]; }
  // Interior vertices have every tree neighbor inside the ball.
  bool is_interior(std::size_t v) const { return depths_[v] < radius_; }
  const std::vector<std::size_t>& sphere(std::size_t d) const {
    return spheres_[d];
  }
  std::size_t index_of(const TreeVertex& v) const;  // std::out_of_range if absent

  // Right action of a word over P1 and P2 on a vertex, through the normal
  // form; image() is pure word arithmetic, image_index() requires the image
  // to land inside the ball.
  TreeVertex image(const TreeVertex& v, const std::vector<Element>& word) const;
  std::size_t image_index(std::size_t v, const std::vector<Element>& word) const;

  // Permutation group induced on the neighbor list of an interior vertex by
  // its stabilizer (the conjugate of P1 or P2 by the vertex word).  For the
  // roots this is exactly the coset-action image.  Throws on boundary
  // vertices.
  PermGroup local_action(std::size_t v) const;

  RootEdgeReport root_edge_stabilizer_action() const;

  std::string to_dot() const;

private:
  std::string vertex_key(const TreeVertex& v) const;
  int step_side(int type, std::size_t wordlen, std::size_t k) const;
  std::vector<Element> conjugating_word(std::size_t v, const Element& p) const;

  Arith arith_;
  std::size_t radius_;
  std::vector<TreeVertex> vertices_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<std::vector<std::size_t>> neighbors_;
  std::vector<std::size_t> depths_;
  std::vector<std::vector<std::size_t>> spheres_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Structural verification of a ball: tree shape, bi-regularity, closed-form
// sphere sizes, root actions against the coset images, interior local actions
// against the root of the same type, and the root-edge stabilizer.
std::vector<NamedCheck> verify_tree(const TreeBall& ball);

}  // namespace amalgam
