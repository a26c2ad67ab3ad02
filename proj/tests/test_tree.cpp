#include <string>
#include <vector>

#include "amalgam/catalog.hpp"
#include "amalgam/errors.hpp"
#include "amalgam/rank2.hpp"
#include "amalgam/tree.hpp"
#include "doctest.h"

using namespace amalgam;

namespace {

Rank2Instance square_swap() {
  return build_rank2(catalog_group("Dihedral(4)"), catalog_group("Cyclic(2)"), 1);
}

}  // namespace

TEST_CASE("radius-two ball of the square/swap amalgam") {
  const TreeBall ball(square_swap().amalgam, 2);
  CHECK(ball.vertices().size() == 12);
  CHECK(ball.edges().size() == 11);
  CHECK(ball.sphere(0).size() == 2);
  CHECK(ball.sphere(1).size() == 4);
  CHECK(ball.sphere(2).size() == 6);
  // Both roots are interior at radius two; their neighbor counts are the
  // coset numbers of the two vertex groups.
  CHECK(ball.neighbors(0).size() == 4);
  CHECK(ball.neighbors(1).size() == 2);

  for (const NamedCheck& c : verify_tree(ball)) {
    CAPTURE(c.name);
    CHECK(c.status == "pass");
  }
}

TEST_CASE("root actions and the root-edge stabilizer") {
  const TreeBall ball(square_swap().amalgam, 2);
  const PermGroup a1 = ball.local_action(0);
  CHECK(a1.degree() == 4);
  CHECK(a1.order() == 8);
  CHECK(perm_isomorphic(a1, ball.arith().coset_image(1)).has_value());
  const PermGroup a2 = ball.local_action(1);
  CHECK(a2.degree() == 2);
  CHECK(a2.order() == 2);

  const RootEdgeReport rep = ball.root_edge_stabilizer_action();
  CHECK(rep.borel_order == 32);
  CHECK(rep.stabilizer_is_borel);
  CHECK(rep.sphere_orbit_sizes ==
        std::vector<std::vector<std::size_t>>{{1, 1}, {2, 1, 1}, {2, 1, 2, 1}});
}

TEST_CASE("normal-form arithmetic round trips") {
  const Rank2Instance inst = square_swap();
  const AmalgamArith<SemiCtx> arith(inst.amalgam);
  const SemiCtx& cx = *inst.amalgam.borel.ctx_ptr();

  std::size_t pairs = 0, two_letter = 0;
  for (const auto& x : inst.P1.elements()) {
    for (const auto& y : inst.P2.elements()) {
      const auto nf = arith.normalize({x, y});
      REQUIRE(nf.letters.size() <= 2);
      if (nf.letters.size() == 2) {
        CHECK(nf.letters[0].side != nf.letters[1].side);
        ++two_letter;
      }
      // Flattening the normal form recovers the product of the word.
      CHECK(cx.encode(arith.expand(nf)) == cx.encode(cx.multiply(x, y)));
      // Folding the normal form's own letters reproduces it unchanged.
      AmalgamArith<SemiCtx>::NormalForm rebuilt;
      rebuilt = arith.fold(std::move(rebuilt),
                           inst.amalgam.embeddings[0](arith.borel_element(nf.b)));
      for (const auto& l : nf.letters)
        rebuilt = arith.fold(std::move(rebuilt), arith.rep(l.side, l.index));
      CHECK(rebuilt == nf);
      ++pairs;
    }
  }
  CHECK(pairs == 128 * 64);
  CHECK(two_letter > 0);
}

TEST_CASE("letters outside both groups are rejected") {
  const Rank2Instance inst = square_swap();
  const AmalgamArith<SemiCtx> arith(inst.amalgam);
  // An A-element outside C paired with a right part outside R1 belongs to
  // neither vertex group.
  Rank2Element stray = inst.P1.ctx().identity();
  stray.a.g = parse_cycles("(0 1 2 3)", 4);
  stray.r = parse_cycles("(0 1)", 2);
  CHECK_THROWS_AS(arith.normalize({stray}), std::invalid_argument);
}

TEST_CASE("higher-rank amalgams are refused") {
  Amalgam<SemiCtx> am3 = square_swap().amalgam;
  am3.groups.push_back(am3.groups[0]);
  am3.embeddings.push_back(am3.embeddings[0]);
  CHECK_THROWS_WITH_AS((void)AmalgamArith<SemiCtx>(am3),
                       "normal-form arithmetic needs a rank-2 amalgam",
                       hypothesis_error);
  CHECK_THROWS_WITH_AS(TreeBall(am3, 1),
                       "the tree explorer needs a rank-2 amalgam", hypothesis_error);
}

TEST_CASE("vertex cap refuses oversized balls") {
  CHECK_THROWS_AS(TreeBall(square_swap().amalgam, 2, 5), cap_exceeded);
}

TEST_CASE("dot rendering") {
  const TreeBall ball(square_swap().amalgam, 1);
  const std::string dot = ball.to_dot();
  CHECK(dot.substr(0, 12) == "graph ball {");
  CHECK(dot.find("v0 [label=\"t1:\", shape=circle];") != std::string::npos);
  CHECK(dot.find("v1 [label=\"t2:\", shape=box];") != std::string::npos);
  CHECK(dot.find("v0 -- v1 [penwidth=2.5, color=crimson];") != std::string::npos);
  CHECK(dot.back() == '\n');
}
