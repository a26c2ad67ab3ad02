#include <algorithm>
#include <vector>

#include "amalgam/catalog.hpp"
#include "amalgam/errors.hpp"
#include "amalgam/perm_group.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace amalgam;

namespace {

PermGroup wreath_c2_s3() {
  // Three sign bits permuted by Sym(3), acting on six points as three
  // two-point blocks; order 2^3 * 6 = 48.
  return PermGroup(6, {parse_cycles("(0 1)", 6), parse_cycles("(0 2 4)(1 3 5)", 6),
                       parse_cycles("(0 2)(1 3)", 6)});
}

}  // namespace

TEST_CASE("order and membership agree with brute-force closure") {
  // The stabilizer chain and the breadth-first enumeration are independent
  // code paths; both must agree with the raw closure oracle.
  for (const auto& [name, g] : catalog_transitive_upto(6, 72)) {
    CAPTURE(name);
    const auto brute = oracle::closure(g.degree(), g.generators());
    CHECK(g.order() == brute.size());
    CHECK(g.elements().size() == brute.size());
    for (const Perm& x : brute) CHECK(g.contains(x));
  }
}

TEST_CASE("chain handles generators that stabilize early base points") {
  // Regression shape: generators whose support skips the first base point
  // once exposed a level that seeded its orbit from the wrong point.
  const PermGroup g = wreath_c2_s3();
  CHECK(g.order() == 48);
  CHECK(g.is_transitive());
  CHECK_FALSE(g.is_semiregular());
  CHECK(g.point_stabilizer(0).order() == 8);
  CHECK_FALSE(g.contains(parse_cycles("(0 2)", 6)));
}

TEST_CASE("structure predicates on the dihedral group of the square") {
  const PermGroup d4 = catalog_group("Dihedral(4)");
  CHECK(d4.order() == 8);
  CHECK(d4.is_transitive());
  CHECK_FALSE(d4.is_regular());
  CHECK_FALSE(d4.is_semiregular());
  CHECK(d4.orbits() == std::vector<std::vector<Point>>{{0, 1, 2, 3}});
  CHECK(d4.point_stabilizer(0).order() == 2);

  const PermGroup c4 = catalog_group("Cyclic(4)");
  CHECK(c4.is_regular());
  CHECK(c4.is_semiregular());
}

TEST_CASE("element enumeration respects the cap") {
  const PermGroup d4 = catalog_group("Dihedral(4)");
  try {
    d4.elements(7);
    CHECK(false);
  } catch (const cap_exceeded& e) {
    CHECK(e.cap() == 7);
  }
  CHECK(d4.elements(8).size() == 8);  // exactly at the cap is fine
}

TEST_CASE("normal closure") {
  const PermGroup s4 = catalog_group("Sym(4)");
  CHECK(normal_closure(s4, {parse_cycles("(0 1)(2 3)", 4)}).order() == 4);
  CHECK(normal_closure(s4, {parse_cycles("(0 1 2)", 4)}).order() == 12);
  CHECK(normal_closure(s4, {parse_cycles("(0 1)", 4)}).order() == 24);
}

TEST_CASE("block kernels and induced cell action") {
  const PermGroup d4 = catalog_group("Dihedral(4)");
  auto part = BlockPartition::from_cells(4, {{0, 2}, {1, 3}});
  CHECK(part.cell_of == std::vector<Point>{0, 1, 0, 1});
  const BlockAction ba = kernel_on_blocks(d4, part);
  CHECK(ba.induced.order() == 2);
  CHECK(ba.kernel.order() == 4);
  for (const Perm& k : ba.kernel.elements())
    CHECK(induced_cell_perm(k, ba.partition).is_identity());
  // The diagonal pairing is not preserved by the quarter turn.
  CHECK_THROWS_AS(
      kernel_on_blocks(d4, BlockPartition::from_cells(4, {{0, 1}, {2, 3}})),
      std::invalid_argument);
}

TEST_CASE("semiprimitivity with witness") {
  SUBCASE("dihedral group of the square is not semiprimitive") {
    const auto v = is_semiprimitive(catalog_group("Dihedral(4)"));
    CHECK_FALSE(v.semiprimitive);
    REQUIRE(v.witness.has_value());
    CHECK_FALSE(v.witness->is_trivial());
    CHECK_FALSE(v.witness->is_transitive());
    CHECK_FALSE(v.witness->is_semiregular());
  }
  SUBCASE("primitive and regular groups are semiprimitive") {
    CHECK(is_semiprimitive(catalog_group("Sym(4)")).semiprimitive);
    CHECK(is_semiprimitive(catalog_group("Cyclic(6)")).semiprimitive);
    CHECK(is_semiprimitive(catalog_group("Klein4")).semiprimitive);
  }
  SUBCASE("intransitive input is refused") {
    CHECK_THROWS_AS(is_semiprimitive(PermGroup(4, {parse_cycles("(0 1)", 4)})),
                    hypothesis_error);
  }
  SUBCASE("matches the brute-force oracle on a non-catalog group") {
    CHECK(is_semiprimitive(wreath_c2_s3()).semiprimitive ==
          oracle::semiprimitive(wreath_c2_s3()));
  }
}

TEST_CASE("conjugacy search between permutation groups") {
  const PermGroup d4 = catalog_group("Dihedral(4)");
  // The same group conjugated by a relabeling must be found conjugate.
  const Perm relabel = parse_cycles("(0 1 3)", 4);
  std::vector<Perm> gens;
  for (const Perm& g : d4.generators()) gens.push_back(conjugate(g, relabel));
  const PermGroup d4c(4, gens);
  auto sigma = perm_isomorphic(d4, d4c);
  REQUIRE(sigma.has_value());
  for (const Perm& g : d4.elements()) CHECK(d4c.contains(conjugate(g, *sigma)));

  // Same order, same degree, different isomorphism type.
  CHECK_FALSE(perm_isomorphic(catalog_group("Cyclic(4)"), catalog_group("Klein4"))
                  .has_value());
  CHECK_THROWS_AS(perm_isomorphic(d4, catalog_group("Cyclic(6)")),
                  std::invalid_argument);
  CHECK_THROWS_AS(perm_isomorphic(PermGroup::trivial(13), PermGroup::trivial(13)),
                  cap_exceeded);
}
