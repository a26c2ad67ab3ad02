#include <memory>
#include <vector>

#include "amalgam/catalog.hpp"
#include "amalgam/errors.hpp"
#include "amalgam/group_spec.hpp"
#include "doctest.h"

using namespace amalgam;

namespace {

GroupSpec<PermCtx> perm_spec(const PermGroup& g) {
  auto ctx = std::make_shared<PermCtx>(PermCtx{g.degree()});
  return GroupSpec<PermCtx>(ctx, g.generators());
}

Embed<PermCtx> inclusion() {
  return [](const Perm& p) { return p; };
}

}  // namespace

TEST_CASE("breadth-first enumeration matches the reference group") {
  const PermGroup s4 = catalog_group("Sym(4)");
  const auto spec = perm_spec(s4);
  CHECK(spec.order() == 24);
  CHECK(spec.elements().front().is_identity());
  for (const Perm& p : spec.elements()) CHECK(s4.contains(p));
  CHECK(spec.contains(parse_cycles("(0 3)", 4)));
  CHECK_THROWS_AS(perm_spec(s4).elements(10), cap_exceeded);
}

TEST_CASE("coset action on the cosets of a point stabilizer") {
  // Sym(4) over the stabilizer of 0 recovers the natural degree-4 action.
  const PermGroup s4 = catalog_group("Sym(4)");
  const auto p = perm_spec(s4);
  const auto b = perm_spec(s4.point_stabilizer(0));
  const auto ca = coset_action(p, inclusion(), b);
  CHECK(ca.transversal.size() == 4);
  CHECK(ca.transversal[0].is_identity());
  CHECK(ca.image.degree() == 4);
  CHECK(ca.image.order() == 24);
  CHECK(ca.image.is_transitive());
  // Each representative really lands in its own coset.
  for (std::size_t i = 0; i < ca.transversal.size(); ++i)
    for (std::size_t j = i + 1; j < ca.transversal.size(); ++j)
      CHECK_FALSE(b.contains(
          compose(ca.transversal[i], ca.transversal[j].inverse())));
}

TEST_CASE("normal core of a subgroup's element list") {
  const PermGroup s4 = catalog_group("Sym(4)");
  const auto p = perm_spec(s4);

  const PermGroup v4(4, {parse_cycles("(0 1)(2 3)", 4), parse_cycles("(0 2)(1 3)", 4)});
  CHECK(core_in(p, inclusion(), v4.elements()).size() == 4);  // already normal

  const PermGroup d4 = catalog_group("Dihedral(4)");
  // The dihedral subgroup is not normal in Sym(4); its core is the
  // double-transposition subgroup.
  const auto core = core_in(p, inclusion(), d4.elements());
  CHECK(core.size() == 4);
  for (const Perm& x : core) CHECK(v4.contains(x));

  const PermGroup flip(4, {parse_cycles("(0 1)", 4)});
  CHECK(core_in(p, inclusion(), flip.elements()).size() == 1);
}

TEST_CASE("largest common normal subgroup of a two-group amalgam") {
  // Borel subgroup: the half turn, central in the dihedral group and inside
  // the rotation group, hence normal in both factors.
  const PermGroup d4 = catalog_group("Dihedral(4)");
  const PermGroup c4 = catalog_group("Cyclic(4)");
  const PermGroup half(4, {parse_cycles("(0 2)(1 3)", 4)});
  Amalgam<PermCtx> am{{perm_spec(d4), perm_spec(c4)},
                      perm_spec(half),
                      {inclusion(), inclusion()}};
  CHECK(largest_common_normal(am).size() == 2);
  CHECK_FALSE(is_faithful(am));

  // Trivial Borel subgroup: nothing to be normal, faithful by default.
  Amalgam<PermCtx> tr{{perm_spec(d4), perm_spec(c4)},
                      perm_spec(PermGroup::trivial(4)),
                      {inclusion(), inclusion()}};
  CHECK(is_faithful(tr));
}

TEST_CASE("regular coset images force a trivial Borel subgroup") {
  const PermGroup c4 = catalog_group("Cyclic(4)");
  const PermGroup k4 = catalog_group("Klein4");
  Amalgam<PermCtx> am{{perm_spec(c4), perm_spec(k4)},
                      perm_spec(PermGroup::trivial(4)),
                      {inclusion(), inclusion()}};
  CHECK(assert_regular_implies_trivial_borel(am));

  // A non-regular coset image violates the hypothesis.
  const PermGroup s3 = catalog_group("Sym(3)");
  Amalgam<PermCtx> bad{{perm_spec(s3), perm_spec(s3)},
                       perm_spec(PermGroup(3, {parse_cycles("(0 1)", 3)})),
                       {inclusion(), inclusion()}};
  CHECK_THROWS_AS(assert_regular_implies_trivial_borel(bad), hypothesis_error);
}
