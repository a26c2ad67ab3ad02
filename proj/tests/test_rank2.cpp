#include <algorithm>
#include <string>
#include <vector>

#include "amalgam/catalog.hpp"
#include "amalgam/errors.hpp"
#include "amalgam/rank2.hpp"
#include "doctest.h"

using namespace amalgam;

namespace {

PermGroup wreath_c2_s3() {
  return PermGroup(6, {parse_cycles("(0 1)", 6), parse_cycles("(0 2 4)(1 3 5)", 6),
                       parse_cycles("(0 2)(1 3)", 6)});
}

const NamedCheck& find_check(const std::vector<NamedCheck>& checks,
                             const std::string& name) {
  for (const NamedCheck& c : checks)
    if (c.name == name) return c;
  throw std::logic_error("no check named " + name);
}

}  // namespace

TEST_CASE("window index layout keeps orbit blocks consecutive") {
  const OmegaIndex om(2, 3);
  CHECK(om.m == 6);
  CHECK(om.index(0, 0) == 0);
  CHECK(om.index(1, 0) == 1);  // window position varies fastest in y
  CHECK(om.index(0, 1) == 2);
  CHECK(om.index(1, 2) == 5);
  const Perm swap2 = parse_cycles("(0 1)", 2);
  // The swap exchanges the two entries of each block and fixes none.
  for (std::size_t z = 0; z < 3; ++z) {
    CHECK(om.act(swap2, om.index(0, z)) == om.index(1, z));
    CHECK(om.act(swap2, om.index(1, z)) == om.index(0, z));
  }
  CHECK(om.act_ext(swap2, om.m) == om.m);  // the extra point never moves
  CHECK(om.act_ext(swap2, 0) == 1);
}

TEST_CASE("orders of the square/swap instance") {
  const auto inst =
      build_rank2(catalog_group("Dihedral(4)"), catalog_group("Cyclic(2)"), 1);
  CHECK(inst.core->predicted_M() == 16);
  CHECK(inst.M.order() == 16);
  CHECK(inst.A.order() == 128);   // |L| * |M|
  CHECK(inst.C.order() == 32);    // |L_lambda| * |M|
  CHECK(inst.P1.order() == 128);  // A x| R1, R1 trivial here
  CHECK(inst.P2.order() == 64);   // C x| R
  CHECK(inst.B.order() == 32);
  CHECK(inst.core->R1().order() == 1);
  CHECK(inst.amalgam.rank() == 2);
  CHECK(inst.amalgam.borel.order() == inst.B.order());
}

TEST_CASE("membership, lift, and projection") {
  const auto inst =
      build_rank2(catalog_group("Dihedral(4)"), catalog_group("Cyclic(2)"), 1);
  const Rank2Core& core = *inst.core;

  SUBCASE("the canonical lift is a section of the projection") {
    for (const Perm& g : core.witness().L.elements()) {
      const WreathElt a = core.lift(g);
      CHECK(core.phi(a) == g);
      CHECK(core.membership_A(a));
    }
  }
  SUBCASE("a trivial cell stabilizer makes every function row admissible") {
    // Here the defining identity's right-hand side is constant, so the
    // function part is unconstrained: the quarter turn with identity rows is
    // a member even though it moves the base cell.
    WreathElt a = core.wid();
    a.g = parse_cycles("(0 1 2 3)", 4);
    CHECK(core.membership_A(a));
  }
  SUBCASE("kernel generators populate the full function group") {
    const auto gens = core.m_gens();
    CHECK(gens.size() == core.omega().m * core.n_cells());
    for (const WreathElt& m : gens) {
      CHECK(m.g.is_identity());
      CHECK(core.membership_A(m));
    }
  }
}

TEST_CASE("membership rejects rows outside the kernel when the cell stabilizer bites") {
  // With a nontrivial cell stabilizer the identity's lift tolerates exactly
  // the kernel values in each row slot, nothing else.
  const auto inst = build_rank2(wreath_c2_s3(), catalog_group("Cyclic(2)"), 1);
  const Rank2Core& core = *inst.core;
  const std::size_t slots = core.omega().m * core.n_cells();
  REQUIRE(core.lambda_elements().size() == 8);
  for (std::uint16_t i = 0; i < 8; ++i) {
    WreathElt a = core.wid();
    a.f[0] = i;  // row 0 of the first cell
    CHECK(core.membership_A(a) == core.lambda_value_in_K(i));
  }
  CHECK(slots == 6);
}

TEST_CASE("full verification suite on the square/swap instance") {
  const auto inst =
      build_rank2(catalog_group("Dihedral(4)"), catalog_group("Cyclic(2)"), 1);
  const auto checks =
      verify_rank2(inst, VerifyLevel::kFull, ExecMode::kSerial);
  CHECK(checks.size() == 28);
  for (const NamedCheck& c : checks) {
    CAPTURE(c.name);
    CHECK(c.status == "pass");
  }
}

TEST_CASE("verification pinpoints the broken right-hand instance") {
  // The swap side Sym(3) breaks the re-indexing compatibility: the action is
  // still well defined on C but fails the multiplication identity on all of
  // A, which poisons the product rule of the first vertex group.  The suite
  // must report exactly these two failures, with stable counterexamples, and
  // everything else must hold.
  const auto inst =
      build_rank2(catalog_group("Dihedral(4)"), catalog_group("Sym(3)"), 1);
  CHECK(inst.A.order() == 512);
  CHECK(inst.C.order() == 128);
  CHECK(inst.M.order() == 64);
  CHECK(inst.P1.order() == 1024);
  CHECK(inst.P2.order() == 768);
  CHECK(inst.B.order() == 256);
  CHECK(inst.core->R1().order() == 2);

  const auto checks =
      verify_rank2(inst, VerifyLevel::kFull, ExecMode::kSerial);
  const auto& mul = find_check(checks, "reindex_respects_multiplication_on_A");
  CHECK(mul.status == "fail");
  CHECK(mul.detail == "a=#3, d=#1, r=#1: r=(1 2)");
  const auto& law = find_check(checks, "p1_group_law");
  CHECK(law.status == "fail");
  CHECK(law.detail == "inverse fails at element #69");
  for (const NamedCheck& c : checks) {
    if (c.name == "reindex_respects_multiplication_on_A" || c.name == "p1_group_law")
      continue;
    CAPTURE(c.name);
    CHECK(c.status == "pass");
  }
}

TEST_CASE("longer windows stay faithful") {
  // Regression for the window layout: with function rows grouped by window
  // position the amalgam has no common normal subgroup at window length two.
  // (Grouping rows the other way concentrates an invariant subgroup on a
  // single window position and faithfulness genuinely fails.)
  const auto inst =
      build_rank2(catalog_group("Dihedral(4)"), catalog_group("Cyclic(2)"), 2);
  CHECK(inst.B.order() == 512);
  CHECK(is_faithful(inst.amalgam));
}

TEST_CASE("hypothesis violations are refused") {
  const PermGroup d4 = catalog_group("Dihedral(4)");
  // Semiprimitive left-hand group: no witness kernel exists.
  CHECK_THROWS_AS(build_rank2(catalog_group("Sym(3)"), catalog_group("Cyclic(2)"), 1),
                  hypothesis_error);
  // Trivial or intransitive right-hand group.
  CHECK_THROWS_AS(build_rank2(d4, PermGroup::trivial(2), 1), hypothesis_error);
  CHECK_THROWS_AS(build_rank2(d4, PermGroup(4, {parse_cycles("(0 1)", 4)}), 1),
                  hypothesis_error);
  // Degenerate window.
  CHECK_THROWS_AS(build_rank2(d4, catalog_group("Cyclic(2)"), 0), hypothesis_error);
}
