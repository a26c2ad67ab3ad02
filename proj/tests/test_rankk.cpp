#include <string>
#include <vector>

#include "amalgam/catalog.hpp"
#include "amalgam/errors.hpp"
#include "amalgam/rankk.hpp"
#include "doctest.h"

using namespace amalgam;

namespace {

std::vector<PermGroup> named(std::initializer_list<const char*> names) {
  std::vector<PermGroup> out;
  for (const char* n : names) out.push_back(catalog_group(n));
  return out;
}

void require_all_pass(const std::vector<NamedCheck>& checks) {
  for (const NamedCheck& c : checks) {
    CAPTURE(c.name);
    CHECK(c.status == "pass");
  }
}

}  // namespace

TEST_CASE("interleaved actions on the shared window set") {
  const PermGroup s3 = catalog_group("Sym(3)");
  const PermGroup c2 = catalog_group("Cyclic(2)");
  for (std::size_t ell : {std::size_t{1}, std::size_t{2}}) {
    CAPTURE(ell);
    require_all_pass(verify_interleaved(interleave(c2, c2, 0, 0, ell)));
    require_all_pass(verify_interleaved(interleave(s3, c2, 0, 0, ell)));
    require_all_pass(verify_interleaved(interleave(c2, s3, 0, 0, ell)));
  }
}

TEST_CASE("shift advances the window coordinate on the base fiber only") {
  const auto ia =
      interleave(catalog_group("Sym(3)"), catalog_group("Cyclic(2)"), 1, 0, 2);
  CHECK(ia.size() == 12);
  CHECK(ia.omega0() == ia.index(1, 0, 0));
  const Perm sh = ia.shift();
  CHECK(sh(static_cast<Point>(ia.index(1, 0, 0))) == ia.index(1, 0, 1));
  CHECK(sh(static_cast<Point>(ia.index(1, 0, 1))) == ia.index(1, 0, 0));
  for (std::size_t d = 0; d < 3; ++d)
    for (std::size_t l = 0; l < 2; ++l)
      for (std::size_t i = 0; i < 2; ++i)
        if (!(d == 1 && l == 0))
          CHECK(sh(static_cast<Point>(ia.index(d, l, i))) == ia.index(d, l, i));
}

TEST_CASE("three local groups, lead group not regular") {
  const auto inst = build_rankk(named({"Sym(3)", "Cyclic(2)", "Cyclic(2)"}), 1);
  CHECK(inst.source_positions == std::vector<std::size_t>{0, 1, 2});
  CHECK(inst.U.order() == 16);
  CHECK(inst.U_prime.order() == 8);
  CHECK(inst.core->predicted_u() == 16);
  CHECK(inst.core->predicted_u_prime() == 8);
  CHECK(inst.amalgam.borel.order() == 16);
  CHECK(inst.core->predicted_b() == 16);
  CHECK(inst.core->borel_lower_bound() == 16);
  CHECK(inst.amalgam.groups[0].order() == 48);
  CHECK(inst.amalgam.groups[1].order() == 32);
  CHECK(inst.amalgam.groups[2].order() == 32);

  const auto cores = compute_cores(inst);
  CHECK(cores[0].size() == 8);
  CHECK(cores[1].size() == 16);
  CHECK(cores[2].size() == 16);

  require_all_pass(verify_rankk(inst, VerifyLevel::kFull));
}

TEST_CASE("a regular group in front is rotated behind the lead") {
  const auto inst = build_rankk(named({"Cyclic(2)", "Sym(3)", "Cyclic(2)"}), 1);
  CHECK(inst.source_positions == std::vector<std::size_t>{1, 0, 2});
  CHECK(inst.amalgam.groups[0].order() == 48);  // the lead is the symmetric group
  CHECK(inst.amalgam.borel.order() == 16);
  require_all_pass(verify_rankk(inst, VerifyLevel::kFull));
}

TEST_CASE("two non-regular locals sharing the window") {
  const auto inst = build_rankk(named({"Sym(3)", "Sym(3)", "Cyclic(2)"}), 1);
  CHECK(inst.U.order() == 64);
  CHECK(inst.amalgam.borel.order() == 128);
  CHECK(inst.amalgam.groups[0].order() == 384);
  CHECK(inst.amalgam.groups[1].order() == 384);
  CHECK(inst.amalgam.groups[2].order() == 256);
  const auto cores = compute_cores(inst);
  CHECK(cores[0].size() == 64);
  CHECK(cores[1].size() == 64);
  CHECK(cores[2].size() == 128);
  require_all_pass(verify_rankk(inst, VerifyLevel::kFull));
}

TEST_CASE("swapping the two window locals mirrors the core pattern") {
  const auto inst = build_rankk(named({"Sym(3)", "Cyclic(2)", "Sym(3)"}), 1);
  CHECK(inst.source_positions == std::vector<std::size_t>{0, 1, 2});
  CHECK(inst.amalgam.groups[0].order() == 384);
  CHECK(inst.amalgam.groups[1].order() == 256);
  CHECK(inst.amalgam.groups[2].order() == 384);
  const auto cores = compute_cores(inst);
  CHECK(cores[0].size() == 64);
  CHECK(cores[1].size() == 128);
  CHECK(cores[2].size() == 64);
}

TEST_CASE("four local groups") {
  const auto inst =
      build_rankk(named({"Sym(3)", "Cyclic(2)", "Cyclic(2)", "Cyclic(2)"}), 1);
  CHECK(inst.amalgam.rank() == 4);
  CHECK(inst.amalgam.borel.order() == 16);
  CHECK(inst.amalgam.groups[3].order() == 32);
  require_all_pass(verify_rankk(inst, VerifyLevel::kFull));
}

TEST_CASE("window growth drives the Borel subgroup") {
  const auto inst = build_rankk(named({"Sym(3)", "Cyclic(2)", "Cyclic(2)"}), 2);
  CHECK(inst.amalgam.borel.order() == 256);
  CHECK(inst.core->borel_lower_bound() == 256);
  // Bounded checks only; the exhaustive suite at this size runs elsewhere.
  for (const NamedCheck& c : verify_rankk(inst, VerifyLevel::kFast)) {
    CAPTURE(c.name);
    CHECK(c.status != "fail");
  }
}

TEST_CASE("hypothesis violations are refused in a fixed order") {
  CHECK_THROWS_AS(build_rankk(named({"Sym(3)", "Cyclic(2)"}), 1), hypothesis_error);
  CHECK_THROWS_AS(build_rankk(named({"Sym(3)", "Cyclic(2)", "Cyclic(2)"}), 0),
                  hypothesis_error);
  CHECK_THROWS_AS(
      build_rankk({catalog_group("Sym(3)"), PermGroup::trivial(2),
                   catalog_group("Cyclic(2)")},
                  1),
      hypothesis_error);
  try {
    build_rankk(named({"Cyclic(2)", "Cyclic(3)", "Klein4"}), 1);
    CHECK(false);
  } catch (const hypothesis_error& e) {
    CHECK(std::string(e.what()).find("regular") != std::string::npos);
  }
}
