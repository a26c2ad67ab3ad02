#include <stdexcept>
#include <string>
#include <vector>

#include "amalgam/errors.hpp"
#include "amalgam/perm.hpp"
#include "doctest.h"

using namespace amalgam;

TEST_CASE("composition is left-to-right") {
  const Perm four = parse_cycles("(0 1 2 3)", 4);
  // Squaring the 4-cycle gives the double transposition.
  CHECK(compose(four, four) == parse_cycles("(0 2)(1 3)", 4));
  // A transposition followed by the 4-cycle, worked out point by point.
  const Perm t = parse_cycles("(1 3)", 4);
  CHECK(compose(t, four).images() == std::vector<Point>{1, 0, 3, 2});
  CHECK(compose(four, t).images() == std::vector<Point>{3, 2, 1, 0});
}

TEST_CASE("inverse and conjugation") {
  const Perm four = parse_cycles("(0 1 2 3)", 4);
  CHECK(compose(four, four.inverse()).is_identity());
  CHECK(four.inverse() == parse_cycles("(0 3 2 1)", 4));
  // Conjugation relabels the moved points by the conjugator.
  const Perm x = parse_cycles("(0 1)", 3);
  const Perm g = parse_cycles("(0 1 2)", 3);
  CHECK(conjugate(x, g) == parse_cycles("(1 2)", 3));
  CHECK(conjugate(x, g.inverse()) == parse_cycles("(0 2)", 3));
}

TEST_CASE("cycle form round trip") {
  const Perm p = parse_cycles("(0 2)(1 3)", 4);
  CHECK(p.images() == std::vector<Point>{2, 3, 0, 1});
  CHECK(p.cycles() == "(0 2)(1 3)");
  CHECK(Perm::identity(5).cycles() == "()");
  CHECK(parse_cycles("()", 3).is_identity());
  // Fixed points are omitted from the cycle form.
  CHECK(parse_cycles("(1 3)", 5).cycles() == "(1 3)");
}

TEST_CASE("cycle parsing rejects malformed input") {
  CHECK_THROWS_AS(parse_cycles("(0 9)", 4), parse_error);
  CHECK_THROWS_AS(parse_cycles("(0 1)(1 2)", 4), parse_error);  // repeated point
  CHECK_THROWS_AS(parse_cycles("(0 1", 4), parse_error);
  CHECK_THROWS_AS(parse_cycles("0 1)", 4), parse_error);
  try {
    parse_cycles("(0 x)", 4, 7);
    CHECK(false);
  } catch (const parse_error& e) {
    CHECK(e.line() == 7);  // caller's line number is preserved
    CHECK(std::string(e.what()).find("line 7") != std::string::npos);
  }
}

TEST_CASE("image constructor validates bijectivity") {
  CHECK_THROWS_AS(Perm(std::vector<Point>{0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Perm(std::vector<Point>{0, 3}), std::invalid_argument);
}

TEST_CASE("encoding is fixed-width and ordered like the images") {
  const Perm a = parse_cycles("(0 1)", 3);
  const Perm b = parse_cycles("(1 2)", 3);
  CHECK(a.encoded() != b.encoded());
  CHECK(a.encoded().size() == b.encoded().size());
  CHECK((a < b) == (a.images() < b.images()));
}
