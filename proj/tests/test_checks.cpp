#include <cstdint>
#include <stdexcept>

#include "amalgam/checks.hpp"
#include "amalgam/errors.hpp"
#include "doctest.h"

using namespace amalgam;

TEST_CASE("serial and parallel scans agree") {
  auto even = [](std::uint64_t i) { return i % 2 == 0 || i < 5; };
  SUBCASE("all-pass range") {
    auto yes = [](std::uint64_t) { return true; };
    const CheckResult s = check_all_serial(1000, yes);
    const CheckResult p = check_all_parallel(1000, yes);
    CHECK(s.ok);
    CHECK(s == p);
    CHECK(s.checked == 1000);
  }
  SUBCASE("failing range reports the least bad index in both modes") {
    // Failures at 5, 7, 9, ...; both kernels must agree on 5.
    const CheckResult s = check_all_serial(1000, even);
    const CheckResult p = check_all_parallel(1000, even);
    CHECK_FALSE(s.ok);
    CHECK(s.first_bad == 5);
    CHECK(s == p);
  }
  SUBCASE("empty range passes") {
    auto no = [](std::uint64_t) { return false; };
    CHECK(check_all(0, no, ExecMode::kSerial).ok);
    CHECK(check_all(0, no, ExecMode::kParallel).ok);
  }
}

TEST_CASE("flat index splitting") {
  const auto [i, j] = split2(7, 3);
  CHECK(i == 2);
  CHECK(j == 1);
  std::uint64_t a, b, c;
  split3(23, 3, 4, a, b, c);
  CHECK(a * 12 + b * 4 + c == 23);
  CHECK(b < 3);
  CHECK(c < 4);
}

TEST_CASE("check sink records verdicts and converts exceptions") {
  CheckSink sink;
  sink.pass("first", "ok");
  sink.fail("second", "broken at #3");
  sink.skip("third", "cap");
  sink.guarded("fourth", [] { throw cap_exceeded("too big", 99); });
  sink.guarded("fifth", [] { throw std::runtime_error("boom"); });
  REQUIRE(sink.out.size() == 5);
  CHECK(sink.out[0].status == "pass");
  CHECK(sink.out[1].status == "fail");
  CHECK(sink.out[2].status == "skipped(cap)");
  CHECK(sink.out[3].status == "skipped(cap)");
  CHECK(sink.out[4].status == "fail");
  CHECK(sink.out[4].detail == "exception: boom");
}
