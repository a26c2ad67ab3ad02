#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "amalgam/errors.hpp"

namespace amalgam {

enum class ExecMode { kSerial, kParallel };

// Size gates for the exhaustive parts of the verification suites: scans above
// these limits degrade to skipped(cap) rather than running unbounded.
inline constexpr std::uint64_t kScanGate = 1ull << 25;  // predicate evaluations
inline constexpr std::uint64_t kCoreGate = 1ull << 14;  // subgroup size for core scans
inline constexpr std::size_t kTriplePrefix = 128;       // associativity prefix

// kFast skips the quadratic-and-worse exhaustive scans; kFull runs whatever
// fits under the per-check size gates and marks the rest skipped.
enum class VerifyLevel { kFast, kFull };

struct CheckResult {
  bool ok;
  std::uint64_t checked;                     // predicate evaluations performed
  std::optional<std::uint64_t> first_bad;    // least failing index, if any

  bool operator==(const CheckResult& o) const {
    return ok == o.ok && first_bad == o.first_bad;
  }
};

// One verdict of a verification suite.  status is "pass", "fail", or
// "skipped(<reason>)"; detail carries a counterexample or measurement.
struct NamedCheck {
  std::string name;
  std::string status;
  std::string detail;
};

// Collects the verdicts of a verification suite in declaration order.
struct CheckSink {
  std::vector<NamedCheck> out;

  void pass(const std::string& name, std::string detail = "") {
    out.push_back({name, "pass", std::move(detail)});
  }
  void fail(const std::string& name, std::string detail) {
    out.push_back({name, "fail", std::move(detail)});
  }
  void skip(const std::string& name, const std::string& reason,
            std::string detail = "") {
    out.push_back({name, "skipped(" + reason + ")", std::move(detail)});
  }

  // Runs fn, which is expected to record its own verdict; converts a resource
  // cap into a skip and any other exception into a failure.
  template <class Fn>
  void guarded(const std::string& name, Fn&& fn) {
    try {
      fn();
    } catch (const cap_exceeded& e) {
      skip(name, "cap", e.what());
    } catch (const std::exception& e) {
      fail(name, std::string("exception: ") + e.what());
    }
  }
};

// Exhaustive predicate scan over the index range [0, n).  The serial variant
// is the reference implementation: it stops at the first failure.
template <class Pred>
CheckResult check_all_serial(std::uint64_t n, Pred&& pred) {
  for (std::uint64_t i = 0; i < n; ++i)
    if (!pred(i)) return CheckResult{false, i + 1, i};
  return CheckResult{true, n, std::nullopt};
}

// OpenMP variant.  Scans the whole range and reports the least failing index
// so that failing runs agree with the serial reference regardless of thread
// count.  Falls back to the serial scan when built without OpenMP.
template <class Pred>
CheckResult check_all_parallel(std::uint64_t n, Pred&& pred) {
#ifdef _OPENMP
  std::uint64_t bad = n;
#pragma omp parallel for schedule(static) reduction(min : bad)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    if (!pred(static_cast<std::uint64_t>(i))) {
      std::uint64_t u = static_cast<std::uint64_t>(i);
      if (u < bad) bad = u;
    }
  }
  if (bad < n) return CheckResult{false, n, bad};
  return CheckResult{true, n, std::nullopt};
#else
  return check_all_serial(n, std::forward<Pred>(pred));
#endif
}

template <class Pred>
CheckResult check_all(std::uint64_t n, Pred&& pred, ExecMode mode) {
  return mode == ExecMode::kSerial
             ? check_all_serial(n, std::forward<Pred>(pred))
             : check_all_parallel(n, std::forward<Pred>(pred));
}

// Splits a flat index into (i, j) over an n1 x n2 grid, row-major.
inline std::pair<std::uint64_t, std::uint64_t> split2(std::uint64_t idx,
                                                      std::uint64_t n2) {
  return {idx / n2, idx % n2};
}

// Splits a flat index into (i, j, k) over an n1 x n2 x n3 grid, row-major.
inline void split3(std::uint64_t idx, std::uint64_t n2, std::uint64_t n3,
                   std::uint64_t& i, std::uint64_t& j, std::uint64_t& k) {
  k = idx % n3;
  idx /= n3;
  j = idx % n2;
  i = idx / n2;
}

}  // namespace amalgam
