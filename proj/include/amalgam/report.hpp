#pragma once

// Report engine behind the command-line front end: each run_* function
// resolves its group inputs, drives the corresponding construction and
// verification suite, and produces one machine-readable JSON report plus a
// process exit code.  The CLI binary is a thin argument-parsing shell over
// these functions, so the full behavior is testable in-process.

#include <cstdint>
#include <string>
#include <vector>

#include "amalgam/checks.hpp"
#include "amalgam/perm_group.hpp"
#include "json.hpp"

namespace amalgam {

using ReportJson = nlohmann::ordered_json;

// Bumped whenever a field changes meaning; consumers key on it.
inline constexpr const char* kReportSchema = "amalgam-report/1";

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;           // everything requested passed
inline constexpr int kExitCheckFailure = 1; // some verification verdict failed
inline constexpr int kExitRefusal = 2;      // input violates a construction hypothesis
inline constexpr int kExitCap = 3;          // resource cap exceeded
inline constexpr int kExitParse = 4;        // malformed group input or flag value

// Brute-force faithfulness in table rows runs only when the Borel subgroup
// is at most this large; beyond it the verdict is skipped(cap).
inline constexpr std::uint64_t kTableFaithfulGate = 1u << 12;

// Orders in table rows are confirmed by enumeration up to this Borel size;
// beyond it the row carries the proven closed-form values and is marked
// measured=false.
inline constexpr std::uint64_t kTableEnumGate = 1u << 14;

// Core orders in build reports are computed only up to this Borel size.
inline constexpr std::uint64_t kCoreOrderGate = 1u << 13;

struct ReportOptions {
  VerifyLevel level = VerifyLevel::kFull;
  ExecMode mode = ExecMode::kSerial;
  std::uint64_t cap = kDefaultCap;
};

struct RunOutcome {
  int exit_code = kExitOk;
  ReportJson report;
};

// Group properties with a structural witness when not semiprimitive.
RunOutcome run_analyze(const std::string& group, const ReportOptions& opt = {});

// Two-group construction: full instance orders, core orders, and the
// verification suite.  Refuses a semiprimitive left group.
RunOutcome run_build2(const std::string& left, const std::string& right,
                      std::size_t ell, const ReportOptions& opt = {});

// k-group construction for k >= 3; refuses when every local group is regular.
RunOutcome run_buildk(const std::vector<std::string>& groups, std::size_t ell,
                      const ReportOptions& opt = {});

// One row per window length in [ell_lo, ell_hi]: |M|, |C|, |B| and a
// brute-force faithfulness verdict under the gates above.  An empty range
// yields an empty table and exit 0.
RunOutcome run_table(const std::string& left, const std::string& right,
                     std::size_t ell_lo, std::size_t ell_hi,
                     const ReportOptions& opt = {});

// Ball of the given radius in the tree acted on by the two-group amalgam:
// vertex/edge lists, per-vertex local-action verdicts, root-edge stabilizer
// report, the verification suite, and a DOT rendering.
RunOutcome run_tree(const std::string& left, const std::string& right,
                    std::size_t ell, std::size_t radius,
                    const ReportOptions& opt = {});

// Tab-separated rendering of a successful table report: header line plus one
// line per row (an empty table renders as the header alone).
std::string to_tsv(const ReportJson& table_report);

// Canonical byte form used for determinism comparisons: the timing field is
// dropped and the rest is dumped with two-space indentation and a trailing
// newline.  Identical inputs and flags produce identical canonical forms.
std::string canonical_form(ReportJson report);

}  // namespace amalgam
