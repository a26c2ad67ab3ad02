// Command-line front end over the report engine: parses group inputs and
// flags, runs one subcommand per process, prints the machine-readable report,
// and exits 0 on success, 1 on a failed verification verdict, 2 on a refused
// hypothesis, 3 on a resource cap, 4 on a parse error.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "amalgam/report.hpp"

namespace {

using amalgam::kExitCheckFailure;
using amalgam::kExitOk;
using amalgam::kExitParse;
using amalgam::ReportJson;
using amalgam::RunOutcome;

// Successful and check-failure reports go to stdout in the requested format;
// refusals, caps, and parse errors go to stderr as JSON.
int emit(const RunOutcome& out, const std::string& format) {
  if (out.exit_code == kExitOk || out.exit_code == kExitCheckFailure) {
    if (format == "tsv")
      std::cout << amalgam::to_tsv(out.report);
    else if (format == "dot")
      std::cout << out.report["dot"].get<std::string>();
    else
      std::cout << out.report.dump(2) << "\n";
  } else {
    std::cerr << out.report.dump(2) << "\n";
  }
  return out.exit_code;
}

int range_error(const std::string& value) {
  ReportJson err;
  err["schema"] = amalgam::kReportSchema;
  err["command"] = "table";
  err["error"] = ReportJson{
      {"kind", "parse"},
      {"message", "--ell-range must have the form A..B, got '" + value + "'"}};
  std::cerr << err.dump(2) << "\n";
  return kExitParse;
}

bool parse_uint(const std::string& s, std::size_t& out) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  try {
    out = std::stoull(s);
  } catch (...) {
    return false;
  }
  return true;
}

bool parse_range(const std::string& s, std::size_t& lo, std::size_t& hi) {
  auto pos = s.find("..");
  if (pos == std::string::npos) return false;
  return parse_uint(s.substr(0, pos), lo) && parse_uint(s.substr(pos + 2), hi);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Finite-group amalgam workbench: analyzes permutation groups, builds "
      "two-group and k-group amalgams with growing common subgroups, tabulates "
      "their orders, and explores the tree the amalgam acts on.  Group inputs "
      "are catalog names (Sym(n), Alt(n), Cyclic(n), Dihedral(n), Klein4) or "
      "@file in the generator text format."};
  app.require_subcommand(1);

  std::string group, left, right, format, verify = "full", range_text;
  std::vector<std::string> groups;
  std::size_t ell = 1, radius = 2;
  std::uint64_t cap = amalgam::kDefaultCap;
  bool parallel = false;

  auto add_common = [&](CLI::App* sub, bool with_verify) {
    sub->add_option("--cap", cap, "element cap for enumerations");
    if (with_verify)
      sub->add_option("--verify", verify, "verification depth (full|fast)")
          ->check(CLI::IsMember({"full", "fast"}));
    sub->add_flag("--parallel", parallel,
                  "run the scan kernels through the parallel backend");
  };

  CLI::App* analyze = app.add_subcommand(
      "analyze", "report transitivity, regularity, and semiprimitivity");
  analyze->add_option("group", group, "group to analyze")->required();
  add_common(analyze, false);

  CLI::App* build2 = app.add_subcommand(
      "build2", "build and verify the two-group amalgam for L and R");
  build2->add_option("L", left, "left group (transitive, not semiprimitive)")
      ->required();
  build2->add_option("R", right, "right group (nontrivial, transitive)")
      ->required();
  build2->add_option("--ell", ell, "window length (default 1)");
  add_common(build2, true);

  CLI::App* buildk = app.add_subcommand(
      "buildk", "build and verify the k-group amalgam, k >= 3");
  buildk->add_option("groups", groups, "local groups (some must be non-regular)")
      ->expected(-3);
  buildk->add_option("--ell", ell, "window length (default 1)");
  add_common(buildk, true);

  CLI::App* table = app.add_subcommand(
      "table", "tabulate |M|, |C|, |B| over a range of window lengths");
  table->add_option("L", left, "left group")->required();
  table->add_option("R", right, "right group")->required();
  table->add_option("--ell-range", range_text, "window length range A..B")
      ->required();
  table->add_option("--format", format, "output format (tsv|json)")
      ->check(CLI::IsMember({"tsv", "json"}));
  add_common(table, true);

  CLI::App* tree = app.add_subcommand(
      "tree", "export a ball of the tree the two-group amalgam acts on");
  tree->add_option("L", left, "left group")->required();
  tree->add_option("R", right, "right group")->required();
  tree->add_option("--ell", ell, "window length (default 1)");
  tree->add_option("--radius", radius, "ball radius (default 2)");
  tree->add_option("--format", format, "output format (json|dot)")
      ->check(CLI::IsMember({"json", "dot"}));
  add_common(tree, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  amalgam::ReportOptions opt;
  opt.cap = cap;
  opt.level =
      verify == "fast" ? amalgam::VerifyLevel::kFast : amalgam::VerifyLevel::kFull;
  opt.mode =
      parallel ? amalgam::ExecMode::kParallel : amalgam::ExecMode::kSerial;

  if (app.got_subcommand(analyze))
    return emit(amalgam::run_analyze(group, opt), "json");
  if (app.got_subcommand(build2))
    return emit(amalgam::run_build2(left, right, ell, opt), "json");
  if (app.got_subcommand(buildk))
    return emit(amalgam::run_buildk(groups, ell, opt), "json");
  if (app.got_subcommand(table)) {
    std::size_t lo = 0, hi = 0;
    if (!parse_range(range_text, lo, hi)) return range_error(range_text);
    return emit(amalgam::run_table(left, right, lo, hi, opt),
                format.empty() ? "tsv" : format);
  }
  if (app.got_subcommand(tree))
    return emit(amalgam::run_tree(left, right, ell, radius, opt),
                format.empty() ? "json" : format);
  return kExitParse;
}
