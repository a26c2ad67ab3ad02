#include "amalgam/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "amalgam/catalog.hpp"
#include "amalgam/errors.hpp"
#include "amalgam/group_spec.hpp"
#include "amalgam/rank2.hpp"
#include "amalgam/rankk.hpp"
#include "amalgam/tree.hpp"
#include "amalgam/witness.hpp"

namespace amalgam {
namespace {

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

const char* level_name(VerifyLevel l) {
  return l == VerifyLevel::kFull ? "full" : "fast";
}

ReportJson gens_json(const std::vector<Perm>& gens) {
  ReportJson a = ReportJson::array();
  for (const Perm& p : gens) a.push_back(p.cycles());
  return a;
}

ReportJson group_json(const std::string& arg, const PermGroup& g) {
  ReportJson j;
  j["name"] = arg;
  j["degree"] = g.degree();
  j["order"] = g.order();
  j["generators"] = gens_json(g.generators());
  return j;
}

ReportJson checks_json(const std::vector<NamedCheck>& checks) {
  ReportJson a = ReportJson::array();
  for (const NamedCheck& c : checks)
    a.push_back(ReportJson{{"name", c.name}, {"status", c.status}, {"detail", c.detail}});
  return a;
}

ReportJson summary_json(const std::vector<NamedCheck>& checks) {
  std::size_t pass = 0, fail = 0, skipped = 0;
  for (const NamedCheck& c : checks) {
    if (c.status == "pass")
      ++pass;
    else if (c.status == "fail")
      ++fail;
    else
      ++skipped;
  }
  return ReportJson{{"pass", pass}, {"fail", fail}, {"skipped", skipped}};
}

bool any_fail(const std::vector<NamedCheck>& checks) {
  for (const NamedCheck& c : checks)
    if (c.status == "fail") return true;
  return false;
}

// Shared shell: stamps schema/command, converts the error taxonomy into exit
// codes, and appends the timing field last so the canonical form is a prefix.
template <class Fn>
RunOutcome guarded_run(const char* command, Fn&& body) {
  auto t0 = std::chrono::steady_clock::now();
  RunOutcome out;
  out.report["schema"] = kReportSchema;
  out.report["command"] = command;
  try {
    out.exit_code = body(out.report);
  } catch (const parse_error& e) {
    out.report["error"] = ReportJson{{"kind", "parse"},
                                     {"message", e.what()},
                                     {"line", e.line()},
                                     {"column", e.column()}};
    out.exit_code = kExitParse;
  } catch (const hypothesis_error& e) {
    out.report["error"] =
        ReportJson{{"kind", "hypothesis refusal"}, {"message", e.what()}};
    out.exit_code = kExitRefusal;
  } catch (const cap_exceeded& e) {
    out.report["error"] = ReportJson{
        {"kind", "resource cap"}, {"message", e.what()}, {"cap", e.cap()}};
    out.exit_code = kExitCap;
  }
  out.report["timing_ms"] = elapsed_ms(t0);
  return out;
}

ReportJson rank2_witness_json(const WitnessData& w) {
  ReportJson j;
  j["kernel_order"] = w.K.order();
  j["kernel_generators"] = gens_json(w.K.generators());
  j["cells"] = ReportJson(w.cells.cells);
  j["base_point"] = w.lambda;
  j["base_cell"] = w.delta;
  j["L_lambda_order"] = w.L_lambda.order();
  j["K_lambda_order"] = w.K_lambda.order();
  j["cell_group_order"] = w.S.order();
  j["S_delta_order"] = w.S_delta.order();
  return j;
}

ReportJson rank2_cores_json(const Rank2Instance& inst, const ReportOptions& opt) {
  if (opt.level != VerifyLevel::kFull) return "skipped(fast)";
  try {
    if (inst.B.order(opt.cap) > kCoreOrderGate) return "skipped(cap)";
    Embed<WreathCtx> ident = [](const WreathElt& x) { return x; };
    ReportJson c;
    c["C_in_A"] = core_in(inst.A, ident, inst.C.elements(opt.cap)).size();
    c["B_in_P1"] =
        core_in(inst.P1, inst.amalgam.embeddings[0], inst.B.elements(opt.cap)).size();
    c["B_in_P2"] =
        core_in(inst.P2, inst.amalgam.embeddings[1], inst.B.elements(opt.cap)).size();
    return c;
  } catch (const cap_exceeded&) {
    return "skipped(cap)";
  }
}

ReportJson rankk_cores_json(const RankKInstance& inst, const ReportOptions& opt) {
  if (opt.level != VerifyLevel::kFull) return "skipped(fast)";
  try {
    if (inst.core->predicted_b() > kCoreOrderGate) return "skipped(cap)";
    auto cores = compute_cores(inst, opt.cap);
    const RankKCtx& cx = inst.amalgam.borel.ctx();
    ReportJson sizes = ReportJson::array();
    for (const auto& c : cores) sizes.push_back(c.size());
    std::unordered_set<std::string> meet;
    for (const auto& e : cores.front()) meet.insert(cx.encode(e));
    for (std::size_t i = 1; i < cores.size(); ++i) {
      std::unordered_set<std::string> next;
      for (const auto& e : cores[i]) {
        std::string key = cx.encode(e);
        if (meet.count(key)) next.insert(std::move(key));
      }
      meet = std::move(next);
    }
    ReportJson c;
    c["orders"] = sizes;
    c["intersection_order"] = meet.size();
    return c;
  } catch (const cap_exceeded&) {
    return "skipped(cap)";
  }
}

}  // namespace

RunOutcome run_analyze(const std::string& group, const ReportOptions& opt) {
  return guarded_run("analyze", [&](ReportJson& j) {
    j["input"] = ReportJson{{"group", group}, {"cap", opt.cap}};
    PermGroup g = resolve_group(group);
    j["group"] = group_json(group, g);
    ReportJson props;
    bool transitive = g.is_transitive();
    props["transitive"] = transitive;
    props["regular"] = g.is_regular();
    props["semiregular"] = g.is_semiregular();
    props["primitive"] = "unchecked";
    if (!transitive) {
      props["semiprimitive"] = "undefined(intransitive)";
      j["properties"] = std::move(props);
      return kExitOk;
    }
    SemiprimitivityVerdict v = is_semiprimitive(g, opt.cap);
    props["semiprimitive"] = v.semiprimitive;
    j["properties"] = std::move(props);
    if (!v.semiprimitive) {
      auto w = find_witness(g, opt.cap);
      if (!w)
        throw std::logic_error(
            "witness search disagrees with the semiprimitivity verdict");
      ReportJson wj;
      wj["meaning"] = "normal subgroup that is neither transitive nor semiregular";
      wj["order"] = w->K.order();
      wj["generators"] = gens_json(w->K.generators());
      wj["orbits"] = ReportJson(w->cells.cells);
      wj["base_point"] = w->lambda;
      wj["base_point_stabilizer_order"] = w->K_lambda.order();
      j["witness"] = std::move(wj);
    }
    return kExitOk;
  });
}

RunOutcome run_build2(const std::string& left, const std::string& right,
                      std::size_t ell, const ReportOptions& opt) {
  return guarded_run("build2", [&](ReportJson& j) {
    j["input"] = ReportJson{{"L", left},
                            {"R", right},
                            {"ell", ell},
                            {"verify", level_name(opt.level)},
                            {"cap", opt.cap}};
    PermGroup L = resolve_group(left);
    PermGroup R = resolve_group(right);
    j["L"] = group_json(left, L);
    j["R"] = group_json(right, R);
    Rank2Instance inst = build_rank2(L, R, ell, opt.cap);
    const Rank2Core& core = *inst.core;
    j["witness"] = rank2_witness_json(core.witness());
    j["parameters"] = ReportJson{{"ell", ell},
                                 {"function_rows", core.omega().m},
                                 {"cells", core.n_cells()},
                                 {"R1_order", core.R1().order()}};
    ReportJson orders;
    orders["M"] = inst.M.order(opt.cap);
    orders["predicted_M"] = core.predicted_M();
    orders["A"] = inst.A.order(opt.cap);
    orders["C"] = inst.C.order(opt.cap);
    orders["P1"] = inst.P1.order(opt.cap);
    orders["P2"] = inst.P2.order(opt.cap);
    orders["B"] = inst.B.order(opt.cap);
    j["orders"] = std::move(orders);
    j["cores"] = rank2_cores_json(inst, opt);
    auto checks = verify_rank2(inst, opt.level, opt.mode, opt.cap);
    j["checks"] = checks_json(checks);
    j["summary"] = summary_json(checks);
    return any_fail(checks) ? kExitCheckFailure : kExitOk;
  });
}

RunOutcome run_buildk(const std::vector<std::string>& groups, std::size_t ell,
                      const ReportOptions& opt) {
  return guarded_run("buildk", [&](ReportJson& j) {
    j["input"] = ReportJson{{"groups", groups},
                            {"ell", ell},
                            {"verify", level_name(opt.level)},
                            {"cap", opt.cap}};
    std::vector<PermGroup> locals;
    ReportJson gj = ReportJson::array();
    for (const std::string& arg : groups) {
      PermGroup g = resolve_group(arg);
      gj.push_back(group_json(arg, g));
      locals.push_back(std::move(g));
    }
    j["groups"] = std::move(gj);
    RankKInstance inst = build_rankk(std::move(locals), ell, opt.cap);
    const RankKCore& core = *inst.core;
    j["arrangement"] =
        ReportJson{{"source_positions", inst.source_positions},
                   {"lead", groups[inst.source_positions[0]]}};
    j["window"] = ReportJson{{"first_degree", core.window().m2()},
                             {"second_degree", core.window().m3()},
                             {"ell", ell},
                             {"size", core.window().size()}};
    ReportJson orders;
    orders["V"] = core.v_elements().size();
    orders["U"] = inst.U.order(opt.cap);
    orders["predicted_U"] = core.predicted_u();
    orders["U_prime"] = inst.U_prime.order(opt.cap);
    orders["predicted_U_prime"] = core.predicted_u_prime();
    orders["B"] = inst.amalgam.borel.order(opt.cap);
    orders["predicted_B"] = core.predicted_b();
    orders["borel_lower_bound"] = core.borel_lower_bound();
    ReportJson p_orders = ReportJson::array();
    ReportJson p_predicted = ReportJson::array();
    for (std::size_t i = 0; i < inst.amalgam.groups.size(); ++i) {
      p_orders.push_back(inst.amalgam.groups[i].order(opt.cap));
      p_predicted.push_back(core.predicted_p(i));
    }
    orders["P"] = std::move(p_orders);
    orders["predicted_P"] = std::move(p_predicted);
    j["orders"] = std::move(orders);
    j["cores"] = rankk_cores_json(inst, opt);
    auto checks = verify_rankk(inst, opt.level, opt.mode, opt.cap);
    j["checks"] = checks_json(checks);
    j["summary"] = summary_json(checks);
    return any_fail(checks) ? kExitCheckFailure : kExitOk;
  });
}

RunOutcome run_table(const std::string& left, const std::string& right,
                     std::size_t ell_lo, std::size_t ell_hi,
                     const ReportOptions& opt) {
  return guarded_run("table", [&](ReportJson& j) {
    j["input"] = ReportJson{{"L", left},
                            {"R", right},
                            {"ell_range", ReportJson::array({ell_lo, ell_hi})},
                            {"verify", level_name(opt.level)},
                            {"cap", opt.cap}};
    PermGroup L = resolve_group(left);
    PermGroup R = resolve_group(right);
    j["L"] = group_json(left, L);
    j["R"] = group_json(right, R);
    j["columns"] = ReportJson::array({"ell", "M", "C", "B", "faithful"});
    ReportJson rows = ReportJson::array();
    bool failed = false;
    for (std::size_t ell = ell_lo; ell <= ell_hi && ell_lo <= ell_hi; ++ell) {
      Rank2Instance inst = build_rank2(L, R, ell, opt.cap);
      const Rank2Core& core = *inst.core;
      std::uint64_t pm = core.predicted_M();
      std::uint64_t pc = sat_mul(pm, core.lambda_elements().size());
      std::uint64_t pb = sat_mul(pc, core.R1().order());
      ReportJson row;
      row["ell"] = ell;
      bool measured = pb <= kTableEnumGate;
      if (measured) {
        row["M"] = inst.M.order(opt.cap);
        row["C"] = inst.C.order(opt.cap);
        row["B"] = inst.B.order(opt.cap);
      } else {
        row["M"] = pm;
        row["C"] = pc;
        row["B"] = pb;
      }
      row["measured"] = measured;
      if (opt.level != VerifyLevel::kFull) {
        row["faithful"] = "skipped(fast)";
      } else if (!measured || pb > kTableFaithfulGate) {
        row["faithful"] = "skipped(cap)";
      } else {
        std::size_t fixpoint = largest_common_normal(inst.amalgam, opt.cap).size();
        row["faithful"] = fixpoint == 1 ? "pass" : "fail";
        row["fixpoint_order"] = fixpoint;
        if (fixpoint != 1) failed = true;
      }
      rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return failed ? kExitCheckFailure : kExitOk;
  });
}

RunOutcome run_tree(const std::string& left, const std::string& right,
                    std::size_t ell, std::size_t radius,
                    const ReportOptions& opt) {
  return guarded_run("tree", [&](ReportJson& j) {
    j["input"] = ReportJson{{"L", left},
                            {"R", right},
                            {"ell", ell},
                            {"radius", radius},
                            {"cap", opt.cap}};
    PermGroup L = resolve_group(left);
    PermGroup R = resolve_group(right);
    j["L"] = group_json(left, L);
    j["R"] = group_json(right, R);
    Rank2Instance inst = build_rank2(L, R, ell, opt.cap);
    TreeBall ball(inst.amalgam, radius,
                  std::min<std::uint64_t>(opt.cap, kTreeVertexCap));
    ReportJson bj;
    bj["radius"] = radius;
    bj["vertex_count"] = ball.vertices().size();
    bj["edge_count"] = ball.edges().size();
    ReportJson spheres = ReportJson::array();
    for (std::size_t d = 0; d <= radius; ++d) spheres.push_back(ball.sphere(d).size());
    bj["sphere_sizes"] = std::move(spheres);
    bj["interior_valencies"] =
        ReportJson::array({ball.arith().degree(1), ball.arith().degree(2)});
    j["ball"] = std::move(bj);
    ReportJson vj = ReportJson::array();
    for (std::size_t v = 0; v < ball.vertices().size(); ++v) {
      const TreeVertex& tv = ball.vertices()[v];
      vj.push_back(ReportJson{{"id", v},
                              {"type", tv.type},
                              {"word", tv.word},
                              {"depth", ball.depth(v)},
                              {"interior", ball.is_interior(v)},
                              {"neighbors", ball.neighbors(v)}});
    }
    j["vertices"] = std::move(vj);
    ReportJson ej = ReportJson::array();
    for (const auto& [a, b] : ball.edges()) ej.push_back(ReportJson::array({a, b}));
    j["edges"] = std::move(ej);
    bool bad_local = false;
    ReportJson actions = ReportJson::array();
    for (std::size_t v = 0; v < ball.vertices().size(); ++v) {
      if (!ball.is_interior(v)) continue;
      int type = ball.vertices()[v].type;
      PermGroup act = ball.local_action(v);
      auto conj = perm_isomorphic(act, ball.arith().coset_image(type));
      if (!conj) bad_local = true;
      actions.push_back(
          ReportJson{{"vertex", v},
                     {"type", type},
                     {"degree", act.degree()},
                     {"order", act.order()},
                     {"verdict", conj ? "isomorphic to expected"
                                      : "fail(not isomorphic to expected)"}});
    }
    j["local_actions"] = std::move(actions);
    RootEdgeReport rep = ball.root_edge_stabilizer_action();
    j["root_edge"] = ReportJson{{"stabilizer_order", rep.borel_order},
                                {"stabilizer_is_borel", rep.stabilizer_is_borel},
                                {"sphere_orbit_sizes", rep.sphere_orbit_sizes}};
    auto checks = verify_tree(ball);
    j["checks"] = checks_json(checks);
    j["summary"] = summary_json(checks);
    j["dot"] = ball.to_dot();
    return (any_fail(checks) || bad_local) ? kExitCheckFailure : kExitOk;
  });
}

std::string to_tsv(const ReportJson& table_report) {
  std::string out = "ell\tM\tC\tB\tfaithful\n";
  if (!table_report.contains("rows")) return out;
  for (const ReportJson& row : table_report["rows"]) {
    out += std::to_string(row["ell"].get<std::uint64_t>());
    out += '\t';
    out += std::to_string(row["M"].get<std::uint64_t>());
    out += '\t';
    out += std::to_string(row["C"].get<std::uint64_t>());
    out += '\t';
    out += std::to_string(row["B"].get<std::uint64_t>());
    out += '\t';
    out += row["faithful"].get<std::string>();
    out += '\n';
  }
  return out;
}

std::string canonical_form(ReportJson report) {
  report.erase("timing_ms");
  return report.dump(2) + "\n";
}

}  // namespace amalgam
