#include "handsyn/commands.hpp"

#include <iostream>

#include <nlohmann/json.hpp>

#include "handsyn/io.hpp"

namespace handsyn {

using nlohmann::json;

int cmd_enumerate(int m, int b, int eLo, int eHi, const std::string& outPath) {
  if (m < 2 || b < 1 || eLo > eHi || eHi < b) {
    std::cerr << "enumerate: invalid query (need m >= 2, 1 <= b, b <= e range)\n";
    return kInputError;
  }
  Atlas atlas = topology_search({m, b, eLo, eHi});
  json out = atlas_to_json(atlas);
  out["manifest"] = make_manifest(
      "enumerate", {{"m", m}, {"b", b}, {"e_lo", eLo}, {"e_hi", eHi}}, 0);
  out["table"] = atlas_table(atlas);
  if (!outPath.empty()) write_json(outPath, out);
  std::cout << atlas_table(atlas);
  if (!atlas.feasible) return kInputError;
  return kOk;
}

int cmd_solvability(const std::string& topology, const std::string& outPath) {
  TreeTopology t;
  try {
    t = parse_notation(topology);
  } catch (const std::exception& e) {
    std::cerr << "solvability: " << e.what() << "\n";
    return kInputError;
  }
  SolvabilityReport report = is_solvable(t);
  json out = report_to_json(t, report);
  out["manifest"] = make_manifest("solvability", {{"topology", topology}}, 0);
  if (!outPath.empty()) write_json(outPath, out);
  std::cout << format_notation_r(t) << ": "
            << (report.solvable ? "Solvable m = " + report.M.str()
                                : report.unconstrained ? "Unconstrained (no finite task)"
                                                       : "Not solvable") << "\n";
  for (const Violation& v : report.violations)
    std::cout << "  overconstrained subgraph " << v.notation << " (m = " << v.m.str()
              << ")\n";
  return report.solvable ? kOk : kNegativeVerdict;
}

int cmd_taskgen(const std::string& topology, int mp, const std::vector<int>& twistPositions,
                const std::vector<int>& accelPositions, std::uint64_t seed,
                const std::string& outPath, const std::string& groundTruthPath) {
  TreeTopology t;
  try {
    t = parse_notation(topology);
  } catch (const std::exception& e) {
    std::cerr << "taskgen: " << e.what() << "\n";
    return kInputError;
  }
  std::vector<int> tw, ac;
  for (int k : twistPositions) tw.push_back(k - 1);
  for (int k : accelPositions) ac.push_back(k - 1);
  try {
    auto [task, cfg] = generate_task(t, mp, tw, ac, seed);
    json inputs{{"topology", topology},
                {"mp", mp},
                {"twist_positions", twistPositions},
                {"accel_positions", accelPositions}};
    json out = task_to_json(task);
    out["topology"] = format_notation(t);
    out["manifest"] = make_manifest("taskgen", inputs, seed);
    if (!outPath.empty()) write_json(outPath, out);
    if (!groundTruthPath.empty()) {
      json gt = configuration_to_json(cfg);
      gt["topology"] = format_notation(t);
      gt["manifest"] = make_manifest("taskgen --ground-truth", inputs, seed);
      write_json(groundTruthPath, gt);
    }
    std::cout << "task: " << task.positions.size() << " branches, " << mp
              << " positions each\n";
  } catch (const std::exception& e) {
    std::cerr << "taskgen: " << e.what() << "\n";
    return kInputError;
  }
  return kOk;
}

int cmd_synthesize(const std::string& topology, const std::string& taskPath, int runs,
                   std::uint64_t seed, const SolverConfig& config,
                   const std::string& outPath) {
  if (runs < 1) {
    std::cerr << "synthesize: need at least one run\n";
    return kInputError;
  }
  TreeTopology t;
  Task task;
  try {
    t = parse_notation(topology);
    task = task_from_json(read_json(taskPath));
  } catch (const std::exception& e) {
    std::cerr << "synthesize: " << e.what() << "\n";
    return kInputError;
  }
  FKProgram prog = build_fk(t);
  if (static_cast<int>(task.positions.size()) != prog.tcpCount) {
    std::cerr << "synthesize: task has " << task.positions.size() << " branches, topology "
              << format_notation(t) << " has " << prog.tcpCount << "\n";
    return kInputError;
  }

  json runRecords = json::array();
  bool anyConverged = false;
  try {
    for (int run = 1; run <= runs; ++run) {
      SolverConfig cfg = config;
      cfg.seed = seed + static_cast<std::uint64_t>(run - 1);
      SynthesisResult result = solve(task, t, cfg);
      anyConverged = anyConverged || result.converged;
      json rec = result_to_json(result, t);
      rec["run"] = run;
      rec["verification_error"] = verify(result, task, prog);
      runRecords.push_back(std::move(rec));
      std::cout << "run " << run << ": final error " << result.finalError << ", iterations "
                << result.iterations << ", " << result.wallTime << " s"
                << (result.converged ? "" : " (not converged)") << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "synthesize: " << e.what() << "\n";
    return kInputError;
  }
  json out{{"topology", format_notation(t)}, {"runs", runRecords}};
  out["manifest"] = make_manifest(
      "synthesize", {{"topology", topology}, {"task", taskPath}, {"runs", runs}}, seed);
  if (!outPath.empty()) write_json(outPath, out);
  return anyConverged ? kOk : kBudgetExhausted;
}

int cmd_export_dot(const std::string& topology, const std::string& outPath) {
  TreeTopology t;
  try {
    t = parse_notation(topology);
  } catch (const std::exception& e) {
    std::cerr << "export-dot: " << e.what() << "\n";
    return kInputError;
  }
  std::string dot = export_dot(t);
  if (!outPath.empty())
    write_file(outPath, dot);
  else
    std::cout << dot;
  return kOk;
}

}  // namespace handsyn
