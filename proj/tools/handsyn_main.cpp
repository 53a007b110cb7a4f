#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "handsyn/commands.hpp"
#include "handsyn/io.hpp"

namespace {

// "lo..hi" or a single integer.
bool parse_edge_range(const std::string& s, int& lo, int& hi) {
  auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      lo = hi = std::stoi(s);
    } else {
      lo = std::stoi(s.substr(0, dots));
      hi = std::stoi(s.substr(dots + 2));
    }
  } catch (...) {
    return false;
  }
  return true;
}

void apply_config_overrides(handsyn::SolverConfig& cfg, const std::string& path) {
  nlohmann::json j = handsyn::read_json(path);
  if (j.contains("population_size")) cfg.populationSize = j["population_size"];
  if (j.contains("generations")) cfg.generations = j["generations"];
  if (j.contains("tournament_size")) cfg.tournamentSize = j["tournament_size"];
  if (j.contains("elite_count")) cfg.eliteCount = j["elite_count"];
  if (j.contains("lm_top_count")) cfg.lmTopCount = j["lm_top_count"];
  if (j.contains("epoch_interval")) cfg.epochInterval = j["epoch_interval"];
  if (j.contains("lm_max_iterations")) cfg.lmMaxIterations = j["lm_max_iterations"];
  if (j.contains("max_restarts")) cfg.maxRestarts = j["max_restarts"];
  if (j.contains("crossover_rate")) cfg.crossoverRate = j["crossover_rate"];
  if (j.contains("mutation_rate")) cfg.mutationRate = j["mutation_rate"];
  if (j.contains("mutation_scale")) cfg.mutationScale = j["mutation_scale"];
  if (j.contains("lm_tolerance")) cfg.lmTolerance = j["lm_tolerance"];
  if (j.contains("error_tolerance")) cfg.errorTolerance = j["error_tolerance"];
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kinematic synthesis of tree-topology robotic hands"};
  app.require_subcommand(1);

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "Type synthesis: atlas of solvable topologies");
  int m = 0, b = 0;
  std::string edges, out, topology, taskPath, configPath, groundTruth;
  std::uint64_t seed = 0;
  enumerate->add_option("-m,--positions", m, "Task positions per fingertip")->required();
  enumerate->add_option("-b,--branches", b, "Number of end-effectors")->required();
  enumerate->add_option("-e,--edges", edges, "Edge count or range lo..hi")->required();
  enumerate->add_option("-o,--out", out, "Atlas output file");

  // solvability
  auto* solvability = app.add_subcommand("solvability", "Check a topology for solvability");
  solvability->add_option("-t,--topology", topology, "Topology notation")->required();
  solvability->add_option("-o,--out", out, "Report output file");

  // taskgen
  auto* taskgen = app.add_subcommand("taskgen", "Generate a random consistent task");
  int mp = 0;
  std::vector<int> twistPositions, accelPositions;
  taskgen->add_option("-t,--topology", topology, "Topology notation")->required();
  taskgen->add_option("-m,--positions", mp, "Number of task positions")->required();
  taskgen->add_option("--twists", twistPositions, "Positions (1-based) with twists");
  taskgen->add_option("--accels", accelPositions, "Positions (1-based) with accelerations");
  taskgen->add_option("--seed", seed, "Random seed");
  taskgen->add_option("-o,--out", out, "Task output file");
  taskgen->add_option("--ground-truth", groundTruth, "Also write the sampled configuration");

  // synthesize
  auto* synthesize = app.add_subcommand("synthesize", "Dimensional synthesis for a task");
  int runs = 1, threads = 0;
  synthesize->add_option("-t,--topology", topology, "Topology notation")->required();
  synthesize->add_option("--task", taskPath, "Task file")->required();
  synthesize->add_option("--runs", runs, "Independent seeded runs");
  synthesize->add_option("--seed", seed, "Base random seed");
  synthesize->add_option("--config", configPath, "Solver config overrides (JSON)");
  synthesize->add_option("--threads", threads, "Fitness evaluation threads");
  synthesize->add_option("-o,--out", out, "Result output file");

  // export-dot
  auto* exportDot = app.add_subcommand("export-dot", "Write the topology graph as DOT");
  exportDot->add_option("-t,--topology", topology, "Topology notation")->required();
  exportDot->add_option("-o,--out", out, "DOT output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : handsyn::kInputError;
  }

  try {
    if (enumerate->parsed()) {
      int eLo = 0, eHi = 0;
      if (!parse_edge_range(edges, eLo, eHi)) {
        std::cerr << "enumerate: bad edge range '" << edges << "'\n";
        return handsyn::kInputError;
      }
      return handsyn::cmd_enumerate(m, b, eLo, eHi, out);
    }
    if (solvability->parsed()) return handsyn::cmd_solvability(topology, out);
    if (taskgen->parsed())
      return handsyn::cmd_taskgen(topology, mp, twistPositions, accelPositions, seed, out,
                                  groundTruth);
    if (synthesize->parsed()) {
      handsyn::SolverConfig cfg;
      if (threads == 0)
        if (const char* env = std::getenv("HANDSYN_THREADS")) threads = std::atoi(env);
      cfg.threads = threads > 0 ? threads : 1;
      if (!configPath.empty()) apply_config_overrides(cfg, configPath);
      return handsyn::cmd_synthesize(topology, taskPath, runs, seed, cfg, out);
    }
    if (exportDot->parsed()) return handsyn::cmd_export_dot(topology, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return handsyn::kInputError;
  }
  return handsyn::kInputError;
}
