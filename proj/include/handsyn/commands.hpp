#ifndef HANDSYN_COMMANDS_HPP
#define HANDSYN_COMMANDS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "handsyn/synthesis.hpp"

namespace handsyn {

// Exit codes shared by all commands.
enum ExitCode { kOk = 0, kInputError = 2, kNegativeVerdict = 3, kBudgetExhausted = 4 };

int cmd_enumerate(int m, int b, int eLo, int eHi, const std::string& outPath);

int cmd_solvability(const std::string& topology, const std::string& outPath);

// Positions in the twist/accel lists are 1-based task position indices.
int cmd_taskgen(const std::string& topology, int mp, const std::vector<int>& twistPositions,
                const std::vector<int>& accelPositions, std::uint64_t seed,
                const std::string& outPath, const std::string& groundTruthPath = "");

int cmd_synthesize(const std::string& topology, const std::string& taskPath, int runs,
                   std::uint64_t seed, const SolverConfig& config,
                   const std::string& outPath);

int cmd_export_dot(const std::string& topology, const std::string& outPath);

}  // namespace handsyn

#endif
