#ifndef HANDSYN_SYNTHESIS_HPP
#define HANDSYN_SYNTHESIS_HPP

#include <cstdint>
#include <vector>

#include "handsyn/fk.hpp"
#include "handsyn/topology.hpp"

namespace handsyn {

// Flat unknown vector layout: 6 Plücker coordinates per joint, then the
// joint variables for positions 2..mp, then per-position joint rates and
// accelerations for positions carrying twist/acceleration specs. Plücker
// conditions are soft residuals, not hard constraints.
class ResidualSystem {
 public:
  ResidualSystem(const Task& task, const FKProgram& prog);

  int residualCount() const { return nResiduals_; }
  int unknownCount() const { return nUnknowns_; }
  int equationResidualCount() const { return nEquationResiduals_; }
  int constraintResidualCount() const { return 2 * prog_.jointCount; }
  int independentEquationCount() const { return nIndependent_; }

  void evaluate(const Eigen::VectorXd& x, Eigen::VectorXd& r) const;
  // Forward-difference Jacobian.
  void jacobian(const Eigen::VectorXd& x, Eigen::MatrixXd& J) const;

  Eigen::VectorXd pack(const HandConfiguration& cfg) const;
  HandConfiguration unpack(const Eigen::VectorXd& x) const;

  // Average 8-component residual norm over the position equations; the
  // solver's reported error metric.
  double average_equation_error(const Eigen::VectorXd& x) const;

  const FKProgram& program() const { return prog_; }
  const Task& task() const { return task_; }
  const std::vector<int>& ratePositions() const { return ratePositions_; }
  const std::vector<int>& accelPositions() const { return accelPositions_; }

 private:
  Task task_;
  FKProgram prog_;
  std::vector<std::vector<DualQuaternion>> relTargets_;  // [branch][k-1]
  std::vector<int> ratePositions_;   // positions with any twist or accel spec
  std::vector<int> accelPositions_;  // positions with any accel spec
  int nResiduals_ = 0, nUnknowns_ = 0, nEquationResiduals_ = 0, nIndependent_ = 0;
};

ResidualSystem build_residuals(const Task& task, const FKProgram& prog);

struct SolverConfig {
  int populationSize = 100;
  int generations = 200;
  int tournamentSize = 3;
  int eliteCount = 2;
  int lmTopCount = 5;
  int epochInterval = 25;     // generations between LM refinement epochs
  int lmMaxIterations = 120;
  int maxRestarts = 10;
  double crossoverRate = 0.9;
  double mutationRate = 0.1;
  double mutationScale = 0.3;
  double lmTolerance = 1e-24;     // LM cost stopping threshold
  double errorTolerance = 1e-10;  // success threshold on the average error
  std::uint64_t seed = 0;
  int threads = 1;
};

struct SynthesisResult {
  HandConfiguration configuration;
  double finalError = 0;  // average dual-quaternion residual norm
  int iterations = 0;     // solver restarts used
  double wallTime = 0;    // seconds
  bool converged = false;
  std::uint64_t seed = 0;
};

// Hybrid solve: a real-coded genetic algorithm with periodic
// Levenberg-Marquardt refinement of the best individuals, restarted until
// the error tolerance is met or the restart budget is exhausted.
SynthesisResult solve(const Task& task, const TreeTopology& t, const SolverConfig& config);

// Levenberg-Marquardt on the full residual system from a single start.
// Returns the final cost 0.5*||r||^2.
double lm_refine(const ResidualSystem& sys, Eigen::VectorXd& x, int maxIterations,
                 double costTolerance);

// Solver-independent check: max point-transform discrepancy over the unit
// cube corners, plus max twist/acceleration residual norm.
double verify(const SynthesisResult& result, const Task& task, const FKProgram& prog);

}  // namespace handsyn

#endif
