#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "handsyn/synthesis.hpp"

using namespace handsyn;

TEST_CASE("residual and unknown counts for the design example") {
  TreeTopology t = parse_notation("2-(1-(2,2),2)");
  auto [task, cfg] = generate_task(t, 5, {}, {}, 1);
  FKProgram prog = build_fk(t);
  ResidualSystem sys = build_residuals(task, prog);
  CHECK(sys.equationResidualCount() == 96);
  CHECK(sys.constraintResidualCount() == 18);
  CHECK(sys.residualCount() == 96 + 18);
  CHECK(sys.unknownCount() == 90);  // 6*9 + 9*4
  CHECK(sys.independentEquationCount() == 72);
}

TEST_CASE("counts for a single 2R branch with three positions") {
  TreeTopology t = parse_notation("2");
  auto [task, cfg] = generate_task(t, 3, {}, {}, 2);
  FKProgram prog = build_fk(t);
  ResidualSystem sys = build_residuals(task, prog);
  CHECK(sys.equationResidualCount() == 16);
  CHECK(sys.constraintResidualCount() == 4);
  CHECK(sys.independentEquationCount() == 12);  // 6(mp-1)*1
  CHECK(sys.unknownCount() == 6 * 2 + 2 * 2);
}

TEST_CASE("counting formulas hold with twists and accelerations") {
  TreeTopology t = parse_notation("2-(1-(2,2),2)");
  auto [task, cfg] = generate_task(t, 3, {1}, {2}, 3);
  FKProgram prog = build_fk(t);
  ResidualSystem sys = build_residuals(task, prog);
  int J = prog.jointCount, b = prog.tcpCount;
  CHECK(sys.equationResidualCount() == 8 * b * 2 + 6 * (b + b));
  CHECK(sys.unknownCount() == 6 * J + J * 2 + J * 2 /* rates */ + J /* accels */);
  CHECK(sys.independentEquationCount() == 6 * (2 + 1 + 1) * b);
}

TEST_CASE("ground-truth configuration zeroes the residuals") {
  TreeTopology t = parse_notation("2-(1-(2,2),2)");
  auto [task, cfg] = generate_task(t, 5, {}, {}, 7);
  FKProgram prog = build_fk(t);
  ResidualSystem sys = build_residuals(task, prog);
  Eigen::VectorXd x = sys.pack(cfg);
  Eigen::VectorXd r;
  sys.evaluate(x, r);
  CHECK(r.lpNorm<Eigen::Infinity>() < 1e-12);
  CHECK(sys.average_equation_error(x) < 1e-12);

  // pack/unpack round-trips.
  HandConfiguration back = sys.unpack(x);
  CHECK((sys.pack(back) - x).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("residuals are zero for ground truth with twists and accels") {
  TreeTopology t = parse_notation("2-(1-(2,2),2)");
  auto [task, cfg] = generate_task(t, 3, {1}, {2}, 8);
  ResidualSystem sys = build_residuals(task, build_fk(t));
  Eigen::VectorXd r;
  sys.evaluate(sys.pack(cfg), r);
  CHECK(r.lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("jacobian matches central finite differences") {
  TreeTopology t = parse_notation("2-(1,1)");
  auto [task, cfg] = generate_task(t, 3, {}, {}, 4);
  FKProgram prog = build_fk(t);
  ResidualSystem sys = build_residuals(task, prog);

  std::mt19937_64 rng(12);
  auto u = [&]() { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0; };
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd x(sys.unknownCount());
    for (int i = 0; i < x.size(); ++i) x[i] = u();
    Eigen::MatrixXd J;
    sys.jacobian(x, J);
    Eigen::MatrixXd Jfd(sys.residualCount(), sys.unknownCount());
    Eigen::VectorXd rp, rm, xp = x;
    for (int c = 0; c < sys.unknownCount(); ++c) {
      double h = 1e-6;
      xp[c] = x[c] + h;
      sys.evaluate(xp, rp);
      xp[c] = x[c] - h;
      sys.evaluate(xp, rm);
      xp[c] = x[c];
      Jfd.col(c) = (rp - rm) / (2 * h);
    }
    CHECK((J - Jfd).norm() / Jfd.norm() < 1e-4);
  }
}

TEST_CASE("double-cover invariance of the error metric") {
  TreeTopology t = parse_notation("2-(1-(2,2),2)");
  auto [task, cfg] = generate_task(t, 5, {}, {}, 9);
  FKProgram prog = build_fk(t);
  ResidualSystem sys = build_residuals(task, prog);
  Eigen::VectorXd x = sys.pack(cfg);
  double before = sys.average_equation_error(x);

  Task negated = task;
  negated.positions[1][2].real = negated.positions[1][2].real * -1.0;
  negated.positions[1][2].dual = negated.positions[1][2].dual * -1.0;
  ResidualSystem sys2 = build_residuals(negated, prog);
  CHECK(sys2.average_equation_error(x) == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("lm_refine recovers a one-joint synthesis from a nearby start") {
  // A single revolute joint reproducing its own generated displacement;
  // the M >= 2 gate does not apply at the residual level.
  FKProgram prog = build_fk(parse_notation("1"));
  PluckerLine axis = PluckerLine::through({0.3, 0.1, -0.2}, {0.2, -1.0, 0.4});
  double theta = 0.9;

  Task task;
  task.mp = 2;
  HandConfiguration truth;
  truth.axes.push_back(axis);
  truth.jointAngles = Eigen::MatrixXd::Zero(1, 2);
  truth.jointAngles(0, 1) = theta;
  task.positions.push_back(
      {DualQuaternion::identity(), axis_exponential(axis, theta)});

  ResidualSystem sys = build_residuals(task, prog);
  Eigen::VectorXd x = sys.pack(truth);
  x.array() += 0.05;  // perturb all unknowns
  double cost = lm_refine(sys, x, 200, 1e-28);
  CHECK(cost < 1e-20);

  // The recovered axis reproduces the displacement (up to the screw-axis
  // ambiguity, checked through point transforms).
  HandConfiguration sol = sys.unpack(x);
  DualQuaternion target = axis_exponential(axis, theta);
  DualQuaternion got = branch_pose(sol, prog, 0, 1);
  for (const Eigen::Vector3d& p :
       {Eigen::Vector3d{0, 0, 0}, Eigen::Vector3d{1, 1, 1}, Eigen::Vector3d{-1, 2, 0.5}})
    CHECK((transform_point(got, p) - transform_point(target, p)).norm() < 1e-8);
}

TEST_CASE("solve converges on a generated task") {
  TreeTopology t = parse_notation("2-(1-(2,2),2)");
  auto [task, cfg] = generate_task(t, 5, {}, {}, 21);
  SolverConfig config;
  config.seed = 21;
  SynthesisResult result = solve(task, t, config);
  CHECK(result.converged);
  CHECK(result.finalError <= 1e-10);
  CHECK(result.iterations >= 1);
  FKProgram prog = build_fk(t);
  CHECK(verify(result, task, prog) <= 1e-8);

  // Plücker invariants hold after refinement and projection.
  for (const PluckerLine& l : result.configuration.axes) {
    CHECK(std::abs(l.direction.norm() - 1.0) < 1e-8);
    CHECK(std::abs(l.direction.dot(l.moment)) < 1e-8);
  }
}

TEST_CASE("solve is deterministic under a fixed seed") {
  TreeTopology t = parse_notation("2");
  auto [task, cfg] = generate_task(t, 3, {}, {}, 5);
  SolverConfig config;
  config.seed = 77;
  SynthesisResult a = solve(task, t, config);
  SynthesisResult b = solve(task, t, config);
  CHECK(a.finalError == b.finalError);
  CHECK(a.iterations == b.iterations);
  REQUIRE(a.configuration.axes.size() == b.configuration.axes.size());
  for (std::size_t i = 0; i < a.configuration.axes.size(); ++i)
    CHECK((a.configuration.axes[i].direction - b.configuration.axes[i].direction).norm() ==
          0.0);
}

TEST_CASE("solve rejects oversized or unsolvable tasks") {
  TreeTopology t = parse_notation("2-(1-(2,2),2)");
  auto [task, cfg] = generate_task(t, 5, {}, {}, 1);
  Task tooBig = task;
  tooBig.mp = 6;
  for (auto& poses : tooBig.positions) poses.push_back(poses.back());
  SolverConfig config;
  CHECK_THROWS_AS(solve(tooBig, t, config), std::invalid_argument);

  TreeTopology chain = parse_notation("1");  // M = 9/5 < 2
  Task small;
  small.mp = 2;
  small.positions.push_back({DualQuaternion::identity(), DualQuaternion::identity()});
  CHECK_THROWS_AS(solve(small, chain, config), std::invalid_argument);
}

TEST_CASE("verify detects a corrupted solution") {
  TreeTopology t = parse_notation("2-(1-(2,2),2)");
  auto [task, cfg] = generate_task(t, 5, {}, {}, 31);
  FKProgram prog = build_fk(t);
  SynthesisResult asTruth;
  asTruth.configuration = cfg;
  CHECK(verify(asTruth, task, prog) < 1e-12);

  SynthesisResult broken = asTruth;
  broken.configuration.axes[2].direction.x() += 1e-3;
  CHECK(verify(broken, task, prog) > 1e-5);
}

TEST_CASE("budget exhaustion reports best effort without converging") {
  TreeTopology t = parse_notation("2-(1-(2,2),2)");
  auto [task, cfg] = generate_task(t, 5, {}, {}, 13);
  SolverConfig config;
  config.seed = 1;
  config.populationSize = 8;
  config.generations = 1;
  config.epochInterval = 1;
  config.lmMaxIterations = 0;
  config.maxRestarts = 1;
  SynthesisResult result = solve(task, t, config);
  CHECK_FALSE(result.converged);
  CHECK(result.finalError > 1e-10);
  CHECK(result.iterations == 1);
}
