#include "handsyn/synthesis.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <set>
#include <stdexcept>

#include "handsyn/solvability.hpp"

namespace handsyn {

ResidualSystem::ResidualSystem(const Task& task, const FKProgram& prog)
    : task_(task), prog_(prog) {
  int b = prog.tcpCount;
  if (static_cast<int>(task.positions.size()) != b)
    throw std::invalid_argument("task branch count does not match topology");
  for (const auto& poses : task.positions)
    if (static_cast<int>(poses.size()) != task.mp)
      throw std::invalid_argument("branches disagree on the position count");
  std::set<int> rateSet, accelSet;
  for (const TwistSpec& s : task.twists) {
    if (s.branch < 0 || s.branch >= b || s.position < 0 || s.position >= task.mp)
      throw std::invalid_argument("twist spec out of range");
    rateSet.insert(s.position);
  }
  for (const TwistSpec& s : task.accels) {
    if (s.branch < 0 || s.branch >= b || s.position < 0 || s.position >= task.mp)
      throw std::invalid_argument("acceleration spec out of range");
    rateSet.insert(s.position);
    accelSet.insert(s.position);
  }
  ratePositions_.assign(rateSet.begin(), rateSet.end());
  accelPositions_.assign(accelSet.begin(), accelSet.end());

  for (int i = 0; i < b; ++i) {
    std::vector<DualQuaternion> rel;
    for (int k = 1; k < task.mp; ++k)
      rel.push_back(relative_displacement(task.positions[i][k], task.positions[i][0]));
    relTargets_.push_back(std::move(rel));
  }

  int J = prog.jointCount;
  nEquationResiduals_ = 8 * b * (task.mp - 1) +
                        6 * static_cast<int>(task.twists.size() + task.accels.size());
  nResiduals_ = nEquationResiduals_ + 2 * J;
  nUnknowns_ = 6 * J + J * (task.mp - 1) +
               J * static_cast<int>(ratePositions_.size() + accelPositions_.size());
  // Per branch: 6 independent equations per relative position, twist and
  // acceleration.
  int perBranch = (task.mp - 1) + static_cast<int>(task.twists.size() + task.accels.size()) / std::max(b, 1);
  nIndependent_ = 6 * perBranch * b;
}

HandConfiguration ResidualSystem::unpack(const Eigen::VectorXd& x) const {
  int J = prog_.jointCount;
  HandConfiguration cfg;
  for (int j = 0; j < J; ++j) {
    PluckerLine l;
    l.direction = x.segment<3>(6 * j);
    l.moment = x.segment<3>(6 * j + 3);
    cfg.axes.push_back(l);
  }
  cfg.jointAngles = Eigen::MatrixXd::Zero(J, task_.mp);
  int off = 6 * J;
  for (int k = 1; k < task_.mp; ++k)
    for (int j = 0; j < J; ++j) cfg.jointAngles(j, k) = x[off + (k - 1) * J + j];
  off += J * (task_.mp - 1);
  for (int pos : ratePositions_) {
    cfg.rates[pos] = x.segment(off, J);
    off += J;
  }
  for (int pos : accelPositions_) {
    cfg.accels[pos] = x.segment(off, J);
    off += J;
  }
  return cfg;
}

Eigen::VectorXd ResidualSystem::pack(const HandConfiguration& cfg) const {
  int J = prog_.jointCount;
  Eigen::VectorXd x(nUnknowns_);
  for (int j = 0; j < J; ++j) {
    x.segment<3>(6 * j) = cfg.axes[j].direction;
    x.segment<3>(6 * j + 3) = cfg.axes[j].moment;
  }
  int off = 6 * J;
  for (int k = 1; k < task_.mp; ++k)
    for (int j = 0; j < J; ++j) x[off + (k - 1) * J + j] = cfg.jointAngles(j, k);
  off += J * (task_.mp - 1);
  for (int pos : ratePositions_) {
    x.segment(off, J) = cfg.rates.at(pos);
    off += J;
  }
  for (int pos : accelPositions_) {
    x.segment(off, J) = cfg.accels.at(pos);
    off += J;
  }
  return x;
}

void ResidualSystem::evaluate(const Eigen::VectorXd& x, Eigen::VectorXd& r) const {
  HandConfiguration cfg = unpack(x);
  r.resize(nResiduals_);
  int idx = 0;
  int b = prog_.tcpCount;
  for (int i = 0; i < b; ++i) {
    for (int k = 1; k < task_.mp; ++k) {
      DualQuaternion pose = branch_pose(cfg, prog_, i, k);
      const DualQuaternion& tgt = relTargets_[i][k - 1];
      // Resolve the double-cover sign by the smaller residual.
      auto comp = [](const DualQuaternion& d, int c) {
        const Quat& q = c < 4 ? d.real : d.dual;
        switch (c % 4) {
          case 0: return q.w;
          case 1: return q.x;
          case 2: return q.y;
          default: return q.z;
        }
      };
      double dPlus = 0, dMinus = 0;
      for (int c = 0; c < 8; ++c) {
        double pc = comp(pose, c), qc = comp(tgt, c);
        dPlus += (pc - qc) * (pc - qc);
        dMinus += (pc + qc) * (pc + qc);
      }
      double sign = dPlus <= dMinus ? 1.0 : -1.0;
      for (int c = 0; c < 8; ++c) r[idx++] = comp(pose, c) - sign * comp(tgt, c);
    }
  }
  for (const TwistSpec& s : task_.twists) {
    Twist v = branch_twist(cfg, prog_, s.branch, s.position) - s.value;
    r.segment<3>(idx) = v.angular;
    r.segment<3>(idx + 3) = v.linear;
    idx += 6;
  }
  for (const TwistSpec& s : task_.accels) {
    Twist a = branch_acceleration(cfg, prog_, s.branch, s.position) - s.value;
    r.segment<3>(idx) = a.angular;
    r.segment<3>(idx + 3) = a.linear;
    idx += 6;
  }
  for (int j = 0; j < prog_.jointCount; ++j) {
    r[idx++] = cfg.axes[j].direction.squaredNorm() - 1.0;
    r[idx++] = cfg.axes[j].direction.dot(cfg.axes[j].moment);
  }
}

void ResidualSystem::jacobian(const Eigen::VectorXd& x, Eigen::MatrixXd& J) const {
  Eigen::VectorXd r0, r1;
  evaluate(x, r0);
  J.resize(nResiduals_, nUnknowns_);
  Eigen::VectorXd xp = x;
  for (int c = 0; c < nUnknowns_; ++c) {
    double h = 1e-7 * (1.0 + std::abs(x[c]));
    xp[c] = x[c] + h;
    evaluate(xp, r1);
    J.col(c) = (r1 - r0) / h;
    xp[c] = x[c];
  }
}

double ResidualSystem::average_equation_error(const Eigen::VectorXd& x) const {
  Eigen::VectorXd r;
  evaluate(x, r);
  int b = prog_.tcpCount;
  int n = b * (task_.mp - 1);
  double sum = 0;
  for (int eq = 0; eq < n; ++eq) sum += r.segment<8>(8 * eq).norm();
  int idx = 8 * n;
  int extra = static_cast<int>(task_.twists.size() + task_.accels.size());
  for (int eq = 0; eq < extra; ++eq) {
    sum += r.segment<6>(idx).norm();
    idx += 6;
  }
  return sum / std::max(n + extra, 1);
}

ResidualSystem build_residuals(const Task& task, const FKProgram& prog) {
  return ResidualSystem(task, prog);
}

double lm_refine(const ResidualSystem& sys, Eigen::VectorXd& x, int maxIterations,
                 double costTolerance) {
  Eigen::VectorXd r, rTrial;
  sys.evaluate(x, r);
  double cost = 0.5 * r.squaredNorm();
  double lambda = 1e-3;
  Eigen::MatrixXd J;
  for (int iter = 0; iter < maxIterations && cost > costTolerance; ++iter) {
    sys.jacobian(x, J);
    Eigen::MatrixXd A = J.transpose() * J;
    Eigen::VectorXd g = J.transpose() * r;
    if (g.lpNorm<Eigen::Infinity>() < 1e-15) break;
    Eigen::VectorXd diag = A.diagonal().cwiseMax(1e-12);
    bool accepted = false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      Eigen::MatrixXd Aug = A;
      Aug.diagonal() += lambda * diag;
      Eigen::VectorXd dx = Aug.ldlt().solve(-g);
      Eigen::VectorXd xTrial = x + dx;
      sys.evaluate(xTrial, rTrial);
      double costTrial = 0.5 * rTrial.squaredNorm();
      if (costTrial < cost) {
        x = xTrial;
        r = rTrial;
        cost = costTrial;
        lambda = std::max(lambda * 0.3, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!accepted) break;
  }
  return cost;
}

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

double gaussian(std::mt19937_64& rng) {
  // Box-Muller; avoids implementation-defined std::normal_distribution.
  double u1 = std::max(uniform01(rng), 1e-300), u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Eigen::VectorXd random_individual(const ResidualSystem& sys, std::mt19937_64& rng) {
  const FKProgram& prog = sys.program();
  int J = prog.jointCount;
  Eigen::VectorXd x(sys.unknownCount());
  for (int j = 0; j < J; ++j) {
    Eigen::Vector3d dir;
    do {
      dir = {uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
    } while (dir.squaredNorm() < 1e-6 || dir.squaredNorm() > 1.0);
    dir.normalize();
    Eigen::Vector3d point{uniform(rng, 0, 1), uniform(rng, 0, 1), uniform(rng, 0, 1)};
    x.segment<3>(6 * j) = dir;
    x.segment<3>(6 * j + 3) = point.cross(dir);
  }
  for (int c = 6 * J; c < 6 * J + J * (sys.task().mp - 1); ++c)
    x[c] = uniform(rng, -M_PI, M_PI);
  for (int c = 6 * J + J * (sys.task().mp - 1); c < sys.unknownCount(); ++c)
    x[c] = uniform(rng, -1, 1);
  return x;
}

// Normalize directions and project moments; applied before reporting.
void project_plucker(const ResidualSystem& sys, Eigen::VectorXd& x) {
  for (int j = 0; j < sys.program().jointCount; ++j) {
    Eigen::Vector3d d = x.segment<3>(6 * j);
    Eigen::Vector3d m = x.segment<3>(6 * j + 3);
    double n = d.norm();
    if (n < 1e-12) continue;
    d /= n;
    m /= n;  // keep d x m (the axis location) unchanged
    m -= d.dot(m) * d;
    x.segment<3>(6 * j) = d;
    x.segment<3>(6 * j + 3) = m;
  }
}

struct Individual {
  Eigen::VectorXd x;
  double cost = 0;
};

double fitness(const ResidualSystem& sys, const Eigen::VectorXd& x) {
  Eigen::VectorXd r;
  sys.evaluate(x, r);
  return 0.5 * r.squaredNorm();
}

}  // namespace

SynthesisResult solve(const Task& task, const TreeTopology& t, const SolverConfig& config) {
  auto tStart = std::chrono::steady_clock::now();
  SolvabilityReport rep = is_solvable(t);
  FKProgram prog = build_fk(t);
  int b = prog.tcpCount;
  int mv = b > 0 ? static_cast<int>(task.twists.size()) / b : 0;
  int ma = b > 0 ? static_cast<int>(task.accels.size()) / b : 0;
  int m = task.mp + mv + ma;
  if (!rep.solvable)
    throw std::invalid_argument("topology is not solvable: " +
                                (rep.unconstrained ? std::string("unconstrained")
                                                   : std::string("overconstrained subgraph")));
  if (Rational(m) > rep.M)
    throw std::invalid_argument("task of m = " + std::to_string(m) +
                                " exceeds the solvable position count M = " + rep.M.str());

  ResidualSystem sys(task, prog);
  SynthesisResult result;
  result.seed = config.seed;
  Eigen::VectorXd best;
  double bestError = std::numeric_limits<double>::infinity();

  for (int restart = 1; restart <= config.maxRestarts; ++restart) {
    result.iterations = restart;
    std::mt19937_64 rng(config.seed * 0x9e3779b97f4a7c15ULL + restart);

    std::vector<Individual> pop(config.populationSize);
    for (Individual& ind : pop) {
      ind.x = random_individual(sys, rng);
      ind.cost = fitness(sys, ind.x);
    }
    auto byCost = [](const Individual& a, const Individual& b) { return a.cost < b.cost; };

    bool done = false;
    for (int gen = 1; gen <= config.generations && !done; ++gen) {
      std::sort(pop.begin(), pop.end(), byCost);

      // LM refinement epoch on the current leaders.
      if (gen % config.epochInterval == 0 || gen == config.generations) {
        for (int i = 0; i < std::min(config.lmTopCount, (int)pop.size()); ++i) {
          pop[i].cost = lm_refine(sys, pop[i].x, config.lmMaxIterations, config.lmTolerance);
          Eigen::VectorXd candidate = pop[i].x;
          project_plucker(sys, candidate);
          lm_refine(sys, candidate, 10, config.lmTolerance);
          double err = sys.average_equation_error(candidate);
          if (err < bestError) {
            bestError = err;
            best = candidate;
          }
          if (err <= config.errorTolerance) {
            done = true;
            break;
          }
        }
        std::sort(pop.begin(), pop.end(), byCost);
        if (done) break;
      }

      std::vector<Individual> next(pop.begin(), pop.begin() + config.eliteCount);
      double anneal = 1.0 - 0.9 * (gen / static_cast<double>(config.generations));
      auto tournament = [&]() -> const Individual& {
        int bestIdx = static_cast<int>(uniform01(rng) * pop.size());
        for (int k = 1; k < config.tournamentSize; ++k) {
          int idx = static_cast<int>(uniform01(rng) * pop.size());
          if (pop[idx].cost < pop[bestIdx].cost) bestIdx = idx;
        }
        return pop[bestIdx];
      };
      while (static_cast<int>(next.size()) < config.populationSize) {
        const Individual& pa = tournament();
        const Individual& pb = tournament();
        Individual child;
        child.x = pa.x;
        if (uniform01(rng) < config.crossoverRate) {
          // Blend crossover, gene-wise.
          for (int c = 0; c < child.x.size(); ++c) {
            double u = uniform(rng, -0.25, 1.25);
            child.x[c] = pa.x[c] + u * (pb.x[c] - pa.x[c]);
          }
        }
        for (int c = 0; c < child.x.size(); ++c)
          if (uniform01(rng) < config.mutationRate)
            child.x[c] += config.mutationScale * anneal * gaussian(rng);
        child.cost = fitness(sys, child.x);
        next.push_back(std::move(child));
      }
      pop = std::move(next);
    }
    if (done) {
      result.converged = true;
      break;
    }
  }

  if (best.size() == 0) {
    std::mt19937_64 rng(config.seed);
    best = random_individual(sys, rng);
    bestError = sys.average_equation_error(best);
  }
  result.configuration = sys.unpack(best);
  result.finalError = bestError;
  result.converged = result.converged && bestError <= config.errorTolerance;
  result.wallTime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - tStart).count();
  return result;
}

double verify(const SynthesisResult& result, const Task& task, const FKProgram& prog) {
  HandConfiguration cfg = result.configuration;
  double worst = 0;
  for (int i = 0; i < prog.tcpCount; ++i) {
    for (int k = 1; k < task.mp; ++k) {
      DualQuaternion pose = branch_pose(cfg, prog, i, k);
      DualQuaternion target =
          relative_displacement(task.positions[i][k], task.positions[i][0]);
      for (int corner = 0; corner < 8; ++corner) {
        Eigen::Vector3d p{static_cast<double>(corner & 1),
                          static_cast<double>((corner >> 1) & 1),
                          static_cast<double>((corner >> 2) & 1)};
        worst = std::max(worst,
                         (transform_point(pose, p) - transform_point(target, p)).norm());
      }
    }
  }
  for (const TwistSpec& s : task.twists)
    worst = std::max(worst, (branch_twist(cfg, prog, s.branch, s.position) - s.value).norm());
  for (const TwistSpec& s : task.accels)
    worst = std::max(
        worst, (branch_acceleration(cfg, prog, s.branch, s.position) - s.value).norm());
  return worst;
}

}  // namespace handsyn
