#include "handsyn/fk.hpp"

#include <random>
#include <stdexcept>

#include "handsyn/solvability.hpp"

namespace handsyn {

FKProgram build_fk(const TreeTopology& t) {
  validate(t);
  FKProgram prog;
  std::map<int, std::vector<int>> children;
  for (int e = 1; e <= t.size(); ++e)
    if (t.is_live(e) && t.parent(e) >= 0) children[t.parent(e)].push_back(e);

  // Depth-first edge walk; each edge's serial chain gets a contiguous run
  // of joint indices, so branches through shared edges share a prefix.
  std::vector<int> firstJoint(t.size() + 1, -1);
  std::vector<std::pair<int, std::vector<int>>> stack;  // edge, prefix so far
  std::vector<int> rootEdges = children[0];
  for (auto it = rootEdges.rbegin(); it != rootEdges.rend(); ++it)
    stack.push_back({*it, {}});
  while (!stack.empty()) {
    auto [edge, prefix] = stack.back();
    stack.pop_back();
    firstJoint[edge] = prog.jointCount;
    for (int j = 0; j < t.joint_count(edge); ++j) {
      prefix.push_back(prog.jointCount++);
      prog.edgeOfJoint.push_back(edge);
    }
    auto it = children.find(edge);
    if (it == children.end()) {
      prog.branchJoints.push_back(prefix);
      prog.branchEdge.push_back(edge);
    } else {
      for (auto c = it->second.rbegin(); c != it->second.rend(); ++c)
        stack.push_back({*c, prefix});
    }
  }
  prog.tcpCount = static_cast<int>(prog.branchJoints.size());
  int palms = 0;
  for (const auto& [parent, kids] : children)
    if (parent != 0 && kids.size() >= 2) ++palms;
  bool wristless = rootEdges.size() >= 2;
  prog.splitterCount = palms + (wristless ? 1 : 0);
  return prog;
}

DualQuaternion branch_pose(const HandConfiguration& cfg, const FKProgram& prog,
                           int branch, int k) {
  if (branch < 0 || branch >= static_cast<int>(prog.branchJoints.size()))
    throw std::out_of_range("branch index");
  if (k < 0 || k >= cfg.jointAngles.cols()) throw std::out_of_range("position index");
  DualQuaternion d = DualQuaternion::identity();
  for (int j : prog.branchJoints[branch])
    d = dq_multiply(d, axis_exponential(cfg.axes[j], cfg.jointAngles(j, k)));
  return d;
}

namespace {

// Joint axes of one branch displaced to the configuration of position k.
std::vector<Twist> displaced_axes(const HandConfiguration& cfg, const FKProgram& prog,
                                  int branch, int k) {
  std::vector<Twist> out;
  DualQuaternion partial = DualQuaternion::identity();
  for (int j : prog.branchJoints[branch]) {
    PluckerLine S = transform_axis(cfg.axes[j], partial);
    out.push_back({S.direction, S.moment});
    partial = dq_multiply(partial, axis_exponential(cfg.axes[j], cfg.jointAngles(j, k)));
  }
  return out;
}

}  // namespace

Twist branch_twist(const HandConfiguration& cfg, const FKProgram& prog, int branch,
                   int t) {
  auto it = cfg.rates.find(t);
  if (it == cfg.rates.end()) throw std::invalid_argument("no rates at this position");
  const Eigen::VectorXd& rate = it->second;
  std::vector<Twist> S = displaced_axes(cfg, prog, branch, t);
  Twist v;
  const auto& joints = prog.branchJoints[branch];
  for (std::size_t i = 0; i < joints.size(); ++i) v = v + S[i] * rate[joints[i]];
  return v;
}

Twist branch_acceleration(const HandConfiguration& cfg, const FKProgram& prog,
                          int branch, int r) {
  auto rit = cfg.rates.find(r);
  auto ait = cfg.accels.find(r);
  if (rit == cfg.rates.end() || ait == cfg.accels.end())
    throw std::invalid_argument("no rates/accelerations at this position");
  const Eigen::VectorXd& rate = rit->second;
  const Eigen::VectorXd& acc = ait->second;
  std::vector<Twist> S = displaced_axes(cfg, prog, branch, r);
  const auto& joints = prog.branchJoints[branch];
  Twist a;
  for (std::size_t i = 0; i < joints.size(); ++i) a = a + S[i] * acc[joints[i]];
  // Ordered pairs, root-most joint first; the unordered sum would vanish
  // by antisymmetry of the bracket.
  for (std::size_t i = 0; i < joints.size(); ++i)
    for (std::size_t h = i + 1; h < joints.size(); ++h)
      a = a + screw_bracket(S[i], S[h]) * (rate[joints[i]] * rate[joints[h]]);
  return a;
}

namespace {

// Platform-independent uniform double in [0,1) from the raw generator.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

PluckerLine random_line(std::mt19937_64& rng) {
  // Unit direction by rejection from the cube, point inside the unit cube.
  Eigen::Vector3d dir;
  do {
    dir = {uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
  } while (dir.squaredNorm() < 1e-6 || dir.squaredNorm() > 1.0);
  Eigen::Vector3d point{uniform(rng, 0, 1), uniform(rng, 0, 1), uniform(rng, 0, 1)};
  return PluckerLine::through(point, dir);
}

}  // namespace

std::pair<Task, HandConfiguration> generate_task(const TreeTopology& t, int mp,
                                                 const std::vector<int>& twistPositions,
                                                 const std::vector<int>& accelPositions,
                                                 std::uint64_t seed) {
  if (mp < 1) throw std::invalid_argument("need at least the reference position");
  SolvabilityReport rep = is_solvable(t);
  int m = mp + static_cast<int>(twistPositions.size() + accelPositions.size());
  if (!rep.solvable || Rational(m) > rep.M)
    throw std::invalid_argument("task of m = " + std::to_string(m) +
                                " exceeds the solvable position count M = " +
                                rep.M.str());
  for (int k : twistPositions)
    if (k < 0 || k >= mp) throw std::invalid_argument("twist position out of range");
  for (int k : accelPositions)
    if (k < 0 || k >= mp) throw std::invalid_argument("acceleration position out of range");

  FKProgram prog = build_fk(t);
  std::mt19937_64 rng(seed);
  HandConfiguration cfg;
  for (int j = 0; j < prog.jointCount; ++j) cfg.axes.push_back(random_line(rng));
  cfg.jointAngles = Eigen::MatrixXd::Zero(prog.jointCount, mp);
  for (int k = 1; k < mp; ++k)
    for (int j = 0; j < prog.jointCount; ++j)
      cfg.jointAngles(j, k) = uniform(rng, -M_PI, M_PI);
  for (int k : twistPositions) {
    Eigen::VectorXd r(prog.jointCount);
    for (int j = 0; j < prog.jointCount; ++j) r[j] = uniform(rng, -1, 1);
    cfg.rates[k] = r;
  }
  for (int k : accelPositions) {
    if (!cfg.rates.count(k)) {
      Eigen::VectorXd r(prog.jointCount);
      for (int j = 0; j < prog.jointCount; ++j) r[j] = uniform(rng, -1, 1);
      cfg.rates[k] = r;
    }
    Eigen::VectorXd a(prog.jointCount);
    for (int j = 0; j < prog.jointCount; ++j) a[j] = uniform(rng, -1, 1);
    cfg.accels[k] = a;
  }

  Task task;
  task.mp = mp;
  for (int i = 0; i < prog.tcpCount; ++i) {
    std::vector<DualQuaternion> poses;
    for (int k = 0; k < mp; ++k) poses.push_back(branch_pose(cfg, prog, i, k));
    task.positions.push_back(std::move(poses));
    for (int k : twistPositions)
      task.twists.push_back({i, k, branch_twist(cfg, prog, i, k)});
    for (int k : accelPositions)
      task.accels.push_back({i, k, branch_acceleration(cfg, prog, i, k)});
  }
  return {std::move(task), std::move(cfg)};
}

}  // namespace handsyn
