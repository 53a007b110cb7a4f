#ifndef HANDSYN_FK_HPP
#define HANDSYN_FK_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "handsyn/screws.hpp"
#include "handsyn/topology.hpp"

namespace handsyn {

// Forward-kinematics structure assembled from a tree: per-branch ordered
// joint index lists with shared prefixes for shared edges. Joint indices
// are 0-based, assigned in depth-first edge order from the root.
struct FKProgram {
  std::vector<std::vector<int>> branchJoints;  // root-to-tip, per branch
  std::vector<int> branchEdge;                 // end-effector edge per branch
  std::vector<int> edgeOfJoint;                // joint index -> edge id
  int jointCount = 0;
  int tcpCount = 0;
  int splitterCount = 0;  // palm vertices, +1 rootless splitter when wristless
};

FKProgram build_fk(const TreeTopology& t);

// Joint axes at the reference configuration plus joint variables relative
// to it; column 0 of the angle matrix (the reference position) is zero.
struct HandConfiguration {
  std::vector<PluckerLine> axes;           // one per joint
  Eigen::MatrixXd jointAngles;             // jointCount x mp
  std::map<int, Eigen::VectorXd> rates;    // position index -> joint rates
  std::map<int, Eigen::VectorXd> accels;   // position index -> joint accels
};

struct TwistSpec {
  int branch = 0;    // index into FKProgram branches
  int position = 0;  // 0-based position index
  Twist value;
};

// Simultaneous fingertip task: per-branch displacement lists plus optional
// twists and accelerations at given positions.
struct Task {
  int mp = 0;
  std::vector<std::vector<DualQuaternion>> positions;  // [branch][k]
  std::vector<TwistSpec> twists;
  std::vector<TwistSpec> accels;
};

// Ordered product of joint exponentials for one branch at position k
// (0-based); k = 0 returns the identity.
DualQuaternion branch_pose(const HandConfiguration& cfg, const FKProgram& prog,
                           int branch, int k);

// Fingertip twist at position t: sum of displaced joint axes times rates.
Twist branch_twist(const HandConfiguration& cfg, const FKProgram& prog, int branch,
                   int t);

// Fingertip acceleration at position r: axis terms plus the ordered-pair
// Lie bracket terms of the joint rates.
Twist branch_acceleration(const HandConfiguration& cfg, const FKProgram& prog,
                          int branch, int r);

// Samples a random valid configuration and evaluates it into an exactly
// consistent task. twistPositions/accelPositions are 0-based position
// indices that get rates (and twists) for every branch. Deterministic for
// a fixed seed. Throws when mp + counts exceed the solvable position count.
std::pair<Task, HandConfiguration> generate_task(const TreeTopology& t, int mp,
                                                 const std::vector<int>& twistPositions,
                                                 const std::vector<int>& accelPositions,
                                                 std::uint64_t seed);

}  // namespace handsyn

#endif
