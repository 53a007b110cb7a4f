#ifndef HANDSYN_ENUMERATION_HPP
#define HANDSYN_ENUMERATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "handsyn/rational.hpp"
#include "handsyn/topology.hpp"

namespace handsyn {

struct EnumerationQuery {
  int m = 0;    // precision positions per fingertip, >= 2
  int b = 0;    // end-effectors
  int eLo = 0;  // inclusive edge-count range
  int eHi = 0;
};

// Per-edge-count tallies matching the atlas table columns.
struct AtlasRow {
  int e = 0;
  std::int64_t jointArrayCount = 0;   // admissible joint arrays over all parent arrays
  std::int64_t parentArrayCount = 0;  // parent-pointer arrays
  int candidateCount = 0;             // solvable, non-isomorphic topologies
};

struct Atlas {
  EnumerationQuery query;
  Rational totalJoints;  // J from the task-sizing formula, exact
  std::int64_t jointArrayCount = 0;
  std::int64_t parentArrayCount = 0;
  std::vector<AtlasRow> rows;
  std::vector<TreeTopology> candidates;
  std::string diagnostic;  // non-empty when the query is infeasible
  bool feasible = true;
};

// Total joints (m-1)*6*b/(m+3) as an exact rational; a non-integer value
// means no exact-synthesis topology exists for (m, b).
Rational required_joints(int m, int b);

// All parent-pointer arrays of length e with b end-effectors: p(1)=0,
// values non-decreasing, internal edges in [p(i-1), i-1], end-effector
// edges in [p(i-1), e-b], and every internal edge spanning >= 2 children.
std::vector<std::vector<int>> parent_pointer_arrays(int b, int e);

// All joint arrays of length e with entries in [1,5] summing to J.
// Consecutive end-effector edges sharing a parent must appear in
// non-decreasing joint order, which prunes sibling-swapped duplicates.
std::vector<std::vector<int>> joint_arrays(const std::vector<int>& p, int J, int e);

Atlas topology_search(const EnumerationQuery& q);

}  // namespace handsyn

#endif
