#ifndef HANDSYN_SOLVABILITY_HPP
#define HANDSYN_SOLVABILITY_HPP

#include <string>
#include <vector>

#include "handsyn/rational.hpp"
#include "handsyn/topology.hpp"

namespace handsyn {

// Counting vectors entering the position formula. For revolute chains an
// edge contributes 4 structural variables per joint and 1 joint variable
// per joint per position; a spatial fingertip task has 6 freedoms.
struct SolvabilityVectors {
  std::vector<int> structuralPerEdge;        // D_s, per edge
  std::vector<int> jointVarsPerEdge;         // D_j, per edge
  std::vector<int> eeFreedomPerBranch;       // D_ee, per branch
  std::vector<int> extraConstraintsPerBranch;  // D_c, per branch
  std::vector<int> edgeSelector;             // E, 0/1 per edge
  std::vector<int> branchSelector;           // B, 0/1 per branch
};

// Exact position count (D_s.E - D_c.B)/(D_ee.B - D_j.E) + 1, or infinity
// when the denominator is <= 0 (the subgraph imposes no constraint).
Rational positions(const SolvabilityVectors& v);

struct Violation {
  std::string notation;   // subgraph in R notation, e.g. "R-(R)"
  int root = 0;           // 0 = original root, else the re-rooting end-effector
  std::vector<int> branches;
  Rational m;             // positions admitted by the subgraph
};

struct SolvabilityReport {
  bool solvable = false;
  Rational M;  // positions for the full tree
  std::vector<Violation> violations;
  bool unconstrained = false;  // full-tree denominator <= 0
};

// Checks the full tree and every (root placement, branch subset) subgraph.
// branchConstraints, when given, carries D_c aligned with end_effectors(t).
SolvabilityReport is_solvable(const TreeTopology& t,
                              const std::vector<int>& branchConstraints = {});

// Mobility 6(n-1) - sum(6 - f_i) of the parallel mechanism formed by a
// hand in contact with an object; sizes the admissible twist subspace.
int contact_mobility(int nLinks, const std::vector<int>& jointFreedoms);

}  // namespace handsyn

#endif
