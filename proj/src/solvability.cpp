#include "handsyn/solvability.hpp"

#include <algorithm>
#include <set>

namespace handsyn {

Rational positions(const SolvabilityVectors& v) {
  std::int64_t num = 0, den = 0;
  for (std::size_t i = 0; i < v.edgeSelector.size(); ++i) {
    if (!v.edgeSelector[i]) continue;
    num += v.structuralPerEdge[i];
    den -= v.jointVarsPerEdge[i];
  }
  for (std::size_t n = 0; n < v.branchSelector.size(); ++n) {
    if (!v.branchSelector[n]) continue;
    num -= v.extraConstraintsPerBranch[n];
    den += v.eeFreedomPerBranch[n];
  }
  if (den <= 0) return Rational::infinity();
  return Rational(num, den) + Rational(1);
}

namespace {

// Position count for the subgraph spanned by the given branches of `tree`,
// with per-branch extra constraints aligned to `ee`.
Rational subgraph_positions(const TreeTopology& tree, const std::vector<int>& ee,
                            const std::vector<int>& branches,
                            const std::vector<int>& constraints,
                            std::vector<int>* selectedEdges) {
  SolvabilityVectors v;
  int e = tree.size();
  v.structuralPerEdge.resize(e, 0);
  v.jointVarsPerEdge.resize(e, 0);
  v.edgeSelector.resize(e, 0);
  for (int edge = 1; edge <= e; ++edge) {
    if (!tree.is_live(edge)) continue;
    v.structuralPerEdge[edge - 1] = 4 * tree.joint_count(edge);
    v.jointVarsPerEdge[edge - 1] = tree.joint_count(edge);
  }
  v.eeFreedomPerBranch.resize(ee.size(), 6);
  v.extraConstraintsPerBranch = constraints;
  v.extraConstraintsPerBranch.resize(ee.size(), 0);
  v.branchSelector.resize(ee.size(), 0);
  for (int beta : branches) {
    auto it = std::find(ee.begin(), ee.end(), beta);
    if (it == ee.end()) throw std::invalid_argument("branch is not an end-effector");
    v.branchSelector[it - ee.begin()] = 1;
    for (int cur = beta; cur != 0; cur = tree.parent(cur)) v.edgeSelector[cur - 1] = 1;
  }
  if (selectedEdges) {
    selectedEdges->clear();
    for (int edge = 1; edge <= e; ++edge)
      if (v.edgeSelector[edge - 1]) selectedEdges->push_back(edge);
  }
  return positions(v);
}

TreeTopology subgraph_tree(const TreeTopology& tree, const std::vector<int>& edges) {
  TreeTopology sub;
  sub.parents.assign(tree.size(), -1);
  sub.joints.assign(tree.size(), -1);
  for (int e : edges) {
    sub.parents[e - 1] = tree.parents[e - 1];
    sub.joints[e - 1] = tree.joints[e - 1];
  }
  return sub;
}

}  // namespace

SolvabilityReport is_solvable(const TreeTopology& t,
                              const std::vector<int>& branchConstraints) {
  SolvabilityReport report;
  std::vector<int> ee = end_effectors(t);

  report.M = subgraph_positions(t, ee, ee, branchConstraints, nullptr);
  report.unconstrained = report.M.is_infinite();

  // Re-rooted checks share one reduced tree per root placement.
  TreeTopology reduced = remove_common_edges(t);
  std::set<std::string> reportedKeys;

  for (const SubgraphCombo& combo : subgraph_combinations(t)) {
    const TreeTopology* tree = &t;
    TreeTopology rerooted;
    if (combo.root != 0) {
      rerooted = reroot(reduced, combo.root);
      tree = &rerooted;
    }
    std::vector<int> edges;
    Rational m = subgraph_positions(*tree, end_effectors(*tree), combo.branches,
                                    combo.root == 0 ? branchConstraints
                                                    : std::vector<int>{},
                                    &edges);
    if (m < report.M) {
      TreeTopology sub = subgraph_tree(*tree, edges);
      if (reportedKeys.insert(canonical_key(sub)).second) {
        Violation viol;
        viol.notation = format_notation_r(sub);
        viol.root = combo.root;
        viol.branches = combo.branches;
        viol.m = m;
        report.violations.push_back(std::move(viol));
      }
    }
  }

  report.solvable = !report.unconstrained && report.M >= Rational(2) &&
                    report.violations.empty();
  return report;
}

int contact_mobility(int nLinks, const std::vector<int>& jointFreedoms) {
  if (nLinks < 2) throw std::invalid_argument("need at least 2 links");
  int mob = 6 * (nLinks - 1);
  for (int f : jointFreedoms) mob -= 6 - f;
  return mob;
}

}  // namespace handsyn
