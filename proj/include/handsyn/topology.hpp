#ifndef HANDSYN_TOPOLOGY_HPP
#define HANDSYN_TOPOLOGY_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace handsyn {

// Rooted tree topology of a hand, as a parent-pointer array plus a joint
// array. Edges are 1-based; a parent value of 0 marks a root-incident edge
// and -1 marks an edge removed during re-rooting. Each edge stands for a
// serial chain of revolute joints.
struct TreeTopology {
  std::vector<int> parents;  // parents[i] is the parent of edge i+1
  std::vector<int> joints;   // joints[i] is the joint count of edge i+1

  int size() const { return static_cast<int>(parents.size()); }
  bool is_live(int edge) const { return parents[edge - 1] >= 0; }
  int parent(int edge) const { return parents[edge - 1]; }
  int joint_count(int edge) const { return joints[edge - 1]; }

  int live_edge_count() const;
  int total_joints() const;  // sum over live edges

  bool operator==(const TreeTopology& o) const {
    return parents == o.parents && joints == o.joints;
  }
};

// Root-to-end-effector incidence: one row per branch, one column per edge.
struct BranchSet {
  std::vector<int> branches;                  // end-effector edge ids, ascending
  std::vector<std::vector<bool>> pathMatrix;  // [branch][edge-1]
};

// One solvability subgraph: a root placement plus a branch subset.
// root == 0 keeps the original root; otherwise root is the end-effector
// edge the tree is re-rooted at.
struct SubgraphCombo {
  int root = 0;
  std::vector<int> branches;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

// Parses the SC-(B1,...,Bb) notation, e.g. "2-(2,1-(3,3,3),2)" or the
// R-annotated form "2R-(3R,R-(2R,2R,2R),3R)". Throws ParseError.
TreeTopology parse_notation(const std::string& text);

std::string format_notation(const TreeTopology& t);

// Same structure rendered with R per joint: "2R-(3R,R)".
std::string format_notation_r(const TreeTopology& t);

// Throws std::invalid_argument if t is not a valid rooted tree on its
// live edges (connectivity, joint counts in [1,5], matching lengths).
void validate(const TreeTopology& t);

// Live edges never referenced as a parent, ascending.
std::vector<int> end_effectors(const TreeTopology& t);

BranchSet branch_set(const TreeTopology& t);

// All (root placement, branch subset) pairs that have to be checked for
// solvability: every non-empty subset under the original root, plus every
// subset of size >= 2 taken as a relative-motion subgraph rooted at its
// smallest member. Count is 2(2^b-1)-b.
std::vector<SubgraphCombo> subgraph_combinations(const TreeTopology& t);

// Marks every edge lying on all root-to-end-effector paths as removed (-1)
// and reattaches their children to the root.
TreeTopology remove_common_edges(const TreeTopology& t);

// First re-rooting phase: edges hanging off the old-root-to-newRoot path
// are reattached to the path edge they meet. The path itself is unchanged.
TreeTopology reattach_to_path(const TreeTopology& t, int newRoot);

// Re-roots the tree at the given end-effector edge (reattach, then reverse
// the path). Expects common edges to have been removed already.
TreeTopology reroot(const TreeTopology& t, int newRoot);

// Unique representative under sibling-subtree permutations. Two topologies
// are isomorphic iff their canonical forms (or keys) are equal.
TreeTopology canonical_form(const TreeTopology& t);
std::string canonical_key(const TreeTopology& t);

// DOT digraph of the rooted tree; root vertex double-circled, edges
// labeled with joint counts.
std::string export_dot(const TreeTopology& t);

}  // namespace handsyn

#endif
