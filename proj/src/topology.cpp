#include "handsyn/topology.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace handsyn {

int TreeTopology::live_edge_count() const {
  int n = 0;
  for (int p : parents)
    if (p >= 0) ++n;
  return n;
}

int TreeTopology::total_joints() const {
  int J = 0;
  for (int i = 0; i < size(); ++i)
    if (parents[i] >= 0) J += joints[i];
  return J;
}

namespace {

// children[p] lists the live edges whose parent is p (p == 0 for the root).
std::map<int, std::vector<int>> children_map(const TreeTopology& t) {
  std::map<int, std::vector<int>> ch;
  for (int e = 1; e <= t.size(); ++e)
    if (t.is_live(e)) ch[t.parent(e)].push_back(e);
  return ch;
}

struct Parser {
  const std::string& text;
  std::size_t pos = 0;

  explicit Parser(const std::string& s) : text(s) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  void expect(char c) {
    if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos);
    ++pos;
  }

  // INT with optional R suffix; bare "R" means one revolute joint.
  int parse_joint_count() {
    skip_ws();
    std::size_t start = pos;
    if (pos < text.size() && (text[pos] == 'R' || text[pos] == 'r')) {
      ++pos;
      return 1;
    }
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      throw ParseError("expected joint count", pos);
    int v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + (text[pos] - '0');
      ++pos;
    }
    if (pos < text.size() && (text[pos] == 'R' || text[pos] == 'r')) ++pos;
    if (v > 5) throw ParseError("joint count exceeds 5", start);
    return v;
  }
};

struct ChainNode {
  int joints = 0;
  std::vector<ChainNode> children;
};

ChainNode parse_chain(Parser& p, bool atRoot) {
  std::size_t start = p.pos;
  ChainNode node;
  node.joints = p.parse_joint_count();
  if (p.peek() == '-') {
    ++p.pos;
    p.expect('(');
    node.children.push_back(parse_chain(p, false));
    while (p.peek() == ',') {
      ++p.pos;
      node.children.push_back(parse_chain(p, false));
    }
    p.expect(')');
    if (node.children.size() < 2)
      throw ParseError("a split must span at least 2 children", start);
  }
  if (node.joints == 0 && !(atRoot && !node.children.empty()))
    throw ParseError("zero joint count is only valid for a wristless root chain", start);
  return node;
}

}  // namespace

TreeTopology parse_notation(const std::string& text) {
  Parser p(text);
  ChainNode root = parse_chain(p, true);
  p.skip_ws();
  if (p.pos != text.size()) throw ParseError("trailing characters", p.pos);

  // Number edges breadth-first so parents come out non-decreasing.
  TreeTopology t;
  std::vector<std::pair<const ChainNode*, int>> queue;  // node, parent edge id
  if (root.joints == 0) {
    for (const ChainNode& c : root.children) queue.emplace_back(&c, 0);
  } else {
    queue.emplace_back(&root, 0);
  }
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const ChainNode* node = queue[i].first;
    t.parents.push_back(queue[i].second);
    t.joints.push_back(node->joints);
    int id = static_cast<int>(t.parents.size());
    for (const ChainNode& c : node->children) queue.emplace_back(&c, id);
  }
  validate(t);
  return t;
}

namespace {

std::string format_edge(const TreeTopology& t, const std::map<int, std::vector<int>>& ch,
                        int edge, bool rStyle) {
  std::string out;
  int j = t.joint_count(edge);
  if (rStyle)
    out = j == 1 ? "R" : std::to_string(j) + "R";
  else
    out = std::to_string(j);
  auto it = ch.find(edge);
  if (it != ch.end() && !it->second.empty()) {
    out += "-(";
    for (std::size_t i = 0; i < it->second.size(); ++i) {
      if (i) out += ",";
      out += format_edge(t, ch, it->second[i], rStyle);
    }
    out += ")";
  }
  return out;
}

std::string format_impl(const TreeTopology& t, bool rStyle) {
  auto ch = children_map(t);
  const std::vector<int>& rootEdges = ch.at(0);
  if (rootEdges.size() == 1) return format_edge(t, ch, rootEdges[0], rStyle);
  std::string out = "0-(";
  for (std::size_t i = 0; i < rootEdges.size(); ++i) {
    if (i) out += ",";
    out += format_edge(t, ch, rootEdges[i], rStyle);
  }
  return out + ")";
}

}  // namespace

std::string format_notation(const TreeTopology& t) { return format_impl(t, false); }
std::string format_notation_r(const TreeTopology& t) { return format_impl(t, true); }

void validate(const TreeTopology& t) {
  if (t.parents.size() != t.joints.size())
    throw std::invalid_argument("parent and joint arrays differ in length");
  if (t.size() == 0) throw std::invalid_argument("empty topology");
  int live = 0, rootIncident = 0;
  for (int e = 1; e <= t.size(); ++e) {
    if (!t.is_live(e)) continue;
    ++live;
    int p = t.parent(e);
    if (p == 0)
      ++rootIncident;
    else if (p < 1 || p > t.size() || !t.is_live(p))
      throw std::invalid_argument("edge " + std::to_string(e) + " has invalid parent");
    int j = t.joint_count(e);
    if (j < 1 || j > 5)
      throw std::invalid_argument("edge " + std::to_string(e) + " joint count out of [1,5]");
  }
  if (live == 0) throw std::invalid_argument("no live edges");
  if (rootIncident == 0) throw std::invalid_argument("no root-incident edge");
  // Every live edge must reach the root without cycling.
  for (int e = 1; e <= t.size(); ++e) {
    if (!t.is_live(e)) continue;
    int cur = e, steps = 0;
    while (cur != 0) {
      cur = t.parent(cur);
      if (++steps > t.size()) throw std::invalid_argument("cycle in parent pointers");
    }
  }
}

std::vector<int> end_effectors(const TreeTopology& t) {
  std::set<int> referenced;
  for (int e = 1; e <= t.size(); ++e)
    if (t.is_live(e) && t.parent(e) > 0) referenced.insert(t.parent(e));
  std::vector<int> out;
  for (int e = 1; e <= t.size(); ++e)
    if (t.is_live(e) && !referenced.count(e)) out.push_back(e);
  return out;
}

BranchSet branch_set(const TreeTopology& t) {
  BranchSet bs;
  bs.branches = end_effectors(t);
  for (int beta : bs.branches) {
    std::vector<bool> row(t.size(), false);
    for (int cur = beta; cur != 0; cur = t.parent(cur)) row[cur - 1] = true;
    bs.pathMatrix.push_back(std::move(row));
  }
  return bs;
}

std::vector<SubgraphCombo> subgraph_combinations(const TreeTopology& t) {
  std::vector<int> ee = end_effectors(t);
  int b = static_cast<int>(ee.size());
  std::vector<SubgraphCombo> out;
  for (unsigned mask = 1; mask < (1u << b); ++mask) {
    SubgraphCombo c;
    c.root = 0;
    for (int i = 0; i < b; ++i)
      if (mask & (1u << i)) c.branches.push_back(ee[i]);
    out.push_back(std::move(c));
  }
  // Relative-motion subgraphs: every subset of >= 2 fingertips, rooted at
  // its smallest member. Larger-root choices give the same subgraph.
  for (unsigned mask = 1; mask < (1u << b); ++mask) {
    std::vector<int> sel;
    for (int i = 0; i < b; ++i)
      if (mask & (1u << i)) sel.push_back(ee[i]);
    if (sel.size() < 2) continue;
    SubgraphCombo c;
    c.root = sel.front();
    c.branches.assign(sel.begin() + 1, sel.end());
    out.push_back(std::move(c));
  }
  return out;
}

TreeTopology remove_common_edges(const TreeTopology& t) {
  BranchSet bs = branch_set(t);
  TreeTopology out = t;
  std::vector<bool> removed(t.size(), false);
  for (int e = 1; e <= t.size(); ++e) {
    if (!t.is_live(e)) continue;
    bool common = !bs.branches.empty();
    for (const auto& row : bs.pathMatrix)
      if (!row[e - 1]) {
        common = false;
        break;
      }
    if (common) {
      out.parents[e - 1] = -1;
      out.joints[e - 1] = -1;
      removed[e - 1] = true;
    }
  }
  for (int e = 1; e <= t.size(); ++e)
    if (out.is_live(e) && out.parent(e) > 0 && removed[out.parent(e) - 1])
      out.parents[e - 1] = 0;
  return out;
}

TreeTopology reattach_to_path(const TreeTopology& t, int newRoot) {
  std::vector<int> ee = end_effectors(t);
  if (std::find(ee.begin(), ee.end(), newRoot) == ee.end())
    throw std::invalid_argument("new root must be an end-effector edge");
  TreeTopology out = t;
  // Edges hanging off the old-root-to-newRoot path point to the path edge
  // they meet.
  int joint = newRoot;
  while (joint != 0) {
    int parentOfJoint = t.parent(joint);
    for (int e = 1; e <= t.size(); ++e)
      if (out.is_live(e) && e != joint && t.is_live(e) && t.parent(e) == parentOfJoint)
        out.parents[e - 1] = joint;
    joint = parentOfJoint;
  }
  return out;
}

TreeTopology reroot(const TreeTopology& t, int newRoot) {
  // Record the old-root-to-newRoot path before rewriting anything.
  std::vector<int> path;
  for (int cur = newRoot; cur != 0; cur = t.parent(cur)) path.push_back(cur);
  std::reverse(path.begin(), path.end());

  TreeTopology out = reattach_to_path(t, newRoot);
  // Reverse the direction of the path itself; newRoot becomes root-incident.
  out.parents[newRoot - 1] = 0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    out.parents[path[i] - 1] = path[i + 1];
  return out;
}

namespace {

std::string canon_edge(const TreeTopology& t, const std::map<int, std::vector<int>>& ch,
                       int edge) {
  std::string s = std::to_string(t.joint_count(edge));
  auto it = ch.find(edge);
  if (it != ch.end()) {
    std::vector<std::pair<std::pair<int, std::string>, int>> keyed;
    for (int c : it->second)
      keyed.push_back({{t.joint_count(c), canon_edge(t, ch, c)}, c});
    std::sort(keyed.begin(), keyed.end());
    s += "(";
    for (auto& k : keyed) s += k.first.second + ";";
    s += ")";
  }
  return s;
}

// Root children sorted by canonical key; returns both the key and the
// sorted child order per vertex for rebuilding.
void sorted_children(const TreeTopology& t, const std::map<int, std::vector<int>>& ch,
                     int parent, std::vector<int>& out) {
  auto it = ch.find(parent);
  if (it == ch.end()) return;
  std::vector<std::pair<std::pair<int, std::string>, int>> keyed;
  for (int c : it->second)
    keyed.push_back({{t.joint_count(c), canon_edge(t, ch, c)}, c});
  std::sort(keyed.begin(), keyed.end());
  for (auto& k : keyed) out.push_back(k.second);
}

}  // namespace

std::string canonical_key(const TreeTopology& t) {
  auto ch = children_map(t);
  std::vector<int> roots;
  sorted_children(t, ch, 0, roots);
  std::string s;
  for (int r : roots) s += canon_edge(t, ch, r) + "|";
  return s;
}

TreeTopology canonical_form(const TreeTopology& t) {
  auto ch = children_map(t);
  // Breadth-first renumbering with children in canonical order keeps the
  // parent array non-decreasing.
  TreeTopology out;
  std::vector<std::pair<int, int>> queue;  // old edge id, new parent id
  std::vector<int> roots;
  sorted_children(t, ch, 0, roots);
  for (int r : roots) queue.emplace_back(r, 0);
  for (std::size_t i = 0; i < queue.size(); ++i) {
    auto [oldEdge, newParent] = queue[i];
    out.parents.push_back(newParent);
    out.joints.push_back(t.joint_count(oldEdge));
    int newId = static_cast<int>(out.parents.size());
    std::vector<int> kids;
    sorted_children(t, ch, oldEdge, kids);
    for (int k : kids) queue.emplace_back(k, newId);
  }
  return out;
}

std::string export_dot(const TreeTopology& t) {
  std::ostringstream os;
  os << "digraph hand {\n";
  os << "  rankdir=TB;\n";
  os << "  v0 [shape=doublecircle, label=\"root\"];\n";
  for (int e = 1; e <= t.size(); ++e) {
    if (!t.is_live(e)) continue;
    os << "  v" << e << " [shape=circle, label=\"" << e << "\"];\n";
  }
  for (int e = 1; e <= t.size(); ++e) {
    if (!t.is_live(e)) continue;
    int j = t.joint_count(e);
    os << "  v" << t.parent(e) << " -> v" << e << " [label=\""
       << (j == 1 ? std::string("R") : std::to_string(j) + "R") << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace handsyn
