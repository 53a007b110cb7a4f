#include "handsyn/enumeration.hpp"

#include <algorithm>
#include <set>

#include "handsyn/solvability.hpp"

namespace handsyn {

Rational required_joints(int m, int b) {
  if (m < 2 || b < 1) throw std::invalid_argument("need m >= 2 and b >= 1");
  return Rational(static_cast<std::int64_t>(m - 1) * 6 * b, m + 3);
}

namespace {

void extend_parent_array(std::vector<int>& p, int b, int e, std::vector<int>& refs,
                         std::vector<std::vector<int>>& out) {
  int i = static_cast<int>(p.size()) + 1;  // next edge id
  int internals = e - b;
  if (i > e) {
    for (int k = 1; k <= internals; ++k)
      if (refs[k] < 2) return;  // a palm must span at least 2 children
    out.push_back(p);
    return;
  }
  int lo = p.empty() ? 0 : p.back();
  int hi = i <= internals ? i - 1 : internals;
  for (int v = lo; v <= hi; ++v) {
    p.push_back(v);
    if (v > 0) ++refs[v];
    extend_parent_array(p, b, e, refs, out);
    if (v > 0) --refs[v];
    p.pop_back();
  }
}

void extend_joint_array(std::vector<int>& j, const std::vector<int>& p,
                        const std::vector<bool>& isEE, int J, int e,
                        std::vector<std::vector<int>>& out) {
  int i = static_cast<int>(j.size());  // 0-based next slot
  int remaining = e - i;
  if (remaining == 0) {
    if (J == 0) out.push_back(j);
    return;
  }
  for (int d = 1; d <= 5; ++d) {
    if (J - d < remaining - 1 || J - d > 5 * (remaining - 1)) continue;
    // Sibling end-effectors in decreasing joint order duplicate a tree
    // already produced with the order swapped.
    if (i > 0 && isEE[i] && isEE[i - 1] && p[i] == p[i - 1] && d < j.back()) continue;
    j.push_back(d);
    extend_joint_array(j, p, isEE, J - d, e, out);
    j.pop_back();
  }
}

}  // namespace

std::vector<std::vector<int>> parent_pointer_arrays(int b, int e) {
  if (b < 1 || e < b) throw std::invalid_argument("need 1 <= b <= e");
  std::vector<std::vector<int>> out;
  std::vector<int> p{0};
  std::vector<int> refs(e - b + 1, 0);
  extend_parent_array(p, b, e, refs, out);
  return out;
}

std::vector<std::vector<int>> joint_arrays(const std::vector<int>& p, int J, int e) {
  std::vector<std::vector<int>> out;
  if (J < e || J > 5 * e) return out;
  std::vector<bool> isEE(e, true);
  for (int v : p)
    if (v > 0) isEE[v - 1] = false;
  std::vector<int> j;
  extend_joint_array(j, p, isEE, J, e, out);
  return out;
}

Atlas topology_search(const EnumerationQuery& q) {
  Atlas atlas;
  atlas.query = q;
  atlas.totalJoints = required_joints(q.m, q.b);
  if (!atlas.totalJoints.is_integer() || atlas.totalJoints.numerator() <= 0) {
    atlas.feasible = false;
    atlas.diagnostic = "required joint count J = " + atlas.totalJoints.str() +
                       " is not a positive integer; no exact-synthesis topology exists";
    return atlas;
  }
  int J = static_cast<int>(atlas.totalJoints.numerator());

  for (int e = std::max(q.eLo, q.b); e <= q.eHi; ++e) {
    AtlasRow row;
    row.e = e;
    if (J < e || J > 5 * e) {
      atlas.rows.push_back(row);
      continue;
    }
    for (const auto& p : parent_pointer_arrays(q.b, e)) {
      ++row.parentArrayCount;
      for (const auto& j : joint_arrays(p, J, e)) {
        ++row.jointArrayCount;
        TreeTopology t{p, j};
        if (!is_solvable(t).solvable) continue;
        ++row.candidateCount;
        atlas.candidates.push_back(std::move(t));
      }
    }
    atlas.rows.push_back(row);
  }
  for (const AtlasRow& r : atlas.rows) {
    atlas.jointArrayCount += r.jointArrayCount;
    atlas.parentArrayCount += r.parentArrayCount;
  }
  if (atlas.rows.empty())
    atlas.diagnostic = "empty edge range";
  return atlas;
}

}  // namespace handsyn
