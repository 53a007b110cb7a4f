#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "brute_force.hpp"
#include "handsyn/enumeration.hpp"

using namespace handsyn;

TEST_CASE("required_joints is exact rational arithmetic") {
  CHECK(required_joints(5, 3) == Rational(9));
  CHECK(required_joints(3, 2) == Rational(4));
  CHECK(required_joints(21, 5) == Rational(25));
  CHECK(required_joints(13, 6) == Rational(27));
  CHECK(required_joints(4, 2) == Rational(36, 7));  // infeasible query
  CHECK_FALSE(required_joints(4, 2).is_integer());
  CHECK_THROWS_AS(required_joints(1, 2), std::invalid_argument);
}

TEST_CASE("parent-pointer arrays for small inputs") {
  SUBCASE("b=3, e=4: two arrays") {
    auto p = parent_pointer_arrays(3, 4);
    REQUIRE(p.size() == 2);
    CHECK(p[0] == std::vector<int>{0, 0, 1, 1});
    CHECK(p[1] == std::vector<int>{0, 1, 1, 1});
  }
  SUBCASE("b=4, e=5: three arrays") {
    auto p = parent_pointer_arrays(4, 5);
    REQUIRE(p.size() == 3);
    CHECK(p[0] == std::vector<int>{0, 0, 0, 1, 1});
    CHECK(p[1] == std::vector<int>{0, 0, 1, 1, 1});
    CHECK(p[2] == std::vector<int>{0, 1, 1, 1, 1});
  }
  SUBCASE("stars and chains") {
    CHECK(parent_pointer_arrays(3, 3) == std::vector<std::vector<int>>{{0, 0, 0}});
    CHECK(parent_pointer_arrays(1, 1) == std::vector<std::vector<int>>{{0}});
  }
  SUBCASE("every array is a valid shape") {
    for (auto& p : parent_pointer_arrays(4, 7)) {
      TreeTopology t{p, std::vector<int>(7, 1)};
      validate(t);
      CHECK(end_effectors(t).size() == 4);
    }
  }
}

TEST_CASE("joint array counts match the published table") {
  struct Row {
    int m, b, e;
    std::int64_t j, p;
  };
  for (Row r : {Row{5, 3, 4, 45, 2}, Row{5, 3, 5, 46, 1}, Row{5, 4, 5, 187, 3},
                Row{9, 4, 5, 250, 3}, Row{21, 2, 3, 10, 1}, Row{13, 6, 7, 781, 5}}) {
    int J = static_cast<int>(required_joints(r.m, r.b).numerator());
    auto parents = parent_pointer_arrays(r.b, r.e);
    CHECK(static_cast<std::int64_t>(parents.size()) == r.p);
    std::int64_t total = 0;
    for (auto& p : parents) total += static_cast<std::int64_t>(joint_arrays(p, J, r.e).size());
    CHECK(total == r.j);
  }
}

TEST_CASE("joint arrays respect the sibling ordering rule") {
  // Two end-effector siblings under the same parent never appear in
  // decreasing order.
  std::vector<int> p{0, 1, 1};
  for (auto& j : joint_arrays(p, 9, 3)) {
    CHECK(j[1] <= j[2]);
    CHECK(j[0] + j[1] + j[2] == 9);
    for (int d : j) {
      CHECK(d >= 1);
      CHECK(d <= 5);
    }
  }
}

TEST_CASE("topology_search reproduces selected table rows") {
  struct Row {
    int m, b, e, candidates;
  };
  for (Row r : {Row{3, 2, 2, 1}, Row{3, 2, 3, 2}, Row{5, 3, 4, 9}, Row{5, 3, 5, 19},
                Row{5, 4, 5, 14}, Row{6, 3, 5, 13}, Row{13, 6, 7, 2}, Row{21, 5, 6, 57}}) {
    Atlas atlas = topology_search({r.m, r.b, r.e, r.e});
    REQUIRE(atlas.feasible);
    REQUIRE(atlas.rows.size() == 1);
    CHECK(atlas.rows[0].candidateCount == r.candidates);
    CHECK(static_cast<int>(atlas.candidates.size()) == r.candidates);
  }
}

TEST_CASE("edge ranges accumulate rows") {
  Atlas atlas = topology_search({5, 3, 3, 5});
  REQUIRE(atlas.rows.size() == 3);
  CHECK(atlas.rows[0].candidateCount == 1);
  CHECK(atlas.rows[1].candidateCount == 9);
  CHECK(atlas.rows[2].candidateCount == 19);
  CHECK(atlas.candidates.size() == 29);
  CHECK(atlas.jointArrayCount == 5 + 45 + 46);
}

TEST_CASE("infeasible joint count yields a diagnostic") {
  Atlas atlas = topology_search({4, 2, 2, 3});
  CHECK_FALSE(atlas.feasible);
  CHECK(atlas.diagnostic.find("36/7") != std::string::npos);
  CHECK(atlas.candidates.empty());
}

TEST_CASE("edge counts incompatible with J produce empty rows") {
  // m=3, b=2 -> J=4; e=5 would need at least 5 joints.
  Atlas atlas = topology_search({3, 2, 5, 5});
  REQUIRE(atlas.rows.size() == 1);
  CHECK(atlas.rows[0].candidateCount == 0);
}

TEST_CASE("brute-force oracle agrees for e <= 4") {
  struct Row {
    int m, b, e;
  };
  for (Row r : {Row{3, 2, 2}, Row{3, 2, 3}, Row{3, 3, 3}, Row{5, 2, 3}, Row{5, 3, 3},
                Row{5, 3, 4}, Row{5, 4, 4}, Row{6, 3, 4}, Row{9, 4, 4}, Row{13, 2, 3},
                Row{21, 2, 3}, Row{21, 3, 3}, Row{21, 3, 4}}) {
    int J = static_cast<int>(required_joints(r.m, r.b).numerator());
    std::set<std::string> expected = testing::brute_force_candidates(r.b, r.e, J);
    Atlas atlas = topology_search({r.m, r.b, r.e, r.e});
    std::set<std::string> got;
    for (const TreeTopology& t : atlas.candidates) got.insert(canonical_key(t));
    CHECK(got == expected);
  }
}

TEST_CASE("emitted candidates are valid and correctly sized") {
  Atlas atlas = topology_search({9, 4, 5, 5});
  for (const TreeTopology& t : atlas.candidates) {
    validate(t);
    CHECK(t.total_joints() == 16);
    CHECK(end_effectors(t).size() == 4);
    CHECK(t.live_edge_count() == 5);
  }
}
