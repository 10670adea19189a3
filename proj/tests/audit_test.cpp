// Copyright 2026 The lpx Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lpx/audit.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "test_util.hpp"

namespace lpx {
namespace {

using test::edges_of;

// train {0,1}, valid {1,2}, test {0,2}
EdgeSplit triangle_split() {
  EdgeSplit s;
  s.train = {{0, 1}};
  s.valid = {{1, 2}};
  s.test = {{0, 2}};
  return s;
}

Graph triangle_with(bool with_valid, bool with_test) {
  std::vector<Edge> e{{0, 1}};
  if (with_valid) e.push_back({1, 2});
  if (with_test) e.push_back({0, 2});
  return Graph::from_edges(3, e);
}

struct Case {
  bool with_valid;
  bool with_test;
  bool keep_valid;
  std::vector<Edge> expected;
  std::size_t removed_valid;
  std::size_t removed_test;
  bool clean;
};

TEST(LeakageCheck, TriangleAllCombinations) {
  const std::vector<Case> cases{
      {false, false, false, {{0, 1}}, 0, 0, true},
      {false, false, true, {{0, 1}}, 0, 0, true},
      {true, false, false, {{0, 1}}, 1, 0, false},
      {true, false, true, {{0, 1}, {1, 2}}, 0, 0, true},
      {false, true, false, {{0, 1}}, 0, 1, false},
      {false, true, true, {{0, 1}}, 0, 1, false},
      {true, true, false, {{0, 1}}, 1, 1, false},
      {true, true, true, {{0, 1}, {1, 2}}, 0, 1, false},
  };
  const auto split = triangle_split();
  for (const auto& c : cases) {
    SCOPED_TRACE(testing::Message() << "valid=" << c.with_valid << " test=" << c.with_test
                                    << " keep=" << c.keep_valid);
    const auto g = triangle_with(c.with_valid, c.with_test);
    const auto r = leakage_check(g, split, c.keep_valid);
    EXPECT_EQ(edges_of(r.graph), c.expected);
    EXPECT_EQ(r.report.valid_present, c.with_valid);
    EXPECT_EQ(r.report.test_present, c.with_test);
    EXPECT_EQ(r.report.removed_valid, c.removed_valid);
    EXPECT_EQ(r.report.removed_test, c.removed_test);
    EXPECT_EQ(r.report.verdict == AuditReport::Verdict::Clean, c.clean);
    EXPECT_EQ(r.graph.num_nodes(), 3u);
  }
}

TEST(LeakageCheck, PathExample) {
  // 0-1-2-3 with test edge (2,3) in the graph and valid edge (1,2) in the graph
  EdgeSplit s;
  s.train = {{0, 1}};
  s.valid = {{1, 2}};
  s.test = {{2, 3}};
  const auto g = test::path4();
  const auto strict = leakage_check(g, s, false);
  EXPECT_EQ(edges_of(strict.graph), (std::vector<Edge>{{0, 1}}));
  const auto kept = leakage_check(g, s, true);
  EXPECT_EQ(edges_of(kept.graph), (std::vector<Edge>{{0, 1}, {1, 2}}));
  EXPECT_FALSE(assert_no_test_leakage(g, s));
  EXPECT_TRUE(assert_no_test_leakage(kept.graph, s));
}

TEST(LeakageCheck, ReportsTrainEdgesMissingFromGraph) {
  EdgeSplit s;
  s.train = {{0, 1}, {2, 3}};
  const auto r = leakage_check(Graph::from_edges(4, {{0, 1}}), s, false);
  EXPECT_EQ(r.report.train_missing, 1u);
  EXPECT_EQ(r.report.verdict, AuditReport::Verdict::Clean);
}

TEST(LeakageCheck, KeepsFeatures) {
  Matrix x = Matrix::Random(3, 2);
  const auto g = triangle_with(true, true).with_features(x);
  const auto r = leakage_check(g, triangle_split(), false);
  ASSERT_TRUE(r.graph.has_features());
  EXPECT_EQ(r.graph.features(), x);
}

TEST(LeakageCheck, ReportTextIsStable) {
  const auto r = leakage_check(triangle_with(true, true), triangle_split(), true);
  EXPECT_EQ(r.report.to_text(),
            "valid_present=true\ntest_present=true\nremoved_valid=0\nremoved_test=1\n"
            "keep_valid=true\ntrain_missing=0\nverdict=leaked-and-fixed\n");
}

// Random clique/path/triangle fixture with a random split and random
// presence of valid/test edges in the audited graph.
struct Instance {
  Graph g;
  EdgeSplit split;
};

Instance random_instance(Rng& rng) {
  std::uniform_int_distribution<int> shape(0, 2);
  std::uniform_int_distribution<std::size_t> size(3, 12);
  const int kind = shape(rng);
  const std::size_t n = kind == 0 ? 3 : size(rng);
  std::vector<Edge> all;
  if (kind == 1) {
    for (NodeId i = 0; i + 1 < n; ++i) all.push_back({i, i + 1});
  } else {
    for (NodeId i = 0; i < n; ++i)
      for (NodeId j = i + 1; j < n; ++j) all.push_back({i, j});
  }
  // random relabeling
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), NodeId{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  for (auto& e : all) e = Edge::canonical(perm[e.u], perm[e.v]);

  std::uniform_int_distribution<int> role(0, 2);
  std::bernoulli_distribution coin(0.5);
  const bool valid_in = coin(rng), test_in = coin(rng);
  Instance inst;
  std::vector<Edge> present;
  for (const auto& e : all) {
    const int r = role(rng);
    if (r == 0) {
      inst.split.train.push_back(e);
      present.push_back(e);
    } else if (r == 1) {
      inst.split.valid.push_back(e);
      if (valid_in && coin(rng)) present.push_back(e);
    } else {
      inst.split.test.push_back(e);
      if (test_in && coin(rng)) present.push_back(e);
    }
  }
  inst.split.normalize();
  inst.g = Graph::from_edges(n, present);
  return inst;
}

std::vector<Edge> reference(const Instance& inst, bool keep_valid) {
  std::set<Edge> drop(inst.split.test.begin(), inst.split.test.end());
  if (!keep_valid) drop.insert(inst.split.valid.begin(), inst.split.valid.end());
  std::vector<Edge> out;
  for (const auto& e : inst.g.edges())
    if (!drop.count(e)) out.push_back(e);
  return out;
}

bool subset(const Graph& a, const Graph& b) {
  return std::all_of(a.edges().begin(), a.edges().end(), [&](const Edge& e) { return b.has_edge(e); });
}

TEST(LeakageCheckProperty, MatchesReferenceIdempotentAndMonotoneInKeepValid) {
  Rng rng(20240611);
  for (int trial = 0; trial < 1000; ++trial) {
    SCOPED_TRACE(trial);
    const auto inst = random_instance(rng);
    for (bool keep : {false, true}) {
      const auto once = leakage_check(inst.g, inst.split, keep);
      ASSERT_EQ(edges_of(once.graph), reference(inst, keep));
      ASSERT_TRUE(assert_no_test_leakage(once.graph, inst.split));
      const auto twice = leakage_check(once.graph, inst.split, keep);
      ASSERT_EQ(edges_of(twice.graph), edges_of(once.graph));
      ASSERT_EQ(twice.report.verdict, AuditReport::Verdict::Clean);
      ASSERT_EQ(twice.report.removed_test + twice.report.removed_valid, 0u);
    }
    const auto strict = leakage_check(inst.g, inst.split, false).graph;
    const auto loose = leakage_check(inst.g, inst.split, true).graph;
    ASSERT_TRUE(subset(strict, loose));
  }
}

}  // namespace
}  // namespace lpx
