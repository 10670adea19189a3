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

#include "lpx/graph.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "test_util.hpp"

namespace lpx {
namespace {

using test::edges_of;
using test::path4;

TEST(Edge, CanonicalOrdersEndpoints) {
  EXPECT_EQ(Edge::canonical(3, 1), (Edge{1, 3}));
  EXPECT_EQ(Edge::canonical(1, 3), (Edge{1, 3}));
  EXPECT_THROW(Edge::canonical(2, 2), std::invalid_argument);
}

TEST(Graph, FromEdgesDeduplicatesAndCanonicalizes) {
  std::size_t dups = 0;
  const auto g = Graph::from_edges(3, {{0, 1}, {1, 2}, {2, 1}}, &dups);
  EXPECT_EQ(dups, 1u);
  EXPECT_EQ(edges_of(g), (std::vector<Edge>{{0, 1}, {1, 2}}));
  EXPECT_EQ(g.num_nodes(), 3u);
}

TEST(Graph, RejectsSelfLoopAndOutOfRange) {
  EXPECT_THROW(Graph::from_edges(3, {{1, 1}}), std::invalid_argument);
  EXPECT_THROW(Graph::from_edges(2, {{0, 2}}), std::invalid_argument);
}

TEST(Graph, DegreesOnPath) {
  const auto g = path4();
  EXPECT_EQ(g.degree(0), 1u);
  EXPECT_EQ(g.degree(1), 2u);
  EXPECT_EQ(g.degree(2), 2u);
  EXPECT_EQ(g.degree(3), 1u);
  EXPECT_THROW(g.degree(4), std::out_of_range);
}

TEST(Graph, IsolatedNodeHasDegreeZero) {
  const auto g = Graph::from_edges(3, {{0, 1}});
  EXPECT_EQ(g.degree(2), 0u);
  EXPECT_TRUE(g.neighbors(2).empty());
}

TEST(Graph, HasEdgeIgnoresDirection) {
  const auto g = path4();
  EXPECT_TRUE(g.has_edge(2, 1));
  EXPECT_TRUE(g.has_edge(Edge{1, 2}));
  EXPECT_FALSE(g.has_edge(0, 3));
}

TEST(Graph, FeaturesMustMatchNodeCount) {
  const auto g = path4();
  EXPECT_THROW(g.with_features(Matrix::Zero(3, 2)), std::invalid_argument);
  const auto h = g.with_features(Matrix::Ones(4, 2));
  EXPECT_TRUE(h.has_features());
  EXPECT_FALSE(g.has_features());
}

TEST(GraphProperty, CsrIsSymmetricSortedAndMatchesEdgeList) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto g = test::random_graph(seed, 40, 0.1);
    std::set<Edge> from_adj;
    std::vector<std::size_t> occurrences(g.num_nodes(), 0);
    for (NodeId u = 0; u < g.num_nodes(); ++u) {
      const auto nb = g.neighbors(u);
      ASSERT_TRUE(std::is_sorted(nb.begin(), nb.end()));
      ASSERT_EQ(std::adjacent_find(nb.begin(), nb.end()), nb.end());
      for (auto v : nb) {
        ASSERT_NE(u, v);
        ASSERT_TRUE(std::binary_search(g.neighbors(v).begin(), g.neighbors(v).end(), u));
        from_adj.insert(Edge::canonical(u, v));
        ++occurrences[v];
      }
    }
    ASSERT_EQ(std::vector<Edge>(from_adj.begin(), from_adj.end()), edges_of(g));
    for (NodeId u = 0; u < g.num_nodes(); ++u) ASSERT_EQ(g.degree(u), occurrences[u]);
  }
}

TEST(EdgeListParse, CommentsHeaderAndDuplicates) {
  std::size_t declared = 0;
  LoadReport report;
  const auto edges = parse_edge_list("# nodes: 6\n0 1\n# note\n1 2\n2 1\n", &declared, &report);
  EXPECT_EQ(declared, 6u);
  EXPECT_EQ(report.lines, 5u);
  // canonical but not yet deduplicated; the loader counts duplicates
  EXPECT_EQ(edges, (std::vector<Edge>{{0, 1}, {1, 2}, {1, 2}}));
}

TEST(EdgeListFile, LoadReportCountsDuplicates) {
  test::TempDir dir;
  test::write(dir.path() / "g.tsv", "0 1\n1 2\n2 1\n0 1\n");
  LoadReport report;
  const auto g = load_edge_list(dir.path() / "g.tsv", &report);
  EXPECT_EQ(report.duplicates, 2u);
  EXPECT_EQ(g.num_edges(), 2u);
}

TEST(EdgeListParse, SelfLoopReportsLine) {
  try {
    parse_edge_list("0 1\n3 3\n", nullptr);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(EdgeListParse, MalformedAndOverflow) {
  EXPECT_THROW(parse_edge_list("0\n", nullptr), ParseError);
  EXPECT_THROW(parse_edge_list("0 x\n", nullptr), ParseError);
  EXPECT_THROW(parse_edge_list("0 99999999999\n", nullptr), ParseError);
  EXPECT_THROW(parse_edge_list("-1 2\n", nullptr), ParseError);
}

TEST(EdgeListFile, LoadExamples) {
  test::TempDir dir;
  const auto p = dir.path() / "g.tsv";
  test::write(p, "0 1\n1 2\n2 1\n");
  const auto g = load_edge_list(p);
  EXPECT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(edges_of(g), (std::vector<Edge>{{0, 1}, {1, 2}}));

  test::write(p, "");
  const auto empty = load_edge_list(p);
  EXPECT_EQ(empty.num_nodes(), 0u);
  EXPECT_EQ(empty.num_edges(), 0u);

  EXPECT_THROW(load_edge_list(dir.path() / "missing.tsv"), std::runtime_error);
}

TEST(EdgeListFile, RoundTripKeepsIsolatedNodes) {
  test::TempDir dir;
  const auto g = Graph::from_edges(7, {{0, 1}, {2, 5}});
  save_edge_list(dir.path() / "g.tsv", g.edges(), g.num_nodes());
  const auto back = load_edge_list(dir.path() / "g.tsv");
  EXPECT_EQ(back.num_nodes(), 7u);
  EXPECT_EQ(edges_of(back), edges_of(g));
}

TEST(FeatureFile, RoundTripIsExact) {
  test::TempDir dir;
  Matrix x(3, 2);
  x << 0.1, -2.5e-8, 1.0 / 3.0, 7.0, -0.0, 1e300;
  save_features(dir.path() / "x.txt", x);
  EXPECT_EQ(load_features(dir.path() / "x.txt"), x);
}

TEST(FeatureFile, RejectsShortFile) {
  test::TempDir dir;
  test::write(dir.path() / "x.txt", "2 2\n1 2\n3\n");
  EXPECT_THROW(load_features(dir.path() / "x.txt"), std::runtime_error);
}

TEST(KhopMessageGraph, PathExamples) {
  const auto g = path4();
  const std::vector<Edge> both{{0, 1}, {2, 3}};
  auto sub = khop_message_graph(g, both, 1);
  EXPECT_EQ(sub.num_nodes(), 4u);
  EXPECT_EQ(sub.edges(), (std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}}));

  const std::vector<Edge> first{{0, 1}};
  sub = khop_message_graph(g, first, 0);
  EXPECT_EQ(std::vector<NodeId>(sub.nodes().begin(), sub.nodes().end()), (std::vector<NodeId>{0, 1}));
  EXPECT_EQ(sub.edges(), (std::vector<Edge>{{0, 1}}));

  const std::vector<Edge> mid{{1, 2}};
  sub = khop_message_graph(g, mid, 1);
  EXPECT_EQ(sub.num_nodes(), 4u);
  EXPECT_EQ(sub.num_edges(), 3u);
}

TEST(KhopMessageGraph, LocalIdsFollowGlobalOrder) {
  const auto g = path4();
  const std::vector<NodeId> seeds{3};
  const auto sub = khop_subgraph(g, seeds, 1);
  ASSERT_EQ(sub.num_nodes(), 2u);
  EXPECT_EQ(sub.global_id(0), 2u);
  EXPECT_EQ(sub.global_id(1), 3u);
  EXPECT_EQ(sub.local_id(3), std::optional<std::uint32_t>(1));
  EXPECT_FALSE(sub.local_id(0).has_value());
  ASSERT_EQ(sub.seeds().size(), 1u);
  EXPECT_EQ(sub.seeds()[0], 1u);
}

// A BFS oracle written independently of the CSR traversal.
std::set<NodeId> reachable(const std::vector<Edge>& edges, std::set<NodeId> frontier, std::size_t k) {
  std::set<NodeId> seen = frontier;
  for (std::size_t hop = 0; hop < k; ++hop) {
    std::set<NodeId> next;
    for (const auto& e : edges) {
      if (frontier.count(e.u) && !seen.count(e.v)) next.insert(e.v);
      if (frontier.count(e.v) && !seen.count(e.u)) next.insert(e.u);
    }
    seen.insert(next.begin(), next.end());
    frontier = next;
  }
  return seen;
}

TEST(KhopProperty, MatchesBruteForceInducedSubgraph) {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto g = test::random_graph(seed, 30, 0.08);
    if (g.num_edges() == 0) continue;
    const auto all = edges_of(g);
    std::vector<Edge> targets;
    for (const auto& e : all) {
      if (rng() % 4 == 0) targets.push_back(e);
    }
    if (targets.empty()) targets.push_back(all.front());
    const std::size_t k = rng() % 4;
    std::set<NodeId> seeds;
    for (const auto& e : targets) {
      seeds.insert(e.u);
      seeds.insert(e.v);
    }
    const auto nodes = reachable(all, seeds, k);
    std::vector<Edge> induced;
    for (const auto& e : all) {
      if (nodes.count(e.u) && nodes.count(e.v)) induced.push_back(e);
    }
    const auto sub = khop_message_graph(g, targets, k);
    ASSERT_EQ(std::vector<NodeId>(sub.nodes().begin(), sub.nodes().end()),
              std::vector<NodeId>(nodes.begin(), nodes.end()));
    ASSERT_EQ(sub.edges(), induced);
    for (const auto& e : targets) ASSERT_TRUE(sub.has_edge(e));
  }
}

TEST(KhopProperty, LargeKOnConnectedGraphReturnsWholeGraph) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    // a random tree plus chords is connected with diameter < n
    std::mt19937_64 rng(seed);
    const std::size_t n = 25;
    std::vector<Edge> edges;
    for (NodeId v = 1; v < n; ++v) edges.push_back({static_cast<NodeId>(rng() % v), v});
    for (int i = 0; i < 10; ++i) {
      const auto a = static_cast<NodeId>(rng() % n);
      const auto b = static_cast<NodeId>(rng() % n);
      if (a != b) edges.push_back(Edge::canonical(a, b));
    }
    const auto g = Graph::from_edges(n, edges);
    const std::vector<Edge> one{g.edges().front()};
    const auto sub = khop_message_graph(g, one, n);
    ASSERT_EQ(sub.num_nodes(), n);
    ASSERT_EQ(sub.edges(), edges_of(g));
  }
}

TEST(Subgraph, WithoutEdgesDropsOnlyListed) {
  const auto g = path4();
  const auto sub = Subgraph::whole(g);
  const std::vector<Edge> drop{{2, 1}, {0, 3}};
  const auto cut = sub.without_edges(drop);
  EXPECT_EQ(cut.edges(), (std::vector<Edge>{{0, 1}, {2, 3}}));
  EXPECT_EQ(cut.num_nodes(), 4u);
  EXPECT_EQ(cut.degree(1), 1u);
}

TEST(RemoveEdges, Examples) {
  const auto tri = test::triangle();
  const std::vector<Edge> drop{{1, 2}};
  const auto r = remove_edges(tri, drop);
  EXPECT_EQ(edges_of(r.graph), (std::vector<Edge>{{0, 1}, {0, 2}}));
  EXPECT_EQ(r.removed, 1u);

  const auto g = path4();
  const auto all = edges_of(g);
  const auto empty = remove_edges(g, all);
  EXPECT_EQ(empty.graph.num_nodes(), 4u);
  EXPECT_EQ(empty.graph.num_edges(), 0u);

  const std::vector<Edge> absent{{0, 3}};
  const auto same = remove_edges(g, absent);
  EXPECT_EQ(edges_of(same.graph), all);
  EXPECT_EQ(same.ignored, 1u);
  EXPECT_EQ(same.removed, 0u);
}

TEST(RemoveEdges, KeepsFeatures) {
  const auto g = path4().with_features(Matrix::Ones(4, 3));
  const std::vector<Edge> drop{{0, 1}};
  const auto r = remove_edges(g, drop);
  ASSERT_TRUE(r.graph.has_features());
  EXPECT_EQ(r.graph.features(), g.features());
}

TEST(ContainsEdges, Examples) {
  const auto g = path4();
  const std::vector<Edge> mid{{2, 1}};
  auto probe = contains_edges(g, mid);
  EXPECT_TRUE(probe.any);
  EXPECT_EQ(probe.present, (std::vector<Edge>{{1, 2}}));

  const std::vector<Edge> absent{{0, 3}};
  probe = contains_edges(g, absent);
  EXPECT_FALSE(probe.any);
  EXPECT_TRUE(probe.present.empty());

  probe = contains_edges(g, {});
  EXPECT_FALSE(probe.any);
  EXPECT_TRUE(probe.present.empty());
}

TEST(RemoveEdgesProperty, RemovedEdgesAreGoneAndNodeCountKept) {
  std::mt19937_64 rng(11);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto g = test::random_graph(seed, 20, 0.2);
    std::vector<Edge> drop;
    for (const auto& e : g.edges()) {
      if (rng() % 3 == 0) drop.push_back(e);
    }
    drop.push_back(Edge::canonical(0, 19));  // may or may not be present
    const auto r = remove_edges(g, drop);
    ASSERT_EQ(r.graph.num_nodes(), g.num_nodes());
    const auto probe = contains_edges(r.graph, drop);
    ASSERT_FALSE(probe.any);
    ASSERT_TRUE(probe.present.empty());
    ASSERT_EQ(r.graph.num_edges() + r.removed, g.num_edges());
  }
}

}  // namespace
}  // namespace lpx
