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

#include "lpx/sampler.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "test_util.hpp"

namespace lpx {
namespace {

using test::path4;

std::set<Edge> as_set(const std::vector<Edge>& v) { return {v.begin(), v.end()}; }

TEST(ExclusionPolicy, ParseAndValidate) {
  EXPECT_EQ(ExclusionPolicy::parse("none").kind, ExclusionPolicy::Kind::None);
  EXPECT_EQ(ExclusionPolicy::parse("all").kind, ExclusionPolicy::Kind::All);
  const auto r = ExclusionPolicy::parse("random:0.25");
  EXPECT_EQ(r.kind, ExclusionPolicy::Kind::Random);
  EXPECT_DOUBLE_EQ(r.rate, 0.25);
  const auto l = ExclusionPolicy::parse("lowdeg:inf");
  EXPECT_TRUE(std::isinf(l.delta));
  EXPECT_THROW(ExclusionPolicy::parse("random:1.5"), std::invalid_argument);
  EXPECT_THROW(ExclusionPolicy::parse("lowdeg:-1"), std::invalid_argument);
  EXPECT_THROW(ExclusionPolicy::parse("sometimes"), std::invalid_argument);
  EXPECT_EQ(ExclusionPolicy::parse(ExclusionPolicy::low_degree(3).to_string()).delta, 3.0);
}

TEST(LowDegreeTargets, PathExamples) {
  const auto g = path4();
  const std::vector<Edge> two{{0, 1}, {1, 2}};
  EXPECT_EQ(low_degree_targets(two, g, 2), (std::vector<Edge>{{0, 1}}));
  EXPECT_TRUE(low_degree_targets(two, g, 0).empty());
  const std::vector<Edge> all{{0, 1}, {1, 2}, {2, 3}};
  EXPECT_EQ(low_degree_targets(all, g, 3), all);
}

TEST(ApplyExclusion, PolicyExamples) {
  const auto g = path4();
  const auto deg = g.degrees();
  const std::vector<Edge> targets{{0, 1}, {1, 2}};
  EXPECT_TRUE(apply_exclusion(targets, deg, ExclusionPolicy::none(), 1).empty());
  EXPECT_EQ(apply_exclusion(targets, deg, ExclusionPolicy::all(), 1), targets);
  EXPECT_EQ(apply_exclusion(targets, deg, ExclusionPolicy::low_degree(2), 1), (std::vector<Edge>{{0, 1}}));
  const auto inf = ExclusionPolicy::low_degree(std::numeric_limits<double>::infinity());
  EXPECT_EQ(apply_exclusion(targets, deg, inf, 1), targets);
}

TEST(ApplyExclusionProperty, LowDegreeMatchesBruteForcePredicate) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto g = test::random_graph(seed, 10 + seed % 150, 0.05 + 0.002 * static_cast<double>(seed % 40));
    const auto deg = g.degrees();
    const std::vector<Edge> targets(g.edges().begin(), g.edges().end());
    const std::size_t max_deg = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
    for (std::size_t d = 0; d <= max_deg + 1; ++d) {
      std::vector<Edge> expect;
      for (const auto& e : targets) {
        if (std::min(deg[e.u], deg[e.v]) < d) expect.push_back(e);
      }
      ASSERT_EQ(apply_exclusion(targets, deg, ExclusionPolicy::low_degree(static_cast<double>(d)), 0), expect);
    }
  }
}

TEST(ApplyExclusionProperty, RandomExcludesRoundedCountOfDistinctTargets) {
  const auto g = test::random_graph(3, 80, 0.1);
  const auto deg = g.degrees();
  const std::vector<Edge> targets(g.edges().begin(), g.edges().end());
  for (double rate : {0.0, 0.1, 0.25, 0.333, 0.5, 0.77, 1.0}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto out = apply_exclusion(targets, deg, ExclusionPolicy::random(rate), seed);
      ASSERT_EQ(out.size(), static_cast<std::size_t>(std::llround(rate * static_cast<double>(targets.size()))));
      const auto s = as_set(out);
      ASSERT_EQ(s.size(), out.size());
      for (const auto& e : out) ASSERT_TRUE(std::binary_search(targets.begin(), targets.end(), e));
    }
  }
}

TEST(ApplyExclusion, RandomIsSeeded) {
  const auto g = test::random_graph(4, 50, 0.2);
  const auto deg = g.degrees();
  const std::vector<Edge> targets(g.edges().begin(), g.edges().end());
  const auto p = ExclusionPolicy::random(0.3);
  EXPECT_EQ(apply_exclusion(targets, deg, p, 9), apply_exclusion(targets, deg, p, 9));
  EXPECT_NE(apply_exclusion(targets, deg, p, 9), apply_exclusion(targets, deg, p, 10));
}

TEST(ApplyExclusion, OperationCountIsLinear) {
  const auto g = test::random_graph(8, 400, 0.05);
  const auto deg = g.degrees();
  const std::vector<Edge> all(g.edges().begin(), g.edges().end());
  ASSERT_GE(all.size(), 2000u);
  for (const auto& policy : {ExclusionPolicy::low_degree(4), ExclusionPolicy::all(), ExclusionPolicy::random(0.4)}) {
    OpCounter a, b;
    apply_exclusion(std::span(all).first(500), deg, policy, 1, &a);
    apply_exclusion(std::span(all).first(1000), deg, policy, 1, &b);
    const double ratio = static_cast<double>(b.ops) / static_cast<double>(a.ops);
    EXPECT_GE(ratio, 1.8);
    EXPECT_LE(ratio, 2.2);
  }
}

TEST(NegativeSample, PathOnlyNonEdges) {
  const auto g = path4();
  const std::vector<Edge> pos{{0, 1}};
  const std::set<Edge> allowed{{0, 2}, {0, 3}, {1, 3}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto neg = negative_sample(g, pos, 1, seed);
    ASSERT_EQ(neg.size(), 1u);
    ASSERT_TRUE(allowed.count(neg[0]));
  }
}

TEST(NegativeSample, CompleteGraphFails) {
  const std::vector<Edge> pos{{0, 1}};
  EXPECT_THROW(negative_sample(test::triangle(), pos, 1, 0), NegativeSamplingError);
}

TEST(NegativeSample, DeterministicAndAvoidsPositives) {
  const auto g = test::random_graph(2, 30, 0.1);
  // positives that are not edges of g are still never returned
  const std::vector<Edge> pos{{0, 29}, {1, 28}, {2, 27}};
  const auto a = negative_sample(g, pos, 40, 42);
  EXPECT_EQ(a, negative_sample(g, pos, 40, 42));
  EXPECT_EQ(a.size(), 120u);
  for (const auto& e : a) {
    EXPECT_FALSE(g.has_edge(e));
    EXPECT_LT(e.u, e.v);
    EXPECT_EQ(std::count(pos.begin(), pos.end(), e), 0);
  }
}

TEST(MatchRandomRate, Examples) {
  const auto g = path4();
  EdgeSplit split;
  split.train = {{0, 1}, {1, 2}, {2, 3}};
  EXPECT_DOUBLE_EQ(match_random_rate(g, split, 2), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(match_random_rate(g, split, 0), 0.0);

  const auto star = test::star(4);
  EdgeSplit s2;
  s2.train = test::edges_of(star);
  EXPECT_DOUBLE_EQ(match_random_rate(star, s2, 2), 1.0);
}

TEST(DefaultDelta, RoundsAverageTrainDegree) {
  EdgeSplit split;
  split.train = {{0, 1}, {1, 2}, {2, 3}};  // degrees 1,2,2,1 -> 1.5
  EXPECT_DOUBLE_EQ(default_delta(split), 2.0);
  split.train = test::edges_of(test::star(4));  // 8 / 5 = 1.6
  EXPECT_DOUBLE_EQ(default_delta(split), 2.0);
}

EdgeSplit path_split() {
  EdgeSplit s;
  s.train = {{0, 1}, {1, 2}, {2, 3}};
  return s;
}

Batch first_batch(ExclusionPolicy policy) {
  static const auto g = path4();
  SamplerOptions o;
  o.batch_size = 3;
  o.hops = 1;
  o.negs_per_pos = 0;
  o.policy = policy;
  const EdgeSampler sampler(g, path_split(), o);
  return sampler.sample(0, 0);
}

TEST(EdgeSampler, PathBatchExamples) {
  auto b = first_batch(ExclusionPolicy::all());
  EXPECT_EQ(b.message_graph.num_nodes(), 4u);
  EXPECT_EQ(b.message_graph.num_edges(), 0u);

  b = first_batch(ExclusionPolicy::none());
  EXPECT_EQ(b.message_graph.edges(), (std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}}));
  EXPECT_TRUE(b.excluded.empty());

  b = first_batch(ExclusionPolicy::low_degree(2));
  EXPECT_EQ(b.message_graph.edges(), (std::vector<Edge>{{1, 2}}));
  EXPECT_EQ(as_set(b.excluded), (std::set<Edge>{{0, 1}, {2, 3}}));
}

TEST(EdgeSampler, RejectsEmptyTrainAndZeroBatch) {
  const auto g = path4();
  EXPECT_THROW(EdgeSampler(g, EdgeSplit{}, SamplerOptions{}), std::invalid_argument);
  SamplerOptions o;
  o.batch_size = 0;
  EXPECT_THROW(EdgeSampler(g, path_split(), o), std::invalid_argument);
  EdgeSplit bad;
  bad.train = {{0, 3}};
  EXPECT_THROW(EdgeSampler(g, bad, SamplerOptions{}), std::invalid_argument);
}

TEST(EdgeSampler, OversizedBatchIsShortened) {
  const auto g = path4();
  SamplerOptions o;
  o.batch_size = 10;
  o.negs_per_pos = 1;
  const EdgeSampler sampler(g, path_split(), o);
  EXPECT_EQ(sampler.batches_per_epoch(), 1u);
  EXPECT_EQ(sampler.sample(0, 0).positives.size(), 3u);
  EXPECT_THROW(sampler.sample(0, 1), std::out_of_range);
}

class SamplerProperty : public ::testing::TestWithParam<int> {};

TEST_P(SamplerProperty, BatchInvariantsAndEpochPartition) {
  const auto kind = GetParam();
  const ExclusionPolicy policies[] = {ExclusionPolicy::none(), ExclusionPolicy::all(),
                                      ExclusionPolicy::random(0.5), ExclusionPolicy::low_degree(3)};
  const auto& policy = policies[kind];
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto g = test::random_graph(seed + 100, 60, 0.06);
    EdgeSplit split;
    split.train.assign(g.edges().begin(), g.edges().end());
    if (split.train.empty()) continue;
    SamplerOptions o;
    o.batch_size = 7;
    o.hops = seed % 3;
    o.policy = policy;
    o.seed = seed;
    const EdgeSampler sampler(g, split, o);
    for (std::size_t epoch = 0; epoch < 2; ++epoch) {
      std::multiset<Edge> seen;
      for (std::size_t i = 0; i < sampler.batches_per_epoch(); ++i) {
        const auto b = sampler.sample(epoch, i);
        const auto pos = as_set(b.positives);
        for (const auto& e : b.excluded) {
          ASSERT_TRUE(pos.count(e));
          ASSERT_FALSE(b.message_graph.has_edge(e));
        }
        if (policy.kind == ExclusionPolicy::Kind::None) {
          ASSERT_TRUE(b.excluded.empty());
          for (const auto& e : b.positives) ASSERT_TRUE(b.message_graph.has_edge(e));
        }
        for (const auto* list : {&b.positives, &b.negatives}) {
          for (const auto& e : *list) {
            ASSERT_TRUE(b.message_graph.local_id(e.u).has_value());
            ASSERT_TRUE(b.message_graph.local_id(e.v).has_value());
          }
        }
        // the message graph is a subgraph of g
        for (const auto& e : b.message_graph.edges()) ASSERT_TRUE(g.has_edge(e));
        seen.insert(b.positives.begin(), b.positives.end());
      }
      ASSERT_EQ(std::vector<Edge>(seen.begin(), seen.end()), split.train);
    }
    // bit-identical rebuild of any batch
    const auto a = sampler.sample(1, 0);
    const auto b = sampler.sample(1, 0);
    ASSERT_EQ(a.positives, b.positives);
    ASSERT_EQ(a.negatives, b.negatives);
    ASSERT_EQ(a.excluded, b.excluded);
    ASSERT_EQ(a.message_graph.edges(), b.message_graph.edges());
  }
}

INSTANTIATE_TEST_SUITE_P(Policies, SamplerProperty, ::testing::Values(0, 1, 2, 3));

TEST(EdgeSampler, DeltaZeroMatchesNoneAndInfinityMatchesAll) {
  const auto g = test::random_graph(77, 50, 0.1);
  EdgeSplit split;
  split.train.assign(g.edges().begin(), g.edges().end());
  SamplerOptions o;
  o.batch_size = 16;
  o.seed = 5;
  auto run = [&](ExclusionPolicy p) {
    o.policy = p;
    const EdgeSampler s(g, split, o);
    std::vector<std::vector<Edge>> out;
    for (std::size_t i = 0; i < s.batches_per_epoch(); ++i) out.push_back(s.sample(0, i).message_graph.edges());
    return out;
  };
  EXPECT_EQ(run(ExclusionPolicy::low_degree(0)), run(ExclusionPolicy::none()));
  EXPECT_EQ(run(ExclusionPolicy::low_degree(std::numeric_limits<double>::infinity())),
            run(ExclusionPolicy::all()));
}

}  // namespace
}  // namespace lpx
