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

#include "lpx/theory.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "lpx/synthetic.hpp"
#include "test_util.hpp"

namespace lpx {
namespace {

ModelParams linear_gcn(std::size_t layers, std::size_t width, std::uint64_t seed) {
  std::vector<std::size_t> dims(layers + 1, width);
  auto p = ModelParams::init(Arch::GCN, dims, false, seed);
  p.relu = false;
  return p;
}

TEST(InfluenceJacobian, ZeroBeyondReceptiveField) {
  const auto g = test::path4();
  Rng rng(1);
  const Matrix x = test::random_matrix(4, 3, rng);
  for (std::size_t layers = 1; layers <= 2; ++layers) {
    auto p = ModelParams::init(Arch::GCN, std::vector<std::size_t>(layers + 1, 3), false, 4);
    for (std::size_t s = 0; s < 3; ++s) {
      EXPECT_EQ(influence_jacobian(g, x, p, 0, 3, s, 1), 0.0);
    }
  }
}

TEST(InfluenceJacobian, TwoNodeIdentityIsOne) {
  const auto g = Graph::from_edges(2, {{0, 1}});
  auto p = linear_gcn(1, 2, 1);
  p.layers[0].weight = Matrix::Identity(2, 2);
  const Matrix x = Matrix::Constant(2, 2, 0.3);
  EXPECT_NEAR(influence_jacobian(g, x, p, 0, 1, 0, 0), 1.0, 1e-9);
  EXPECT_NEAR(influence_jacobian(g, x, p, 0, 1, 1, 1), 1.0, 1e-9);
  EXPECT_NEAR(influence_jacobian(g, x, p, 0, 1, 0, 1), 0.0, 1e-9);
}

TEST(InfluenceJacobian, ThreeNodePathMatchesPathProduct) {
  // 0-1-2, two ReLU GCN layers; the only 2-step walk from 2 to 0 passes 1
  const auto g = Graph::from_edges(3, {{0, 1}, {1, 2}});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::vector<std::size_t> dims{3, 4, 2};
    const auto p = ModelParams::init(Arch::GCN, dims, false, seed);
    Rng rng(seed + 50);
    const Matrix x = test::random_matrix(3, 3, rng);
    const Matrix& w1 = p.layers[0].weight;
    const Matrix& w2 = p.layers[1].weight;
    const double norm = 1.0 / std::sqrt(2.0);  // P_01 = P_10 = P_12 = 1/sqrt(2)
    const Eigen::RowVectorXd z1 = norm * (x.row(0) + x.row(2)) * w1;
    if ((z1.array().abs() < 1e-6).any()) continue;
    for (std::size_t s = 0; s < 2; ++s) {
      for (std::size_t t = 0; t < 3; ++t) {
        double expected = 0.0;
        for (Eigen::Index r = 0; r < w1.cols(); ++r) {
          if (z1(r) > 0.0) expected += w1(t, r) * w2(r, s);
        }
        expected *= norm * norm;
        EXPECT_NEAR(influence_jacobian(g, x, p, 0, 2, s, t), expected,
                    1e-7 * std::max(1.0, std::abs(expected)))
            << "seed " << seed;
      }
    }
  }
}

TEST(InfluenceJacobian, RejectsBadIndices) {
  const auto g = Graph::from_edges(2, {{0, 1}});
  const auto p = linear_gcn(1, 2, 1);
  const Matrix x = Matrix::Ones(2, 2);
  EXPECT_THROW(influence_jacobian(g, x, p, 5, 1, 0, 0), std::invalid_argument);
  EXPECT_THROW(influence_jacobian(g, x, p, 0, 1, 7, 0), std::invalid_argument);
  EXPECT_THROW(influence_jacobian(g, x, p, 0, 1, 0, 7), std::invalid_argument);
}

TEST(ClosedForm, Examples) {
  EXPECT_NEAR(closed_form_effect(2), 0.292893, 1e-6);
  EXPECT_NEAR(closed_form_effect(5), 0.105573, 1e-6);
  EXPECT_DOUBLE_EQ(closed_form_effect(1), 1.0);
  EXPECT_THROW(closed_form_effect(0), std::invalid_argument);
  for (std::size_t d = 2; d < 200; ++d) EXPECT_LT(closed_form_effect(d + 1), closed_form_effect(d));
  EXPECT_DOUBLE_EQ(expected_ratio(Arch::GCN, 4), std::sqrt(0.75));
  EXPECT_DOUBLE_EQ(expected_ratio(Arch::SAGE, 4), 1.0);
}

TEST(InfluenceFixture, Shape) {
  for (std::size_t layers = 1; layers <= 3; ++layers) {
    for (std::size_t d = 2; d <= 6; ++d) {
      const auto f = influence_fixture(d, layers);
      EXPECT_EQ(f.before.degree(f.target), d);
      EXPECT_EQ(f.after.degree(f.target), d - 1);
      EXPECT_TRUE(f.before.has_edge(f.removed));
      EXPECT_FALSE(f.after.has_edge(f.removed));
      EXPECT_EQ(f.after.num_edges() + 1, f.before.num_edges());
      EXPECT_TRUE(f.removed.u == f.target || f.removed.v == f.target);
      EXPECT_FALSE(f.sources.empty());
    }
  }
}

TEST(EffectRatio, GcnMatchesClosedForm) {
  for (std::size_t layers : {1u, 2u}) {
    for (std::size_t d : {2u, 5u, 12u}) {
      const auto r = effect_ratio_experiment(d, layers, 50, 7);
      EXPECT_EQ(r.trials, 50u);
      EXPECT_EQ(r.used + r.discarded, 50u);
      EXPECT_LT(std::abs(r.empirical - r.closed_form), 0.05) << "d=" << d << " layers=" << layers;
      EXPECT_DOUBLE_EQ(r.closed_form, closed_form_effect(d));
    }
  }
}

TEST(EffectRatio, SageMatchesMeanAggregatorRatio) {
  EffectRatioOptions opts;
  opts.arch = Arch::SAGE;
  const auto r = effect_ratio_experiment(4, 2, 30, 3, opts);
  EXPECT_NEAR(r.mean_ratio, expected_ratio(Arch::SAGE, 4), 0.05);
}

TEST(EffectRatio, HigherDegreeLosesLessInfluenceAcrossSeeds) {
  int ok = 0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    const auto lo = effect_ratio_experiment(2, 2, 200, s);
    const auto hi = effect_ratio_experiment(10, 2, 200, s);
    if (hi.empirical < lo.empirical) ++ok;
  }
  EXPECT_GE(ok, 19);  // at least 95% of seeds
}

TEST(EffectRatio, Errors) {
  EXPECT_THROW(effect_ratio_experiment(1, 2, 10, 0), std::invalid_argument);
  EXPECT_THROW(effect_ratio_experiment(3, 0, 10, 0), std::invalid_argument);
  EXPECT_THROW(effect_ratio_experiment(3, 2, 0, 0), std::invalid_argument);
}

TEST(EffectRatio, Deterministic) {
  const auto a = effect_ratio_experiment(6, 2, 20, 11);
  const auto b = effect_ratio_experiment(6, 2, 20, 11);
  EXPECT_EQ(a.empirical, b.empirical);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(Spearman, Examples) {
  const std::vector<double> x{1, 2, 3}, down{3, 2, 1};
  EXPECT_DOUBLE_EQ(spearman(x, down), -1.0);
  EXPECT_DOUBLE_EQ(spearman(x, x), 1.0);
  const std::vector<double> tx{1, 2, 2, 3}, ty{1, 2, 3, 4};
  EXPECT_NEAR(spearman(tx, ty), 0.9486832980505139, 1e-12);
  const std::vector<double> flat{5, 5, 5};
  EXPECT_DOUBLE_EQ(spearman(x, flat), 0.0);
}

EdgeSplit all_train(const Graph& g) {
  EdgeSplit s;
  s.train = test::edges_of(g);
  return s;
}

TEST(DegreeChangeProfile, StarLeavesLoseEverythingCenterOneOverN) {
  for (std::size_t n : {3u, 5u, 8u}) {
    const auto g = test::star(n);
    ProfileOptions opts;
    opts.batch_size = 1;
    const auto prof = degree_change_profile(g, all_train(g), opts);
    ASSERT_EQ(prof.per_degree.count(1), 1u);
    const auto& leaf = prof.per_degree.at(1);
    EXPECT_DOUBLE_EQ(leaf.first / static_cast<double>(leaf.second), 1.0);
    EXPECT_EQ(leaf.second, n);
    const auto& center = prof.per_degree.at(n);
    EXPECT_DOUBLE_EQ(center.first / static_cast<double>(center.second), 1.0 / static_cast<double>(n));
    EXPECT_DOUBLE_EQ(*prof.mean_in(1, 2), 1.0);
    EXPECT_FALSE(prof.mean_in(n + 1, n + 5).has_value());
  }
}

TEST(DegreeChangeProfile, NonePolicyRecordsNoChange) {
  const auto g = test::random_graph(4, 30, 0.2);
  ProfileOptions opts;
  opts.policy = ExclusionPolicy::none();
  const auto prof = degree_change_profile(g, all_train(g), opts);
  for (const auto& b : prof.buckets) EXPECT_EQ(b.mean, 0.0);
}

TEST(DegreeChangeProfile, ValuesInUnitIntervalAndLeavesAtOne) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = test::random_graph(seed, 40, 0.08);
    if (g.num_edges() == 0) continue;
    ProfileOptions opts;
    opts.batch_size = 7;
    opts.seed = seed;
    opts.policy = seed % 2 ? ExclusionPolicy::all() : ExclusionPolicy::low_degree(3);
    const auto prof = degree_change_profile(g, all_train(g), opts);
    std::size_t total = 0;
    for (const auto& b : prof.buckets) {
      EXPECT_GE(b.mean, 0.0);
      EXPECT_LE(b.mean, 1.0);
      EXPECT_LT(b.lo, b.hi);
      total += b.count;
    }
    std::size_t per = 0;
    for (const auto& [d, acc] : prof.per_degree) per += acc.second;
    EXPECT_EQ(total, per);
    // buckets tile the degree range without gaps
    for (std::size_t i = 1; i < prof.buckets.size(); ++i) {
      EXPECT_EQ(prof.buckets[i].lo, prof.buckets[i - 1].hi);
    }
    if (seed % 2 && prof.per_degree.count(1)) {
      const auto& leaf = prof.per_degree.at(1);
      EXPECT_DOUBLE_EQ(leaf.first, static_cast<double>(leaf.second));
    }
  }
}

TEST(DegreeChangeProfile, CsvAndErrors) {
  const auto g = test::star(3);
  ProfileOptions opts;
  opts.batch_size = 1;
  const auto prof = degree_change_profile(g, all_train(g), opts);
  EXPECT_EQ(prof.to_csv().rfind("bucket_lo,bucket_hi,mean_change,count\n1,2,1.000000,3\n", 0), 0u);
  EXPECT_THROW(degree_change_profile(g, EdgeSplit{}, opts), std::invalid_argument);
}

TEST(DeltaSweep, EndpointsReproduceNoneAndAllRuns) {
  auto params = SyntheticParams::defaults(SyntheticKind::PowerLaw);
  params.nodes = 150;
  params.feature_dim = 4;
  const auto ds = make_synthetic(SyntheticKind::PowerLaw, params, 3);
  TrainOptions base;
  base.epochs = 2;
  base.hidden_dim = 8;
  base.out_dim = 8;
  base.batch_size = 64;
  const std::vector<double> deltas{0.0, 1e9};
  const std::vector<std::uint64_t> seeds{4};
  const auto table = delta_sweep(ds.graph, ds.split, base, deltas, seeds);
  ASSERT_EQ(table.rows.size(), 2u);

  auto none = base;
  none.seed = 4;
  none.policy.kind = ExclusionPolicy::Kind::None;
  EXPECT_EQ(table.cells[0].value, *train_model(ds.graph, ds.split, none).test_report.get("mrr"));
  auto all = none;
  all.policy.kind = ExclusionPolicy::Kind::All;
  EXPECT_EQ(table.cells[1].value, *train_model(ds.graph, ds.split, all).test_report.get("mrr"));

  const std::vector<double> unsorted{2.0, 1.0};
  EXPECT_THROW(delta_sweep(ds.graph, ds.split, base, unsorted, seeds), std::invalid_argument);
}

TEST(DeltaSweep, FailingCellsAreRecordedAndSweepContinues) {
  auto params = SyntheticParams::defaults(SyntheticKind::PowerLaw);
  params.nodes = 120;
  params.feature_dim = 4;
  const auto ds = make_synthetic(SyntheticKind::PowerLaw, params, 1);
  TrainOptions base;
  base.epochs = 1;
  base.select_metric = "no-such-metric";
  const std::vector<double> deltas{0.0, 2.0};
  const std::vector<std::uint64_t> seeds{1, 2};
  const auto table = delta_sweep(ds.graph, ds.split, base, deltas, seeds);
  ASSERT_EQ(table.cells.size(), 4u);
  for (const auto& c : table.cells) EXPECT_TRUE(c.error.has_value());
  EXPECT_EQ(table.rows[0].failed, 2u);
  EXPECT_EQ(table.rows[0].runs, 0u);
  EXPECT_NE(table.cells_csv().find("no-such-metric"), std::string::npos);
}

}  // namespace
}  // namespace lpx
