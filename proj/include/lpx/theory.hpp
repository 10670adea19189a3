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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpx/gnn.hpp"
#include "lpx/graph.hpp"
#include "lpx/sampler.hpp"
#include "lpx/split.hpp"
#include "lpx/trainer.hpp"

namespace lpx {

/// d x_{h,s} / d x_{k,t} by central differences through gnn_forward, where
/// the perturbation is applied to feature t of every node in `sources` at
/// once. The step is rel_eps times the largest absolute feature (or rel_eps
/// for an all-zero matrix).
double influence_jacobian(const Graph& g, const Matrix& x, const ModelParams& params, NodeId h,
                          std::span<const NodeId> sources, std::size_t s, std::size_t t,
                          double rel_eps = 1e-4);

double influence_jacobian(const Graph& g, const Matrix& x, const ModelParams& params, NodeId h,
                          NodeId k, std::size_t s, std::size_t t, double rel_eps = 1e-4);

/// 1 - sqrt(1 - 1/d): drop in a node's influence on a degree-d GCN node when
/// one of that node's edges is removed.
double closed_form_effect(std::size_t degree);

/// Expected after/before influence ratio for the architecture. GCN:
/// sqrt((d-1)/d). SAGE's mean aggregator renormalizes by 1/d, so the ratio
/// is ((d-1)/d)^(m+1) with m = -1, i.e. 1.
double expected_ratio(Arch arch, std::size_t degree);

/// Test graph for the influence drop at a degree-d node h (node 0).
///
/// For layers >= 2, h and a source k (node 1) are joined by d disjoint paths
/// of `layers` edges, so every layers-step walk from k to h is one of those
/// paths. For a single layer, h is the center of a star and the source is the
/// set of all leaves. `removed` is the h-incident edge whose deletion is
/// measured; it carries one of the paths.
struct InfluenceFixture {
  Graph before;
  Graph after;
  Edge removed;
  NodeId target = 0;
  std::vector<NodeId> sources;
};

InfluenceFixture influence_fixture(std::size_t degree, std::size_t layers);

struct EffectRatioOptions {
  Arch arch = Arch::GCN;
  std::size_t width = 8;
  double rel_eps = 1e-4;
};

struct EffectRatioResult {
  std::size_t degree = 0;
  std::size_t layers = 0;
  double mean_ratio = 0.0;
  double empirical = 0.0;  // 1 - mean_ratio
  double closed_form = 0.0;
  double expected_effect = 0.0;  // 1 - expected_ratio(arch, degree)
  double std_error = 0.0;
  std::size_t trials = 0;
  std::size_t used = 0;
  std::size_t discarded = 0;  // zero denominators (dead ReLU paths)
};

class DegenerateExperimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Monte Carlo over random weight inits, source features and entries (s,t).
/// Throws std::invalid_argument for degree < 2, layers == 0 or trials == 0,
/// and DegenerateExperimentError if every trial has a zero denominator.
EffectRatioResult effect_ratio_experiment(std::size_t degree, std::size_t layers,
                                          std::size_t trials, std::uint64_t seed,
                                          const EffectRatioOptions& options = {});

/// Mean relative degree loss, (before - after) / before, of positive target
/// endpoints in each mini-batch message graph, keyed by the node's degree in
/// the message graph before exclusion.
struct DegreeChangeProfile {
  struct Bucket {
    std::size_t lo = 0;  // inclusive
    std::size_t hi = 0;  // exclusive
    double mean = 0.0;
    std::size_t count = 0;
  };
  /// Log2 buckets [1,2), [2,4), ... up to the largest observed degree.
  std::vector<Bucket> buckets;
  /// degree -> (sum of relative changes, observations)
  std::map<std::size_t, std::pair<double, std::size_t>> per_degree;

  /// Mean over observations with degree in [lo, hi); nullopt when empty.
  std::optional<double> mean_in(std::size_t lo, std::size_t hi) const;
  /// Spearman correlation of bucket lower bound vs bucket mean.
  double bucket_spearman() const;
  /// `bucket_lo,bucket_hi,mean_change,count`
  std::string to_csv() const;
};

struct ProfileOptions {
  ExclusionPolicy policy = ExclusionPolicy::all();
  std::size_t batch_size = 512;
  std::size_t hops = 2;
  std::size_t epochs = 1;
  std::uint64_t seed = 0;
};

/// `train_graph` must contain every train edge (usually the leakage-free
/// training graph). Throws std::invalid_argument if the train split is empty.
DegreeChangeProfile degree_change_profile(const Graph& train_graph, const EdgeSplit& split,
                                          const ProfileOptions& options);

/// Spearman rank correlation with average ranks for ties. Returns 0 when
/// either side is constant.
double spearman(std::span<const double> x, std::span<const double> y);

struct SweepCell {
  double delta = 0.0;
  std::uint64_t seed = 0;
  double value = 0.0;
  std::optional<std::string> error;
  /// Full test report of the cell's run (includes any bucket rows).
  MetricReport report;
};

struct SweepRow {
  double delta = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for one value
  std::size_t runs = 0;
  std::size_t failed = 0;
};

struct SweepTable {
  std::string metric;
  std::vector<SweepCell> cells;
  std::vector<SweepRow> rows;

  /// `delta,mean,std,runs,failed`
  std::string to_csv() const;
  /// `delta,seed,value,error`
  std::string cells_csv() const;
};

/// Trains one LowDegree(delta) model per (delta, seed) with `base` otherwise
/// unchanged and records the test metric. A failing cell is recorded and the
/// sweep continues. `deltas` must be ascending.
SweepTable delta_sweep(const Graph& graph, const EdgeSplit& split, const TrainOptions& base,
                       std::span<const double> deltas, std::span<const std::uint64_t> seeds,
                       const std::string& metric = "mrr");

}  // namespace lpx
