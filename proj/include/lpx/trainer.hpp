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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lpx/audit.hpp"
#include "lpx/gnn.hpp"
#include "lpx/metrics.hpp"
#include "lpx/sampler.hpp"

namespace lpx {

/// Exclusion policy as configured; unset thresholds are resolved against the
/// split (delta defaults to round(average train degree), a Random rate
/// defaults to the rate matching LowDegree(delta)).
struct PolicySpec {
  ExclusionPolicy::Kind kind = ExclusionPolicy::Kind::LowDegree;
  std::optional<double> delta;
  std::optional<double> rate;

  /// "none", "all", "random", "lowdeg", optionally with ":<value>".
  static PolicySpec parse(const std::string& text);
  std::string name() const;

  struct Resolved {
    ExclusionPolicy policy;
    double delta = 0.0;
  };
  Resolved resolve(const Graph& train_graph, const EdgeSplit& split) const;
};

struct TrainOptions {
  Arch arch = Arch::SAGE;
  std::size_t layers = 2;
  std::size_t hidden_dim = 32;
  std::size_t out_dim = 32;
  bool self_loops = false;
  PolicySpec policy;
  std::size_t batch_size = 256;
  std::size_t hops = 2;
  std::size_t epochs = 20;
  std::size_t negs_per_pos = 1;
  double learning_rate = 0.05;
  double momentum = 0.9;
  std::uint64_t seed = 1;
  EvalMode mode = EvalMode::FixedNegatives;
  std::vector<std::size_t> ks{1, 10, 50};
  /// Selection metric on the validation split ("mrr", "auc", "hits@K").
  std::string select_metric = "mrr";
  /// Keep validation edges in the test-time inference graph.
  bool keep_valid = false;
  /// Extra degree-stratified test rows (train-graph degrees).
  std::vector<DegreeBucket> buckets;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double loss = 0.0;
  double valid_metric = 0.0;
};

struct TrainResult {
  ModelParams best;
  std::size_t best_epoch = 0;
  double best_valid = 0.0;
  std::vector<EpochRecord> history;
  ExclusionPolicy policy;
  double delta = 0.0;
  AuditReport test_audit;
  /// Test metrics of the best-validation checkpoint on the leakage-safe graph.
  MetricReport test_report;
  /// Graphs used: training message passing (valid and test removed) and test
  /// inference (per keep_valid).
  Graph train_graph;
  Graph test_graph;
};

/// Trains on mini-batches of the train split, keeps the best-validation
/// epoch and evaluates it on the test split. `graph` must carry features; it
/// may contain valid/test edges, which are stripped before any use.
TrainResult train_model(const Graph& graph, const EdgeSplit& split, const TrainOptions& options,
                        const std::function<void(const EpochRecord&)>& on_epoch = {});

/// Layer widths [in, hidden..., out] for the options.
std::vector<std::size_t> layer_dims(std::size_t in_dim, const TrainOptions& options);

}  // namespace lpx
