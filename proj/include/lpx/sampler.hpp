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
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lpx/graph.hpp"
#include "lpx/split.hpp"

namespace lpx {

/// Which training targets are dropped from a batch's message graph.
///
///   None          keep every target edge
///   All           drop every target edge
///   Random(rate)  drop a seeded uniform sample of round(rate * |targets|)
///   LowDegree(d)  drop targets whose lower endpoint degree is < d
///
/// `delta` may be +inf (equivalent to All); `delta` 0 is equivalent to None.
struct ExclusionPolicy {
  enum class Kind { None, All, Random, LowDegree };

  Kind kind = Kind::None;
  double rate = 0.0;
  double delta = 0.0;

  static ExclusionPolicy none() { return {}; }
  static ExclusionPolicy all() { return {Kind::All, 0.0, 0.0}; }
  static ExclusionPolicy random(double rate);
  static ExclusionPolicy low_degree(double delta);

  /// Accepts "none", "all", "random:<rate>", "lowdeg:<delta>" (delta may be
  /// "inf").
  static ExclusionPolicy parse(const std::string& text);
  std::string to_string() const;
};

/// Optional instrumentation: one tick per unit of work in the exclusion path.
struct OpCounter {
  std::uint64_t ops = 0;
};

/// { (u,v) in targets : min(deg[u], deg[v]) < delta }, in input order.
std::vector<Edge> low_degree_targets(std::span<const Edge> targets,
                                     std::span<const std::size_t> degrees, double delta,
                                     OpCounter* counter = nullptr);
std::vector<Edge> low_degree_targets(std::span<const Edge> targets, const Graph& g, double delta);

/// Edges to drop from a batch's message graph. Linear in |targets| given the
/// degree table. Only Random consumes `seed`.
std::vector<Edge> apply_exclusion(std::span<const Edge> targets,
                                  std::span<const std::size_t> degrees,
                                  const ExclusionPolicy& policy, std::uint64_t seed,
                                  OpCounter* counter = nullptr);

class NegativeSamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// n_per_pos * |positives| uniformly drawn non-edges, rejecting pairs in g or
/// in `positives`. Throws NegativeSamplingError when the graph is complete or
/// the rejection budget runs out.
std::vector<Edge> negative_sample(const Graph& g, std::span<const Edge> positives,
                                  std::size_t n_per_pos, std::uint64_t seed);

/// |low_degree_targets(train)| / |train|: the Random rate that matches a
/// LowDegree(delta) run.
double match_random_rate(const Graph& g, const EdgeSplit& split, double delta);

/// round(average train degree) over nodes touched by the train split.
double default_delta(const EdgeSplit& split);

struct Batch {
  std::size_t epoch = 0;
  std::size_t index = 0;
  std::vector<Edge> positives;
  std::vector<Edge> negatives;
  /// k-hop message graph over positive and negative endpoints, minus `excluded`.
  Subgraph message_graph;
  std::vector<Edge> excluded;
};

struct SamplerOptions {
  std::size_t batch_size = 256;
  std::size_t hops = 2;
  ExclusionPolicy policy;
  std::size_t negs_per_pos = 1;
  std::uint64_t seed = 0;
};

/// Mini-batch edge sampler over the train split of a training graph.
///
/// Each epoch visits every train edge exactly once in a seeded order. Any
/// batch is a pure function of (seed, epoch, index), so batches can be built
/// out of order or from several threads.
class EdgeSampler {
 public:
  /// `g` is the training message-passing graph and must outlive the sampler.
  EdgeSampler(const Graph& g, const EdgeSplit& split, SamplerOptions options);

  std::size_t batches_per_epoch() const;
  const SamplerOptions& options() const { return options_; }
  std::span<const std::size_t> degrees() const { return degrees_; }

  /// Train-edge visiting order for an epoch.
  std::vector<std::size_t> epoch_order(std::size_t epoch) const;

  Batch sample(std::size_t epoch, std::size_t index) const;
  Batch sample(std::span<const std::size_t> order, std::size_t epoch, std::size_t index) const;

 private:
  const Graph* graph_;
  std::vector<Edge> train_;
  SamplerOptions options_;
  std::vector<std::size_t> degrees_;
};

}  // namespace lpx
