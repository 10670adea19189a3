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
#include <string>

#include "lpx/graph.hpp"
#include "lpx/split.hpp"

namespace lpx {

enum class SyntheticKind { Path, Star, PowerLaw, Sparse };

SyntheticKind parse_synthetic_kind(const std::string& text);
std::string to_string(SyntheticKind kind);

/// Generator knobs. Fields a kind does not use are ignored.
struct SyntheticParams {
  /// Path: node count. Star: leaf count. Others: total node count.
  std::size_t nodes = 0;
  double avg_degree = 0.0;
  std::size_t communities = 0;
  std::size_t feature_dim = 0;
  /// Scale of the community centroid in each feature vector.
  double signal = 0.0;
  /// Std-dev of the per-node Gaussian feature noise.
  double noise = 0.0;
  /// Power-law exponent of the node weight distribution.
  double exponent = 0.0;
  /// Probability that an edge stays inside its community.
  double p_in = 0.0;
  /// Sparse kind: fraction of nodes on the query side.
  double query_fraction = 0.0;
  /// Fixed negatives per valid/test positive.
  std::size_t eval_negatives = 0;

  static SyntheticParams defaults(SyntheticKind kind);
};

/// Full graph (all splits' edges, features attached) and its 70/10/20 split.
struct SyntheticDataset {
  Graph graph;
  EdgeSplit split;
};

/// Deterministic in (kind, params, seed). Throws std::invalid_argument for
/// degenerate sizes (no edges, fewer than two nodes, empty feature space).
SyntheticDataset make_synthetic(SyntheticKind kind, const SyntheticParams& params,
                                std::uint64_t seed);

/// Seeded 70/10/20 partition of g's edges with `eval_negatives` fixed
/// negatives per valid/test positive. Negatives keep the positive's head and
/// draw a tail from [tail_lo, num_nodes) that is not adjacent in g.
EdgeSplit random_split(const Graph& g, std::uint64_t seed, std::size_t eval_negatives,
                       NodeId tail_lo = 0);

/// Seeded standard-normal feature matrix.
Matrix random_features(std::size_t nodes, std::size_t dim, std::uint64_t seed);

}  // namespace lpx
