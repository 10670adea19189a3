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

#include <filesystem>
#include <vector>

#include "lpx/graph.hpp"

namespace lpx {

/// Positive target edges for training, validation and test, plus optional
/// fixed negatives (one block per valid/test positive).
struct EdgeSplit {
  std::vector<Edge> train;
  std::vector<Edge> valid;
  std::vector<Edge> test;
  std::vector<std::vector<Edge>> valid_neg;
  std::vector<std::vector<Edge>> test_neg;

  /// Canonicalizes and sorts the positive sets. Negative blocks stay aligned
  /// with their positives, so positives are only deduplicated when no
  /// negatives are attached.
  void normalize();

  /// Throws std::invalid_argument when the positive sets overlap, an id is out
  /// of range, or a negative block count does not match its positives.
  void validate(std::size_t num_nodes) const;

  bool has_fixed_negatives() const { return !valid_neg.empty() || !test_neg.empty(); }
};

/// Reads train.tsv / valid.tsv / test.tsv and, when present, valid_neg.tsv /
/// test_neg.tsv (blank-line separated blocks, one per positive).
EdgeSplit load_split_dir(const std::filesystem::path& dir);
void save_split_dir(const std::filesystem::path& dir, const EdgeSplit& split);

std::vector<std::vector<Edge>> parse_negative_blocks(const std::string& text);

/// Mean degree of the nodes touched by at least one edge; 0 for no edges.
double average_degree(std::span<const Edge> edges);

}  // namespace lpx
