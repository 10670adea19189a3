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
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpx/gnn.hpp"
#include "lpx/graph.hpp"
#include "lpx/split.hpp"

namespace lpx {

/// 1 + #(neg > pos) + #(neg == pos) / 2. Throws std::invalid_argument on NaN.
double rank_positive(double pos, std::span<const double> negs);

/// Rank of `pos` among scores already sorted ascending; same tie rule.
double rank_in_sorted(double pos, std::span<const double> sorted_negs);

double mrr(std::span<const double> ranks);
double hits_at_k(std::span<const double> ranks, std::size_t k);

/// P(random positive outscores random negative), ties count 1/2. Sort based,
/// O((P + N) log(P + N)), and exact for up to 2^52 pairs.
double auc(std::span<const double> pos, std::span<const double> neg);

enum class EvalMode { FixedNegatives, Exhaustive };
enum class EvalTarget { Valid, Test };

EvalMode parse_eval_mode(const std::string& text);
std::string to_string(EvalMode mode);

class LeakageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-positive ranking outcome.
struct RankedEval {
  std::vector<Edge> positives;
  std::vector<double> ranks;
  std::vector<double> scores;
  std::vector<std::size_t> candidates;  // negatives ranked against + 1
  /// Per-positive negative scores in fixed mode; empty in exhaustive mode,
  /// where `pool_scores` holds the shared pool.
  std::vector<std::vector<double>> negative_scores;
  std::vector<double> pool_scores;
};

struct MetricRow {
  std::string metric;
  std::string bucket;
  double value = 0.0;
  std::size_t count = 0;
};

struct MetricReport {
  std::vector<MetricRow> rows;
  bool leakage = false;
  /// Size of the exhaustive negative pool actually scored, and whether it
  /// was capped by subsampling.
  std::size_t negative_pool = 0;
  bool pool_capped = false;

  std::optional<double> get(const std::string& metric, const std::string& bucket = "all") const;
  /// `metric,bucket,value,count` lines with six-decimal values. A leaky
  /// report starts with the row `leakage,all,1.000000,0`.
  std::string to_csv(bool header = true) const;
};

struct EvalOptions {
  EvalMode mode = EvalMode::FixedNegatives;
  EvalTarget target = EvalTarget::Test;
  std::vector<std::size_t> ks{1, 10, 50};
  bool allow_leakage = false;
  std::size_t pool_cap = 1'000'000;
  std::uint64_t seed = 0;
};

/// Scores the target split's positives against their negatives with
/// full-graph inference on `g_infer` (which must carry features).
///
/// Refuses (LeakageError) when a test edge, or a target-split edge, is a
/// message-passing edge of g_infer, unless allow_leakage is set; the report
/// is then flagged.
RankedEval rank_split(const ModelParams& params, const Graph& g_infer, const EdgeSplit& split,
                      const EvalOptions& options, bool* leaked = nullptr);

/// MRR, Hits@K for each K, and AUC over a set of ranked positives.
std::vector<MetricRow> summarize(const RankedEval& ranked, std::span<const std::size_t> ks,
                                 const std::string& bucket = "all",
                                 std::span<const std::size_t> subset = {});

MetricReport evaluate(const ModelParams& params, const Graph& g_infer, const EdgeSplit& split,
                      const EvalOptions& options);

/// Degree predicate over an edge's endpoint degrees in the training graph.
struct DegreeBucket {
  enum class Kind { MinLess, MaxLess, MinEqual };
  Kind kind = Kind::MinLess;
  std::size_t value = 0;

  /// "min<5", "max<10", "min=1"
  static DegreeBucket parse(const std::string& text);
  std::string name() const;
  bool contains(std::size_t deg_u, std::size_t deg_v) const;
};

struct BucketResult {
  DegreeBucket bucket;
  std::vector<std::size_t> members;  // indices into the ranked positives
  /// Empty when the bucket has no positives.
  std::vector<MetricRow> metrics;
  bool present() const { return !members.empty(); }
};

std::vector<BucketResult> stratified_eval(const RankedEval& ranked, const Graph& g_train,
                                          std::span<const DegreeBucket> buckets,
                                          std::span<const std::size_t> ks);

}  // namespace lpx
