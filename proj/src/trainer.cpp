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

#include "lpx/trainer.hpp"

#include <cmath>
#include <limits>

#include "lpx/random.hpp"

namespace lpx {

PolicySpec PolicySpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  PolicySpec spec;
  if (head == "none") {
    spec.kind = ExclusionPolicy::Kind::None;
  } else if (head == "all") {
    spec.kind = ExclusionPolicy::Kind::All;
  } else if (head == "random") {
    spec.kind = ExclusionPolicy::Kind::Random;
  } else if (head == "lowdeg") {
    spec.kind = ExclusionPolicy::Kind::LowDegree;
  } else {
    throw std::invalid_argument("unknown policy '" + text +
                                "' (expected none, all, random[:rate], lowdeg[:delta])");
  }
  if (colon != std::string::npos) {
    // reuse the full parser for value validation
    const auto full = ExclusionPolicy::parse(text);
    if (spec.kind == ExclusionPolicy::Kind::Random) spec.rate = full.rate;
    if (spec.kind == ExclusionPolicy::Kind::LowDegree) spec.delta = full.delta;
  }
  return spec;
}

std::string PolicySpec::name() const {
  switch (kind) {
    case ExclusionPolicy::Kind::None:
      return "none";
    case ExclusionPolicy::Kind::All:
      return "all";
    case ExclusionPolicy::Kind::Random:
      return rate ? ExclusionPolicy::random(*rate).to_string() : "random";
    case ExclusionPolicy::Kind::LowDegree:
      return delta ? ExclusionPolicy::low_degree(*delta).to_string() : "lowdeg";
  }
  return "none";
}

PolicySpec::Resolved PolicySpec::resolve(const Graph& train_graph, const EdgeSplit& split) const {
  Resolved r;
  r.delta = delta.value_or(default_delta(split));
  switch (kind) {
    case ExclusionPolicy::Kind::None:
      r.policy = ExclusionPolicy::none();
      break;
    case ExclusionPolicy::Kind::All:
      r.policy = ExclusionPolicy::all();
      break;
    case ExclusionPolicy::Kind::LowDegree:
      r.policy = ExclusionPolicy::low_degree(r.delta);
      break;
    case ExclusionPolicy::Kind::Random:
      r.policy = ExclusionPolicy::random(rate.value_or(match_random_rate(train_graph, split, r.delta)));
      break;
  }
  return r;
}

std::vector<std::size_t> layer_dims(std::size_t in_dim, const TrainOptions& options) {
  if (options.layers == 0) throw std::invalid_argument("layers must be >= 1");
  std::vector<std::size_t> dims{in_dim};
  for (std::size_t l = 1; l < options.layers; ++l) dims.push_back(options.hidden_dim);
  dims.push_back(options.out_dim);
  return dims;
}

namespace {

double select(const MetricReport& report, const std::string& metric) {
  auto v = report.get(metric);
  if (!v) throw std::invalid_argument("selection metric '" + metric + "' not in report");
  return *v;
}

}  // namespace

TrainResult train_model(const Graph& graph, const EdgeSplit& split, const TrainOptions& options,
                        const std::function<void(const EpochRecord&)>& on_epoch) {
  if (!graph.has_features()) throw std::invalid_argument("training graph has no node features");
  split.validate(graph.num_nodes());

  TrainResult result;
  // message passing never sees valid or test targets during training
  result.train_graph = leakage_check(graph, split, /*keep_valid=*/false).graph;
  auto test_audit = leakage_check(graph, split, options.keep_valid);
  result.test_graph = std::move(test_audit.graph);
  result.test_audit = test_audit.report;

  const auto resolved = options.policy.resolve(result.train_graph, split);
  result.policy = resolved.policy;
  result.delta = resolved.delta;

  SamplerOptions so;
  so.batch_size = options.batch_size;
  so.hops = options.hops;
  so.policy = resolved.policy;
  so.negs_per_pos = options.negs_per_pos;
  so.seed = derive_seed(options.seed, {0x5a});
  const EdgeSampler sampler(result.train_graph, split, so);

  const auto& x = graph.features();
  ModelParams params = ModelParams::init(
      options.arch, layer_dims(static_cast<std::size_t>(x.cols()), options), options.self_loops,
      derive_seed(options.seed, {0x1a}));
  SgdState state;
  const SgdOptions sgd{options.learning_rate, options.momentum};

  EvalOptions valid_eval;
  valid_eval.mode = options.mode;
  valid_eval.target = EvalTarget::Valid;
  valid_eval.ks = options.ks;
  valid_eval.seed = derive_seed(options.seed, {0xe1});

  result.best = params;
  result.best_valid = -std::numeric_limits<double>::infinity();
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    const auto order = sampler.epoch_order(epoch);
    double total = 0.0;
    const auto batches = sampler.batches_per_epoch();
    for (std::size_t b = 0; b < batches; ++b) {
      const auto batch = sampler.sample(order, epoch, b);
      total += train_step(batch, x, params, sgd, state);
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.loss = total / static_cast<double>(batches);
    if (!split.valid.empty()) {
      rec.valid_metric =
          select(evaluate(params, result.train_graph, split, valid_eval), options.select_metric);
    }
    result.history.push_back(rec);
    if (on_epoch) on_epoch(rec);
    // strict improvement keeps the earliest best epoch
    if (split.valid.empty() || rec.valid_metric > result.best_valid) {
      result.best_valid = rec.valid_metric;
      result.best_epoch = epoch;
      result.best = params;
    }
  }

  if (!split.test.empty()) {
    EvalOptions test_eval = valid_eval;
    test_eval.target = EvalTarget::Test;
    test_eval.seed = derive_seed(options.seed, {0xe2});
    result.test_report = evaluate(result.best, result.test_graph, split, test_eval);
    if (!options.buckets.empty()) {
      const auto ranked = rank_split(result.best, result.test_graph, split, test_eval);
      for (const auto& b : stratified_eval(ranked, result.train_graph, options.buckets, options.ks)) {
        result.test_report.rows.insert(result.test_report.rows.end(), b.metrics.begin(), b.metrics.end());
      }
    }
  }
  return result;
}

}  // namespace lpx
