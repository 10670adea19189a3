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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "lpx/random.hpp"

namespace lpx {

ExclusionPolicy ExclusionPolicy::random(double rate) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw std::invalid_argument("random exclusion rate must be in [0,1]");
  }
  return {Kind::Random, rate, 0.0};
}

ExclusionPolicy ExclusionPolicy::low_degree(double delta) {
  if (!(delta >= 0.0)) throw std::invalid_argument("degree threshold must be >= 0");
  return {Kind::LowDegree, 0.0, delta};
}

namespace {

double parse_number(const std::string& s) {
  if (s == "inf" || s == "+inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("not a number: " + s);
  return v;
}

std::string format_number(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

ExclusionPolicy ExclusionPolicy::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "none" && arg.empty()) return none();
  if (head == "all" && arg.empty()) return all();
  try {
    if (head == "random" && !arg.empty()) return random(parse_number(arg));
    if (head == "lowdeg" && !arg.empty()) return low_degree(parse_number(arg));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("bad policy '" + text + "': " + e.what());
  }
  throw std::invalid_argument("unknown policy '" + text +
                              "' (expected none, all, random:<rate>, lowdeg:<delta>)");
}

std::string ExclusionPolicy::to_string() const {
  switch (kind) {
    case Kind::None:
      return "none";
    case Kind::All:
      return "all";
    case Kind::Random:
      return "random:" + format_number(rate);
    case Kind::LowDegree:
      return "lowdeg:" + format_number(delta);
  }
  return "none";
}

std::vector<Edge> low_degree_targets(std::span<const Edge> targets,
                                     std::span<const std::size_t> degrees, double delta,
                                     OpCounter* counter) {
  std::vector<Edge> out;
  for (const auto& e : targets) {
    if (counter) ++counter->ops;
    const auto lo = std::min(degrees[e.u], degrees[e.v]);
    if (static_cast<double>(lo) < delta) out.push_back(e);
  }
  return out;
}

std::vector<Edge> low_degree_targets(std::span<const Edge> targets, const Graph& g, double delta) {
  const auto deg = g.degrees();
  return low_degree_targets(targets, deg, delta);
}

std::vector<Edge> apply_exclusion(std::span<const Edge> targets,
                                  std::span<const std::size_t> degrees,
                                  const ExclusionPolicy& policy, std::uint64_t seed,
                                  OpCounter* counter) {
  switch (policy.kind) {
    case ExclusionPolicy::Kind::None:
      return {};
    case ExclusionPolicy::Kind::All: {
      if (counter) counter->ops += targets.size();
      return {targets.begin(), targets.end()};
    }
    case ExclusionPolicy::Kind::LowDegree:
      return low_degree_targets(targets, degrees, policy.delta, counter);
    case ExclusionPolicy::Kind::Random: {
      const auto n = targets.size();
      const auto take = static_cast<std::size_t>(
          std::llround(policy.rate * static_cast<double>(n)));
      std::vector<std::size_t> idx(n);
      std::iota(idx.begin(), idx.end(), 0);
      if (counter) counter->ops += n;
      // partial Fisher-Yates: first `take` slots become the sample
      Rng rng(seed);
      for (std::size_t i = 0; i < take; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(idx[i], idx[pick(rng)]);
        if (counter) ++counter->ops;
      }
      std::sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take));
      std::vector<Edge> out;
      out.reserve(take);
      for (std::size_t i = 0; i < take; ++i) out.push_back(targets[idx[i]]);
      return out;
    }
  }
  return {};
}

std::vector<Edge> negative_sample(const Graph& g, std::span<const Edge> positives,
                                  std::size_t n_per_pos, std::uint64_t seed) {
  const std::size_t want = n_per_pos * positives.size();
  if (want == 0) return {};
  const std::size_t n = g.num_nodes();
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n > 0 ? n - 1 : 0);
  if (n < 2 || static_cast<double>(g.num_edges()) >= pairs) {
    throw NegativeSamplingError("graph has no non-edges to sample negatives from");
  }
  std::unordered_set<Edge, EdgeHash> forbidden;
  forbidden.reserve(positives.size() * 2);
  for (const auto& e : positives) forbidden.insert(Edge::canonical(e.u, e.v));

  Rng rng(seed);
  std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
  std::vector<Edge> out;
  out.reserve(want);
  // budget scales with the request; a dense graph exhausts it quickly
  const std::size_t budget = 100 * want + 1000;
  std::size_t attempts = 0;
  while (out.size() < want) {
    if (++attempts > budget) {
      throw NegativeSamplingError("negative sampling rejection budget exhausted after " +
                                  std::to_string(budget) + " draws (graph nearly complete)");
    }
    const NodeId a = node(rng);
    const NodeId b = node(rng);
    if (a == b) continue;
    const Edge e = Edge::canonical(a, b);
    if (g.has_edge(e) || forbidden.count(e)) continue;
    out.push_back(e);
  }
  return out;
}

double match_random_rate(const Graph& g, const EdgeSplit& split, double delta) {
  if (split.train.empty()) throw std::invalid_argument("train split is empty");
  const auto low = low_degree_targets(split.train, g, delta);
  return static_cast<double>(low.size()) / static_cast<double>(split.train.size());
}

double default_delta(const EdgeSplit& split) { return std::round(average_degree(split.train)); }

// ---------------------------------------------------------------------------
// EdgeSampler

EdgeSampler::EdgeSampler(const Graph& g, const EdgeSplit& split, SamplerOptions options)
    : graph_(&g), train_(split.train), options_(options), degrees_(g.degrees()) {
  if (train_.empty()) throw std::invalid_argument("train split is empty");
  if (options_.batch_size == 0) throw std::invalid_argument("batch_size must be >= 1");
  for (const auto& e : train_) {
    if (!g.has_edge(e)) {
      throw std::invalid_argument("train edge (" + std::to_string(e.u) + "," +
                                  std::to_string(e.v) + ") missing from training graph");
    }
  }
}

std::size_t EdgeSampler::batches_per_epoch() const {
  return (train_.size() + options_.batch_size - 1) / options_.batch_size;
}

std::vector<std::size_t> EdgeSampler::epoch_order(std::size_t epoch) const {
  std::vector<std::size_t> order(train_.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(options_.seed, {0x5e, epoch}));
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

Batch EdgeSampler::sample(std::size_t epoch, std::size_t index) const {
  return sample(epoch_order(epoch), epoch, index);
}

Batch EdgeSampler::sample(std::span<const std::size_t> order, std::size_t epoch,
                          std::size_t index) const {
  if (index >= batches_per_epoch()) throw std::out_of_range("batch index past end of epoch");
  const std::size_t begin = index * options_.batch_size;
  const std::size_t end = std::min(begin + options_.batch_size, order.size());

  Batch b;
  b.epoch = epoch;
  b.index = index;
  b.positives.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) b.positives.push_back(train_[order[i]]);

  b.negatives = negative_sample(*graph_, b.positives, options_.negs_per_pos,
                                derive_seed(options_.seed, {0x4e, epoch, index}));

  std::vector<NodeId> seeds;
  seeds.reserve(2 * (b.positives.size() + b.negatives.size()));
  for (const auto& e : b.positives) {
    seeds.push_back(e.u);
    seeds.push_back(e.v);
  }
  for (const auto& e : b.negatives) {
    seeds.push_back(e.u);
    seeds.push_back(e.v);
  }
  auto full = khop_subgraph(*graph_, seeds, options_.hops);

  b.excluded = apply_exclusion(b.positives, degrees_, options_.policy,
                               derive_seed(options_.seed, {0x45, epoch, index}));
  b.message_graph = b.excluded.empty() ? std::move(full) : full.without_edges(b.excluded);
  return b;
}

}  // namespace lpx
