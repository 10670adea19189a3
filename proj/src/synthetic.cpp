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

#include "lpx/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "lpx/random.hpp"

namespace lpx {

SyntheticKind parse_synthetic_kind(const std::string& text) {
  if (text == "path") return SyntheticKind::Path;
  if (text == "star") return SyntheticKind::Star;
  if (text == "power-law" || text == "powerlaw") return SyntheticKind::PowerLaw;
  if (text == "sparse") return SyntheticKind::Sparse;
  throw std::invalid_argument("unknown synthetic kind '" + text +
                              "' (expected path, star, power-law, sparse)");
}

std::string to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::Path:
      return "path";
    case SyntheticKind::Star:
      return "star";
    case SyntheticKind::PowerLaw:
      return "power-law";
    case SyntheticKind::Sparse:
      return "sparse";
  }
  return "path";
}

SyntheticParams SyntheticParams::defaults(SyntheticKind kind) {
  SyntheticParams p;
  p.feature_dim = 16;
  p.signal = 1.0;
  p.noise = 1.0;
  p.eval_negatives = 100;
  switch (kind) {
    case SyntheticKind::Path:
    case SyntheticKind::Star:
      p.nodes = 5;
      p.eval_negatives = 5;
      break;
    case SyntheticKind::PowerLaw:
      p.nodes = 10000;
      p.avg_degree = 6.0;
      p.communities = 20;
      p.exponent = 2.5;
      p.p_in = 0.8;
      break;
    case SyntheticKind::Sparse:
      p.nodes = 5000;
      p.avg_degree = 1.4;
      p.communities = 20;
      p.exponent = 2.2;
      p.p_in = 0.9;
      p.query_fraction = 0.5;
      // wide, noisy features: structure has to carry the signal
      p.feature_dim = 128;
      p.noise = 2.0;
      break;
  }
  return p;
}

namespace {

using EdgeSet = std::unordered_set<Edge, EdgeHash>;

struct Layout {
  std::size_t num_nodes = 0;
  std::vector<Edge> edges;
  std::vector<std::size_t> community;  // empty for structural kinds
  // tail candidates for corrupted negatives: [tail_lo, num_nodes)
  NodeId tail_lo = 0;
};

std::vector<double> pareto_weights(std::size_t n, double exponent, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double cap = std::max(1.0, static_cast<double>(n) / 10.0);
  std::vector<double> w(n);
  for (auto& x : w) x = std::min(cap, std::pow(1.0 - unif(rng), -1.0 / (exponent - 1.0)));
  return w;
}

// Draws edges endpoint-by-endpoint proportionally to weight, staying inside
// the first endpoint's community with probability p_in.
void weighted_edges(Layout& out, std::span<const NodeId> heads, std::span<const double> head_w,
                    std::span<const NodeId> tails, std::span<const double> tail_w,
                    std::size_t want, double p_in, Rng& rng) {
  const std::size_t communities =
      out.community.empty() ? 1 : *std::max_element(out.community.begin(), out.community.end()) + 1;
  std::vector<std::vector<NodeId>> tail_members(communities);
  std::vector<std::vector<double>> tail_member_w(communities);
  for (std::size_t i = 0; i < tails.size(); ++i) {
    const auto c = out.community.empty() ? 0 : out.community[tails[i]];
    tail_members[c].push_back(tails[i]);
    tail_member_w[c].push_back(tail_w[i]);
  }
  std::discrete_distribution<std::size_t> pick_head(head_w.begin(), head_w.end());
  std::discrete_distribution<std::size_t> pick_tail(tail_w.begin(), tail_w.end());
  std::vector<std::discrete_distribution<std::size_t>> pick_in;
  for (std::size_t c = 0; c < communities; ++c) {
    pick_in.emplace_back(tail_member_w[c].begin(), tail_member_w[c].end());
  }
  std::bernoulli_distribution stay(p_in);

  EdgeSet seen(out.edges.begin(), out.edges.end());
  const std::size_t budget = 50 * want + 1000;
  for (std::size_t attempt = 0; attempt < budget && out.edges.size() < want; ++attempt) {
    const NodeId a = heads[pick_head(rng)];
    const auto c = out.community.empty() ? 0 : out.community[a];
    NodeId b;
    if (stay(rng) && !tail_members[c].empty()) {
      b = tail_members[c][pick_in[c](rng)];
    } else {
      b = tails[pick_tail(rng)];
    }
    if (a == b) continue;
    const Edge e = Edge::canonical(a, b);
    if (seen.insert(e).second) out.edges.push_back(e);
  }
}

Layout power_law_layout(const SyntheticParams& p, Rng& rng) {
  if (p.nodes < 2 || p.avg_degree <= 0.0 || p.communities == 0) {
    throw std::invalid_argument("power-law generator needs nodes >= 2, avg_degree > 0, communities >= 1");
  }
  Layout out;
  out.num_nodes = p.nodes;
  std::uniform_int_distribution<std::size_t> comm(0, p.communities - 1);
  out.community.resize(p.nodes);
  for (auto& c : out.community) c = comm(rng);
  const auto w = pareto_weights(p.nodes, p.exponent, rng);
  std::vector<NodeId> all(p.nodes);
  for (std::size_t i = 0; i < p.nodes; ++i) all[i] = static_cast<NodeId>(i);
  const auto want = static_cast<std::size_t>(std::llround(p.avg_degree * static_cast<double>(p.nodes) / 2.0));
  weighted_edges(out, all, w, all, w, want, p.p_in, rng);
  return out;
}

// Query nodes [0, Q) link to product nodes [Q, N). Each query has
// 1 + Poisson(lambda) edges so that the overall mean degree is avg_degree;
// products are picked by heavy-tailed popularity.
Layout sparse_layout(const SyntheticParams& p, Rng& rng) {
  const auto queries = static_cast<std::size_t>(std::llround(p.query_fraction * static_cast<double>(p.nodes)));
  if (p.nodes < 2 || queries == 0 || queries >= p.nodes || p.avg_degree <= 0.0 || p.communities == 0) {
    throw std::invalid_argument("sparse generator needs nodes >= 2, a non-trivial query fraction, "
                                "avg_degree > 0 and communities >= 1");
  }
  Layout out;
  out.num_nodes = p.nodes;
  out.tail_lo = static_cast<NodeId>(queries);
  std::uniform_int_distribution<std::size_t> comm(0, p.communities - 1);
  out.community.resize(p.nodes);
  for (auto& c : out.community) c = comm(rng);

  const double total = p.avg_degree * static_cast<double>(p.nodes) / 2.0;
  const double lambda = std::max(0.0, total / static_cast<double>(queries) - 1.0);
  std::poisson_distribution<int> extra(lambda);

  std::vector<NodeId> products;
  for (std::size_t i = queries; i < p.nodes; ++i) products.push_back(static_cast<NodeId>(i));
  const auto pop = pareto_weights(products.size(), p.exponent, rng);
  for (std::size_t q = 0; q < queries; ++q) {
    const NodeId head = static_cast<NodeId>(q);
    const std::vector<NodeId> one{head};
    const std::vector<double> unit{1.0};
    const std::size_t target = out.edges.size() + 1 + static_cast<std::size_t>(extra(rng));
    weighted_edges(out, one, unit, products, pop, target, p.p_in, rng);
  }
  return out;
}

Matrix community_features(const Layout& layout, const SyntheticParams& p, Rng& rng) {
  if (p.feature_dim == 0) throw std::invalid_argument("feature_dim must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t communities = layout.community.empty()
                                      ? 1
                                      : *std::max_element(layout.community.begin(), layout.community.end()) + 1;
  Matrix centroids(static_cast<Eigen::Index>(communities), static_cast<Eigen::Index>(p.feature_dim));
  for (Eigen::Index i = 0; i < centroids.size(); ++i) centroids.data()[i] = normal(rng);
  Matrix x(static_cast<Eigen::Index>(layout.num_nodes), static_cast<Eigen::Index>(p.feature_dim));
  for (std::size_t i = 0; i < layout.num_nodes; ++i) {
    const auto c = layout.community.empty() ? 0 : layout.community[i];
    for (Eigen::Index t = 0; t < x.cols(); ++t) {
      x(static_cast<Eigen::Index>(i), t) =
          p.signal * centroids(static_cast<Eigen::Index>(c), t) + p.noise * normal(rng);
    }
  }
  return x;
}

// One block of corrupted-tail negatives per positive; falls back to
// corrupting the head when the head is adjacent to every tail candidate.
std::vector<std::vector<Edge>> fixed_negatives(const Graph& g, std::span<const Edge> positives,
                                               NodeId lo, std::size_t per_pos, Rng& rng) {
  std::vector<std::vector<Edge>> blocks;
  blocks.reserve(positives.size());
  const auto n = static_cast<NodeId>(g.num_nodes());
  std::uniform_int_distribution<NodeId> tail(lo, n - 1);
  std::uniform_int_distribution<NodeId> any(0, n - 1);
  for (const auto& pos : positives) {
    std::vector<Edge> block;
    const NodeId head = pos.u;
    for (std::size_t attempt = 0; attempt < 20 * per_pos && block.size() < per_pos; ++attempt) {
      const NodeId v = tail(rng);
      if (v == head || g.has_edge(head, v)) continue;
      block.push_back(Edge::canonical(head, v));
    }
    for (std::size_t attempt = 0; attempt < 20 * per_pos && block.size() < per_pos; ++attempt) {
      const NodeId u = any(rng);
      if (u == pos.v || g.has_edge(u, pos.v)) continue;
      block.push_back(Edge::canonical(u, pos.v));
    }
    if (block.empty()) {
      throw std::invalid_argument("cannot draw a negative for a positive whose endpoints are "
                                  "adjacent to every other node");
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

}  // namespace

EdgeSplit random_split(const Graph& g, std::uint64_t seed, std::size_t eval_negatives, NodeId tail_lo) {
  if (g.num_edges() == 0) throw std::invalid_argument("cannot split a graph without edges");
  if (tail_lo >= g.num_nodes()) throw std::invalid_argument("tail range is empty");
  Rng rng(seed);
  std::vector<Edge> order(g.edges().begin(), g.edges().end());
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t m = order.size();
  const auto n_train = static_cast<std::size_t>(std::llround(0.7 * static_cast<double>(m)));
  const auto n_valid =
      std::min(m - n_train, static_cast<std::size_t>(std::llround(0.1 * static_cast<double>(m))));
  const auto at = [&](std::size_t i) { return order.begin() + static_cast<std::ptrdiff_t>(i); };
  EdgeSplit split;
  split.train.assign(at(0), at(n_train));
  split.valid.assign(at(n_train), at(n_train + n_valid));
  split.test.assign(at(n_train + n_valid), order.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.valid.begin(), split.valid.end());
  std::sort(split.test.begin(), split.test.end());
  if (eval_negatives > 0) {
    split.valid_neg = fixed_negatives(g, split.valid, tail_lo, eval_negatives, rng);
    split.test_neg = fixed_negatives(g, split.test, tail_lo, eval_negatives, rng);
  }
  return split;
}

Matrix random_features(std::size_t nodes, std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw std::invalid_argument("feature dim must be >= 1");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix x(static_cast<Eigen::Index>(nodes), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
  return x;
}

SyntheticDataset make_synthetic(SyntheticKind kind, const SyntheticParams& params, std::uint64_t seed) {
  Rng rng(derive_seed(seed, {0x5f, static_cast<std::uint64_t>(kind)}));
  Layout layout;
  switch (kind) {
    case SyntheticKind::Path:
      if (params.nodes < 2) throw std::invalid_argument("path needs at least 2 nodes");
      layout.num_nodes = params.nodes;
      for (std::size_t i = 0; i + 1 < params.nodes; ++i) {
        layout.edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(i + 1)});
      }
      break;
    case SyntheticKind::Star:
      if (params.nodes < 1) throw std::invalid_argument("star needs at least 1 leaf");
      layout.num_nodes = params.nodes + 1;
      for (std::size_t i = 1; i <= params.nodes; ++i) {
        layout.edges.push_back({0, static_cast<NodeId>(i)});
      }
      break;
    case SyntheticKind::PowerLaw:
      layout = power_law_layout(params, rng);
      break;
    case SyntheticKind::Sparse:
      layout = sparse_layout(params, rng);
      break;
  }
  if (layout.edges.empty()) throw std::invalid_argument("generator produced no edges");

  SyntheticDataset out;
  auto features = community_features(layout, params, rng);
  out.graph = Graph::from_edges(layout.num_nodes, layout.edges).with_features(std::move(features));

  out.split = random_split(out.graph, derive_seed(seed, {0x5b}), params.eval_negatives, layout.tail_lo);
  return out;
}

}  // namespace lpx
