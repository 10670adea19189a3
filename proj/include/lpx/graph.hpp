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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpx/matrix.hpp"

namespace lpx {

using NodeId = std::uint32_t;

/// Undirected edge, always stored with u < v.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  /// Orders the endpoints. Throws std::invalid_argument on a self-loop.
  static Edge canonical(NodeId a, NodeId b);

  auto operator<=>(const Edge&) const = default;
};

struct EdgeHash {
  std::size_t operator()(const Edge& e) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(e.u) << 32) | e.v);
  }
};

/// Sorts and deduplicates in place.
void normalize_edges(std::vector<Edge>& edges);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct LoadReport {
  std::size_t lines = 0;
  std::size_t duplicates = 0;
};

/// Immutable undirected graph in CSR form.
///
/// Neighbor lists are sorted, duplicate-free and never contain the owning
/// node. The canonical edge list and the adjacency describe the same edge set.
/// Node features are optional and shared between graphs derived from one
/// another (remove_edges keeps them).
class Graph {
 public:
  Graph() = default;

  /// Builds from arbitrary edges: canonicalizes, deduplicates and rejects
  /// self-loops or ids >= num_nodes (std::invalid_argument).
  static Graph from_edges(std::size_t num_nodes, std::vector<Edge> edges,
                          std::size_t* duplicates = nullptr);

  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }

  /// Throws std::out_of_range for an invalid node.
  std::span<const NodeId> neighbors(NodeId u) const;
  std::size_t degree(NodeId u) const;
  std::vector<std::size_t> degrees() const;

  bool has_edge(Edge e) const;
  bool has_edge(NodeId a, NodeId b) const;

  bool has_features() const { return features_ != nullptr; }
  const Matrix& features() const;
  /// Returns a copy sharing structure with `features` attached. Row count must
  /// equal num_nodes().
  Graph with_features(Matrix features) const;
  Graph with_features(std::shared_ptr<const Matrix> features) const;
  std::shared_ptr<const Matrix> shared_features() const { return features_; }

  std::span<const std::size_t> offsets() const { return offsets_; }
  std::span<const NodeId> adjacency() const { return neighbors_; }

 private:
  std::size_t num_nodes_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> neighbors_;
  std::vector<Edge> edges_;
  std::shared_ptr<const Matrix> features_;
};

/// Reads a whitespace-separated edge list. `#` starts a comment line; a
/// comment of the form `# nodes: N` fixes the node count (otherwise it is
/// 1 + the largest id seen).
Graph load_edge_list(const std::filesystem::path& path, LoadReport* report = nullptr);
void save_edge_list(const std::filesystem::path& path, std::span<const Edge> edges,
                    std::optional<std::size_t> num_nodes = std::nullopt);
/// Parses edge-list text into canonical edges, duplicates kept (the loader
/// removes and counts them). Exposed for in-memory use and tests.
std::vector<Edge> parse_edge_list(const std::string& text, std::size_t* declared_nodes,
                                  LoadReport* report = nullptr);

/// Feature file: first line `N D`, then N lines of D reals.
Matrix load_features(const std::filesystem::path& path);
void save_features(const std::filesystem::path& path, const Matrix& features);

/// Induced subgraph with a local -> global node map.
///
/// Local ids follow ascending global id. Seeds are the local ids of the nodes
/// the subgraph was grown from.
class Subgraph {
 public:
  Subgraph() = default;
  Subgraph(std::vector<NodeId> nodes, std::vector<std::size_t> offsets,
           std::vector<std::uint32_t> neighbors, std::vector<std::uint32_t> seeds);

  /// The whole graph viewed as a subgraph with identity node map.
  static Subgraph whole(const Graph& g);

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_edges() const { return neighbors_.size() / 2; }
  std::span<const NodeId> nodes() const { return nodes_; }
  std::span<const std::uint32_t> seeds() const { return seeds_; }
  std::span<const std::uint32_t> neighbors(std::uint32_t local) const;
  std::size_t degree(std::uint32_t local) const;

  NodeId global_id(std::uint32_t local) const { return nodes_.at(local); }
  std::optional<std::uint32_t> local_id(NodeId global) const;

  bool has_edge(Edge global) const;
  /// Edge set in global ids, canonical and sorted.
  std::vector<Edge> edges() const;

  /// Copy without the listed (global) edges; absent edges are ignored.
  Subgraph without_edges(std::span<const Edge> drop) const;

 private:
  std::vector<NodeId> nodes_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> neighbors_;
  std::vector<std::uint32_t> seeds_;
  bool identity_map_ = false;
};

/// Endpoints of `targets`, their <= k-hop neighbors, and every parent edge
/// between those nodes (targets included).
Subgraph khop_message_graph(const Graph& g, std::span<const Edge> targets, std::size_t k);

/// Same, seeded from an explicit node list.
Subgraph khop_subgraph(const Graph& g, std::span<const NodeId> seed_nodes, std::size_t k);

struct EdgeRemoval {
  Graph graph;
  std::size_t removed = 0;
  std::size_t ignored = 0;
};

/// g.edges minus `drop`. Node count and features are kept.
EdgeRemoval remove_edges(const Graph& g, std::span<const Edge> drop);

struct EdgeProbe {
  bool any = false;
  std::vector<Edge> present;
};

EdgeProbe contains_edges(const Graph& g, std::span<const Edge> probe);

}  // namespace lpx
