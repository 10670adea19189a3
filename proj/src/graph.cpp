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

#include "lpx/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

namespace lpx {

Edge Edge::canonical(NodeId a, NodeId b) {
  if (a == b) throw std::invalid_argument("self-loop on node " + std::to_string(a));
  return a < b ? Edge{a, b} : Edge{b, a};
}

void normalize_edges(std::vector<Edge>& edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

// ---------------------------------------------------------------------------
// Graph

Graph Graph::from_edges(std::size_t num_nodes, std::vector<Edge> edges,
                        std::size_t* duplicates) {
  for (auto& e : edges) {
    e = Edge::canonical(e.u, e.v);
    if (e.v >= num_nodes) {
      throw std::invalid_argument("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                  ") exceeds node count " + std::to_string(num_nodes));
    }
  }
  const std::size_t before = edges.size();
  normalize_edges(edges);
  if (duplicates) *duplicates = before - edges.size();

  Graph g;
  g.num_nodes_ = num_nodes;
  g.offsets_.assign(num_nodes + 1, 0);
  for (const auto& e : edges) {
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < num_nodes; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.neighbors_.resize(2 * edges.size());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  // Edges are sorted by (u, v), so filling in order leaves every list sorted:
  // for node x, entries from edges (w, x) with w < x arrive before (x, y).
  for (const auto& e : edges) {
    g.neighbors_[cursor[e.u]++] = e.v;
    g.neighbors_[cursor[e.v]++] = e.u;
  }
  g.edges_ = std::move(edges);
  return g;
}

std::span<const NodeId> Graph::neighbors(NodeId u) const {
  if (u >= num_nodes_) throw std::out_of_range("node " + std::to_string(u) + " out of range");
  return {neighbors_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
}

std::size_t Graph::degree(NodeId u) const { return neighbors(u).size(); }

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> d(num_nodes_);
  for (std::size_t i = 0; i < num_nodes_; ++i) d[i] = offsets_[i + 1] - offsets_[i];
  return d;
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  if (a == b || a >= num_nodes_ || b >= num_nodes_) return false;
  const auto na = neighbors(a);
  const auto nb = neighbors(b);
  // search the shorter list
  if (na.size() <= nb.size()) return std::binary_search(na.begin(), na.end(), b);
  return std::binary_search(nb.begin(), nb.end(), a);
}

bool Graph::has_edge(Edge e) const { return has_edge(e.u, e.v); }

const Matrix& Graph::features() const {
  if (!features_) throw std::logic_error("graph has no features");
  return *features_;
}

Graph Graph::with_features(Matrix features) const {
  return with_features(std::make_shared<const Matrix>(std::move(features)));
}

Graph Graph::with_features(std::shared_ptr<const Matrix> features) const {
  if (features && static_cast<std::size_t>(features->rows()) != num_nodes_) {
    throw std::invalid_argument("feature rows (" + std::to_string(features->rows()) +
                                ") != num_nodes (" + std::to_string(num_nodes_) + ")");
  }
  Graph g = *this;
  g.features_ = std::move(features);
  return g;
}

// ---------------------------------------------------------------------------
// Edge-list IO

namespace {

constexpr std::uint64_t kMaxNodeId = std::numeric_limits<NodeId>::max() - 1;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Reads one unsigned integer token; advances `s` past it.
std::optional<std::uint64_t> next_uint(std::string_view& s, bool& overflow) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec == std::errc::result_out_of_range) {
    overflow = true;
    return std::nullopt;
  }
  if (ec != std::errc() || (ptr != s.data() + s.size() && !is_space(*ptr))) return std::nullopt;
  s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
  return value;
}

}  // namespace

std::vector<Edge> parse_edge_list(const std::string& text, std::size_t* declared_nodes,
                                  LoadReport* report) {
  std::vector<Edge> edges;
  std::size_t line_no = 0;
  std::istringstream in(text);
  std::string raw;
  if (declared_nodes) *declared_nodes = 0;
  bool have_header = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      line.remove_prefix(1);
      line = trim(line);
      constexpr std::string_view kHeader = "nodes:";
      if (line.substr(0, kHeader.size()) == kHeader) {
        line.remove_prefix(kHeader.size());
        bool overflow = false;
        auto n = next_uint(line, overflow);
        if (!n || !trim(line).empty() || *n > kMaxNodeId + 1) {
          throw ParseError("line " + std::to_string(line_no) + ": bad node-count header",
                           line_no);
        }
        have_header = true;
        if (declared_nodes) *declared_nodes = static_cast<std::size_t>(*n);
      }
      continue;
    }
    bool overflow = false;
    auto a = next_uint(line, overflow);
    auto b = a ? next_uint(line, overflow) : std::nullopt;
    if (overflow || (a && *a > kMaxNodeId) || (b && *b > kMaxNodeId)) {
      throw ParseError("line " + std::to_string(line_no) + ": node id overflow", line_no);
    }
    if (!a || !b || !trim(line).empty()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected two node ids", line_no);
    }
    if (*a == *b) {
      throw ParseError("line " + std::to_string(line_no) + ": self-loop on node " +
                           std::to_string(*a),
                       line_no);
    }
    edges.push_back(Edge::canonical(static_cast<NodeId>(*a), static_cast<NodeId>(*b)));
  }
  if (report) report->lines = line_no;
  if (!have_header && declared_nodes) {
    std::size_t n = 0;
    for (const auto& e : edges) n = std::max<std::size_t>(n, std::size_t{e.v} + 1);
    *declared_nodes = n;
  }
  return edges;
}

Graph load_edge_list(const std::filesystem::path& path, LoadReport* report) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  std::size_t num_nodes = 0;
  LoadReport local;
  auto edges = parse_edge_list(buf.str(), &num_nodes, &local);
  for (const auto& e : edges) {
    if (e.v >= num_nodes) {
      throw std::runtime_error(path.string() + ": node id " + std::to_string(e.v) +
                               " exceeds declared node count " + std::to_string(num_nodes));
    }
  }
  auto g = Graph::from_edges(num_nodes, std::move(edges), &local.duplicates);
  if (report) *report = local;
  return g;
}

void save_edge_list(const std::filesystem::path& path, std::span<const Edge> edges,
                    std::optional<std::size_t> num_nodes) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (num_nodes) out << "# nodes: " << *num_nodes << '\n';
  for (const auto& e : edges) out << e.u << '\t' << e.v << '\n';
}

Matrix load_features(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open feature file " + path.string());
  long long rows = 0;
  long long cols = 0;
  if (!(in >> rows >> cols) || rows < 0 || cols <= 0) {
    throw ParseError(path.string() + ": bad header, expected `N D`", 1);
  }
  Matrix x(rows, cols);
  for (long long i = 0; i < rows; ++i) {
    for (long long j = 0; j < cols; ++j) {
      if (!(in >> x(i, j))) {
        throw ParseError(path.string() + ": truncated at row " + std::to_string(i),
                         static_cast<std::size_t>(i) + 2);
      }
    }
  }
  return x;
}

void save_features(const std::filesystem::path& path, const Matrix& features) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << features.rows() << ' ' << features.cols() << '\n';
  out.precision(17);
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    for (Eigen::Index j = 0; j < features.cols(); ++j) {
      if (j) out << ' ';
      out << features(i, j);
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Subgraph

Subgraph::Subgraph(std::vector<NodeId> nodes, std::vector<std::size_t> offsets,
                   std::vector<std::uint32_t> neighbors, std::vector<std::uint32_t> seeds)
    : nodes_(std::move(nodes)),
      offsets_(std::move(offsets)),
      neighbors_(std::move(neighbors)),
      seeds_(std::move(seeds)) {
  if (offsets_.size() != nodes_.size() + 1) throw std::invalid_argument("bad subgraph offsets");
}

Subgraph Subgraph::whole(const Graph& g) {
  std::vector<NodeId> nodes(g.num_nodes());
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = static_cast<NodeId>(i);
  std::vector<std::size_t> offsets(g.offsets().begin(), g.offsets().end());
  std::vector<std::uint32_t> adj(g.adjacency().begin(), g.adjacency().end());
  Subgraph s(std::move(nodes), std::move(offsets), std::move(adj), {});
  s.identity_map_ = true;
  return s;
}

std::span<const std::uint32_t> Subgraph::neighbors(std::uint32_t local) const {
  if (local >= nodes_.size()) throw std::out_of_range("local id out of range");
  return {neighbors_.data() + offsets_[local], offsets_[local + 1] - offsets_[local]};
}

std::size_t Subgraph::degree(std::uint32_t local) const { return neighbors(local).size(); }

std::optional<std::uint32_t> Subgraph::local_id(NodeId global) const {
  if (identity_map_) {
    if (global < nodes_.size()) return global;
    return std::nullopt;
  }
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), global);
  if (it == nodes_.end() || *it != global) return std::nullopt;
  return static_cast<std::uint32_t>(it - nodes_.begin());
}

bool Subgraph::has_edge(Edge global) const {
  auto a = local_id(global.u);
  auto b = local_id(global.v);
  if (!a || !b) return false;
  auto nb = neighbors(*a);
  return std::binary_search(nb.begin(), nb.end(), *b);
}

std::vector<Edge> Subgraph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    for (auto j : neighbors(i)) {
      if (i < j) out.push_back(Edge::canonical(nodes_[i], nodes_[j]));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Subgraph Subgraph::without_edges(std::span<const Edge> drop) const {
  // local pairs to remove, (lo, hi)
  std::unordered_set<Edge, EdgeHash> kill;
  kill.reserve(drop.size() * 2);
  for (const auto& e : drop) {
    auto a = local_id(e.u);
    auto b = local_id(e.v);
    if (a && b && *a != *b) kill.insert(Edge::canonical(*a, *b));
  }
  Subgraph out;
  out.nodes_ = nodes_;
  out.seeds_ = seeds_;
  out.identity_map_ = identity_map_;
  out.offsets_.assign(nodes_.size() + 1, 0);
  out.neighbors_.reserve(neighbors_.size());
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    for (auto j : neighbors(i)) {
      if (!kill.empty() && kill.count(Edge::canonical(i, j))) continue;
      out.neighbors_.push_back(j);
    }
    out.offsets_[i + 1] = out.neighbors_.size();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Induction and edge-set algebra

Subgraph khop_subgraph(const Graph& g, std::span<const NodeId> seed_nodes, std::size_t k) {
  constexpr std::uint32_t kUnseen = std::numeric_limits<std::uint32_t>::max();
  // hop distance of each visited node; sparse touch list keeps reset O(visited)
  std::vector<std::uint32_t> dist(g.num_nodes(), kUnseen);
  std::vector<NodeId> visited;
  std::vector<NodeId> frontier;
  for (auto s : seed_nodes) {
    if (s >= g.num_nodes()) throw std::out_of_range("seed node out of range");
    if (dist[s] == kUnseen) {
      dist[s] = 0;
      visited.push_back(s);
      frontier.push_back(s);
    }
  }
  std::vector<NodeId> next;
  for (std::size_t hop = 1; hop <= k && !frontier.empty(); ++hop) {
    next.clear();
    for (auto u : frontier) {
      for (auto w : g.neighbors(u)) {
        if (dist[w] == kUnseen) {
          dist[w] = static_cast<std::uint32_t>(hop);
          visited.push_back(w);
          next.push_back(w);
        }
      }
    }
    frontier.swap(next);
  }

  std::vector<NodeId> nodes = visited;
  std::sort(nodes.begin(), nodes.end());
  // reuse dist as the global -> local map
  for (std::uint32_t i = 0; i < nodes.size(); ++i) dist[nodes[i]] = i;

  std::vector<std::size_t> offsets(nodes.size() + 1, 0);
  std::vector<std::uint32_t> adj;
  for (std::uint32_t i = 0; i < nodes.size(); ++i) {
    for (auto w : g.neighbors(nodes[i])) {
      // neighbor lists are sorted by global id, local ids preserve that order
      if (dist[w] != kUnseen) {
        adj.push_back(dist[w]);
      }
    }
    offsets[i + 1] = adj.size();
  }

  std::vector<std::uint32_t> seeds;
  seeds.reserve(seed_nodes.size());
  for (auto s : seed_nodes) seeds.push_back(dist[s]);
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  return Subgraph(std::move(nodes), std::move(offsets), std::move(adj), std::move(seeds));
}

Subgraph khop_message_graph(const Graph& g, std::span<const Edge> targets, std::size_t k) {
  std::vector<NodeId> seeds;
  seeds.reserve(2 * targets.size());
  for (const auto& e : targets) {
    seeds.push_back(e.u);
    seeds.push_back(e.v);
  }
  return khop_subgraph(g, seeds, k);
}

EdgeRemoval remove_edges(const Graph& g, std::span<const Edge> drop) {
  std::unordered_set<Edge, EdgeHash> kill;
  kill.reserve(drop.size() * 2);
  EdgeRemoval out;
  for (const auto& raw : drop) {
    if (raw.u == raw.v) {
      ++out.ignored;
      continue;
    }
    const Edge e = Edge::canonical(raw.u, raw.v);
    if (!kill.insert(e).second) continue;
    if (!g.has_edge(e)) ++out.ignored;
  }
  std::vector<Edge> keep;
  keep.reserve(g.num_edges());
  for (const auto& e : g.edges()) {
    if (kill.count(e)) {
      ++out.removed;
    } else {
      keep.push_back(e);
    }
  }
  out.graph = Graph::from_edges(g.num_nodes(), std::move(keep)).with_features(g.shared_features());
  return out;
}

EdgeProbe contains_edges(const Graph& g, std::span<const Edge> probe) {
  EdgeProbe out;
  for (const auto& e : probe) {
    if (g.has_edge(e.u, e.v)) out.present.push_back(e.u < e.v ? e : Edge{e.v, e.u});
  }
  normalize_edges(out.present);
  out.any = !out.present.empty();
  return out;
}

}  // namespace lpx
