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

#include "lpx/split.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace lpx {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void canonicalize(std::vector<Edge>& edges) {
  for (auto& e : edges) e = Edge::canonical(e.u, e.v);
}

// Sorts positives together with their negative blocks.
void sort_aligned(std::vector<Edge>& pos, std::vector<std::vector<Edge>>& neg) {
  if (neg.empty()) {
    normalize_edges(pos);
    return;
  }
  if (neg.size() != pos.size()) return;  // reported by validate()
  std::vector<std::size_t> order(pos.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pos[a] < pos[b]; });
  std::vector<Edge> p;
  std::vector<std::vector<Edge>> n;
  p.reserve(pos.size());
  n.reserve(neg.size());
  for (auto i : order) {
    p.push_back(pos[i]);
    n.push_back(std::move(neg[i]));
  }
  pos = std::move(p);
  neg = std::move(n);
}

void write_edges(std::ostream& out, std::span<const Edge> edges) {
  for (const auto& e : edges) out << e.u << '\t' << e.v << '\n';
}

}  // namespace

void EdgeSplit::normalize() {
  canonicalize(train);
  canonicalize(valid);
  canonicalize(test);
  for (auto& b : valid_neg) canonicalize(b);
  for (auto& b : test_neg) canonicalize(b);
  normalize_edges(train);
  sort_aligned(valid, valid_neg);
  sort_aligned(test, test_neg);
}

void EdgeSplit::validate(std::size_t num_nodes) const {
  auto check_ids = [&](std::span<const Edge> edges, const char* name) {
    for (const auto& e : edges) {
      if (e.u == e.v) throw std::invalid_argument(std::string(name) + ": self-loop");
      if (std::max(e.u, e.v) >= num_nodes) {
        throw std::invalid_argument(std::string(name) + ": node id out of range");
      }
    }
  };
  check_ids(train, "train");
  check_ids(valid, "valid");
  check_ids(test, "test");
  for (const auto& b : valid_neg) check_ids(b, "valid_neg");
  for (const auto& b : test_neg) check_ids(b, "test_neg");

  std::unordered_map<Edge, int, EdgeHash> owner;
  owner.reserve(train.size() + valid.size() + test.size());
  auto claim = [&](std::span<const Edge> edges, int id, const char* name) {
    for (const auto& e : edges) {
      const Edge c = Edge::canonical(e.u, e.v);
      auto [it, inserted] = owner.emplace(c, id);
      if (!inserted && it->second != id) {
        throw std::invalid_argument(std::string("splits overlap: edge (") + std::to_string(c.u) +
                                    "," + std::to_string(c.v) + ") also in " + name);
      }
    }
  };
  claim(train, 0, "train");
  claim(valid, 1, "valid");
  claim(test, 2, "test");

  if (!valid_neg.empty() && valid_neg.size() != valid.size()) {
    throw std::invalid_argument("valid_neg has " + std::to_string(valid_neg.size()) +
                                " blocks for " + std::to_string(valid.size()) + " positives");
  }
  if (!test_neg.empty() && test_neg.size() != test.size()) {
    throw std::invalid_argument("test_neg has " + std::to_string(test_neg.size()) +
                                " blocks for " + std::to_string(test.size()) + " positives");
  }
}

std::vector<std::vector<Edge>> parse_negative_blocks(const std::string& text) {
  std::vector<std::vector<Edge>> blocks;
  std::vector<Edge> current;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  auto flush = [&] {
    if (!current.empty()) blocks.push_back(std::move(current));
    current.clear();
  };
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      flush();
      continue;
    }
    if (line[first] == '#') continue;
    std::size_t declared = 0;
    auto edges = parse_edge_list(line, &declared);
    if (edges.size() != 1) {
      throw ParseError("negative block line " + std::to_string(line_no) + ": expected one edge",
                       line_no);
    }
    current.push_back(edges.front());
  }
  flush();
  return blocks;
}

EdgeSplit load_split_dir(const std::filesystem::path& dir) {
  auto load = [&](const char* name) {
    std::size_t declared = 0;
    return parse_edge_list(read_file(dir / name), &declared);
  };
  EdgeSplit s;
  s.train = load("train.tsv");
  s.valid = load("valid.tsv");
  s.test = load("test.tsv");
  if (std::filesystem::exists(dir / "valid_neg.tsv")) {
    s.valid_neg = parse_negative_blocks(read_file(dir / "valid_neg.tsv"));
  }
  if (std::filesystem::exists(dir / "test_neg.tsv")) {
    s.test_neg = parse_negative_blocks(read_file(dir / "test_neg.tsv"));
  }
  s.normalize();
  return s;
}

void save_split_dir(const std::filesystem::path& dir, const EdgeSplit& split) {
  std::filesystem::create_directories(dir);
  auto save = [&](const char* name, std::span<const Edge> edges) {
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    write_edges(out, edges);
  };
  save("train.tsv", split.train);
  save("valid.tsv", split.valid);
  save("test.tsv", split.test);
  auto save_blocks = [&](const char* name, const std::vector<std::vector<Edge>>& blocks) {
    if (blocks.empty()) return;
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (i) out << '\n';
      write_edges(out, blocks[i]);
    }
  };
  save_blocks("valid_neg.tsv", split.valid_neg);
  save_blocks("test_neg.tsv", split.test_neg);
}

double average_degree(std::span<const Edge> edges) {
  std::unordered_set<NodeId> touched;
  touched.reserve(edges.size() * 2);
  for (const auto& e : edges) {
    touched.insert(e.u);
    touched.insert(e.v);
  }
  if (touched.empty()) return 0.0;
  return 2.0 * static_cast<double>(edges.size()) / static_cast<double>(touched.size());
}

}  // namespace lpx
