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

#include "lpx/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "lpx/metrics.hpp"

namespace lpx {

namespace {

std::string join_lines(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += '\n';
    out += s;
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::size_t to_size(const std::string& v) {
  if (v.empty() || v[0] == '-') throw std::invalid_argument("expected a non-negative integer");
  std::size_t used = 0;
  const auto x = std::stoull(v, &used);
  if (used != v.size()) throw std::invalid_argument("expected a non-negative integer");
  return static_cast<std::size_t>(x);
}

double to_double(const std::string& v) {
  if (v == "inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double x = std::stod(v, &used);
  if (used != v.size()) throw std::invalid_argument("expected a number");
  return x;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("expected true or false");
}

std::string number_text(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  // shortest text that reads back to the same double
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

std::string optional_text(const std::optional<double>& v) { return v ? number_text(*v) : "auto"; }

std::optional<double> to_optional(const std::string& v) {
  if (v == "auto") return std::nullopt;
  return to_double(v);
}

std::vector<std::size_t> to_size_list(const std::string& v) {
  std::vector<std::size_t> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_size(trim(item)));
  if (out.empty()) throw std::invalid_argument("expected a comma-separated list");
  return out;
}

std::string size_list_text(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

std::vector<std::string> to_string_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string string_list_text(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
  return out;
}

struct Field {
  RunConfig::Key key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define LPX_STRING(name, help) \
  Field{{#name, help}, [](RunConfig& c, const std::string& v) { c.name = v; }, [](const RunConfig& c) { return c.name; }}
#define LPX_SIZE(name, help)                                                                  \
  Field{{#name, help}, [](RunConfig& c, const std::string& v) { c.name = to_size(v); },       \
        [](const RunConfig& c) { return std::to_string(c.name); }}
#define LPX_DOUBLE(name, help)                                                                \
  Field{{#name, help}, [](RunConfig& c, const std::string& v) { c.name = to_double(v); },     \
        [](const RunConfig& c) { return number_text(c.name); }}
#define LPX_BOOL(name, help)                                                                  \
  Field{{#name, help}, [](RunConfig& c, const std::string& v) { c.name = to_bool(v); },       \
        [](const RunConfig& c) { return std::string(c.name ? "true" : "false"); }}

const std::vector<Field>& fields() {
  static const std::vector<Field> table{
      LPX_STRING(graph, "edge list of the full graph (required)"),
      LPX_STRING(splits, "split directory; empty draws a seeded 70/10/20 split"),
      LPX_STRING(features, "feature matrix file; empty draws seeded Gaussian features"),
      LPX_STRING(out, "output directory; audit, degree-profile and sweep-delta also take a table file path"),
      LPX_SIZE(feature_dim, "width of generated features"),
      LPX_SIZE(split_negatives, "fixed negatives per positive for a generated split"),
      Field{{"data_seed", "seed of a generated split and generated features"},
            [](RunConfig& c, const std::string& v) { c.data_seed = static_cast<std::uint64_t>(to_size(v)); },
            [](const RunConfig& c) { return std::to_string(c.data_seed); }},
      LPX_STRING(arch, "gcn or sage"),
      LPX_SIZE(layers, "message-passing layers"),
      LPX_SIZE(hidden_dim, "hidden width"),
      LPX_SIZE(out_dim, "embedding width"),
      LPX_BOOL(self_loops, "add self loops to GCN propagation"),
      LPX_STRING(policy, "target exclusion: none, all, random[:rate], lowdeg[:delta]"),
      Field{{"delta", "low-degree threshold or auto (round of average train degree); inf = all"},
            [](RunConfig& c, const std::string& v) { c.delta = to_optional(v); },
            [](const RunConfig& c) { return optional_text(c.delta); }},
      Field{{"rate", "random exclusion rate or auto (matches lowdeg at delta)"},
            [](RunConfig& c, const std::string& v) { c.rate = to_optional(v); },
            [](const RunConfig& c) { return optional_text(c.rate); }},
      LPX_SIZE(batch_size, "train targets per mini-batch"),
      LPX_SIZE(hops, "hops of the per-batch message graph"),
      LPX_SIZE(epochs, "training epochs"),
      LPX_SIZE(negs_per_pos, "training negatives per positive"),
      LPX_DOUBLE(learning_rate, "SGD learning rate"),
      LPX_DOUBLE(momentum, "SGD momentum"),
      Field{{"seed", "base random seed"},
            [](RunConfig& c, const std::string& v) { c.seed = static_cast<std::uint64_t>(to_size(v)); },
            [](const RunConfig& c) { return std::to_string(c.seed); }},
      LPX_STRING(eval_mode, "fixed (negative files) or exhaustive"),
      Field{{"ks", "Hits@K cutoffs, comma separated"},
            [](RunConfig& c, const std::string& v) { c.ks = to_size_list(v); },
            [](const RunConfig& c) { return size_list_text(c.ks); }},
      LPX_STRING(select_metric, "validation metric for checkpoint selection: mrr, auc or hits@K"),
      LPX_BOOL(keep_valid, "keep validation edges in the test inference graph"),
      Field{{"buckets", "degree buckets for stratified test rows, e.g. min=1,min<5 (empty: none)"},
            [](RunConfig& c, const std::string& v) { c.buckets = to_string_list(v); },
            [](const RunConfig& c) { return string_list_text(c.buckets); }},
  };
  return table;
}

#undef LPX_STRING
#undef LPX_SIZE
#undef LPX_DOUBLE
#undef LPX_BOOL

const Field* find_field(const std::string& key) {
  for (const auto& f : fields()) {
    if (f.key.name == key) return &f;
  }
  return nullptr;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_lines(problems)), problems_(std::move(problems)) {}

const std::vector<RunConfig::Key>& RunConfig::keys() {
  static const std::vector<Key> list = [] {
    std::vector<Key> out;
    for (const auto& f : fields()) out.push_back(f.key);
    return out;
  }();
  return list;
}

std::optional<std::string> RunConfig::set(const std::string& key, const std::string& value) {
  const auto* f = find_field(key);
  if (!f) return "unknown key '" + key + "'";
  try {
    f->set(*this, trim(value));
  } catch (const std::exception& e) {
    return key + ": bad value '" + value + "' (" + e.what() + ")";
  }
  return std::nullopt;
}

std::string RunConfig::get(const std::string& key) const {
  const auto* f = find_field(key);
  if (!f) throw std::invalid_argument("unknown key '" + key + "'");
  return f->get(*this);
}

RunConfig RunConfig::parse(const std::string& text, RunConfig base) {
  std::vector<std::string> problems;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto content = trim(line.substr(0, line.find('#')));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      problems.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    if (auto err = base.set(trim(content.substr(0, eq)), content.substr(eq + 1))) {
      problems.push_back("line " + std::to_string(lineno) + ": " + *err);
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return base;
}

RunConfig RunConfig::load(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), std::move(base));
}

RunConfig RunConfig::parse(const std::string& text) { return parse(text, RunConfig{}); }
RunConfig RunConfig::load(const std::string& path) { return load(path, RunConfig{}); }

std::string RunConfig::serialize() const {
  std::string out;
  for (const auto& f : fields()) out += f.key.name + " = " + f.get(*this) + "\n";
  return out;
}

std::vector<std::string> RunConfig::problems(bool need_graph) const {
  std::vector<std::string> out;
  if (need_graph && graph.empty()) out.push_back("graph: a graph path is required");
  try {
    (void)parse_arch(arch);
  } catch (const std::exception& e) {
    out.push_back(std::string("arch: ") + e.what());
  }
  try {
    (void)parse_eval_mode(eval_mode);
  } catch (const std::exception& e) {
    out.push_back(std::string("eval_mode: ") + e.what());
  }
  try {
    (void)policy_spec();
  } catch (const std::exception& e) {
    out.push_back(std::string("policy: ") + e.what());
  }
  if (layers == 0) out.push_back("layers: must be >= 1");
  if (hidden_dim == 0) out.push_back("hidden_dim: must be >= 1");
  if (out_dim == 0) out.push_back("out_dim: must be >= 1");
  if (feature_dim == 0) out.push_back("feature_dim: must be >= 1");
  if (batch_size == 0) out.push_back("batch_size: must be >= 1");
  if (epochs == 0) out.push_back("epochs: must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) out.push_back("learning_rate: must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) out.push_back("momentum: must be in [0, 1)");
  if (delta && !(*delta >= 0.0)) out.push_back("delta: must be >= 0");
  if (rate && !(*rate >= 0.0 && *rate <= 1.0)) out.push_back("rate: must be in [0, 1]");
  for (auto k : ks) {
    if (k == 0) out.push_back("ks: cutoffs must be >= 1");
  }
  bool metric_ok = select_metric == "mrr" || select_metric == "auc";
  for (auto k : ks) metric_ok = metric_ok || select_metric == "hits@" + std::to_string(k);
  if (!metric_ok) out.push_back("select_metric: must be mrr, auc or hits@K for a K in ks");
  for (const auto& b : buckets) {
    try {
      (void)DegreeBucket::parse(b);
    } catch (const std::exception& e) {
      out.push_back(std::string("buckets: ") + e.what());
    }
  }
  return out;
}

void RunConfig::validate(bool need_graph) const {
  auto list = problems(need_graph);
  if (!list.empty()) throw ConfigError(std::move(list));
}

PolicySpec RunConfig::policy_spec() const {
  auto spec = PolicySpec::parse(policy);
  if (delta) spec.delta = delta;
  if (rate) spec.rate = rate;
  return spec;
}

TrainOptions RunConfig::train_options() const {
  TrainOptions o;
  o.arch = parse_arch(arch);
  o.layers = layers;
  o.hidden_dim = hidden_dim;
  o.out_dim = out_dim;
  o.self_loops = self_loops;
  o.policy = policy_spec();
  o.batch_size = batch_size;
  o.hops = hops;
  o.epochs = epochs;
  o.negs_per_pos = negs_per_pos;
  o.learning_rate = learning_rate;
  o.momentum = momentum;
  o.seed = seed;
  o.mode = parse_eval_mode(eval_mode);
  o.ks = ks;
  o.select_metric = select_metric;
  o.keep_valid = keep_valid;
  for (const auto& b : buckets) o.buckets.push_back(DegreeBucket::parse(b));
  return o;
}

}  // namespace lpx
