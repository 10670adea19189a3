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
#include <stdexcept>
#include <string>
#include <vector>

#include "lpx/trainer.hpp"

namespace lpx {

/// Thrown with every problem found, one per line of what().
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Settings of one run. Everything but `graph` has a default.
struct RunConfig {
  std::string graph;
  std::string splits;    // empty: seeded 70/10/20 split of `graph`
  std::string features;  // empty: seeded Gaussian features of width feature_dim
  std::string out = "run";
  std::size_t feature_dim = 16;
  std::size_t split_negatives = 100;
  /// Seed for a generated split and generated features, kept apart from
  /// `seed` so training seeds can vary over fixed data.
  std::uint64_t data_seed = 0;

  std::string arch = "sage";
  std::size_t layers = 2;
  std::size_t hidden_dim = 32;
  std::size_t out_dim = 32;
  bool self_loops = false;

  std::string policy = "lowdeg";
  std::optional<double> delta;  // "auto" when unset
  std::optional<double> rate;   // "auto" when unset

  std::size_t batch_size = 256;
  std::size_t hops = 2;
  std::size_t epochs = 20;
  std::size_t negs_per_pos = 1;
  double learning_rate = 0.05;
  double momentum = 0.9;
  std::uint64_t seed = 1;

  std::string eval_mode = "fixed";
  std::vector<std::size_t> ks{1, 10, 50};
  std::string select_metric = "mrr";
  bool keep_valid = false;
  /// Degree buckets for stratified test rows, e.g. min=1,min<5,max<10.
  std::vector<std::string> buckets;

  struct Key {
    std::string name;
    std::string help;
  };
  /// Every key in serialization order.
  static const std::vector<Key>& keys();

  /// Assigns one key from text. Returns an error message instead of
  /// throwing so callers can collect all problems.
  std::optional<std::string> set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;

  /// `key = value` lines; blank lines and `#` comments are skipped. Throws
  /// ConfigError listing every bad line.
  static RunConfig parse(const std::string& text, RunConfig base);
  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path, RunConfig base);
  static RunConfig load(const std::string& path);

  /// Every key, one `key = value` line each, in keys() order.
  std::string serialize() const;

  /// All semantic problems; empty when valid. `need_graph` is false for
  /// commands that do not read a graph.
  std::vector<std::string> problems(bool need_graph = true) const;
  void validate(bool need_graph = true) const;

  PolicySpec policy_spec() const;
  TrainOptions train_options() const;
};

}  // namespace lpx
