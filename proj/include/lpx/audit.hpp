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

#include <string>

#include "lpx/graph.hpp"
#include "lpx/split.hpp"

namespace lpx {

struct AuditReport {
  enum class Verdict { Clean, LeakedAndFixed };

  bool valid_present = false;
  bool test_present = false;
  std::size_t removed_valid = 0;
  std::size_t removed_test = 0;
  bool keep_valid = false;
  /// Train edges missing from the audited graph. Informational only.
  std::size_t train_missing = 0;
  Verdict verdict = Verdict::Clean;

  /// Line-oriented `key=value` form, stable key order.
  std::string to_text() const;
};

struct AuditResult {
  Graph graph;
  AuditReport report;
};

/// Builds an inference graph free of test edges (and of validation edges
/// unless keep_valid):
///
///   C_valid = any valid edge in g,  C_test = any test edge in g
///   if C_test:                     drop all test edges
///   if C_valid and not keep_valid: drop all valid edges
AuditResult leakage_check(const Graph& g, const EdgeSplit& split, bool keep_valid);

/// True iff no test edge is a message-passing edge of g.
bool assert_no_test_leakage(const Graph& g, const EdgeSplit& split);

}  // namespace lpx
