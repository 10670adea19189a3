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

#include "lpx/audit.hpp"

#include <sstream>

namespace lpx {

std::string AuditReport::to_text() const {
  std::ostringstream out;
  out << "valid_present=" << (valid_present ? "true" : "false") << '\n'
      << "test_present=" << (test_present ? "true" : "false") << '\n'
      << "removed_valid=" << removed_valid << '\n'
      << "removed_test=" << removed_test << '\n'
      << "keep_valid=" << (keep_valid ? "true" : "false") << '\n'
      << "train_missing=" << train_missing << '\n'
      << "verdict=" << (verdict == Verdict::Clean ? "clean" : "leaked-and-fixed") << '\n';
  return out.str();
}

AuditResult leakage_check(const Graph& g, const EdgeSplit& split, bool keep_valid) {
  AuditResult out;
  auto& r = out.report;
  r.keep_valid = keep_valid;

  const auto valid_probe = contains_edges(g, split.valid);
  const auto test_probe = contains_edges(g, split.test);
  r.valid_present = valid_probe.any;
  r.test_present = test_probe.any;
  for (const auto& e : split.train) {
    if (!g.has_edge(e)) ++r.train_missing;
  }

  out.graph = g;
  if (r.test_present) {
    auto removal = remove_edges(out.graph, split.test);
    r.removed_test = removal.removed;
    out.graph = std::move(removal.graph);
  }
  if (r.valid_present && !keep_valid) {
    auto removal = remove_edges(out.graph, split.valid);
    r.removed_valid = removal.removed;
    out.graph = std::move(removal.graph);
  }
  // validation edges are legitimate inputs when keep_valid is set
  const bool leaked = r.test_present || (r.valid_present && !keep_valid);
  r.verdict = leaked ? AuditReport::Verdict::LeakedAndFixed : AuditReport::Verdict::Clean;
  return out;
}

bool assert_no_test_leakage(const Graph& g, const EdgeSplit& split) {
  return !contains_edges(g, split.test).any;
}

}  // namespace lpx
