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

#include "lpx/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_set>

#include "lpx/random.hpp"

namespace lpx {

double rank_positive(double pos, std::span<const double> negs) {
  if (std::isnan(pos)) throw std::invalid_argument("NaN positive score");
  std::size_t greater = 0;
  std::size_t ties = 0;
  for (double n : negs) {
    if (std::isnan(n)) throw std::invalid_argument("NaN negative score");
    if (n > pos) {
      ++greater;
    } else if (n == pos) {
      ++ties;
    }
  }
  return 1.0 + static_cast<double>(greater) + 0.5 * static_cast<double>(ties);
}

double rank_in_sorted(double pos, std::span<const double> sorted_negs) {
  if (std::isnan(pos)) throw std::invalid_argument("NaN positive score");
  const auto lo = std::lower_bound(sorted_negs.begin(), sorted_negs.end(), pos);
  const auto hi = std::upper_bound(lo, sorted_negs.end(), pos);
  const auto greater = static_cast<std::size_t>(sorted_negs.end() - hi);
  const auto ties = static_cast<std::size_t>(hi - lo);
  return 1.0 + static_cast<double>(greater) + 0.5 * static_cast<double>(ties);
}

double mrr(std::span<const double> ranks) {
  if (ranks.empty()) throw std::invalid_argument("mrr of an empty rank list");
  double total = 0.0;
  for (double r : ranks) total += 1.0 / r;
  return total / static_cast<double>(ranks.size());
}

double hits_at_k(std::span<const double> ranks, std::size_t k) {
  if (ranks.empty()) throw std::invalid_argument("hits@k of an empty rank list");
  if (k == 0) throw std::invalid_argument("hits@k needs k >= 1");
  const auto hits = std::count_if(ranks.begin(), ranks.end(),
                                  [k](double r) { return r <= static_cast<double>(k); });
  return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

double auc(std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty() || neg.empty()) throw std::invalid_argument("auc needs both classes");
  std::vector<std::pair<double, bool>> all;
  all.reserve(pos.size() + neg.size());
  for (double s : pos) all.emplace_back(s, true);
  for (double s : neg) all.emplace_back(s, false);
  for (const auto& [s, _] : all) {
    if (std::isnan(s)) throw std::invalid_argument("NaN score in auc");
  }
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  // twice the Mann-Whitney U, kept integral so ties stay exact
  std::uint64_t twice_u = 0;
  std::uint64_t negs_below = 0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    std::uint64_t p = 0;
    std::uint64_t q = 0;
    while (j < all.size() && all[j].first == all[i].first) {
      (all[j].second ? p : q) += 1;
      ++j;
    }
    twice_u += p * (2 * negs_below + q);
    negs_below += q;
    i = j;
  }
  const double pairs = static_cast<double>(pos.size()) * static_cast<double>(neg.size());
  return static_cast<double>(twice_u) / (2.0 * pairs);
}

EvalMode parse_eval_mode(const std::string& text) {
  if (text == "fixed" || text == "fixed-negatives") return EvalMode::FixedNegatives;
  if (text == "exhaustive" || text == "exhaustive-non-edges") return EvalMode::Exhaustive;
  throw std::invalid_argument("unknown eval mode '" + text + "' (expected fixed or exhaustive)");
}

std::string to_string(EvalMode mode) {
  return mode == EvalMode::FixedNegatives ? "fixed" : "exhaustive";
}

// ---------------------------------------------------------------------------
// MetricReport

std::optional<double> MetricReport::get(const std::string& metric,
                                        const std::string& bucket) const {
  for (const auto& r : rows) {
    if (r.metric == metric && r.bucket == bucket) return r.value;
  }
  return std::nullopt;
}

std::string MetricReport::to_csv(bool header) const {
  std::string out = header ? "metric,bucket,value,count\n" : "";
  // a leaky evaluation is marked inside the table itself
  if (leakage) out += "leakage,all,1.000000,0\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.6f", r.value);
    out += r.metric + "," + r.bucket + "," + buf + "," + std::to_string(r.count) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ranking

namespace {

double score_pair(const Matrix& emb, const Edge& e) { return emb.row(e.u).dot(emb.row(e.v)); }

}  // namespace

RankedEval rank_split(const ModelParams& params, const Graph& g_infer, const EdgeSplit& split,
                      const EvalOptions& options, bool* leaked) {
  const bool test_leak = contains_edges(g_infer, split.test).any;
  const bool target_leak =
      options.target == EvalTarget::Valid && contains_edges(g_infer, split.valid).any;
  if ((test_leak || target_leak) && !options.allow_leakage) {
    throw LeakageError(std::string(test_leak ? "test" : "validation") +
                       " target edges are present in the inference graph; run the leakage "
                       "check first or pass --allow-leakage");
  }
  if (leaked) *leaked = test_leak || target_leak;

  const auto& positives = options.target == EvalTarget::Test ? split.test : split.valid;
  if (positives.empty()) throw std::invalid_argument("no positives to evaluate");
  const auto& fixed = options.target == EvalTarget::Test ? split.test_neg : split.valid_neg;

  const Matrix emb = gnn_forward(Subgraph::whole(g_infer), g_infer.features(), params);

  RankedEval out;
  out.positives = positives;
  out.ranks.reserve(positives.size());
  out.scores.reserve(positives.size());

  if (options.mode == EvalMode::FixedNegatives) {
    if (fixed.size() != positives.size()) {
      throw std::invalid_argument("fixed-negative mode needs one negative block per positive");
    }
    out.negative_scores.resize(positives.size());
    for (std::size_t i = 0; i < positives.size(); ++i) {
      const double s = score_pair(emb, positives[i]);
      auto& negs = out.negative_scores[i];
      negs.reserve(fixed[i].size());
      for (const auto& e : fixed[i]) negs.push_back(score_pair(emb, e));
      out.scores.push_back(s);
      out.ranks.push_back(rank_positive(s, negs));
      out.candidates.push_back(negs.size() + 1);
    }
    return out;
  }

  // exhaustive: every pair outside train/valid/test, subsampled above the cap
  std::unordered_set<Edge, EdgeHash> known;
  known.reserve(2 * (split.train.size() + split.valid.size() + split.test.size()));
  for (const auto* set : {&split.train, &split.valid, &split.test}) {
    for (const auto& e : *set) known.insert(e);
  }
  const std::size_t n = g_infer.num_nodes();
  const double total_pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n ? n - 1 : 0);
  const double available = total_pairs - static_cast<double>(known.size());
  auto& pool = out.pool_scores;
  if (available <= static_cast<double>(options.pool_cap)) {
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (!known.count(Edge{u, v})) pool.push_back(emb.row(u).dot(emb.row(v)));
      }
    }
  } else {
    Rng rng(derive_seed(options.seed, {0xe7}));
    std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(n - 1));
    pool.reserve(options.pool_cap);
    while (pool.size() < options.pool_cap) {
      const NodeId a = node(rng);
      const NodeId b = node(rng);
      if (a == b) continue;
      const Edge e = Edge::canonical(a, b);
      if (known.count(e)) continue;
      pool.push_back(score_pair(emb, e));
    }
  }
  if (pool.empty()) throw std::invalid_argument("no negative pairs available");
  std::sort(pool.begin(), pool.end());
  for (const auto& e : positives) {
    const double s = score_pair(emb, e);
    out.scores.push_back(s);
    out.ranks.push_back(rank_in_sorted(s, pool));
    out.candidates.push_back(pool.size() + 1);
  }
  return out;
}

std::vector<MetricRow> summarize(const RankedEval& ranked, std::span<const std::size_t> ks,
                                 const std::string& bucket,
                                 std::span<const std::size_t> subset) {
  std::vector<std::size_t> all;
  if (subset.empty()) {
    all.resize(ranked.ranks.size());
    std::iota(all.begin(), all.end(), 0);
    subset = all;
  }
  std::vector<double> ranks;
  std::vector<double> pos;
  std::vector<double> neg;
  for (auto i : subset) {
    ranks.push_back(ranked.ranks[i]);
    pos.push_back(ranked.scores[i]);
    if (!ranked.negative_scores.empty()) {
      const auto& n = ranked.negative_scores[i];
      neg.insert(neg.end(), n.begin(), n.end());
    }
  }
  std::span<const double> negs = ranked.negative_scores.empty()
                                     ? std::span<const double>(ranked.pool_scores)
                                     : std::span<const double>(neg);
  std::vector<MetricRow> rows;
  rows.push_back({"mrr", bucket, mrr(ranks), ranks.size()});
  for (auto k : ks) rows.push_back({"hits@" + std::to_string(k), bucket, hits_at_k(ranks, k), ranks.size()});
  if (!negs.empty()) rows.push_back({"auc", bucket, auc(pos, negs), ranks.size()});
  return rows;
}

MetricReport evaluate(const ModelParams& params, const Graph& g_infer, const EdgeSplit& split,
                      const EvalOptions& options) {
  MetricReport report;
  const auto ranked = rank_split(params, g_infer, split, options, &report.leakage);
  report.rows = summarize(ranked, options.ks);
  if (options.mode == EvalMode::Exhaustive) {
    report.negative_pool = ranked.pool_scores.size();
    const std::size_t n = g_infer.num_nodes();
    const double total_pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n ? n - 1 : 0);
    report.pool_capped = total_pairs - static_cast<double>(split.train.size() + split.valid.size() +
                                                           split.test.size()) >
                         static_cast<double>(options.pool_cap);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Degree buckets

DegreeBucket DegreeBucket::parse(const std::string& text) {
  DegreeBucket b;
  std::string rest;
  if (text.rfind("min<", 0) == 0) {
    b.kind = Kind::MinLess;
    rest = text.substr(4);
  } else if (text.rfind("max<", 0) == 0) {
    b.kind = Kind::MaxLess;
    rest = text.substr(4);
  } else if (text.rfind("min=", 0) == 0) {
    b.kind = Kind::MinEqual;
    rest = text.substr(4);
  } else {
    throw std::invalid_argument("bad degree bucket '" + text + "' (min<D, max<D, min=C)");
  }
  const bool digits = !rest.empty() && std::all_of(rest.begin(), rest.end(), [](char c) {
    return c >= '0' && c <= '9';
  });
  if (!digits) throw std::invalid_argument("bad degree bucket '" + text + "'");
  std::size_t v = 0;
  try {
    v = std::stoull(rest);
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("degree bucket value out of range in '" + text + "'");
  }
  b.value = static_cast<std::size_t>(v);
  return b;
}

std::string DegreeBucket::name() const {
  switch (kind) {
    case Kind::MinLess:
      return "min<" + std::to_string(value);
    case Kind::MaxLess:
      return "max<" + std::to_string(value);
    case Kind::MinEqual:
      return "min=" + std::to_string(value);
  }
  return "";
}

bool DegreeBucket::contains(std::size_t deg_u, std::size_t deg_v) const {
  switch (kind) {
    case Kind::MinLess:
      return std::min(deg_u, deg_v) < value;
    case Kind::MaxLess:
      return std::max(deg_u, deg_v) < value;
    case Kind::MinEqual:
      return std::min(deg_u, deg_v) == value;
  }
  return false;
}

std::vector<BucketResult> stratified_eval(const RankedEval& ranked, const Graph& g_train,
                                          std::span<const DegreeBucket> buckets,
                                          std::span<const std::size_t> ks) {
  const auto deg = g_train.degrees();
  std::vector<BucketResult> out;
  for (const auto& b : buckets) {
    BucketResult r;
    r.bucket = b;
    for (std::size_t i = 0; i < ranked.positives.size(); ++i) {
      const auto& e = ranked.positives[i];
      if (b.contains(deg.at(e.u), deg.at(e.v))) r.members.push_back(i);
    }
    if (r.present()) r.metrics = summarize(ranked, ks, b.name(), r.members);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace lpx
