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

#include "lpx/theory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "lpx/random.hpp"

namespace lpx {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string delta_text(double delta) { return std::isinf(delta) ? "inf" : fmt("%g", delta); }

}  // namespace

double influence_jacobian(const Graph& g, const Matrix& x, const ModelParams& params, NodeId h,
                          std::span<const NodeId> sources, std::size_t s, std::size_t t,
                          double rel_eps) {
  if (static_cast<std::size_t>(x.rows()) != g.num_nodes()) {
    throw std::invalid_argument("feature rows do not match node count");
  }
  if (h >= g.num_nodes() || sources.empty()) throw std::invalid_argument("bad target or empty source set");
  if (s >= params.out_dim() || t >= params.in_dim()) throw std::invalid_argument("entry (s,t) out of range");
  for (auto k : sources) {
    if (k >= g.num_nodes()) throw std::invalid_argument("source id out of range");
  }
  const double scale = x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
  const double eps = rel_eps * (scale > 0.0 ? scale : 1.0);
  const auto sub = Subgraph::whole(g);
  Matrix plus = x;
  Matrix minus = x;
  for (auto k : sources) {
    plus(k, static_cast<Eigen::Index>(t)) += eps;
    minus(k, static_cast<Eigen::Index>(t)) -= eps;
  }
  const double hi = gnn_forward(sub, plus, params)(h, static_cast<Eigen::Index>(s));
  const double lo = gnn_forward(sub, minus, params)(h, static_cast<Eigen::Index>(s));
  return (hi - lo) / (2.0 * eps);
}

double influence_jacobian(const Graph& g, const Matrix& x, const ModelParams& params, NodeId h,
                          NodeId k, std::size_t s, std::size_t t, double rel_eps) {
  const NodeId src[] = {k};
  return influence_jacobian(g, x, params, h, src, s, t, rel_eps);
}

double closed_form_effect(std::size_t degree) {
  if (degree == 0) throw std::invalid_argument("degree must be >= 1");
  return 1.0 - std::sqrt(1.0 - 1.0 / static_cast<double>(degree));
}

double expected_ratio(Arch arch, std::size_t degree) {
  if (degree == 0) throw std::invalid_argument("degree must be >= 1");
  const double d = static_cast<double>(degree);
  if (arch == Arch::GCN) return std::sqrt((d - 1.0) / d);
  constexpr double m = -1.0;  // mean aggregation weight ~ d^m
  return std::pow((d - 1.0) / d, m + 1.0);
}

InfluenceFixture influence_fixture(std::size_t degree, std::size_t layers) {
  if (degree < 2) throw std::invalid_argument("degree must be >= 2");
  if (layers == 0) throw std::invalid_argument("layers must be >= 1");
  InfluenceFixture f;
  std::vector<Edge> edges;
  std::size_t n = 0;
  if (layers == 1) {
    n = degree + 1;
    for (std::size_t i = 1; i <= degree; ++i) {
      edges.push_back({0, static_cast<NodeId>(i)});
      f.sources.push_back(static_cast<NodeId>(i));
    }
    f.removed = {0, static_cast<NodeId>(degree)};
  } else {
    // node 0 = h, node 1 = k, then (layers - 1) interior nodes per path
    n = 2 + degree * (layers - 1);
    NodeId next = 2;
    for (std::size_t p = 0; p < degree; ++p) {
      NodeId prev = 0;
      for (std::size_t j = 0; j + 1 < layers; ++j) {
        edges.push_back(Edge::canonical(prev, next));
        if (j == 0 && p + 1 == degree) f.removed = Edge::canonical(0, next);
        prev = next++;
      }
      edges.push_back(Edge::canonical(prev, 1));
    }
    f.sources.push_back(1);
  }
  f.before = Graph::from_edges(n, edges);
  const Edge drop[] = {f.removed};
  f.after = remove_edges(f.before, drop).graph;
  f.target = 0;
  return f;
}

EffectRatioResult effect_ratio_experiment(std::size_t degree, std::size_t layers,
                                          std::size_t trials, std::uint64_t seed,
                                          const EffectRatioOptions& options) {
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  if (options.width == 0) throw std::invalid_argument("width must be >= 1");
  const auto fixture = influence_fixture(degree, layers);
  const auto n = static_cast<Eigen::Index>(fixture.before.num_nodes());
  const auto w = static_cast<Eigen::Index>(options.width);
  const std::vector<std::size_t> dims(layers + 1, options.width);

  EffectRatioResult r;
  r.degree = degree;
  r.layers = layers;
  r.trials = trials;
  r.closed_form = closed_form_effect(degree);
  r.expected_effect = 1.0 - expected_ratio(options.arch, degree);

  std::vector<double> ratios;
  ratios.reserve(trials);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(seed, {0x7e, degree, layers, trial}));
    const auto params = ModelParams::init(options.arch, dims, /*add_self_loops=*/false, rng());
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> entry(0, options.width - 1);
    // features are zero off the source set, so only the k -> h paths carry signal
    Matrix x = Matrix::Zero(n, w);
    Eigen::RowVectorXd source(w);
    for (Eigen::Index j = 0; j < w; ++j) source(j) = normal(rng);
    for (auto k : fixture.sources) x.row(k) = source;
    const auto s = entry(rng);
    const auto t = entry(rng);
    const double before = influence_jacobian(fixture.before, x, params, fixture.target,
                                             fixture.sources, s, t, options.rel_eps);
    if (std::abs(before) < 1e-12) {
      ++r.discarded;
      continue;
    }
    const double after = influence_jacobian(fixture.after, x, params, fixture.target,
                                            fixture.sources, s, t, options.rel_eps);
    ratios.push_back(after / before);
  }
  r.used = ratios.size();
  if (ratios.empty()) {
    throw DegenerateExperimentError("all " + std::to_string(trials) +
                                    " trials had a zero influence before removal");
  }
  const double mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / static_cast<double>(r.used);
  double ss = 0.0;
  for (double v : ratios) ss += (v - mean) * (v - mean);
  const double sd = r.used > 1 ? std::sqrt(ss / static_cast<double>(r.used - 1)) : 0.0;
  r.mean_ratio = mean;
  r.empirical = 1.0 - mean;
  r.std_error = sd / std::sqrt(static_cast<double>(r.used));
  return r;
}

// ---------------------------------------------------------------------------
// degree-change profile

std::optional<double> DegreeChangeProfile::mean_in(std::size_t lo, std::size_t hi) const {
  double sum = 0.0;
  std::size_t count = 0;
  for (auto it = per_degree.lower_bound(lo); it != per_degree.end() && it->first < hi; ++it) {
    sum += it->second.first;
    count += it->second.second;
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

double DegreeChangeProfile::bucket_spearman() const {
  std::vector<double> deg, val;
  for (const auto& b : buckets) {
    if (b.count == 0) continue;
    deg.push_back(static_cast<double>(b.lo));
    val.push_back(b.mean);
  }
  return spearman(deg, val);
}

std::string DegreeChangeProfile::to_csv() const {
  std::string out = "bucket_lo,bucket_hi,mean_change,count\n";
  for (const auto& b : buckets) {
    out += std::to_string(b.lo) + "," + std::to_string(b.hi) + "," + fmt("%.6f", b.mean) + "," +
           std::to_string(b.count) + "\n";
  }
  return out;
}

DegreeChangeProfile degree_change_profile(const Graph& train_graph, const EdgeSplit& split,
                                          const ProfileOptions& options) {
  if (split.train.empty()) throw std::invalid_argument("train split is empty");
  SamplerOptions so;
  so.batch_size = options.batch_size;
  so.hops = options.hops;
  so.policy = options.policy;
  so.negs_per_pos = 0;
  so.seed = options.seed;
  const EdgeSampler sampler(train_graph, split, so);

  DegreeChangeProfile profile;
  std::unordered_map<NodeId, std::size_t> lost;
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    const auto order = sampler.epoch_order(epoch);
    for (std::size_t b = 0; b < sampler.batches_per_epoch(); ++b) {
      const auto batch = sampler.sample(order, epoch, b);
      lost.clear();
      for (const auto& e : batch.excluded) {
        ++lost[e.u];
        ++lost[e.v];
      }
      std::vector<NodeId> endpoints;
      for (const auto& e : batch.positives) {
        endpoints.push_back(e.u);
        endpoints.push_back(e.v);
      }
      std::sort(endpoints.begin(), endpoints.end());
      endpoints.erase(std::unique(endpoints.begin(), endpoints.end()), endpoints.end());
      for (auto node : endpoints) {
        const auto local = batch.message_graph.local_id(node);
        if (!local) continue;
        const auto it = lost.find(node);
        const std::size_t removed = it == lost.end() ? 0 : it->second;
        const std::size_t before = batch.message_graph.degree(*local) + removed;
        if (before == 0) continue;
        auto& slot = profile.per_degree[before];
        slot.first += static_cast<double>(removed) / static_cast<double>(before);
        ++slot.second;
      }
    }
  }
  if (profile.per_degree.empty()) return profile;
  const std::size_t max_deg = profile.per_degree.rbegin()->first;
  for (std::size_t lo = 1; lo <= max_deg; lo *= 2) {
    DegreeChangeProfile::Bucket bucket;
    bucket.lo = lo;
    bucket.hi = lo * 2;
    double sum = 0.0;
    for (auto it = profile.per_degree.lower_bound(lo); it != profile.per_degree.end() && it->first < bucket.hi; ++it) {
      sum += it->second.first;
      bucket.count += it->second.second;
    }
    bucket.mean = bucket.count ? sum / static_cast<double>(bucket.count) : 0.0;
    profile.buckets.push_back(bucket);
  }
  return profile;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t q = i; q <= j; ++q) ranks[idx[q]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman: size mismatch");
  if (x.size() < 2) return 0.0;
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

// ---------------------------------------------------------------------------
// delta sweep

std::string SweepTable::to_csv() const {
  std::string out = "delta,mean,std,runs,failed\n";
  for (const auto& r : rows) {
    out += delta_text(r.delta) + "," + fmt("%.6f", r.mean) + "," + fmt("%.6f", r.stddev) + "," +
           std::to_string(r.runs) + "," + std::to_string(r.failed) + "\n";
  }
  return out;
}

std::string SweepTable::cells_csv() const {
  std::string out = "delta,seed,value,error\n";
  for (const auto& c : cells) {
    std::string err = c.error.value_or("");
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out += delta_text(c.delta) + "," + std::to_string(c.seed) + "," +
           (c.error ? std::string("nan") : fmt("%.6f", c.value)) + "," + err + "\n";
  }
  return out;
}

SweepTable delta_sweep(const Graph& graph, const EdgeSplit& split, const TrainOptions& base,
                       std::span<const double> deltas, std::span<const std::uint64_t> seeds,
                       const std::string& metric) {
  if (!std::is_sorted(deltas.begin(), deltas.end())) {
    throw std::invalid_argument("deltas must be sorted ascending");
  }
  SweepTable table;
  table.metric = metric;
  for (double delta : deltas) {
    SweepRow row;
    row.delta = delta;
    std::vector<double> values;
    for (auto seed : seeds) {
      SweepCell cell;
      cell.delta = delta;
      cell.seed = seed;
      try {
        TrainOptions opts = base;
        opts.policy = PolicySpec{ExclusionPolicy::Kind::LowDegree, delta, std::nullopt};
        opts.seed = seed;
        const auto result = train_model(graph, split, opts);
        const auto v = result.test_report.get(metric);
        if (!v) throw std::invalid_argument("metric '" + metric + "' not in test report");
        cell.value = *v;
        cell.report = result.test_report;
        values.push_back(*v);
      } catch (const std::exception& e) {
        cell.error = e.what();
        ++row.failed;
      }
      table.cells.push_back(cell);
    }
    row.runs = values.size();
    if (!values.empty()) {
      row.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
      double ss = 0.0;
      for (double v : values) ss += (v - row.mean) * (v - row.mean);
      row.stddev = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
    } else {
      row.mean = std::numeric_limits<double>::quiet_NaN();
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace lpx
