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

// lpx: link-prediction training with target-edge exclusion, leakage audits,
// evaluation and the influence experiments, behind one command line.
//
// Exit codes: 0 ok, 1 runtime error, 2 usage or config error, 3 leak found
// and fixed, 4 leak detected (check only, or evaluation refused).

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "lpx/audit.hpp"
#include "lpx/config.hpp"
#include "lpx/gnn.hpp"
#include "lpx/metrics.hpp"
#include "lpx/random.hpp"
#include "lpx/synthetic.hpp"
#include "lpx/theory.hpp"
#include "lpx/trainer.hpp"

#ifndef LPX_GIT_COMMIT
#define LPX_GIT_COMMIT "unknown"
#endif

namespace fs = std::filesystem;
using namespace lpx;

namespace {

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kUsage = 2;
constexpr int kFixedLeak = 3;
constexpr int kLeakDetected = 4;

std::string fixed6(double v) {
  if (std::abs(v) < 5e-7) v = 0.0;  // no "-0.000000"
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string number(double v) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  // shortest text that reads back to the same double
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

using Manifest = std::vector<std::pair<std::string, std::string>>;

std::string manifest_text(const std::string& command, const Manifest& entries) {
  std::string out = "command = " + command + "\ncommit = " LPX_GIT_COMMIT "\n";
  for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
  return out;
}

// Output location for single-table commands: a path ending in .csv is the
// table itself (manifest beside it), anything else is a directory.
struct TableOut {
  fs::path table;
  fs::path manifest;
  fs::path dir;
};

TableOut table_out(const std::string& out, const std::string& default_name) {
  TableOut t;
  const fs::path p(out);
  // a path with the table's own extension names the table file itself
  if (p.extension() == fs::path(default_name).extension()) {
    t.table = p;
    t.dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
    t.manifest = t.dir / (p.stem().string() + ".manifest.txt");
  } else {
    t.dir = p;
    t.table = p / default_name;
    t.manifest = p / "manifest.txt";
  }
  return t;
}

// Every RunConfig key becomes --key-with-dashes; values given on the command
// line override the --config file.
struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  RunConfig base;  // command defaults under the config file

  void attach(CLI::App* app, const std::vector<std::string>& keys, RunConfig defaults = {}) {
    base = defaults;
    app->add_option("--config", config_path, "key = value config file; flags override it");
    for (const auto& key : RunConfig::keys()) {
      if (std::find(keys.begin(), keys.end(), key.name) == keys.end()) continue;
      std::string flag = key.name;
      std::replace(flag.begin(), flag.end(), '_', '-');
      const std::string def = defaults.get(key.name);
      auto* opt = app->add_option("--" + flag, values[key.name],
                                  key.help + " (default: " + (def.empty() ? "none" : def) + ")");
      options.emplace_back(key.name, opt);
    }
  }

  RunConfig resolve(bool need_graph) const {
    RunConfig cfg = config_path.empty() ? base : RunConfig::load(config_path, base);
    std::vector<std::string> problems;
    for (const auto& [key, opt] : options) {
      if (opt->count() == 0) continue;
      if (auto err = cfg.set(key, values.at(key))) problems.push_back(*err);
    }
    for (auto& p : cfg.problems(need_graph)) problems.push_back(std::move(p));
    if (!problems.empty()) throw ConfigError(std::move(problems));
    return cfg;
  }
};

const std::vector<std::string> kDataKeys{"graph", "splits", "features", "feature_dim",
                                         "split_negatives", "data_seed"};

std::vector<std::string> keys_plus(std::vector<std::string> base, std::initializer_list<const char*> more) {
  for (const char* k : more) base.emplace_back(k);
  return base;
}

std::vector<std::string> all_keys() {
  std::vector<std::string> out;
  for (const auto& k : RunConfig::keys()) out.push_back(k.name);
  return out;
}

struct Dataset {
  Graph graph;  // with features
  EdgeSplit split;
};

Dataset load_dataset(const RunConfig& cfg, bool need_features = true) {
  Dataset d;
  auto g = load_edge_list(cfg.graph);
  d.split = cfg.splits.empty() ? random_split(g, derive_seed(cfg.data_seed, {0x5b}), cfg.split_negatives)
                               : load_split_dir(cfg.splits);
  d.split.validate(g.num_nodes());
  if (need_features) {
    auto x = cfg.features.empty()
                 ? random_features(g.num_nodes(), cfg.feature_dim, derive_seed(cfg.data_seed, {0xfe}))
                 : load_features(cfg.features);
    g = g.with_features(std::move(x));
  }
  d.graph = std::move(g);
  return d;
}

Manifest audit_entries(const AuditReport& r, const std::string& prefix) {
  Manifest m;
  std::istringstream in(r.to_text());
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) m.emplace_back(prefix + line.substr(0, eq), line.substr(eq + 1));
  }
  return m;
}

// ---------------------------------------------------------------------------

int cmd_train(const ConfigFlags& flags) {
  const auto cfg = flags.resolve(true);
  const auto data = load_dataset(cfg);
  const fs::path out(cfg.out);
  fs::create_directories(out);

  std::string history = "epoch,loss,valid_" + cfg.select_metric + "\n";
  const auto result = train_model(data.graph, data.split, cfg.train_options(), [&](const EpochRecord& r) {
    history += std::to_string(r.epoch) + "," + fixed6(r.loss) + "," + fixed6(r.valid_metric) + "\n";
    std::cerr << "epoch " << r.epoch << " loss " << fixed6(r.loss) << " valid " << fixed6(r.valid_metric)
              << "\n";
  });

  write_text(out / "config.txt", cfg.serialize());
  write_text(out / "history.csv", history);
  write_text(out / "metrics.csv", result.test_report.to_csv());
  save_checkpoint(out / "model.bin", result.best);

  Manifest m{{"seed", std::to_string(cfg.seed)},
             {"policy", result.policy.to_string()},
             {"delta", number(result.delta)},
             {"best_epoch", std::to_string(result.best_epoch)},
             {"best_valid_" + cfg.select_metric, fixed6(result.best_valid)},
             {"train_edges", std::to_string(data.split.train.size())},
             {"leakage", result.test_report.leakage ? "true" : "false"}};
  for (auto& e : audit_entries(result.test_audit, "test_graph_")) m.push_back(std::move(e));
  m.emplace_back("files", "config.txt,history.csv,metrics.csv,model.bin");
  write_text(out / "manifest.txt", manifest_text("train", m));
  std::cout << result.test_report.to_csv();
  return kOk;
}

int cmd_audit(const ConfigFlags& flags, bool check_only) {
  const auto cfg = flags.resolve(true);
  const auto data = load_dataset(cfg, /*need_features=*/false);
  const auto result = leakage_check(data.graph, data.split, cfg.keep_valid);
  std::cout << result.report.to_text();
  const bool leaked = result.report.verdict == AuditReport::Verdict::LeakedAndFixed;
  if (check_only) return leaked ? kLeakDetected : kOk;

  const auto t = table_out(cfg.out, "audit.txt");
  const bool single_file = fs::path(cfg.out).extension() == ".txt";
  const std::string prefix = single_file ? t.table.stem().string() + "." : "";
  const auto graph_file = t.dir / (prefix + "graph.tsv");
  const auto config_file = t.dir / (prefix + "config.txt");
  write_text(t.table, result.report.to_text());
  fs::create_directories(t.dir);
  save_edge_list(graph_file, result.graph.edges(), result.graph.num_nodes());
  write_text(config_file, cfg.serialize());
  auto m = audit_entries(result.report, "");
  m.emplace_back("files", t.table.filename().string() + "," + config_file.filename().string() + "," +
                              graph_file.filename().string());
  write_text(t.manifest, manifest_text("audit", m));
  return leaked ? kFixedLeak : kOk;
}

int cmd_eval(const ConfigFlags& flags, const std::string& checkpoint, const std::string& target,
             bool allow_leakage) {
  const auto cfg = flags.resolve(true);
  if (checkpoint.empty()) throw ConfigError({"checkpoint: a model file is required"});
  if (target != "test" && target != "valid") throw ConfigError({"target: must be valid or test"});
  const auto data = load_dataset(cfg);
  const auto params = load_checkpoint(checkpoint);
  const bool on_test = target == "test";

  // the unsafe mode scores on the graph exactly as given
  const Graph infer = allow_leakage
                          ? data.graph
                          : leakage_check(data.graph, data.split, on_test && cfg.keep_valid).graph;
  EvalOptions eo;
  eo.mode = parse_eval_mode(cfg.eval_mode);
  eo.target = on_test ? EvalTarget::Test : EvalTarget::Valid;
  eo.ks = cfg.ks;
  eo.allow_leakage = allow_leakage;
  eo.seed = derive_seed(cfg.seed, {on_test ? 0xe2ULL : 0xe1ULL});
  auto report = evaluate(params, infer, data.split, eo);
  if (!cfg.buckets.empty()) {
    const auto ranked = rank_split(params, infer, data.split, eo);
    const auto g_train = leakage_check(data.graph, data.split, false).graph;
    std::vector<DegreeBucket> buckets;
    for (const auto& b : cfg.buckets) buckets.push_back(DegreeBucket::parse(b));
    for (const auto& b : stratified_eval(ranked, g_train, buckets, cfg.ks)) {
      report.rows.insert(report.rows.end(), b.metrics.begin(), b.metrics.end());
    }
  }

  const fs::path out(cfg.out);
  write_text(out / "metrics.csv", report.to_csv());
  write_text(out / "config.txt", cfg.serialize());
  Manifest m{{"checkpoint", checkpoint},
             {"target", target},
             {"allow_leakage", allow_leakage ? "true" : "false"},
             {"leakage", report.leakage ? "true" : "false"},
             {"negative_pool", std::to_string(report.negative_pool)},
             {"pool_capped", report.pool_capped ? "true" : "false"},
             {"files", "config.txt,metrics.csv"}};
  write_text(out / "manifest.txt", manifest_text("eval", m));
  if (report.leakage) std::cerr << "WARNING: evaluated with target edges in the inference graph\n";
  std::cout << report.to_csv();
  return kOk;
}

int cmd_degree_profile(const ConfigFlags& flags) {
  auto cfg = flags.resolve(true);
  const auto data = load_dataset(cfg, /*need_features=*/false);
  const auto train_graph = leakage_check(data.graph, data.split, false).graph;
  const auto resolved = cfg.policy_spec().resolve(train_graph, data.split);
  ProfileOptions po;
  po.policy = resolved.policy;
  po.batch_size = cfg.batch_size;
  po.hops = cfg.hops;
  po.epochs = cfg.epochs;
  po.seed = cfg.seed;
  const auto profile = degree_change_profile(train_graph, data.split, po);

  std::string per_degree = "degree,mean_change,count\n";
  for (const auto& [deg, acc] : profile.per_degree) {
    per_degree += std::to_string(deg) + "," + fixed6(acc.first / static_cast<double>(acc.second)) + "," +
                  std::to_string(acc.second) + "\n";
  }
  const auto t = table_out(cfg.out, "profile.csv");
  const auto by_degree = t.dir / (t.table.stem().string() + "_by_degree.csv");
  write_text(t.table, profile.to_csv());
  write_text(by_degree, per_degree);
  write_text(t.dir / (t.table.stem().string() + ".config.txt"), cfg.serialize());
  Manifest m{{"policy", resolved.policy.to_string()},
             {"bucket_spearman", fixed6(profile.bucket_spearman())},
             {"files", t.table.filename().string() + "," + by_degree.filename().string()}};
  write_text(t.manifest, manifest_text("degree-profile", m));
  std::cout << profile.to_csv();
  return kOk;
}

std::vector<std::size_t> parse_degrees(const std::string& text) {
  std::vector<std::size_t> out;
  const auto colon = text.find(':');
  try {
    if (colon != std::string::npos) {
      const auto lo = std::stoull(text.substr(0, colon));
      const auto hi = std::stoull(text.substr(colon + 1));
      for (auto d = lo; d <= hi; ++d) out.push_back(d);
    } else {
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
    }
  } catch (const std::exception&) {
    throw ConfigError({"bad list '" + text + "' (expected a:b or a,b,c)"});
  }
  if (out.empty()) throw ConfigError({"empty list '" + text + "'"});
  return out;
}

int cmd_verify_theorem(const std::string& degrees, const std::string& layers, std::size_t trials,
                       std::uint64_t seed, const std::string& arch, std::size_t width,
                       const std::string& out) {
  EffectRatioOptions eo;
  try {
    eo.arch = parse_arch(arch);
  } catch (const std::exception& e) {
    throw ConfigError({std::string("arch: ") + e.what()});
  }
  eo.width = width;
  const auto ds = parse_degrees(degrees);
  const auto ls = parse_degrees(layers);
  std::string csv =
      "arch,layers,degree,trials,used,discarded,mean_ratio,empirical_d,closed_form_d,expected_d,std_error\n";
  bool all_close = true;
  bool monotone = true;
  for (auto l : ls) {
    double prev = 2.0;
    for (auto d : ds) {
      const auto r = effect_ratio_experiment(d, l, trials, seed, eo);
      csv += to_string(eo.arch) + "," + std::to_string(l) + "," + std::to_string(d) + "," +
             std::to_string(r.trials) + "," + std::to_string(r.used) + "," + std::to_string(r.discarded) +
             "," + fixed6(r.mean_ratio) + "," + fixed6(r.empirical) + "," + fixed6(r.closed_form) + "," +
             fixed6(r.expected_effect) + "," + fixed6(r.std_error) + "\n";
      all_close = all_close && std::abs(r.empirical - r.expected_effect) < 0.05;
      if (eo.arch == Arch::GCN) monotone = monotone && r.empirical < prev;
      prev = r.empirical;
    }
  }
  const auto t = table_out(out, "theorem.csv");
  write_text(t.table, csv);
  Manifest m{{"arch", to_string(eo.arch)},  {"degrees", degrees},
             {"layers", layers},            {"trials", std::to_string(trials)},
             {"seed", std::to_string(seed)}, {"width", std::to_string(width)},
             {"within_0.05", all_close ? "true" : "false"},
             {"decreasing_in_degree", eo.arch == Arch::GCN ? (monotone ? "true" : "false") : "n/a"},
             {"files", t.table.filename().string()}};
  write_text(t.manifest, manifest_text("verify-theorem", m));
  std::cout << csv;
  return kOk;
}

std::vector<double> parse_deltas(const std::string& text, double avg) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "inf") {
      out.push_back(std::numeric_limits<double>::infinity());
    } else if (item.size() >= 3 && item.compare(item.size() - 3, 3, "avg") == 0) {
      const std::string mult = item.substr(0, item.size() - 3);
      try {
        out.push_back(avg * (mult.empty() ? 1.0 : std::stod(mult)));
      } catch (const std::exception&) {
        throw ConfigError({"bad delta '" + item + "'"});
      }
    } else {
      try {
        std::size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ConfigError({"bad delta '" + item + "' (number, inf, avg or <k>avg)"});
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw ConfigError({"deltas: empty list"});
  return out;
}

int cmd_sweep_delta(const ConfigFlags& flags, const std::string& deltas_text, const std::string& seeds_text,
                    const std::string& metric) {
  const auto cfg = flags.resolve(true);
  const auto data = load_dataset(cfg);
  const auto deltas = parse_deltas(deltas_text, default_delta(data.split));
  std::vector<std::uint64_t> seeds;
  for (auto s : parse_degrees(seeds_text)) seeds.push_back(s);
  const auto table = delta_sweep(data.graph, data.split, cfg.train_options(), deltas, seeds, metric);

  const auto t = table_out(cfg.out, "sweep.csv");
  const auto cells = t.dir / (t.table.stem().string() + "_cells.csv");
  write_text(t.table, table.to_csv());
  write_text(cells, table.cells_csv());
  write_text(t.dir / (t.table.stem().string() + ".config.txt"), cfg.serialize());
  std::string resolved;
  for (double d : deltas) resolved += (resolved.empty() ? "" : ",") + number(d);
  Manifest m{{"deltas", resolved},
             {"seeds", seeds_text},
             {"metric", metric},
             {"files", t.table.filename().string() + "," + cells.filename().string()}};
  write_text(t.manifest, manifest_text("sweep-delta", m));
  std::cout << table.to_csv();
  return kOk;
}

int cmd_gen_synthetic(const std::string& kind_text, const std::map<std::string, std::string>& overrides,
                      const std::map<std::string, CLI::Option*>& opts, std::uint64_t seed,
                      const std::string& out_dir) {
  SyntheticKind kind;
  try {
    kind = parse_synthetic_kind(kind_text);
  } catch (const std::exception& e) {
    throw ConfigError({std::string("kind: ") + e.what()});
  }
  auto p = SyntheticParams::defaults(kind);
  std::vector<std::string> problems;
  const auto take = [&](const std::string& key, auto& field) {
    if (opts.at(key)->count() == 0) return;
    try {
      const auto& v = overrides.at(key);
      if constexpr (std::is_same_v<std::decay_t<decltype(field)>, double>) {
        field = std::stod(v);
      } else {
        if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
        field = static_cast<std::size_t>(std::stoull(v));
      }
    } catch (const std::exception&) {
      problems.push_back(key + ": bad value '" + overrides.at(key) + "'");
    }
  };
  take("nodes", p.nodes);
  take("avg-degree", p.avg_degree);
  take("communities", p.communities);
  take("feature-dim", p.feature_dim);
  take("signal", p.signal);
  take("noise", p.noise);
  take("exponent", p.exponent);
  take("p-in", p.p_in);
  take("query-fraction", p.query_fraction);
  take("eval-negatives", p.eval_negatives);
  if (!problems.empty()) throw ConfigError(std::move(problems));

  SyntheticDataset data;
  try {
    data = make_synthetic(kind, p, seed);
  } catch (const std::invalid_argument& e) {
    throw ConfigError({e.what()});
  }
  const fs::path out(out_dir);
  fs::create_directories(out);
  save_edge_list(out / "graph.tsv", data.graph.edges(), data.graph.num_nodes());
  save_features(out / "features.tsv", data.graph.features());
  save_split_dir(out / "splits", data.split);

  RunConfig cfg;
  cfg.graph = (out / "graph.tsv").string();
  cfg.splits = (out / "splits").string();
  cfg.features = (out / "features.tsv").string();
  cfg.out = (out / "run").string();
  if (kind == SyntheticKind::Sparse) {
    // the noisy sparse features need a gentler, longer schedule
    cfg.learning_rate = 0.01;
    cfg.epochs = 100;
  }
  write_text(out / "config.txt", cfg.serialize());

  Manifest m{{"kind", to_string(kind)},
             {"seed", std::to_string(seed)},
             {"nodes", std::to_string(data.graph.num_nodes())},
             {"edges", std::to_string(data.graph.num_edges())},
             {"avg_degree", fixed6(data.graph.num_nodes() ? 2.0 * static_cast<double>(data.graph.num_edges()) /
                                                               static_cast<double>(data.graph.num_nodes())
                                                         : 0.0)},
             {"param_avg_degree", number(p.avg_degree)},
             {"param_communities", std::to_string(p.communities)},
             {"param_feature_dim", std::to_string(p.feature_dim)},
             {"param_signal", number(p.signal)},
             {"param_noise", number(p.noise)},
             {"param_exponent", number(p.exponent)},
             {"param_p_in", number(p.p_in)},
             {"param_query_fraction", number(p.query_fraction)},
             {"param_eval_negatives", std::to_string(p.eval_negatives)},
             {"files", "config.txt,features.tsv,graph.tsv,splits"}};
  write_text(out / "manifest.txt", manifest_text("gen-synthetic", m));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link prediction with target-edge exclusion, leakage audits and evaluation"};
  app.require_subcommand(1);

  ConfigFlags train_flags;
  auto* train = app.add_subcommand("train", "train a model and evaluate its best-validation epoch");
  train_flags.attach(train, all_keys());

  ConfigFlags audit_flags;
  bool check_only = false;
  auto* audit = app.add_subcommand("audit", "remove leaked target edges from a graph");
  audit_flags.attach(audit, keys_plus(kDataKeys, {"keep_valid", "out"}));
  audit->add_flag("--check-only", check_only, "report only; exit 4 on a leak and write nothing");

  ConfigFlags eval_flags;
  std::string checkpoint, target = "test";
  bool allow_leakage = false;
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  eval_flags.attach(eval, keys_plus(kDataKeys, {"eval_mode", "ks", "keep_valid", "buckets", "seed", "out"}));
  eval->add_option("--checkpoint", checkpoint, "model file written by train (required)");
  eval->add_option("--target", target, "valid or test (default: test)");
  eval->add_flag("--allow-leakage", allow_leakage,
                 "score on the graph as given even if it holds target edges; the report is flagged");

  ConfigFlags profile_flags;
  auto* profile = app.add_subcommand("degree-profile", "relative degree loss per degree bucket");
  RunConfig profile_defaults;
  profile_defaults.policy = "all";
  profile_defaults.batch_size = 512;
  profile_defaults.epochs = 1;
  profile_defaults.out = "profile.csv";
  profile_flags.attach(profile,
                       keys_plus(kDataKeys, {"policy", "delta", "rate", "batch_size", "hops", "epochs", "seed", "out"}),
                       profile_defaults);

  std::string degrees = "2:20", layers = "1,2", arch = "gcn", theorem_out = "theorem.csv";
  std::size_t trials = 200, width = 8;
  std::uint64_t theorem_seed = 7;
  auto* theorem = app.add_subcommand("verify-theorem", "influence drop after removing one edge vs closed form");
  theorem->add_option("--degrees", degrees, "degrees, a:b or a,b,c (default: 2:20)");
  theorem->add_option("--layers", layers, "layer counts (default: 1,2)");
  theorem->add_option("--trials", trials, "random inits per cell (default: 200)");
  theorem->add_option("--seed", theorem_seed, "seed (default: 7)");
  theorem->add_option("--arch", arch, "gcn or sage (default: gcn)");
  theorem->add_option("--width", width, "layer width (default: 8)");
  theorem->add_option("--out", theorem_out, "csv file or directory (default: theorem.csv)");

  ConfigFlags sweep_flags;
  std::string deltas = "0,1,2,avg,2avg,inf", seeds = "1,2,3", metric = "mrr";
  auto* sweep = app.add_subcommand("sweep-delta", "train one model per (delta, seed)");
  sweep_flags.attach(sweep, all_keys());
  sweep->add_option("--deltas", deltas, "thresholds; inf, avg and <k>avg allowed (default: 0,1,2,avg,2avg,inf)");
  sweep->add_option("--seeds", seeds, "training seeds (default: 1,2,3)");
  sweep->add_option("--metric", metric, "test metric to tabulate (default: mrr)");

  std::string kind = "sparse", gen_out = "synthetic";
  std::uint64_t gen_seed = 1;
  std::map<std::string, std::string> gen_values;
  std::map<std::string, CLI::Option*> gen_opts;
  auto* gen = app.add_subcommand("gen-synthetic", "write a synthetic graph, features and split");
  gen->add_option("--kind", kind, "path, star, power-law or sparse (default: sparse)");
  gen->add_option("--seed", gen_seed, "seed (default: 1)");
  gen->add_option("--out", gen_out, "output directory (default: synthetic)");
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"nodes", "node count (leaf count for star)"},
           {"avg-degree", "target mean degree"},
           {"communities", "latent communities"},
           {"feature-dim", "feature width"},
           {"signal", "community centroid scale in features"},
           {"noise", "feature noise std-dev"},
           {"exponent", "power-law exponent of node weights"},
           {"p-in", "probability an edge stays in its community"},
           {"query-fraction", "sparse kind: share of query nodes"},
           {"eval-negatives", "fixed negatives per valid/test positive"}}) {
    gen_opts[name] = gen->add_option("--" + name, gen_values[name], help + " (default: per kind)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*train) return cmd_train(train_flags);
    if (*audit) return cmd_audit(audit_flags, check_only);
    if (*eval) return cmd_eval(eval_flags, checkpoint, target, allow_leakage);
    if (*profile) return cmd_degree_profile(profile_flags);
    if (*theorem) {
      return cmd_verify_theorem(degrees, layers, trials, theorem_seed, arch, width, theorem_out);
    }
    if (*sweep) return cmd_sweep_delta(sweep_flags, deltas, seeds, metric);
    if (*gen) return cmd_gen_synthetic(kind, gen_values, gen_opts, gen_seed, gen_out);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error:\n";
    for (const auto& p : e.problems()) std::cerr << "  " << p << "\n";
    return kUsage;
  } catch (const LeakageError& e) {
    std::cerr << "leakage: " << e.what() << "\n";
    return kLeakDetected;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}
