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

#include "lpx/gnn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "lpx/random.hpp"

namespace lpx {

Arch parse_arch(const std::string& text) {
  if (text == "gcn" || text == "GCN") return Arch::GCN;
  if (text == "sage" || text == "SAGE") return Arch::SAGE;
  throw std::invalid_argument("unknown arch '" + text + "' (expected gcn or sage)");
}

std::string to_string(Arch arch) { return arch == Arch::GCN ? "gcn" : "sage"; }

// ---------------------------------------------------------------------------
// ModelParams

ModelParams ModelParams::init(Arch arch, std::span<const std::size_t> dims, bool add_self_loops,
                              std::uint64_t seed) {
  if (dims.size() < 2) throw std::invalid_argument("need at least one layer");
  ModelParams p;
  p.arch = arch;
  p.add_self_loops = add_self_loops;
  Rng rng(seed);
  auto fill = [&](std::size_t in, std::size_t out) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> u(-bound, bound);
    Matrix w(static_cast<Eigen::Index>(in), static_cast<Eigen::Index>(out));
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = u(rng);
    }
    return w;
  };
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    if (dims[l] == 0 || dims[l + 1] == 0) throw std::invalid_argument("zero layer width");
    Layer layer;
    layer.weight = fill(dims[l], dims[l + 1]);
    if (arch == Arch::SAGE) layer.neighbor_weight = fill(dims[l], dims[l + 1]);
    p.layers.push_back(std::move(layer));
  }
  return p;
}

std::size_t ModelParams::in_dim() const {
  return layers.empty() ? 0 : static_cast<std::size_t>(layers.front().weight.rows());
}

std::size_t ModelParams::out_dim() const {
  return layers.empty() ? 0 : static_cast<std::size_t>(layers.back().weight.cols());
}

std::size_t ModelParams::num_weights() const {
  std::size_t n = 0;
  for (const auto* t : tensors()) n += static_cast<std::size_t>(t->size());
  return n;
}

std::vector<Matrix*> ModelParams::tensors() {
  std::vector<Matrix*> out;
  for (auto& l : layers) {
    out.push_back(&l.weight);
    if (arch == Arch::SAGE) out.push_back(&l.neighbor_weight);
  }
  return out;
}

std::vector<const Matrix*> ModelParams::tensors() const {
  std::vector<const Matrix*> out;
  for (const auto& l : layers) {
    out.push_back(&l.weight);
    if (arch == Arch::SAGE) out.push_back(&l.neighbor_weight);
  }
  return out;
}

void ModelParams::validate() const {
  if (layers.empty()) throw std::invalid_argument("model has no layers");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& w = layers[l].weight;
    if (w.size() == 0) throw std::invalid_argument("empty weight matrix");
    if (arch == Arch::SAGE && (layers[l].neighbor_weight.rows() != w.rows() ||
                               layers[l].neighbor_weight.cols() != w.cols())) {
      throw std::invalid_argument("SAGE self/neighbor weight shapes differ");
    }
    if (l + 1 < layers.size() && w.cols() != layers[l + 1].weight.rows()) {
      throw std::invalid_argument("layer " + std::to_string(l) + " output width " +
                                  std::to_string(w.cols()) + " != layer " +
                                  std::to_string(l + 1) + " input width " +
                                  std::to_string(layers[l + 1].weight.rows()));
    }
  }
}

bool ModelParams::operator==(const ModelParams& other) const {
  if (arch != other.arch || add_self_loops != other.add_self_loops || relu != other.relu ||
      layers.size() != other.layers.size()) {
    return false;
  }
  auto a = tensors();
  auto b = other.tensors();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i]->rows() != b[i]->rows() || a[i]->cols() != b[i]->cols()) return false;
    if (std::memcmp(a[i]->data(), b[i]->data(), sizeof(double) * a[i]->size()) != 0) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Propagation

namespace {

// Symmetric GCN propagation P H. P is symmetric, so it is also its own
// transpose for the backward pass.
Matrix gcn_propagate(const Subgraph& sub, const Matrix& h, bool self_loops) {
  const auto n = static_cast<std::uint32_t>(sub.num_nodes());
  std::vector<double> norm(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto d = sub.degree(i) + (self_loops ? 1 : 0);
    norm[i] = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(d, 1)));
  }
  Matrix out = Matrix::Zero(h.rows(), h.cols());
  for (std::uint32_t i = 0; i < n; ++i) {
    auto row = out.row(i);
    for (auto j : sub.neighbors(i)) row.noalias() += norm[j] * h.row(j);
    if (self_loops) row.noalias() += norm[i] * h.row(i);
    row *= norm[i];
  }
  return out;
}

// Neighbor mean M H; isolated nodes get a zero row.
Matrix mean_aggregate(const Subgraph& sub, const Matrix& h, bool self_loops) {
  const auto n = static_cast<std::uint32_t>(sub.num_nodes());
  Matrix out = Matrix::Zero(h.rows(), h.cols());
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto d = sub.degree(i) + (self_loops ? 1 : 0);
    if (d == 0) continue;
    auto row = out.row(i);
    for (auto j : sub.neighbors(i)) row.noalias() += h.row(j);
    if (self_loops) row.noalias() += h.row(i);
    row /= static_cast<double>(d);
  }
  return out;
}

// M^T G
Matrix mean_aggregate_transpose(const Subgraph& sub, const Matrix& g, bool self_loops) {
  const auto n = static_cast<std::uint32_t>(sub.num_nodes());
  Matrix out = Matrix::Zero(g.rows(), g.cols());
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto d = sub.degree(i) + (self_loops ? 1 : 0);
    if (d == 0) continue;
    const double inv = 1.0 / static_cast<double>(d);
    for (auto j : sub.neighbors(i)) out.row(j).noalias() += inv * g.row(i);
    if (self_loops) out.row(i).noalias() += inv * g.row(i);
  }
  return out;
}

}  // namespace

Matrix gather_rows(const Matrix& features, const Subgraph& sub) {
  Matrix x(static_cast<Eigen::Index>(sub.num_nodes()), features.cols());
  const auto nodes = sub.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] >= static_cast<std::size_t>(features.rows())) {
      throw std::out_of_range("feature matrix has no row for node " + std::to_string(nodes[i]));
    }
    x.row(static_cast<Eigen::Index>(i)) = features.row(nodes[i]);
  }
  return x;
}

Matrix gnn_forward(const Subgraph& sub, const Matrix& x, const ModelParams& params,
                   ForwardCache* cache) {
  params.validate();
  if (static_cast<std::size_t>(x.rows()) != sub.num_nodes()) {
    throw std::invalid_argument("feature rows (" + std::to_string(x.rows()) +
                                ") != subgraph nodes (" + std::to_string(sub.num_nodes()) + ")");
  }
  if (static_cast<std::size_t>(x.cols()) != params.in_dim()) {
    throw std::invalid_argument("feature width " + std::to_string(x.cols()) +
                                " != model input width " + std::to_string(params.in_dim()));
  }
  if (cache) {
    cache->inputs.clear();
    cache->aggregated.clear();
    cache->pre.clear();
  }
  Matrix h = x;
  const auto last = params.layers.size() - 1;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto& layer = params.layers[l];
    Matrix agg;
    Matrix z;
    if (params.arch == Arch::GCN) {
      agg = gcn_propagate(sub, h, params.add_self_loops);
      z.noalias() = agg * layer.weight;
    } else {
      agg = mean_aggregate(sub, h, params.add_self_loops);
      z.noalias() = h * layer.weight;
      z.noalias() += agg * layer.neighbor_weight;
    }
    if (cache) {
      cache->inputs.push_back(h);
      cache->aggregated.push_back(std::move(agg));
      cache->pre.push_back(z);
    }
    if (l != last && params.relu) {
      h = z.cwiseMax(0.0);
    } else {
      h = std::move(z);
    }
  }
  return h;
}

std::vector<Matrix> gnn_backward(const Subgraph& sub, const ModelParams& params,
                                 const ForwardCache& cache, const Matrix& grad_out) {
  const auto num_layers = params.layers.size();
  if (cache.pre.size() != num_layers) throw std::logic_error("forward cache does not match model");
  std::vector<Matrix> grads(params.arch == Arch::SAGE ? 2 * num_layers : num_layers);
  Matrix g = grad_out;
  for (std::size_t l = num_layers; l-- > 0;) {
    const auto& layer = params.layers[l];
    Matrix dz = g;
    if (l + 1 != num_layers && params.relu) {
      dz = dz.cwiseProduct((cache.pre[l].array() > 0.0).cast<double>().matrix());
    }
    if (params.arch == Arch::GCN) {
      grads[l].noalias() = cache.aggregated[l].transpose() * dz;
      if (l == 0) break;
      Matrix da;
      da.noalias() = dz * layer.weight.transpose();
      g = gcn_propagate(sub, da, params.add_self_loops);
    } else {
      grads[2 * l].noalias() = cache.inputs[l].transpose() * dz;
      grads[2 * l + 1].noalias() = cache.aggregated[l].transpose() * dz;
      if (l == 0) break;
      Matrix da;
      da.noalias() = dz * layer.neighbor_weight.transpose();
      g.noalias() = dz * layer.weight.transpose();
      g += mean_aggregate_transpose(sub, da, params.add_self_loops);
    }
  }
  return grads;
}

// ---------------------------------------------------------------------------
// Decoder and loss

std::vector<double> dot_decoder(const Matrix& embeddings,
                                std::span<const std::pair<std::uint32_t, std::uint32_t>> pairs) {
  std::vector<double> out;
  out.reserve(pairs.size());
  const auto rows = static_cast<std::uint64_t>(embeddings.rows());
  for (const auto& [a, b] : pairs) {
    if (a >= rows || b >= rows) throw std::out_of_range("decoder pair id out of range");
    out.push_back(embeddings.row(a).dot(embeddings.row(b)));
  }
  return out;
}

LossResult bce_logit_loss(std::span<const double> scores, std::span<const int> labels) {
  if (scores.empty()) throw std::invalid_argument("empty loss input");
  if (scores.size() != labels.size()) throw std::invalid_argument("scores/labels size mismatch");
  LossResult r;
  r.grad.resize(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double s = scores[i];
    const double y = labels[i] ? 1.0 : 0.0;
    // softplus(s) - y s, stable for large |s|
    const double softplus = std::max(s, 0.0) + std::log1p(std::exp(-std::abs(s)));
    total += softplus - y * s;
    const double sig = s >= 0 ? 1.0 / (1.0 + std::exp(-s)) : std::exp(s) / (1.0 + std::exp(s));
    r.grad[i] = sig - y;
  }
  r.loss = total / static_cast<double>(scores.size());
  return r;
}

// ---------------------------------------------------------------------------
// Training

namespace {

struct ScoredBatch {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::vector<int> labels;
};

ScoredBatch local_pairs(const Batch& batch) {
  ScoredBatch sb;
  const auto& mg = batch.message_graph;
  auto add = [&](const Edge& e, int label) {
    auto a = mg.local_id(e.u);
    auto b = mg.local_id(e.v);
    if (!a || !b) throw std::logic_error("batch target endpoint missing from message graph");
    sb.pairs.emplace_back(*a, *b);
    sb.labels.push_back(label);
  };
  for (const auto& e : batch.positives) add(e, 1);
  for (const auto& e : batch.negatives) add(e, 0);
  return sb;
}

}  // namespace

BatchGradient batch_gradient(const Batch& batch, const Matrix& features,
                             const ModelParams& params) {
  const auto sb = local_pairs(batch);
  const Matrix x = gather_rows(features, batch.message_graph);
  ForwardCache cache;
  const Matrix emb = gnn_forward(batch.message_graph, x, params, &cache);
  const auto scores = dot_decoder(emb, sb.pairs);
  const auto loss = bce_logit_loss(scores, sb.labels);

  Matrix d_emb = Matrix::Zero(emb.rows(), emb.cols());
  const double scale = 1.0 / static_cast<double>(scores.size());
  for (std::size_t i = 0; i < sb.pairs.size(); ++i) {
    const auto [a, b] = sb.pairs[i];
    const double g = loss.grad[i] * scale;
    d_emb.row(a).noalias() += g * emb.row(b);
    d_emb.row(b).noalias() += g * emb.row(a);
  }
  BatchGradient out;
  out.loss = loss.loss;
  out.grads = gnn_backward(batch.message_graph, params, cache, d_emb);
  return out;
}

double batch_loss(const Batch& batch, const Matrix& features, const ModelParams& params) {
  const auto sb = local_pairs(batch);
  const Matrix x = gather_rows(features, batch.message_graph);
  const Matrix emb = gnn_forward(batch.message_graph, x, params);
  return bce_logit_loss(dot_decoder(emb, sb.pairs), sb.labels).loss;
}

double train_step(const Batch& batch, const Matrix& features, ModelParams& params,
                  const SgdOptions& options, SgdState& state) {
  auto bg = batch_gradient(batch, features, params);
  if (!std::isfinite(bg.loss)) {
    throw TrainingError("non-finite loss in batch " + std::to_string(batch.index) + " of epoch " +
                        std::to_string(batch.epoch));
  }
  auto tensors = params.tensors();
  if (state.velocity.size() != tensors.size()) {
    state.velocity.clear();
    for (const auto* t : tensors) state.velocity.push_back(Matrix::Zero(t->rows(), t->cols()));
  }
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    if (options.momentum != 0.0) {
      state.velocity[i] = options.momentum * state.velocity[i] + bg.grads[i];
      *tensors[i] -= options.learning_rate * state.velocity[i];
    } else {
      *tensors[i] -= options.learning_rate * bg.grads[i];
    }
  }
  return bg.loss;
}

// ---------------------------------------------------------------------------
// Gradient check

GradCheckResult grad_check(const ModelParams& params, const Batch& batch,
                           const Matrix& features, double epsilon) {
  if (!(epsilon >= 1e-6 && epsilon <= 1e-3)) {
    throw std::invalid_argument("grad_check epsilon must be in [1e-6, 1e-3]");
  }
  const auto analytic = batch_gradient(batch, features, params).grads;
  const auto sb = local_pairs(batch);
  const Matrix x = gather_rows(features, batch.message_graph);

  ForwardCache base;
  gnn_forward(batch.message_graph, x, params, &base);
  const auto hidden = params.relu ? params.layers.size() - 1 : 0;

  ModelParams probe = params;
  auto probe_tensors = probe.tensors();

  // loss at the probe; sets `flipped` when any hidden ReLU mask changes
  auto eval = [&](bool& flipped) {
    ForwardCache c;
    const Matrix emb = gnn_forward(batch.message_graph, x, probe, &c);
    for (std::size_t l = 0; l < hidden && !flipped; ++l) {
      flipped = ((c.pre[l].array() > 0.0) != (base.pre[l].array() > 0.0)).any();
    }
    return bce_logit_loss(dot_decoder(emb, sb.pairs), sb.labels).loss;
  };

  GradCheckResult r;
  for (std::size_t t = 0; t < probe_tensors.size(); ++t) {
    Matrix& w = *probe_tensors[t];
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double orig = w.data()[i];
      bool flipped = false;
      double f[4];
      const double steps[4] = {2.0, 1.0, -1.0, -2.0};
      for (int s = 0; s < 4; ++s) {
        w.data()[i] = orig + steps[s] * epsilon;
        f[s] = eval(flipped);
      }
      w.data()[i] = orig;
      if (flipped) {
        ++r.kink_entries;
        continue;
      }
      const double numeric = (-f[0] + 8.0 * f[1] - 8.0 * f[2] + f[3]) / (12.0 * epsilon);
      const double a = analytic[t].data()[i];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
      r.max_rel_error = std::max(r.max_rel_error, std::abs(a - numeric) / denom);
      ++r.checked;
    }
  }
  r.kink_flagged = r.kink_entries > 0;
  return r;
}

// ---------------------------------------------------------------------------
// Checkpoints
//
// Layout (little-endian):
//   char[8]  magic "LPXMODEL"
//   u32      version (1)
//   u8       arch (0 = gcn, 1 = sage)
//   u8       add_self_loops
//   u8       relu
//   u8       reserved (0)
//   u32      number of layers
//   per layer, per matrix (GCN: weight; SAGE: weight, neighbor_weight):
//     u32 rows, u32 cols, rows*cols f64 in row-major order

namespace {

constexpr char kMagic[8] = {'L', 'P', 'X', 'M', 'O', 'D', 'E', 'L'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint IO assumes a little-endian host");

template <typename T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

template <typename T>
T take(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw std::runtime_error("truncated checkpoint");
  T v;
  std::memcpy(&v, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

}  // namespace

std::string serialize_checkpoint(const ModelParams& params) {
  params.validate();
  std::string out(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(params.arch));
  put<std::uint8_t>(out, params.add_self_loops ? 1 : 0);
  put<std::uint8_t>(out, params.relu ? 1 : 0);
  put<std::uint8_t>(out, 0);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.layers.size()));
  for (const auto* t : params.tensors()) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t->rows()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t->cols()));
    out.append(reinterpret_cast<const char*>(t->data()), sizeof(double) * t->size());
  }
  return out;
}

ModelParams deserialize_checkpoint(const std::string& bytes) {
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("not a model checkpoint");
  }
  std::size_t pos = sizeof(kMagic);
  const auto version = take<std::uint32_t>(bytes, pos);
  if (version != kVersion) {
    throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
  }
  ModelParams p;
  const auto arch = take<std::uint8_t>(bytes, pos);
  if (arch > 1) throw std::runtime_error("bad arch tag in checkpoint");
  p.arch = static_cast<Arch>(arch);
  p.add_self_loops = take<std::uint8_t>(bytes, pos) != 0;
  p.relu = take<std::uint8_t>(bytes, pos) != 0;
  take<std::uint8_t>(bytes, pos);
  const auto num_layers = take<std::uint32_t>(bytes, pos);
  p.layers.resize(num_layers);
  for (auto* t : p.tensors()) {
    const auto rows = take<std::uint32_t>(bytes, pos);
    const auto cols = take<std::uint32_t>(bytes, pos);
    const std::size_t n = std::size_t{rows} * cols;
    if (pos + n * sizeof(double) > bytes.size()) throw std::runtime_error("truncated checkpoint");
    t->resize(rows, cols);
    std::memcpy(t->data(), bytes.data() + pos, n * sizeof(double));
    pos += n * sizeof(double);
  }
  if (pos != bytes.size()) throw std::runtime_error("trailing bytes in checkpoint");
  p.validate();
  return p;
}

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const auto bytes = serialize_checkpoint(params);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return deserialize_checkpoint(buf.str());
}

}  // namespace lpx
