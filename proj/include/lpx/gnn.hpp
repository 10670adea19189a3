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
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lpx/graph.hpp"
#include "lpx/matrix.hpp"
#include "lpx/sampler.hpp"

namespace lpx {

enum class Arch : std::uint8_t { GCN = 0, SAGE = 1 };

Arch parse_arch(const std::string& text);
std::string to_string(Arch arch);

/// One message-passing layer. GCN uses `weight` only; SAGE uses `weight` for
/// the self term and `neighbor_weight` for the mean of the neighbors.
struct Layer {
  Matrix weight;
  Matrix neighbor_weight;
};

/// Weights of a stack of layers followed by a dot-product decoder.
///
/// Layer l maps H (n x in_l) to H' (n x out_l):
///   GCN   H' = P H W,          P_ij = 1 / sqrt(d_i d_j) over edges (+ self loops)
///   SAGE  H' = H Ws + M H Wn,  M = row-normalized adjacency (neighbor mean)
/// ReLU follows every layer except the last.
struct ModelParams {
  Arch arch = Arch::GCN;
  bool add_self_loops = false;
  bool relu = true;
  std::vector<Layer> layers;

  /// Seeded uniform init in [-1/sqrt(fan_in), 1/sqrt(fan_in)]. `dims` holds
  /// the input width followed by each layer's output width.
  static ModelParams init(Arch arch, std::span<const std::size_t> dims, bool add_self_loops,
                          std::uint64_t seed);

  std::size_t num_layers() const { return layers.size(); }
  std::size_t in_dim() const;
  std::size_t out_dim() const;
  std::size_t num_weights() const;

  /// Every weight matrix in a fixed order (layer-major, self before neighbor).
  std::vector<Matrix*> tensors();
  std::vector<const Matrix*> tensors() const;

  /// Throws std::invalid_argument if the dimension chain is inconsistent.
  void validate() const;

  bool operator==(const ModelParams& other) const;
};

/// Intermediate values kept for backprop.
struct ForwardCache {
  std::vector<Matrix> inputs;      // H_l
  std::vector<Matrix> aggregated;  // P H_l (GCN) or M H_l (SAGE)
  std::vector<Matrix> pre;         // pre-activation of layer l
};

/// Rows of `features` for the subgraph's nodes, in local order.
Matrix gather_rows(const Matrix& features, const Subgraph& sub);

/// Embeddings for every local node of `sub`. Degrees are taken from `sub`,
/// so excluded edges change the propagation weights.
Matrix gnn_forward(const Subgraph& sub, const Matrix& x, const ModelParams& params,
                   ForwardCache* cache = nullptr);

/// Gradient of the weights given dL/d(embeddings).
std::vector<Matrix> gnn_backward(const Subgraph& sub, const ModelParams& params,
                                 const ForwardCache& cache, const Matrix& grad_out);

/// <e_a, e_b> per local pair. Throws std::out_of_range for a bad id.
std::vector<double> dot_decoder(const Matrix& embeddings,
                                std::span<const std::pair<std::uint32_t, std::uint32_t>> pairs);

struct LossResult {
  double loss = 0.0;
  /// Per element: sigmoid(s) - y. The gradient of the mean loss is this / n.
  std::vector<double> grad;
};

/// Mean binary cross-entropy on logits. Throws std::invalid_argument for
/// empty or mismatched input.
LossResult bce_logit_loss(std::span<const double> scores, std::span<const int> labels);

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Loss of a batch and the weight gradients.
struct BatchGradient {
  double loss = 0.0;
  std::vector<Matrix> grads;
};

BatchGradient batch_gradient(const Batch& batch, const Matrix& features,
                             const ModelParams& params);
double batch_loss(const Batch& batch, const Matrix& features, const ModelParams& params);

struct SgdOptions {
  double learning_rate = 0.01;
  double momentum = 0.0;
};

struct SgdState {
  std::vector<Matrix> velocity;
};

/// One SGD (optionally momentum) step on the batch. Returns the pre-update
/// loss. Throws TrainingError on a non-finite loss.
double train_step(const Batch& batch, const Matrix& features, ModelParams& params,
                  const SgdOptions& options, SgdState& state);

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  /// Entries skipped because a perturbation flipped a ReLU mask.
  std::size_t kink_entries = 0;
  /// True when some hidden pre-activation sits exactly on the kink or any
  /// entry was skipped.
  bool kink_flagged = false;
};

/// Compares backprop against a fourth-order central difference on every
/// weight entry. Relative error is |a - n| / max(|a|, |n|, 1e-8).
GradCheckResult grad_check(const ModelParams& params, const Batch& batch,
                           const Matrix& features, double epsilon);

/// Binary checkpoint; see README for the layout.
std::string serialize_checkpoint(const ModelParams& params);
ModelParams deserialize_checkpoint(const std::string& bytes);
void save_checkpoint(const std::filesystem::path& path, const ModelParams& params);
ModelParams load_checkpoint(const std::filesystem::path& path);

}  // namespace lpx
