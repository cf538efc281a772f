/*
 Copyright 2026 The nmrmos Authors
 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "nmrmos/model/config.hpp"
#include "nmrmos/nn/graph.hpp"

namespace nmrmos::model {

/// All learnable tensors, stored in checkpoint order (parameter_shapes).
template <typename S>
struct ModelParamsT {
  ModelConfig config;
  std::vector<nn::TensorT<S>> tensors;

  nn::TensorT<S>& conv_w(size_t layer) { return tensors[2 * layer]; }
  nn::TensorT<S>& conv_b(size_t layer) { return tensors[2 * layer + 1]; }
  const nn::TensorT<S>& conv_w(size_t layer) const { return tensors[2 * layer]; }
  const nn::TensorT<S>& conv_b(size_t layer) const { return tensors[2 * layer + 1]; }

  // Offsets into the flat tensor list.
  size_t ds_index() const { return 2 * config.conv_channels.size(); }
  size_t head_index(int head) const { return ds_index() + 2 + 6 * head; }

  nn::TensorT<S>& ds_w() { return tensors[ds_index()]; }
  nn::TensorT<S>& ds_b() { return tensors[ds_index() + 1]; }
  const nn::TensorT<S>& ds_w() const { return tensors[ds_index()]; }
  const nn::TensorT<S>& ds_b() const { return tensors[ds_index() + 1]; }

  // head: 0 = preference, 1 = relative rating; field: fc1.w, fc1.b,
  // fc2.w, fc2.b, attn.w, attn.b
  nn::TensorT<S>& head(int h, int field) { return tensors[head_index(h) + field]; }
  const nn::TensorT<S>& head(int h, int field) const {
    return tensors[head_index(h) + field];
  }

  std::vector<std::pair<std::string, nn::TensorT<S>*>> named();
  std::vector<std::pair<std::string, const nn::TensorT<S>*>> named() const;
  int64_t parameter_count() const;
};

using ModelParams = ModelParamsT<float>;

/// Uniform +-sqrt(1/fan_in) weights, zero biases, deterministic in seed.
ModelParams init_params(const ModelConfig& config, uint64_t seed);

/// Double-precision copy for gradient checking.
ModelParamsT<double> widen(const ModelParams& params);

/// Graph node ids for one twin-input forward pass.
template <typename S>
struct PairNodes {
  int pref_logits;  // [2], attention-pooled, pre-softmax
  int p;            // [2], softmax probabilities
  int r;            // [1], 4 * sigmoid, in (0, 4)
  int pref_pool;    // attention_pool nodes (weights retrievable)
  int rel_pool;
};

/// Validates the waveform length against the config and returns a [1, N]
/// input node.
template <typename S>
int wave_input(nn::GraphT<S>& g, const ModelConfig& config,
               std::span<const S> wave);

/// Strided conv + ReLU stack -> frame features [T, D_enc].
template <typename S>
int build_encoder(nn::GraphT<S>& g, const ModelParamsT<S>& params, int wave,
                  bool trainable);

/// Encoder followed by the shared downsampling layer -> [T, embed_dim].
template <typename S>
int build_frames(nn::GraphT<S>& g, const ModelParamsT<S>& params, int wave,
                 bool trainable);

/// Per-frame concatenation of the two (shared-weight) frame embeddings and
/// the two attention-pooled heads.
template <typename S>
PairNodes<S> build_pair(nn::GraphT<S>& g, const ModelParamsT<S>& params,
                        int frames_i, int frames_j, bool trainable);

/// Recording-level pair prediction.
struct PairOutput {
  std::array<float, 2> p;         // preference probabilities, sum to 1
  float r = 0.0f;                 // relative MOS rating in (0, 4)
  std::vector<float> attn_pref;   // per-frame attention weights, sum to 1
  std::vector<float> attn_rel;
};

/// Frame embeddings [T, embed_dim] for one excerpt (forward only).
nn::Tensor encode_frames(const ModelParams& params, std::span<const float> wave);

/// Head evaluation on precomputed frame embeddings. Composing
/// encode_frames + heads_forward is exactly pair_forward.
PairOutput heads_forward(const ModelParams& params, const nn::Tensor& frames_i,
                         const nn::Tensor& frames_j);

PairOutput pair_forward(const ModelParams& params, std::span<const float> x_i,
                        std::span<const float> x_j);

/// Quality embedding: encoder output mean-pooled over frames,
/// length = last conv channel count.
std::vector<float> embed(const ModelParams& params, std::span<const float> wave);

}  // namespace nmrmos::model
