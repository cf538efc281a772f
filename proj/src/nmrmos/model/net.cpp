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

#include "nmrmos/model/net.hpp"

#include <cmath>

#include "nmrmos/common/rng.hpp"

namespace nmrmos::model {

template <typename S>
std::vector<std::pair<std::string, nn::TensorT<S>*>> ModelParamsT<S>::named() {
  const auto shapes = parameter_shapes(config);
  require(shapes.size() == tensors.size(), "model params out of sync with config");
  std::vector<std::pair<std::string, nn::TensorT<S>*>> out;
  out.reserve(tensors.size());
  for (size_t i = 0; i < tensors.size(); ++i) {
    out.emplace_back(shapes[i].first, &tensors[i]);
  }
  return out;
}

template <typename S>
std::vector<std::pair<std::string, const nn::TensorT<S>*>> ModelParamsT<S>::named()
    const {
  const auto shapes = parameter_shapes(config);
  require(shapes.size() == tensors.size(), "model params out of sync with config");
  std::vector<std::pair<std::string, const nn::TensorT<S>*>> out;
  out.reserve(tensors.size());
  for (size_t i = 0; i < tensors.size(); ++i) {
    out.emplace_back(shapes[i].first, &tensors[i]);
  }
  return out;
}

template <typename S>
int64_t ModelParamsT<S>::parameter_count() const {
  int64_t total = 0;
  for (const auto& t : tensors) total += t.numel();
  return total;
}

template struct ModelParamsT<float>;
template struct ModelParamsT<double>;

ModelParams init_params(const ModelConfig& config, uint64_t seed) {
  config.validate();
  ModelParams params;
  params.config = config;

  Rng rng(seed);
  for (const auto& [name, shape] : parameter_shapes(config)) {
    nn::Tensor t = nn::Tensor::zeros(shape);
    const bool is_weight = name.ends_with(".w");
    if (is_weight) {
      // fan_in: everything but the leading (output) axis; for the 1-D
      // attention scorer the whole vector is the input.
      int64_t fan_in = 1;
      if (t.ndim() >= 2) {
        for (int d = 1; d < t.ndim(); ++d) fan_in *= t.dim(d);
      } else {
        fan_in = t.dim(0);
      }
      const double limit = std::sqrt(1.0 / static_cast<double>(fan_in));
      for (auto& v : t.v) {
        v = static_cast<float>(rng.uniform(-limit, limit));
      }
    }
    params.tensors.push_back(std::move(t));
  }
  return params;
}

ModelParamsT<double> widen(const ModelParams& params) {
  ModelParamsT<double> out;
  out.config = params.config;
  out.tensors.reserve(params.tensors.size());
  for (const auto& t : params.tensors) {
    out.tensors.push_back(nn::cast_tensor<float, double>(t));
  }
  return out;
}

namespace {

/// Registers a parameter tensor either as a differentiable leaf (training)
/// or as a read-only external view (inference).
template <typename S>
int bind(nn::GraphT<S>& g, const nn::TensorT<S>& t, bool trainable) {
  return trainable ? g.param(const_cast<nn::TensorT<S>*>(&t))
                   : g.external_input(&t);
}

}  // namespace

template <typename S>
int wave_input(nn::GraphT<S>& g, const ModelConfig& config,
               std::span<const S> wave) {
  require(static_cast<int64_t>(wave.size()) == config.input_samples,
          "model: wrong input length ", wave.size(), ", expected ",
          config.input_samples);
  nn::TensorT<S> t;
  t.shape = {1, config.input_samples};
  t.v.assign(wave.begin(), wave.end());
  return g.input(std::move(t));
}

template <typename S>
int build_encoder(nn::GraphT<S>& g, const ModelParamsT<S>& params, int wave,
                  bool trainable) {
  int x = wave;
  for (size_t layer = 0; layer < params.config.conv_channels.size(); ++layer) {
    const int w = bind(g, params.conv_w(layer), trainable);
    const int b = bind(g, params.conv_b(layer), trainable);
    x = g.relu(g.conv1d(x, w, b, params.config.conv_strides[layer]));
  }
  return g.transpose2d(x);  // [T, D_enc]
}

template <typename S>
int build_frames(nn::GraphT<S>& g, const ModelParamsT<S>& params, int wave,
                 bool trainable) {
  const int features = build_encoder(g, params, wave, trainable);
  const int w = bind(g, params.ds_w(), trainable);
  const int b = bind(g, params.ds_b(), trainable);
  return g.linear(features, w, b);  // [T, embed_dim]
}

namespace {

template <typename S>
int build_head(nn::GraphT<S>& g, const ModelParamsT<S>& params, int head,
               int pair_frames, bool trainable, int* pool_node) {
  const int fc1_w = bind(g, params.head(head, 0), trainable);
  const int fc1_b = bind(g, params.head(head, 1), trainable);
  const int fc2_w = bind(g, params.head(head, 2), trainable);
  const int fc2_b = bind(g, params.head(head, 3), trainable);
  const int attn_w = bind(g, params.head(head, 4), trainable);
  const int attn_b = bind(g, params.head(head, 5), trainable);

  const int hidden = g.relu(g.linear(pair_frames, fc1_w, fc1_b));
  const int frame_out = g.linear(hidden, fc2_w, fc2_b);  // [T, out]
  const int pooled = g.attention_pool(frame_out, attn_w, attn_b);
  *pool_node = pooled;
  return pooled;
}

}  // namespace

template <typename S>
PairNodes<S> build_pair(nn::GraphT<S>& g, const ModelParamsT<S>& params,
                        int frames_i, int frames_j, bool trainable) {
  const auto& fi = g.value(frames_i);
  const auto& fj = g.value(frames_j);
  require(fi.shape == fj.shape, "pair: frame shape mismatch between ",
          nn::shape_str(fi), " and ", nn::shape_str(fj));
  require(fi.ndim() == 2 && fi.dim(1) == params.config.embed_dim,
          "pair: frames must be [T, ", params.config.embed_dim, "], got ",
          nn::shape_str(fi));

  const int pair_frames = g.concat(frames_i, frames_j, /*axis=*/1);

  PairNodes<S> nodes{};
  nodes.pref_logits =
      build_head(g, params, /*head=*/0, pair_frames, trainable, &nodes.pref_pool);
  nodes.p = g.softmax(nodes.pref_logits);
  const int rel_raw =
      build_head(g, params, /*head=*/1, pair_frames, trainable, &nodes.rel_pool);
  nodes.r = g.scale(g.sigmoid(rel_raw), 4.0);
  return nodes;
}

template int wave_input<float>(nn::GraphT<float>&, const ModelConfig&,
                               std::span<const float>);
template int wave_input<double>(nn::GraphT<double>&, const ModelConfig&,
                                std::span<const double>);
template int build_encoder<float>(nn::GraphT<float>&, const ModelParamsT<float>&,
                                  int, bool);
template int build_encoder<double>(nn::GraphT<double>&,
                                   const ModelParamsT<double>&, int, bool);
template int build_frames<float>(nn::GraphT<float>&, const ModelParamsT<float>&,
                                 int, bool);
template int build_frames<double>(nn::GraphT<double>&,
                                  const ModelParamsT<double>&, int, bool);
template PairNodes<float> build_pair<float>(nn::GraphT<float>&,
                                            const ModelParamsT<float>&, int, int,
                                            bool);
template PairNodes<double> build_pair<double>(nn::GraphT<double>&,
                                              const ModelParamsT<double>&, int,
                                              int, bool);

nn::Tensor encode_frames(const ModelParams& params, std::span<const float> wave) {
  nn::Graph g(/*grad_enabled=*/false);
  const int frames = build_frames(
      g, params, wave_input(g, params.config, wave), /*trainable=*/false);
  return g.value(frames);
}

PairOutput heads_forward(const ModelParams& params, const nn::Tensor& frames_i,
                         const nn::Tensor& frames_j) {
  nn::Graph g(/*grad_enabled=*/false);
  const int fi = g.external_input(&frames_i);
  const int fj = g.external_input(&frames_j);
  const auto nodes = build_pair(g, params, fi, fj, /*trainable=*/false);

  PairOutput out;
  const auto& p = g.value(nodes.p);
  out.p = {p.v[0], p.v[1]};
  out.r = g.value(nodes.r).v[0];
  out.attn_pref = g.attention_weights(nodes.pref_pool);
  out.attn_rel = g.attention_weights(nodes.rel_pool);
  return out;
}

PairOutput pair_forward(const ModelParams& params, std::span<const float> x_i,
                        std::span<const float> x_j) {
  require(x_i.size() == x_j.size(), "pair_forward: input length mismatch (",
          x_i.size(), " vs ", x_j.size(), ")");
  const nn::Tensor frames_i = encode_frames(params, x_i);
  const nn::Tensor frames_j = encode_frames(params, x_j);
  return heads_forward(params, frames_i, frames_j);
}

std::vector<float> embed(const ModelParams& params, std::span<const float> wave) {
  nn::Graph g(/*grad_enabled=*/false);
  const int features = build_encoder(
      g, params, wave_input(g, params.config, wave), /*trainable=*/false);
  const auto& f = g.value(features);  // [T, D_enc]
  const int64_t t_len = f.dim(0);
  const int64_t d = f.dim(1);
  std::vector<float> out(static_cast<size_t>(d), 0.0f);
  for (int64_t col = 0; col < d; ++col) {
    double acc = 0.0;
    for (int64_t t = 0; t < t_len; ++t) {
      acc += f.v[static_cast<size_t>(t * d + col)];
    }
    out[static_cast<size_t>(col)] =
        static_cast<float>(acc / static_cast<double>(t_len));
  }
  return out;
}

}  // namespace nmrmos::model
