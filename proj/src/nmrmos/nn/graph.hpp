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

#include <functional>
#include <unordered_map>
#include <vector>

#include "nmrmos/nn/tensor.hpp"

namespace nmrmos::nn {

/// Define-by-run reverse-mode differentiation graph. Each op records its
/// inputs as it computes the forward value; backward() runs the recorded
/// adjoints in reverse creation order. A graph is built, differentiated once
/// and discarded; it is single-threaded, but independent graphs may run
/// concurrently.
///
/// Values are Scalar (float in production); reductions that feed the loss
/// accumulate in double.
template <typename Scalar>
class GraphT {
 public:
  /// grad_enabled=false builds a forward-only graph: no gradient buffers,
  /// no adjoint closures (used for inference and finite differences).
  explicit GraphT(bool grad_enabled = true);

  // ---- leaves ----

  /// Constant leaf; the tensor is moved into the graph.
  int input(TensorT<Scalar> t);

  /// Leaf viewing external storage, no gradient (read-only).
  int external_input(const TensorT<Scalar>* t);

  /// Differentiable leaf viewing external parameter storage. Calling again
  /// with the same pointer returns the same node, which is how weight
  /// sharing works: every use contributes to one accumulated gradient.
  int param(TensorT<Scalar>* t);

  /// Node id of a previously registered parameter (for gradient readback).
  int param_id(const TensorT<Scalar>* t) const;

  // ---- ops ----

  /// x [C_in, T] * w [C_out, C_in, K] + b [C_out] -> [C_out, T_out],
  /// T_out = (T - K) / stride + 1.
  int conv1d(int x, int w, int b, int stride);

  /// x [.., in] * w [out, in]^T + b [out] -> [.., out]; x may be 1-D or 2-D.
  int linear(int x, int w, int b);

  int relu(int x);
  int sigmoid(int x);

  /// Softmax over the last axis (1-D or 2-D input).
  int softmax(int x);

  /// Concatenation of 1-D or 2-D tensors along axis 0 or 1.
  int concat(int a, int b, int axis);

  /// [r x c] -> [c x r].
  int transpose2d(int x);

  int sum(int x);
  int mean(int x);

  /// Elementwise a + b (same shape).
  int add(int a, int b);

  /// c * x.
  int scale(int x, double c);

  /// Mean absolute difference, scalar.
  int l1_loss(int a, int b);

  /// Cross-entropy between softmax(logits) and a target distribution,
  /// computed from logits in log-sum-exp form. Scalar.
  int cross_entropy(int logits, int target);

  /// Attention pooling over frames [T x F] with a single linear scorer:
  /// a = softmax_t(w . h_t + b), pooled_f = sum_t a_t h_t[f].
  /// w is [F], b is [1]. The weights a are retained on the node.
  int attention_pool(int frames, int w, int b);

  /// Elementwise custom op from explicit value/derivative functions.
  /// Extension and test hook (e.g. deliberately wrong adjoints).
  int unary_map(int x, std::function<Scalar(Scalar)> f,
                std::function<Scalar(Scalar)> dfdx);

  // ---- execution ----

  /// Reverse accumulation from a scalar loss. Calling twice without
  /// reset_grads() is an error.
  void backward(int loss);

  /// Zeroes all gradient buffers and re-arms backward().
  void reset_grads();

  const TensorT<Scalar>& value(int id) const;
  const TensorT<Scalar>& grad(int id) const;

  /// Attention weights of an attention_pool node (length T).
  const std::vector<Scalar>& attention_weights(int pool_id) const;

  /// Smallest |preactivation| seen by any relu in this graph; large margins
  /// keep finite-difference probes away from the kink.
  double relu_margin() const { return relu_margin_; }

  size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    TensorT<Scalar> stored;
    const TensorT<Scalar>* external = nullptr;
    TensorT<Scalar> grad;
    bool requires_grad = false;
    std::vector<int> parents;
    std::function<void()> backward_fn;
    std::vector<Scalar> aux;  // op-specific (attention weights)
  };

  const TensorT<Scalar>& val(int id) const {
    const Node& n = nodes_[static_cast<size_t>(id)];
    return n.external ? *n.external : n.stored;
  }

  int make_node(TensorT<Scalar> value, std::vector<int> parents);
  bool any_requires_grad(const std::vector<int>& ids) const;
  void check_id(int id) const;

  std::vector<Node> nodes_;
  std::unordered_map<const TensorT<Scalar>*, int> param_nodes_;
  bool grad_enabled_;
  bool backward_done_ = false;
  double relu_margin_ = 1e300;
};

using Graph = GraphT<float>;

}  // namespace nmrmos::nn
