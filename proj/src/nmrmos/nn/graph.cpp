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

#include "nmrmos/nn/graph.hpp"

#include <cmath>
#include <cstring>

#include "nmrmos/nn/gemm.hpp"

namespace nmrmos::nn {

template <typename S>
GraphT<S>::GraphT(bool grad_enabled) : grad_enabled_(grad_enabled) {}

template <typename S>
void GraphT<S>::check_id(int id) const {
  require(id >= 0 && static_cast<size_t>(id) < nodes_.size(),
          "graph: bad node id ", id);
}

template <typename S>
bool GraphT<S>::any_requires_grad(const std::vector<int>& ids) const {
  for (const int id : ids) {
    if (nodes_[static_cast<size_t>(id)].requires_grad) return true;
  }
  return false;
}

template <typename S>
int GraphT<S>::make_node(TensorT<S> value, std::vector<int> parents) {
  Node node;
  node.stored = std::move(value);
  node.parents = std::move(parents);
  node.requires_grad = grad_enabled_ && any_requires_grad(node.parents);
  if (node.requires_grad) {
    node.grad = TensorT<S>::zeros(node.stored.shape);
  }
  nodes_.push_back(std::move(node));
  return static_cast<int>(nodes_.size()) - 1;
}

template <typename S>
int GraphT<S>::input(TensorT<S> t) {
  require(t.numel() > 0, "graph: empty input tensor");
  Node node;
  node.stored = std::move(t);
  nodes_.push_back(std::move(node));
  return static_cast<int>(nodes_.size()) - 1;
}

template <typename S>
int GraphT<S>::external_input(const TensorT<S>* t) {
  require(t != nullptr && t->numel() > 0, "graph: empty external input");
  Node node;
  node.external = t;
  nodes_.push_back(std::move(node));
  return static_cast<int>(nodes_.size()) - 1;
}

template <typename S>
int GraphT<S>::param(TensorT<S>* t) {
  require(t != nullptr && t->numel() > 0, "graph: empty parameter");
  const auto it = param_nodes_.find(t);
  if (it != param_nodes_.end()) return it->second;
  Node node;
  node.external = t;
  node.requires_grad = grad_enabled_;
  if (node.requires_grad) node.grad = TensorT<S>::zeros(t->shape);
  nodes_.push_back(std::move(node));
  const int id = static_cast<int>(nodes_.size()) - 1;
  param_nodes_.emplace(t, id);
  return id;
}

template <typename S>
int GraphT<S>::param_id(const TensorT<S>* t) const {
  const auto it = param_nodes_.find(const_cast<TensorT<S>*>(t));
  require(it != param_nodes_.end(), "graph: tensor is not a registered parameter");
  return it->second;
}

template <typename S>
const TensorT<S>& GraphT<S>::value(int id) const {
  check_id(id);
  return val(id);
}

template <typename S>
const TensorT<S>& GraphT<S>::grad(int id) const {
  check_id(id);
  const Node& n = nodes_[static_cast<size_t>(id)];
  require(n.requires_grad, "graph: node ", id, " has no gradient");
  return n.grad;
}

template <typename S>
const std::vector<S>& GraphT<S>::attention_weights(int pool_id) const {
  check_id(pool_id);
  const Node& n = nodes_[static_cast<size_t>(pool_id)];
  require(!n.aux.empty(), "graph: node ", pool_id, " is not an attention pool");
  return n.aux;
}

// ---------------------------------------------------------------------------
// ops
// ---------------------------------------------------------------------------

template <typename S>
int GraphT<S>::conv1d(int x, int w, int b, int stride) {
  check_id(x);
  check_id(w);
  check_id(b);
  const TensorT<S>& xv = val(x);
  const TensorT<S>& wv = val(w);
  const TensorT<S>& bv = val(b);
  require(stride >= 1, "conv1d: stride must be >= 1, got ", stride);
  require(xv.ndim() == 2, "conv1d: input must be [C_in, T], got ", shape_str(xv));
  require(wv.ndim() == 3, "conv1d: weight must be [C_out, C_in, K], got ",
          shape_str(wv));
  const int64_t c_in = xv.dim(0);
  const int64_t t_in = xv.dim(1);
  const int64_t c_out = wv.dim(0);
  const int64_t k = wv.dim(2);
  require(wv.dim(1) == c_in, "conv1d: shape mismatch between input ",
          shape_str(xv), " and weight ", shape_str(wv));
  require(bv.ndim() == 1 && bv.dim(0) == c_out,
          "conv1d: bias must be [C_out]=[", c_out, "], got ", shape_str(bv));
  require(t_in >= k, "conv1d: empty output (input length ", t_in,
          " shorter than kernel ", k, ")");

  const int64_t t_out = (t_in - k) / stride + 1;
  const int64_t ck = c_in * k;

  // im2col: xcol[(ci*K + kk), t] = x[ci, t*stride + kk]
  std::vector<S> xcol(static_cast<size_t>(ck * t_out));
  for (int64_t ci = 0; ci < c_in; ++ci) {
    const S* xrow = xv.data() + ci * t_in;
    for (int64_t kk = 0; kk < k; ++kk) {
      S* col = xcol.data() + (ci * k + kk) * t_out;
      const S* src = xrow + kk;
      for (int64_t t = 0; t < t_out; ++t) col[t] = src[t * stride];
    }
  }

  TensorT<S> out = TensorT<S>::zeros(
      {static_cast<int>(c_out), static_cast<int>(t_out)});
  for (int64_t co = 0; co < c_out; ++co) {
    S* row = out.data() + co * t_out;
    const S bias = bv.v[static_cast<size_t>(co)];
    for (int64_t t = 0; t < t_out; ++t) row[t] = bias;
  }
  gemm_acc<S>(c_out, t_out, ck, wv.data(), xcol.data(), out.data());

  const int id = make_node(std::move(out), {x, w, b});
  Node& node = nodes_[static_cast<size_t>(id)];
  if (node.requires_grad) {
    node.aux = std::move(xcol);  // kept for the adjoint
    node.backward_fn = [this, id, x, w, b, stride, c_in, t_in, c_out, k, t_out,
                        ck] {
      const Node& self = nodes_[static_cast<size_t>(id)];
      const S* dy = self.grad.data();

      if (nodes_[static_cast<size_t>(b)].requires_grad) {
        S* db = nodes_[static_cast<size_t>(b)].grad.data();
        for (int64_t co = 0; co < c_out; ++co) {
          double acc = 0.0;
          const S* row = dy + co * t_out;
          for (int64_t t = 0; t < t_out; ++t) acc += row[t];
          db[co] += static_cast<S>(acc);
        }
      }
      if (nodes_[static_cast<size_t>(w)].requires_grad) {
        std::vector<S> xcol_t(static_cast<size_t>(t_out * ck));
        transpose<S>(ck, t_out, self.aux.data(), xcol_t.data());
        gemm_acc<S>(c_out, ck, t_out, dy, xcol_t.data(),
                    nodes_[static_cast<size_t>(w)].grad.data());
      }
      if (nodes_[static_cast<size_t>(x)].requires_grad) {
        const TensorT<S>& wv2 = val(w);
        std::vector<S> w_t(static_cast<size_t>(ck * c_out));
        transpose<S>(c_out, ck, wv2.data(), w_t.data());
        std::vector<S> dxcol(static_cast<size_t>(ck * t_out), S(0));
        gemm_acc<S>(ck, t_out, c_out, w_t.data(), dy, dxcol.data());
        S* dx = nodes_[static_cast<size_t>(x)].grad.data();
        for (int64_t ci = 0; ci < c_in; ++ci) {
          for (int64_t kk = 0; kk < k; ++kk) {
            const S* col = dxcol.data() + (ci * k + kk) * t_out;
            S* dst = dx + ci * t_in + kk;
            for (int64_t t = 0; t < t_out; ++t) dst[t * stride] += col[t];
          }
        }
      }
    };
  }
  return id;
}

template <typename S>
int GraphT<S>::linear(int x, int w, int b) {
  check_id(x);
  check_id(w);
  check_id(b);
  const TensorT<S>& xv = val(x);
  const TensorT<S>& wv = val(w);
  const TensorT<S>& bv = val(b);
  require(wv.ndim() == 2, "linear: weight must be [out, in], got ", shape_str(wv));
  require(xv.ndim() == 1 || xv.ndim() == 2, "linear: input must be 1-D or 2-D, got ",
          shape_str(xv));
  const int64_t in = wv.dim(1);
  const int64_t out_dim = wv.dim(0);
  const int64_t rows = xv.ndim() == 2 ? xv.dim(0) : 1;
  const int64_t x_last = xv.ndim() == 2 ? xv.dim(1) : xv.dim(0);
  require(x_last == in, "linear: shape mismatch between input ", shape_str(xv),
          " and weight ", shape_str(wv));
  require(bv.ndim() == 1 && bv.dim(0) == out_dim, "linear: bias must be [",
          out_dim, "], got ", shape_str(bv));

  TensorT<S> out =
      xv.ndim() == 2
          ? TensorT<S>::zeros({static_cast<int>(rows), static_cast<int>(out_dim)})
          : TensorT<S>::zeros({static_cast<int>(out_dim)});
  for (int64_t r = 0; r < rows; ++r) {
    S* dst = out.data() + r * out_dim;
    std::memcpy(dst, bv.data(), sizeof(S) * static_cast<size_t>(out_dim));
  }
  std::vector<S> w_t(static_cast<size_t>(in * out_dim));
  transpose<S>(out_dim, in, wv.data(), w_t.data());
  gemm_acc<S>(rows, out_dim, in, xv.data(), w_t.data(), out.data());

  const int id = make_node(std::move(out), {x, w, b});
  Node& node = nodes_[static_cast<size_t>(id)];
  if (node.requires_grad) {
    node.backward_fn = [this, id, x, w, b, rows, in, out_dim] {
      const Node& self = nodes_[static_cast<size_t>(id)];
      const S* dy = self.grad.data();

      if (nodes_[static_cast<size_t>(b)].requires_grad) {
        S* db = nodes_[static_cast<size_t>(b)].grad.data();
        for (int64_t o = 0; o < out_dim; ++o) {
          double acc = 0.0;
          for (int64_t r = 0; r < rows; ++r) acc += dy[r * out_dim + o];
          db[o] += static_cast<S>(acc);
        }
      }
      if (nodes_[static_cast<size_t>(w)].requires_grad) {
        std::vector<S> dy_t(static_cast<size_t>(out_dim * rows));
        transpose<S>(rows, out_dim, dy, dy_t.data());
        gemm_acc<S>(out_dim, in, rows, dy_t.data(), val(x).data(),
                    nodes_[static_cast<size_t>(w)].grad.data());
      }
      if (nodes_[static_cast<size_t>(x)].requires_grad) {
        gemm_acc<S>(rows, in, out_dim, dy, val(w).data(),
                    nodes_[static_cast<size_t>(x)].grad.data());
      }
    };
  }
  return id;
}

template <typename S>
int GraphT<S>::relu(int x) {
  check_id(x);
  const TensorT<S>& xv = val(x);
  TensorT<S> out;
  out.shape = xv.shape;
  out.v.resize(xv.v.size());
  for (size_t i = 0; i < xv.v.size(); ++i) {
    const double a = std::abs(static_cast<double>(xv.v[i]));
    if (a < relu_margin_) relu_margin_ = a;
    out.v[i] = xv.v[i] > S(0) ? xv.v[i] : S(0);
  }

  const int id = make_node(std::move(out), {x});
  Node& node = nodes_[static_cast<size_t>(id)];
  if (node.requires_grad) {
    node.backward_fn = [this, id, x] {
      const Node& self = nodes_[static_cast<size_t>(id)];
      const TensorT<S>& xv2 = val(x);
      S* dx = nodes_[static_cast<size_t>(x)].grad.data();
      const S* dy = self.grad.data();
      for (size_t i = 0; i < xv2.v.size(); ++i) {
        if (xv2.v[i] > S(0)) dx[i] += dy[i];
      }
    };
  }
  return id;
}

template <typename S>
int GraphT<S>::sigmoid(int x) {
  check_id(x);
  const TensorT<S>& xv = val(x);
  TensorT<S> out;
  out.shape = xv.shape;
  out.v.resize(xv.v.size());
  for (size_t i = 0; i < xv.v.size(); ++i) {
    const double z = static_cast<double>(xv.v[i]);
    const double y = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                              : std::exp(z) / (1.0 + std::exp(z));
    out.v[i] = static_cast<S>(y);
  }

  const int id = make_node(std::move(out), {x});
  Node& node = nodes_[static_cast<size_t>(id)];
  if (node.requires_grad) {
    node.backward_fn = [this, id, x] {
      const Node& self = nodes_[static_cast<size_t>(id)];
      S* dx = nodes_[static_cast<size_t>(x)].grad.data();
      const S* dy = self.grad.data();
      const S* y = self.stored.data();
      for (size_t i = 0; i < self.stored.v.size(); ++i) {
        dx[i] += dy[i] * y[i] * (S(1) - y[i]);
      }
    };
  }
  return id;
}

template <typename S>
int GraphT<S>::softmax(int x) {
  check_id(x);
  const TensorT<S>& xv = val(x);
  require(xv.ndim() == 1 || xv.ndim() == 2,
          "softmax: input must be 1-D or 2-D, got ", shape_str(xv));
  const int64_t rows = xv.ndim() == 2 ? xv.dim(0) : 1;
  const int64_t cols = xv.ndim() == 2 ? xv.dim(1) : xv.dim(0);

  TensorT<S> out;
  out.shape = xv.shape;
  out.v.resize(xv.v.size());
  for (int64_t r = 0; r < rows; ++r) {
    const S* src = xv.data() + r * cols;
    S* dst = out.data() + r * cols;
    S mx = src[0];
    for (int64_t c = 1; c < cols; ++c) mx = std::max(mx, src[c]);
    double norm = 0.0;
    for (int64_t c = 0; c < cols; ++c) {
      const double e = std::exp(static_cast<double>(src[c] - mx));
      dst[c] = static_cast<S>(e);
      norm += e;
    }
    const double inv = 1.0 / norm;
    for (int64_t c = 0; c < cols; ++c) {
      dst[c] = static_cast<S>(static_cast<double>(dst[c]) * inv);
    }
  }

  const int id = make_node(std::move(out), {x});
  Node& node = nodes_[static_cast<size_t>(id)];
  if (node.requires_grad) {
    node.backward_fn = [this, id, x, rows, cols] {
      const Node& self = nodes_[static_cast<size_t>(id)];
      S* dx = nodes_[static_cast<size_t>(x)].grad.data();
      for (int64_t r = 0; r < rows; ++r) {
        const S* y = self.stored.data() + r * cols;
        const S* dy = self.grad.data() + r * cols;
        double dot = 0.0;
        for (int64_t c = 0; c < cols; ++c) {
          dot += static_cast<double>(y[c]) * dy[c];
        }
        for (int64_t c = 0; c < cols; ++c) {
          dx[r * cols + c] +=
              static_cast<S>(y[c] * (static_cast<double>(dy[c]) - dot));
        }
      }
    };
  }
  return id;
}

template <typename S>
int GraphT<S>::concat(int a, int b, int axis) {
  check_id(a);
  check_id(b);
  const TensorT<S>& av = val(a);
  const TensorT<S>& bv = val(b);
  require(av.ndim() == bv.ndim(), "concat: rank mismatch between ",
          shape_str(av), " and ", shape_str(bv));
  require(axis >= 0 && axis < av.ndim(), "concat: bad axis ", axis, " for ",
          shape_str(av));
  for (int d = 0; d < av.ndim(); ++d) {
    if (d != axis) {
      require(av.dim(d) == bv.dim(d), "concat: shape mismatch between ",
              shape_str(av), " and ", shape_str(bv), " on axis ", d);
    }
  }

  std::vector<int> out_shape = av.shape;
  out_shape[static_cast<size_t>(axis)] += bv.dim(axis);
  TensorT<S> out = TensorT<S>::zeros(out_shape);

  // Treat as [outer, inner]: rows stacked (axis at 0) or interleaved (axis 1).
  const bool stack = axis == 0 || av.ndim() == 1;
  if (stack) {
    std::memcpy(out.data(), av.data(), sizeof(S) * av.v.size());
    std::memcpy(out.data() + av.numel(), bv.data(), sizeof(S) * bv.v.size());
  } else {
    const int64_t rows = av.dim(0);
    const int64_t ac = av.dim(1);
    const int64_t bc = bv.dim(1);
    for (int64_t r = 0; r < rows; ++r) {
      std::memcpy(out.data() + r * (ac + bc), av.data() + r * ac,
                  sizeof(S) * static_cast<size_t>(ac));
      std::memcpy(out.data() + r * (ac + bc) + ac, bv.data() + r * bc,
                  sizeof(S) * static_cast<size_t>(bc));
    }
  }

  const int id = make_node(std::move(out), {a, b});
  Node& node = nodes_[static_cast<size_t>(id)];
  if (node.requires_grad) {
    const int64_t a_numel = av.numel();
    node.backward_fn = [this, id, a, b, stack, a_numel] {
      const Node& self = nodes_[static_cast<size_t>(id)];
      const S* dy = self.grad.data();
      Node& na = nodes_[static_cast<size_t>(a)];
      Node& nb = nodes_[static_cast<size_t>(b)];
      if (stack) {
        if (na.requires_grad) {
          S* da = na.grad.data();
          for (int64_t i = 0; i < a_numel; ++i) da[i] += dy[i];
        }
        if (nb.requires_grad) {
          S* db = nb.grad.data();
          const int64_t bn = val(b).numel();
          for (int64_t i = 0; i < bn; ++i) db[i] += dy[a_numel + i];
        }
      } else {
        const int64_t rows = val(a).dim(0);
        const int64_t ac = val(a).dim(1);
        const int64_t bc = val(b).dim(1);
        for (int64_t r = 0; r < rows; ++r) {
          const S* row = dy + r * (ac + bc);
          if (na.requires_grad) {
            S* da = na.grad.data() + r * ac;
            for (int64_t c = 0; c < ac; ++c) da[c] += row[c];
          }
          if (nb.requires_grad) {
            S* db = nb.grad.data() + r * bc;
            for (int64_t c = 0; c < bc; ++c) db[c] += row[ac + c];
          }
        }
      }
    };
  }
  return id;
}

template <typename S>
int GraphT<S>::transpose2d(int x) {
  check_id(x);
  const TensorT<S>& xv = val(x);
  require(xv.ndim() == 2, "transpose2d: input must be 2-D, got ", shape_str(xv));
  const int64_t rows = xv.dim(0);
  const int64_t cols = xv.dim(1);
  TensorT<S> out =
      TensorT<S>::zeros({static_cast<int>(cols), static_cast<int>(rows)});
  transpose<S>(rows, cols, xv.data(), out.data());

  const int id = make_node(std::move(out), {x});
  Node& node = nodes_[static_cast<size_t>(id)];
  if (node.requires_grad) {
    node.backward_fn = [this, id, x, rows, cols] {
      const Node& self = nodes_[static_cast<size_t>(id)];
      std::vector<S> tmp(static_cast<size_t>(rows * cols));
      transpose<S>(cols, rows, self.grad.data(), tmp.data());
      S* dx = nodes_[static_cast<size_t>(x)].grad.data();
      for (int64_t i = 0; i < rows * cols; ++i) dx[i] += tmp[i];
    };
  }
  return id;
}

template <typename S>
int GraphT<S>::sum(int x) {
  check_id(x);
  const TensorT<S>& xv = val(x);
  double acc = 0.0;
  for (const S v : xv.v) acc += static_cast<double>(v);
  const int id = make_node(TensorT<S>::scalar(static_cast<S>(acc)), {x});
  Node& node = nodes_[static_cast<size_t>(id)];
  if (node.requires_grad) {
    node.backward_fn = [this, id, x] {
      const S g = nodes_[static_cast<size_t>(id)].grad.v[0];
      Node& nx = nodes_[static_cast<size_t>(x)];
      for (auto& d : nx.grad.v) d += g;
    };
  }
  return id;
}

template <typename S>
int GraphT<S>::mean(int x) {
  check_id(x);
  const TensorT<S>& xv = val(x);
  const int64_t n = xv.numel();
  double acc = 0.0;
  for (const S v : xv.v) acc += static_cast<double>(v);
  const int id =
      make_node(TensorT<S>::scalar(static_cast<S>(acc / static_cast<double>(n))), {x});
  Node& node = nodes_[static_cast<size_t>(id)];
  if (node.requires_grad) {
    node.backward_fn = [this, id, x, n] {
      const S g = static_cast<S>(
          static_cast<double>(nodes_[static_cast<size_t>(id)].grad.v[0]) / n);
      Node& nx = nodes_[static_cast<size_t>(x)];
      for (auto& d : nx.grad.v) d += g;
    };
  }
  return id;
}

template <typename S>
int GraphT<S>::add(int a, int b) {
  check_id(a);
  check_id(b);
  const TensorT<S>& av = val(a);
  const TensorT<S>& bv = val(b);
  require(av.shape == bv.shape, "add: shape mismatch between ", shape_str(av),
          " and ", shape_str(bv));
  TensorT<S> out;
  out.shape = av.shape;
  out.v.resize(av.v.size());
  for (size_t i = 0; i < av.v.size(); ++i) out.v[i] = av.v[i] + bv.v[i];

  const int id = make_node(std::move(out), {a, b});
  Node& node = nodes_[static_cast<size_t>(id)];
  if (node.requires_grad) {
    node.backward_fn = [this, id, a, b] {
      const Node& self = nodes_[static_cast<size_t>(id)];
      for (const int p : {a, b}) {
        Node& np = nodes_[static_cast<size_t>(p)];
        if (!np.requires_grad) continue;
        for (size_t i = 0; i < self.grad.v.size(); ++i) {
          np.grad.v[i] += self.grad.v[i];
        }
      }
    };
  }
  return id;
}

template <typename S>
int GraphT<S>::scale(int x, double c) {
  check_id(x);
  const TensorT<S>& xv = val(x);
  const S cs = static_cast<S>(c);
  TensorT<S> out;
  out.shape = xv.shape;
  out.v.resize(xv.v.size());
  for (size_t i = 0; i < xv.v.size(); ++i) out.v[i] = cs * xv.v[i];

  const int id = make_node(std::move(out), {x});
  Node& node = nodes_[static_cast<size_t>(id)];
  if (node.requires_grad) {
    node.backward_fn = [this, id, x, cs] {
      const Node& self = nodes_[static_cast<size_t>(id)];
      Node& nx = nodes_[static_cast<size_t>(x)];
      for (size_t i = 0; i < self.grad.v.size(); ++i) {
        nx.grad.v[i] += cs * self.grad.v[i];
      }
    };
  }
  return id;
}

template <typename S>
int GraphT<S>::l1_loss(int a, int b) {
  check_id(a);
  check_id(b);
  const TensorT<S>& av = val(a);
  const TensorT<S>& bv = val(b);
  require(av.shape == bv.shape, "l1_loss: shape mismatch between ",
          shape_str(av), " and ", shape_str(bv));
  const int64_t n = av.numel();
  double acc = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    acc += std::abs(static_cast<double>(av.v[i]) - static_cast<double>(bv.v[i]));
  }
  const int id =
      make_node(TensorT<S>::scalar(static_cast<S>(acc / static_cast<double>(n))),
                {a, b});
  Node& node = nodes_[static_cast<size_t>(id)];
  if (node.requires_grad) {
    node.backward_fn = [this, id, a, b, n] {
      const S g = static_cast<S>(
          static_cast<double>(nodes_[static_cast<size_t>(id)].grad.v[0]) / n);
      const TensorT<S>& av2 = val(a);
      const TensorT<S>& bv2 = val(b);
      Node& na = nodes_[static_cast<size_t>(a)];
      Node& nb = nodes_[static_cast<size_t>(b)];
      for (int64_t i = 0; i < n; ++i) {
        const S d = av2.v[i] - bv2.v[i];
        const S sgn = d > S(0) ? S(1) : (d < S(0) ? S(-1) : S(0));
        if (na.requires_grad) na.grad.v[i] += g * sgn;
        if (nb.requires_grad) nb.grad.v[i] -= g * sgn;
      }
    };
  }
  return id;
}

template <typename S>
int GraphT<S>::cross_entropy(int logits, int target) {
  check_id(logits);
  check_id(target);
  const TensorT<S>& zv = val(logits);
  const TensorT<S>& tv = val(target);
  require(zv.ndim() == 1, "cross_entropy: logits must be 1-D, got ",
          shape_str(zv));
  require(zv.shape == tv.shape, "cross_entropy: shape mismatch between ",
          shape_str(zv), " and ", shape_str(tv));
  const int64_t n = zv.numel();

  S mx = zv.v[0];
  for (const S z : zv.v) mx = std::max(mx, z);
  double norm = 0.0;
  for (const S z : zv.v) norm += std::exp(static_cast<double>(z - mx));
  const double lse = static_cast<double>(mx) + std::log(norm);

  double t_sum = 0.0;
  double dot = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    t_sum += static_cast<double>(tv.v[i]);
    dot += static_cast<double>(tv.v[i]) * static_cast<double>(zv.v[i]);
  }
  const double loss = lse * t_sum - dot;

  const int id = make_node(TensorT<S>::scalar(static_cast<S>(loss)),
                           {logits, target});
  Node& node = nodes_[static_cast<size_t>(id)];
  if (node.requires_grad) {
    node.backward_fn = [this, id, logits, target, mx, norm, t_sum, n] {
      const double g =
          static_cast<double>(nodes_[static_cast<size_t>(id)].grad.v[0]);
      const TensorT<S>& zv2 = val(logits);
      const TensorT<S>& tv2 = val(target);
      Node& nz = nodes_[static_cast<size_t>(logits)];
      if (nz.requires_grad) {
        for (int64_t i = 0; i < n; ++i) {
          const double p = std::exp(static_cast<double>(zv2.v[i] - mx)) / norm;
          nz.grad.v[i] += static_cast<S>(
              g * (p * t_sum - static_cast<double>(tv2.v[i])));
        }
      }
      Node& nt = nodes_[static_cast<size_t>(target)];
      if (nt.requires_grad) {
        S mx2 = zv2.v[0];
        for (const S z : zv2.v) mx2 = std::max(mx2, z);
        double norm2 = 0.0;
        for (const S z : zv2.v) norm2 += std::exp(static_cast<double>(z - mx2));
        const double lse2 = static_cast<double>(mx2) + std::log(norm2);
        for (int64_t i = 0; i < n; ++i) {
          nt.grad.v[i] +=
              static_cast<S>(g * (lse2 - static_cast<double>(zv2.v[i])));
        }
      }
    };
  }
  return id;
}

template <typename S>
int GraphT<S>::attention_pool(int frames, int w, int b) {
  check_id(frames);
  check_id(w);
  check_id(b);
  const TensorT<S>& hv = val(frames);
  const TensorT<S>& wv = val(w);
  const TensorT<S>& bv = val(b);
  require(hv.ndim() == 2, "attention_pool: frames must be [T, F], got ",
          shape_str(hv));
  const int64_t t_len = hv.dim(0);
  const int64_t f_dim = hv.dim(1);
  require(t_len >= 1, "attention_pool: empty frame axis");
  require(wv.ndim() == 1 && wv.dim(0) == f_dim,
          "attention_pool: scorer weight must be [", f_dim, "], got ",
          shape_str(wv));
  require(bv.numel() == 1, "attention_pool: scorer bias must be scalar, got ",
          shape_str(bv));

  // a = softmax over t of (w . h_t + b)
  std::vector<S> scores(static_cast<size_t>(t_len));
  for (int64_t t = 0; t < t_len; ++t) {
    double s = static_cast<double>(bv.v[0]);
    const S* row = hv.data() + t * f_dim;
    for (int64_t f = 0; f < f_dim; ++f) {
      s += static_cast<double>(wv.v[static_cast<size_t>(f)]) * row[f];
    }
    scores[static_cast<size_t>(t)] = static_cast<S>(s);
  }
  S mx = scores[0];
  for (const S s : scores) mx = std::max(mx, s);
  double norm = 0.0;
  std::vector<S> attn(static_cast<size_t>(t_len));
  for (int64_t t = 0; t < t_len; ++t) {
    const double e = std::exp(static_cast<double>(scores[static_cast<size_t>(t)] - mx));
    attn[static_cast<size_t>(t)] = static_cast<S>(e);
    norm += e;
  }
  const double inv = 1.0 / norm;
  for (auto& a : attn) a = static_cast<S>(static_cast<double>(a) * inv);

  TensorT<S> out = TensorT<S>::zeros({static_cast<int>(f_dim)});
  for (int64_t f = 0; f < f_dim; ++f) {
    double acc = 0.0;
    for (int64_t t = 0; t < t_len; ++t) {
      acc += static_cast<double>(attn[static_cast<size_t>(t)]) *
             static_cast<double>(hv.v[static_cast<size_t>(t * f_dim + f)]);
    }
    out.v[static_cast<size_t>(f)] = static_cast<S>(acc);
  }

  const int id = make_node(std::move(out), {frames, w, b});
  Node& node = nodes_[static_cast<size_t>(id)];
  node.aux = attn;  // retained even without grad so callers can inspect it
  if (node.requires_grad) {
    node.backward_fn = [this, id, frames, w, b, t_len, f_dim] {
      const Node& self = nodes_[static_cast<size_t>(id)];
      const S* dout = self.grad.data();
      const std::vector<S>& a = self.aux;
      const TensorT<S>& hv2 = val(frames);
      const TensorT<S>& wv2 = val(w);

      // da_t = dout . h_t ; ds_t = a_t (da_t - sum_u a_u da_u)
      std::vector<double> da(static_cast<size_t>(t_len));
      double common = 0.0;
      for (int64_t t = 0; t < t_len; ++t) {
        double acc = 0.0;
        const S* row = hv2.data() + t * f_dim;
        for (int64_t f = 0; f < f_dim; ++f) {
          acc += static_cast<double>(dout[f]) * row[f];
        }
        da[static_cast<size_t>(t)] = acc;
        common += static_cast<double>(a[static_cast<size_t>(t)]) * acc;
      }
      std::vector<double> ds(static_cast<size_t>(t_len));
      for (int64_t t = 0; t < t_len; ++t) {
        ds[static_cast<size_t>(t)] =
            static_cast<double>(a[static_cast<size_t>(t)]) *
            (da[static_cast<size_t>(t)] - common);
      }

      Node& nh = nodes_[static_cast<size_t>(frames)];
      if (nh.requires_grad) {
        for (int64_t t = 0; t < t_len; ++t) {
          S* drow = nh.grad.data() + t * f_dim;
          const double at = a[static_cast<size_t>(t)];
          const double dst = ds[static_cast<size_t>(t)];
          for (int64_t f = 0; f < f_dim; ++f) {
            drow[f] += static_cast<S>(
                at * static_cast<double>(dout[f]) +
                dst * static_cast<double>(wv2.v[static_cast<size_t>(f)]));
          }
        }
      }
      Node& nw = nodes_[static_cast<size_t>(w)];
      if (nw.requires_grad) {
        for (int64_t f = 0; f < f_dim; ++f) {
          double acc = 0.0;
          for (int64_t t = 0; t < t_len; ++t) {
            acc += ds[static_cast<size_t>(t)] *
                   static_cast<double>(hv2.v[static_cast<size_t>(t * f_dim + f)]);
          }
          nw.grad.v[static_cast<size_t>(f)] += static_cast<S>(acc);
        }
      }
      Node& nb = nodes_[static_cast<size_t>(b)];
      if (nb.requires_grad) {
        double acc = 0.0;
        for (int64_t t = 0; t < t_len; ++t) acc += ds[static_cast<size_t>(t)];
        nb.grad.v[0] += static_cast<S>(acc);
      }
    };
  }
  return id;
}

template <typename S>
int GraphT<S>::unary_map(int x, std::function<S(S)> f,
                         std::function<S(S)> dfdx) {
  check_id(x);
  const TensorT<S>& xv = val(x);
  TensorT<S> out;
  out.shape = xv.shape;
  out.v.resize(xv.v.size());
  for (size_t i = 0; i < xv.v.size(); ++i) out.v[i] = f(xv.v[i]);

  const int id = make_node(std::move(out), {x});
  Node& node = nodes_[static_cast<size_t>(id)];
  if (node.requires_grad) {
    node.backward_fn = [this, id, x, dfdx = std::move(dfdx)] {
      const Node& self = nodes_[static_cast<size_t>(id)];
      const TensorT<S>& xv2 = val(x);
      Node& nx = nodes_[static_cast<size_t>(x)];
      for (size_t i = 0; i < xv2.v.size(); ++i) {
        nx.grad.v[i] += self.grad.v[i] * dfdx(xv2.v[i]);
      }
    };
  }
  return id;
}

// ---------------------------------------------------------------------------
// execution
// ---------------------------------------------------------------------------

template <typename S>
void GraphT<S>::backward(int loss) {
  check_id(loss);
  require(grad_enabled_, "backward: graph was built forward-only");
  require(!backward_done_, "backward: called twice without reset");
  const Node& loss_node = nodes_[static_cast<size_t>(loss)];
  require(loss_node.stored.is_scalar() ||
              (loss_node.external && loss_node.external->is_scalar()),
          "backward: loss must be scalar, got ",
          shape_str(loss_node.external ? *loss_node.external : loss_node.stored));
  require(loss_node.requires_grad,
          "backward: loss does not depend on any parameter");

  // Mark ancestors of the loss; everything else keeps zero gradients.
  std::vector<char> reachable(nodes_.size(), 0);
  std::vector<int> stack{loss};
  reachable[static_cast<size_t>(loss)] = 1;
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    for (const int p : nodes_[static_cast<size_t>(id)].parents) {
      if (!reachable[static_cast<size_t>(p)] &&
          nodes_[static_cast<size_t>(p)].requires_grad) {
        reachable[static_cast<size_t>(p)] = 1;
        stack.push_back(p);
      }
    }
  }

  nodes_[static_cast<size_t>(loss)].grad.v[0] = S(1);
  for (int id = loss; id >= 0; --id) {
    Node& node = nodes_[static_cast<size_t>(id)];
    if (reachable[static_cast<size_t>(id)] && node.backward_fn) {
      node.backward_fn();
    }
  }
  backward_done_ = true;
}

template <typename S>
void GraphT<S>::reset_grads() {
  for (Node& node : nodes_) {
    std::fill(node.grad.v.begin(), node.grad.v.end(), S(0));
  }
  backward_done_ = false;
}

template class GraphT<float>;
template class GraphT<double>;

}  // namespace nmrmos::nn
