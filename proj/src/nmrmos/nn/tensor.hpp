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

#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "nmrmos/common/error.hpp"

namespace nmrmos::nn {

/// Dense row-major n-dimensional array.
template <typename S>
struct TensorT {
  std::vector<int> shape;
  std::vector<S> v;

  TensorT() = default;

  static TensorT zeros(std::vector<int> shape) {
    TensorT t;
    t.shape = std::move(shape);
    t.v.assign(t.expected_numel(), S(0));
    return t;
  }

  static TensorT scalar(S value) {
    TensorT t;
    t.shape = {1};
    t.v = {value};
    return t;
  }

  static TensorT from(std::vector<int> shape, std::vector<S> values) {
    TensorT t;
    t.shape = std::move(shape);
    t.v = std::move(values);
    require(t.v.size() == static_cast<size_t>(t.expected_numel()),
            "tensor: ", t.v.size(), " values for shape of ",
            t.expected_numel());
    return t;
  }

  int64_t numel() const { return static_cast<int64_t>(v.size()); }
  int ndim() const { return static_cast<int>(shape.size()); }
  int dim(int i) const { return shape[static_cast<size_t>(i)]; }
  bool is_scalar() const { return numel() == 1; }

  S* data() { return v.data(); }
  const S* data() const { return v.data(); }

  int64_t expected_numel() const {
    int64_t n = 1;
    for (const int d : shape) {
      require(d > 0, "tensor: non-positive dimension ", d);
      n *= d;
    }
    return n;
  }
};

using Tensor = TensorT<float>;

template <typename S>
std::string shape_str(const TensorT<S>& t) {
  std::string s = "[";
  for (size_t i = 0; i < t.shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(t.shape[i]);
  }
  return s + "]";
}

template <typename From, typename To>
TensorT<To> cast_tensor(const TensorT<From>& t) {
  TensorT<To> out;
  out.shape = t.shape;
  out.v.resize(t.v.size());
  for (size_t i = 0; i < t.v.size(); ++i) out.v[i] = static_cast<To>(t.v[i]);
  return out;
}

}  // namespace nmrmos::nn
