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
#include <vector>

#include "nmrmos/nn/tensor.hpp"

namespace nmrmos::nn {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam with bias correction. Moment buffers are bound to a fixed list of
/// parameter sizes at construction.
class Adam {
 public:
  Adam(AdamConfig config, const std::vector<Tensor*>& params);

  /// One update. grads[i] must have the same shape as params[i].
  void step(const std::vector<const Tensor*>& grads);

  int64_t step_count() const { return step_count_; }
  const AdamConfig& config() const { return config_; }
  const std::vector<float>& first_moment(size_t i) const { return m_[i]; }
  const std::vector<float>& second_moment(size_t i) const { return v_[i]; }

 private:
  AdamConfig config_;
  std::vector<Tensor*> params_;
  std::vector<std::vector<float>> m_, v_;
  int64_t step_count_ = 0;
};

}  // namespace nmrmos::nn
