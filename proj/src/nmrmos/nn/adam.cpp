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

#include "nmrmos/nn/adam.hpp"

#include <cmath>

namespace nmrmos::nn {

Adam::Adam(AdamConfig config, const std::vector<Tensor*>& params)
    : config_(config), params_(params) {
  m_.reserve(params.size());
  v_.reserve(params.size());
  for (const Tensor* p : params_) {
    require(p != nullptr && p->numel() > 0, "adam: empty parameter");
    m_.emplace_back(p->v.size(), 0.0f);
    v_.emplace_back(p->v.size(), 0.0f);
  }
}

void Adam::step(const std::vector<const Tensor*>& grads) {
  require(grads.size() == params_.size(), "adam: got ", grads.size(),
          " gradients for ", params_.size(), " parameters");
  ++step_count_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_count_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_count_));

  for (size_t i = 0; i < params_.size(); ++i) {
    Tensor& p = *params_[i];
    const Tensor& g = *grads[i];
    require(g.shape == p.shape, "adam: gradient shape ", shape_str(g),
            " does not match parameter shape ", shape_str(p));
    float* pv = p.data();
    const float* gv = g.data();
    float* mv = m_[i].data();
    float* vv = v_[i].data();
    for (size_t j = 0; j < p.v.size(); ++j) {
      const double grad = gv[j];
      const double m = config_.beta1 * mv[j] + (1.0 - config_.beta1) * grad;
      const double v = config_.beta2 * vv[j] + (1.0 - config_.beta2) * grad * grad;
      mv[j] = static_cast<float>(m);
      vv[j] = static_cast<float>(v);
      const double m_hat = m / bc1;
      const double v_hat = v / bc2;
      pv[j] = static_cast<float>(pv[j] -
                                 config_.lr * m_hat / (std::sqrt(v_hat) + config_.eps));
    }
  }
}

}  // namespace nmrmos::nn
