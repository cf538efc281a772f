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

#include "nmrmos/train/loss.hpp"

#include <algorithm>
#include <cmath>

namespace nmrmos::train {

double mtl_loss_value(const model::PairOutput& out, const std::array<float, 2>& y,
                      double s, double lambda_q) {
  double ce = 0.0;
  for (int k = 0; k < 2; ++k) {
    if (y[static_cast<size_t>(k)] != 0.0f) {
      const double p =
          std::max(static_cast<double>(out.p[static_cast<size_t>(k)]), 1e-12);
      ce -= static_cast<double>(y[static_cast<size_t>(k)]) * std::log(p);
    }
  }
  return ce + lambda_q * std::abs(static_cast<double>(out.r) - s);
}

template <typename S>
int build_mtl_loss(nn::GraphT<S>& g, const model::PairNodes<S>& nodes,
                   const std::array<float, 2>& y, double s, double lambda_q) {
  nn::TensorT<S> target;
  target.shape = {2};
  target.v = {static_cast<S>(y[0]), static_cast<S>(y[1])};
  const int y_node = g.input(std::move(target));
  const int ce = g.cross_entropy(nodes.pref_logits, y_node);

  const int s_node = g.input(nn::TensorT<S>::scalar(static_cast<S>(s)));
  const int l1 = g.l1_loss(nodes.r, s_node);
  return g.add(ce, g.scale(l1, lambda_q));
}

template int build_mtl_loss<float>(nn::GraphT<float>&,
                                   const model::PairNodes<float>&,
                                   const std::array<float, 2>&, double, double);
template int build_mtl_loss<double>(nn::GraphT<double>&,
                                    const model::PairNodes<double>&,
                                    const std::array<float, 2>&, double, double);

}  // namespace nmrmos::train
