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

#include "nmrmos/model/net.hpp"
#include "nmrmos/train/sampler.hpp"

namespace nmrmos::train {

/// Multi-task loss L = L_P + lambda_q * L_Q with
/// L_P = -sum_k y_k log(p_k) and L_Q = |r - s|, evaluated directly from a
/// pair output. Probabilities are clamped at 1e-12 before the log.
double mtl_loss_value(const model::PairOutput& out, const std::array<float, 2>& y,
                      double s, double lambda_q);

/// The same loss as a graph node (cross-entropy computed from the
/// preference logits in log-sum-exp form), for training.
template <typename S>
int build_mtl_loss(nn::GraphT<S>& g, const model::PairNodes<S>& nodes,
                   const std::array<float, 2>& y, double s, double lambda_q);

}  // namespace nmrmos::train
