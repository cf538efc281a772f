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
#include <string>
#include <vector>

#include "nmrmos/nn/graph.hpp"

namespace nmrmos::nn {

struct GradCheckReport {
  double max_rel_error = 0.0;
  int64_t checked = 0;
  bool passed = false;
  std::string worst;  // "param-index/element" of the worst disagreement
};

/// Builds the differentiable fragment via `build` (which must register every
/// tensor in `params` with g.param(...) and return the scalar loss node),
/// then compares each analytic parameter gradient against central finite
/// differences with step h. Runs in double precision.
///
/// Relative error per element: |a - n| / max(|a| + |n|, 1e-3).
GradCheckReport grad_check(
    const std::function<int(GraphT<double>&)>& build,
    const std::vector<TensorT<double>*>& params, double h, double tolerance);

}  // namespace nmrmos::nn
