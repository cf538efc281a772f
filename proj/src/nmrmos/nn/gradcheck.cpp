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

#include "nmrmos/nn/gradcheck.hpp"

#include <cmath>

namespace nmrmos::nn {

namespace {

double eval_loss(const std::function<int(GraphT<double>&)>& build) {
  GraphT<double> g(/*grad_enabled=*/false);
  const int loss = build(g);
  const TensorT<double>& v = g.value(loss);
  require(v.is_scalar(), "grad_check: loss must be scalar, got ", shape_str(v));
  return v.v[0];
}

}  // namespace

GradCheckReport grad_check(
    const std::function<int(GraphT<double>&)>& build,
    const std::vector<TensorT<double>*>& params, double h, double tolerance) {
  require(h > 0.0, "grad_check: step must be positive");
  require(!params.empty(), "grad_check: no parameters to check");

  // Analytic pass.
  std::vector<std::vector<double>> analytic;
  {
    GraphT<double> g(/*grad_enabled=*/true);
    const int loss = build(g);
    g.backward(loss);
    analytic.reserve(params.size());
    for (const TensorT<double>* p : params) {
      analytic.push_back(g.grad(g.param_id(p)).v);
    }
  }

  GradCheckReport report;
  for (size_t pi = 0; pi < params.size(); ++pi) {
    TensorT<double>& p = *params[pi];
    for (size_t j = 0; j < p.v.size(); ++j) {
      const double orig = p.v[j];
      p.v[j] = orig + h;
      const double up = eval_loss(build);
      p.v[j] = orig - h;
      const double down = eval_loss(build);
      p.v[j] = orig;

      const double numeric = (up - down) / (2.0 * h);
      const double a = analytic[pi][j];
      const double rel =
          std::abs(a - numeric) / std::max(std::abs(a) + std::abs(numeric), 1e-3);
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst =
            "param " + std::to_string(pi) + " element " + std::to_string(j);
      }
      ++report.checked;
    }
  }
  report.passed = report.max_rel_error < tolerance;
  return report;
}

}  // namespace nmrmos::nn
