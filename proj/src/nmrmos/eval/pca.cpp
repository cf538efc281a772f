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

#include "nmrmos/eval/pca.hpp"

#include <cmath>

#include "nmrmos/common/error.hpp"

namespace nmrmos::eval {

namespace {

constexpr double kTolerance = 1e-8;
constexpr int kMaxIterations = 100000;

/// Dominant eigenvector of a symmetric matrix by power iteration.
/// Returns the eigenvalue; writes the unit eigenvector to v.
double power_iteration(const std::vector<double>& m, size_t d,
                       std::vector<double>& v) {
  // Deterministic, mildly irregular start vector.
  v.assign(d, 0.0);
  for (size_t i = 0; i < d; ++i) {
    v[i] = 1.0 + 0.5 * std::sin(static_cast<double>(i) + 1.0);
  }
  double norm = 0.0;
  for (const double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (auto& x : v) x /= norm;

  std::vector<double> next(d);
  double eigen = 0.0;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    for (size_t i = 0; i < d; ++i) {
      double acc = 0.0;
      for (size_t j = 0; j < d; ++j) acc += m[i * d + j] * v[j];
      next[i] = acc;
    }
    double next_norm = 0.0;
    for (const double x : next) next_norm += x * x;
    next_norm = std::sqrt(next_norm);
    if (next_norm < 1e-300) {
      // Matrix is (numerically) zero in the remaining subspace.
      return 0.0;
    }
    double delta = 0.0;
    for (size_t i = 0; i < d; ++i) {
      const double nv = next[i] / next_norm;
      // Sign-insensitive distance so oscillating signs still converge.
      delta += std::min(std::abs(nv - v[i]), std::abs(nv + v[i]));
      v[i] = nv;
    }
    eigen = next_norm;
    if (delta < kTolerance) break;
  }
  return eigen;
}

void fix_sign(std::vector<double>& v) {
  size_t arg = 0;
  for (size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  }
  if (v[arg] < 0.0) {
    for (auto& x : v) x = -x;
  }
}

}  // namespace

std::vector<std::array<double, 2>> pca2(
    const std::vector<std::vector<float>>& embeddings) {
  const size_t n = embeddings.size();
  require(n >= 3, "pca2: need at least 3 vectors, got ", n);
  const size_t d = embeddings[0].size();
  require(d >= 2, "pca2: need dimension >= 2, got ", d);
  for (const auto& e : embeddings) {
    require(e.size() == d, "pca2: ragged input");
  }

  std::vector<double> mean(d, 0.0);
  for (const auto& e : embeddings) {
    for (size_t i = 0; i < d; ++i) mean[i] += e[i];
  }
  for (auto& m : mean) m /= static_cast<double>(n);

  std::vector<double> centered(n * d);
  for (size_t r = 0; r < n; ++r) {
    for (size_t i = 0; i < d; ++i) {
      centered[r * d + i] = static_cast<double>(embeddings[r][i]) - mean[i];
    }
  }

  std::vector<double> cov(d * d, 0.0);
  for (size_t r = 0; r < n; ++r) {
    const double* row = centered.data() + r * d;
    for (size_t i = 0; i < d; ++i) {
      for (size_t j = i; j < d; ++j) {
        cov[i * d + j] += row[i] * row[j];
      }
    }
  }
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = i; j < d; ++j) {
      cov[i * d + j] /= static_cast<double>(n);
      cov[j * d + i] = cov[i * d + j];
    }
  }

  std::vector<double> v1, v2;
  const double lambda1 = power_iteration(cov, d, v1);
  fix_sign(v1);

  // Deflate and pull the second component.
  std::vector<double> deflated = cov;
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = 0; j < d; ++j) {
      deflated[i * d + j] -= lambda1 * v1[i] * v1[j];
    }
  }
  const double lambda2 = power_iteration(deflated, d, v2);
  if (lambda2 <= lambda1 * 1e-12) {
    // Rank-1 data: any unit vector orthogonal to v1 serves as the second
    // axis. Take the coordinate axis least aligned with v1 and orthogonalize.
    size_t arg = 0;
    for (size_t i = 1; i < d; ++i) {
      if (std::abs(v1[i]) < std::abs(v1[arg])) arg = i;
    }
    v2.assign(d, 0.0);
    v2[arg] = 1.0;
    double dot = v1[arg];
    double norm = 0.0;
    for (size_t i = 0; i < d; ++i) {
      v2[i] -= dot * v1[i];
      norm += v2[i] * v2[i];
    }
    norm = std::sqrt(norm);
    for (auto& x : v2) x /= norm;
  }
  fix_sign(v2);

  std::vector<std::array<double, 2>> out(n);
  for (size_t r = 0; r < n; ++r) {
    const double* row = centered.data() + r * d;
    double p1 = 0.0, p2 = 0.0;
    for (size_t i = 0; i < d; ++i) {
      p1 += row[i] * v1[i];
      p2 += row[i] * v2[i];
    }
    out[r] = {p1, p2};
  }
  return out;
}

}  // namespace nmrmos::eval
