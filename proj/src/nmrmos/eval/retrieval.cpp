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

#include "nmrmos/eval/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nmrmos/common/error.hpp"

namespace nmrmos::eval {

double retrieval_mp(const std::vector<std::vector<float>>& embeddings,
                    const std::vector<int>& labels, int k) {
  const size_t n = embeddings.size();
  require(n == labels.size(), "retrieval_mp: ", n, " embeddings but ",
          labels.size(), " labels");
  require(k >= 1, "retrieval_mp: k must be >= 1, got ", k);
  require(static_cast<size_t>(k) < n, "retrieval_mp: k=", k,
          " must be smaller than the dataset (", n, " items)");

  std::vector<double> norms(n);
  for (size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (const float v : embeddings[i]) acc += static_cast<double>(v) * v;
    norms[i] = std::sqrt(acc);
  }

  double total = 0.0;
  std::vector<std::pair<double, size_t>> scored;
  for (size_t q = 0; q < n; ++q) {
    scored.clear();
    scored.reserve(n - 1);
    for (size_t j = 0; j < n; ++j) {
      if (j == q) continue;
      double dot = 0.0;
      for (size_t d = 0; d < embeddings[q].size(); ++d) {
        dot += static_cast<double>(embeddings[q][d]) * embeddings[j][d];
      }
      const double denom = norms[q] * norms[j];
      scored.emplace_back(denom > 0.0 ? dot / denom : 0.0, j);
    }
    // Descending similarity, ties by item index.
    std::partial_sort(scored.begin(), scored.begin() + k, scored.end(),
                      [](const auto& a, const auto& b) {
                        if (a.first != b.first) return a.first > b.first;
                        return a.second < b.second;
                      });
    int hits = 0;
    for (int i = 0; i < k; ++i) {
      if (labels[scored[static_cast<size_t>(i)].second] == labels[q]) ++hits;
    }
    total += static_cast<double>(hits) / k;
  }
  return total / static_cast<double>(n);
}

}  // namespace nmrmos::eval
