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

#include "nmrmos/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "nmrmos/common/error.hpp"

namespace nmrmos::eval {

double mse(std::span<const double> pred, std::span<const double> target) {
  require(pred.size() == target.size(), "mse: length mismatch (", pred.size(),
          " vs ", target.size(), ")");
  require(!pred.empty(), "mse: empty input");
  double acc = 0.0;
  for (size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    acc += d * d;
  }
  return acc / static_cast<double>(pred.size());
}

double pearson(std::span<const double> pred, std::span<const double> target) {
  require(pred.size() == target.size(), "pearson: length mismatch (",
          pred.size(), " vs ", target.size(), ")");
  require(pred.size() >= 2, "pearson: need at least 2 points, got ",
          pred.size());
  const double n = static_cast<double>(pred.size());
  double mean_p = 0.0, mean_t = 0.0;
  for (size_t i = 0; i < pred.size(); ++i) {
    mean_p += pred[i];
    mean_t += target[i];
  }
  mean_p /= n;
  mean_t /= n;
  double spp = 0.0, stt = 0.0, spt = 0.0;
  for (size_t i = 0; i < pred.size(); ++i) {
    const double dp = pred[i] - mean_p;
    const double dt = target[i] - mean_t;
    spp += dp * dp;
    stt += dt * dt;
    spt += dp * dt;
  }
  require(spp > 0.0, "pearson: first argument is constant");
  require(stt > 0.0, "pearson: second argument is constant");
  return spt / std::sqrt(spp * stt);
}

std::vector<double> average_ranks(std::span<const double> values) {
  const size_t n = values.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n, 0.0);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j share a value; each gets the mean rank of the span.
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> pred, std::span<const double> target) {
  require(pred.size() == target.size(), "spearman: length mismatch (",
          pred.size(), " vs ", target.size(), ")");
  require(pred.size() >= 2, "spearman: need at least 2 points, got ",
          pred.size());
  const std::vector<double> rp = average_ranks(pred);
  const std::vector<double> rt = average_ranks(target);
  return pearson(rp, rt);
}

EvalReport make_report(const std::string& level, std::span<const double> pred,
                       std::span<const double> target) {
  EvalReport report;
  report.level = level;
  report.count = static_cast<int>(pred.size());
  report.mse = mse(pred, target);
  report.pearson = pearson(pred, target);
  report.spearman = spearman(pred, target);
  return report;
}

std::vector<std::pair<std::string, double>> aggregate_system(
    const std::vector<std::pair<std::string, double>>& utterance_scores) {
  require(!utterance_scores.empty(), "aggregate_system: empty input");
  std::map<std::string, std::pair<double, int>> acc;
  for (const auto& [system, value] : utterance_scores) {
    auto& slot = acc[system];
    slot.first += value;
    slot.second += 1;
  }
  std::vector<std::pair<std::string, double>> out;
  out.reserve(acc.size());
  for (const auto& [system, slot] : acc) {
    out.emplace_back(system, slot.first / slot.second);
  }
  return out;  // std::map iteration is already sorted by system id
}

}  // namespace nmrmos::eval
