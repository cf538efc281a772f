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

#include <span>
#include <string>
#include <vector>

namespace nmrmos::eval {

double mse(std::span<const double> pred, std::span<const double> target);

/// Throws on length mismatch, fewer than two points, or constant input
/// (degenerate evaluation sets should surface, not yield NaN).
double pearson(std::span<const double> pred, std::span<const double> target);

/// Pearson correlation of average ranks; ties get the mean of their span.
double spearman(std::span<const double> pred, std::span<const double> target);

/// Average ranks (1-based), ties averaged.
std::vector<double> average_ranks(std::span<const double> values);

struct EvalReport {
  std::string level;  // "utterance" or "system"
  double mse = 0.0;
  double pearson = 0.0;
  double spearman = 0.0;
  int count = 0;
};

EvalReport make_report(const std::string& level, std::span<const double> pred,
                       std::span<const double> target);

/// Mean value per system id, output sorted by system id.
std::vector<std::pair<std::string, double>> aggregate_system(
    const std::vector<std::pair<std::string, double>>& utterance_scores);

}  // namespace nmrmos::eval
