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

#include <array>
#include <string>
#include <vector>

#include "nmrmos/common/rng.hpp"
#include "nmrmos/train/data.hpp"

namespace nmrmos::train {

/// Ordered training pair: excerpts ready for the model, plus labels
/// computed from the pre-augmentation MOS ratings.
struct TrainingPair {
  std::vector<float> x_i, x_j;
  std::array<float, 2> y{};  // [1,0] iff MOS_i > MOS_j, else [0,1]
  float s = 0.0f;            // |MOS_i - MOS_j|
  std::array<std::string, 2> source_ids;
};

/// Labels, one random augmentation per side (none / invert / reverse /
/// time stretch), then a random 3 s crop and RMS normalization.
TrainingPair make_training_pair(const DatasetItem& item_i,
                                const DatasetItem& item_j, Rng& rng);

/// Draws each side independently from d_clean with probability
/// clean_fraction, otherwise uniformly from d_lab.
TrainingPair sample_pair(const Dataset& d_lab, const Dataset& d_clean, Rng& rng,
                         double clean_fraction);

}  // namespace nmrmos::train
