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

#include <string>
#include <vector>

#include <json.hpp>

namespace nmrmos::model {

/// Network architecture. The default lands at ~120k parameters with
/// 32-dim frame embeddings shared between the two inputs.
struct ModelConfig {
  std::vector<int> conv_channels{48, 48, 48, 48};
  std::vector<int> kernel_sizes{10, 8, 4, 4};
  std::vector<int> conv_strides{5, 4, 2, 2};
  int embed_dim = 32;
  int head_hidden = 608;
  int input_samples = 48000;  // 3 s at 16 kHz

  bool operator==(const ModelConfig&) const = default;

  void validate() const;
  nlohmann::json to_json() const;
  static ModelConfig from_json(const nlohmann::json& j);

  /// Tiny configuration for gradient checks (2 conv layers, 8 channels,
  /// short input) where finite differences stay affordable.
  static ModelConfig reduced();
};

/// Parameter record names and shapes in checkpoint order.
std::vector<std::pair<std::string, std::vector<int>>> parameter_shapes(
    const ModelConfig& config);

int64_t count_parameters(const ModelConfig& config);

}  // namespace nmrmos::model
