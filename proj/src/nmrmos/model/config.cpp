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

#include "nmrmos/model/config.hpp"

#include "nmrmos/common/error.hpp"

namespace nmrmos::model {

void ModelConfig::validate() const {
  require(!conv_channels.empty(), "model config: no conv layers");
  require(conv_channels.size() == kernel_sizes.size() &&
              conv_channels.size() == conv_strides.size(),
          "model config: conv_channels/kernel_sizes/strides lengths differ (",
          conv_channels.size(), "/", kernel_sizes.size(), "/",
          conv_strides.size(), ")");
  for (size_t i = 0; i < conv_channels.size(); ++i) {
    require(conv_channels[i] > 0, "model config: non-positive channel count");
    require(kernel_sizes[i] > 0, "model config: non-positive kernel size");
    require(conv_strides[i] > 0, "model config: non-positive stride");
  }
  require(embed_dim > 0, "model config: non-positive embed_dim");
  require(head_hidden > 0, "model config: non-positive head_hidden");
  require(input_samples > 0, "model config: non-positive input_samples");

  // The conv stack must produce at least one frame.
  int64_t t = input_samples;
  for (size_t i = 0; i < conv_channels.size(); ++i) {
    require(t >= kernel_sizes[i], "model config: layer ", i,
            " kernel ", kernel_sizes[i], " exceeds remaining length ", t);
    t = (t - kernel_sizes[i]) / conv_strides[i] + 1;
  }
}

nlohmann::json ModelConfig::to_json() const {
  nlohmann::json j;
  j["conv_channels"] = conv_channels;
  j["kernel_sizes"] = kernel_sizes;
  j["conv_strides"] = conv_strides;
  j["embed_dim"] = embed_dim;
  j["head_hidden"] = head_hidden;
  j["input_samples"] = input_samples;
  return j;
}

ModelConfig ModelConfig::from_json(const nlohmann::json& j) {
  ModelConfig config;
  config.conv_channels = j.at("conv_channels").get<std::vector<int>>();
  config.kernel_sizes = j.at("kernel_sizes").get<std::vector<int>>();
  config.conv_strides = j.at("conv_strides").get<std::vector<int>>();
  config.embed_dim = j.at("embed_dim").get<int>();
  config.head_hidden = j.at("head_hidden").get<int>();
  config.input_samples = j.at("input_samples").get<int>();
  config.validate();
  return config;
}

ModelConfig ModelConfig::reduced() {
  ModelConfig config;
  config.conv_channels = {8, 8};
  config.kernel_sizes = {10, 8};
  config.conv_strides = {5, 4};
  config.embed_dim = 32;
  config.head_hidden = 16;
  config.input_samples = 800;
  return config;
}

std::vector<std::pair<std::string, std::vector<int>>> parameter_shapes(
    const ModelConfig& config) {
  config.validate();
  std::vector<std::pair<std::string, std::vector<int>>> shapes;
  int in_ch = 1;
  for (size_t i = 0; i < config.conv_channels.size(); ++i) {
    const std::string base = "enc.conv" + std::to_string(i);
    shapes.emplace_back(base + ".w", std::vector<int>{config.conv_channels[i],
                                                      in_ch,
                                                      config.kernel_sizes[i]});
    shapes.emplace_back(base + ".b", std::vector<int>{config.conv_channels[i]});
    in_ch = config.conv_channels[i];
  }
  shapes.emplace_back("ds.w", std::vector<int>{config.embed_dim, in_ch});
  shapes.emplace_back("ds.b", std::vector<int>{config.embed_dim});

  const int pair_dim = 2 * config.embed_dim;
  for (const char* head : {"pref", "rel"}) {
    const std::string base = head;
    const int out = base == "pref" ? 2 : 1;
    shapes.emplace_back(base + ".fc1.w",
                        std::vector<int>{config.head_hidden, pair_dim});
    shapes.emplace_back(base + ".fc1.b", std::vector<int>{config.head_hidden});
    shapes.emplace_back(base + ".fc2.w",
                        std::vector<int>{out, config.head_hidden});
    shapes.emplace_back(base + ".fc2.b", std::vector<int>{out});
    shapes.emplace_back(base + ".attn.w", std::vector<int>{out});
    shapes.emplace_back(base + ".attn.b", std::vector<int>{1});
  }
  return shapes;
}

int64_t count_parameters(const ModelConfig& config) {
  int64_t total = 0;
  for (const auto& [name, shape] : parameter_shapes(config)) {
    int64_t n = 1;
    for (const int d : shape) n *= d;
    total += n;
  }
  return total;
}

}  // namespace nmrmos::model
