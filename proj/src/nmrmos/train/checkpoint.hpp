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

#include <json.hpp>

#include "nmrmos/model/net.hpp"

namespace nmrmos::train {

/// Self-describing container: magic, format version, model config (JSON),
/// free-form meta (JSON), then named parameter records as 32-bit
/// little-endian reals. Save/load round-trips bit-exactly.
void save_checkpoint(const model::ModelParams& params, const nlohmann::json& meta,
                     const std::string& path);

struct Checkpoint {
  model::ModelParams params;
  nlohmann::json meta;
};

Checkpoint load_checkpoint(const std::string& path);

/// Load requiring a specific architecture; mismatches are rejected naming
/// the first offending record.
Checkpoint load_checkpoint(const std::string& path,
                           const model::ModelConfig& expected);

}  // namespace nmrmos::train
