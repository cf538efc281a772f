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
#include <optional>
#include <string>

#include "nmrmos/model/net.hpp"
#include "nmrmos/train/checkpoint.hpp"

namespace nmrmos::train {

struct TrainConfig {
  std::string manifest_path;        // labeled set, train split
  std::string clean_manifest_path;  // clean set; empty = same manifest
  std::string checkpoint_dir;
  model::ModelConfig model;
  int batch_size = 64;
  double lr = 1e-4;
  int epochs = 50;
  double clean_pair_fraction = 0.25;
  double lambda_q = 1.0;
  uint64_t seed = 1;
  // Compute threads for batch sharding and dev evaluation. Gradients are
  // reduced per-pair in batch order, so the result is byte-identical for
  // any thread count; 1 is the single-shard reference.
  int threads = 1;
  int dev_nmr_count = 4;  // references used for per-epoch dev scoring
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  std::optional<double> dev_spearman;
  std::optional<double> dev_mse;
};

struct TrainResult {
  std::string best_checkpoint_path;
  std::string final_checkpoint_path;
  std::string log_path;
  std::vector<EpochLog> log;
  int64_t parameter_count = 0;
  int best_epoch = 0;
};

using EpochCallback = std::function<void(const EpochLog&)>;

/// Full optimization loop: sampled pair batches, multi-task loss, Adam,
/// per-epoch dev scoring (utterance Spearman via MOS prediction), best-dev
/// and final checkpoints, JSONL training log. Deterministic in the seed.
TrainResult train(const TrainConfig& config, const EpochCallback& on_epoch = {});

}  // namespace nmrmos::train
