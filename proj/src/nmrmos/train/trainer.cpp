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

#include "nmrmos/train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "nmrmos/common/parallel.hpp"
#include "nmrmos/eval/metrics.hpp"
#include "nmrmos/infer/predict.hpp"
#include "nmrmos/nn/adam.hpp"
#include "nmrmos/train/data.hpp"
#include "nmrmos/train/loss.hpp"
#include "nmrmos/train/sampler.hpp"

namespace nmrmos::train {

namespace fs = std::filesystem;

namespace {

void validate(const TrainConfig& config) {
  require(!config.manifest_path.empty(), "train: no manifest");
  require(!config.checkpoint_dir.empty(), "train: no checkpoint directory");
  require(config.batch_size >= 1, "train: batch_size must be >= 1");
  require(config.epochs >= 1, "train: epochs must be >= 1");
  require(config.lambda_q >= 0.0, "train: lambda_q must be >= 0");
  require(config.clean_pair_fraction >= 0.0 && config.clean_pair_fraction <= 1.0,
          "train: clean_pair_fraction must be in [0,1]");
  config.model.validate();
}

struct DevSet {
  Dataset items;
  infer::ReferenceFrames refs;
};

std::optional<std::pair<double, double>> dev_metrics(
    const model::ModelParams& params, const DevSet& dev, int threads) {
  if (dev.items.size() < 2 || dev.refs.windows.empty()) return std::nullopt;
  std::vector<double> pred(dev.items.size()), target(dev.items.size());
  parallel_for(static_cast<int64_t>(dev.items.size()), threads, [&](int64_t i) {
    pred[static_cast<size_t>(i)] =
        infer::predict_mos_cached(params, dev.items[static_cast<size_t>(i)].clip,
                                  dev.refs, /*threads=*/1)
            .mos;
    target[static_cast<size_t>(i)] = dev.items[static_cast<size_t>(i)].mos;
  });
  try {
    return std::make_pair(eval::spearman(pred, target), eval::mse(pred, target));
  } catch (const Error&) {
    // Constant predictions (e.g. untrained model) have no rank correlation.
    return std::nullopt;
  }
}

void append_log_line(std::ofstream& out, const EpochLog& entry) {
  nlohmann::json j;
  j["epoch"] = entry.epoch;
  j["train_loss"] = entry.train_loss;
  j["dev_spearman"] =
      entry.dev_spearman ? nlohmann::json(*entry.dev_spearman) : nlohmann::json();
  j["dev_mse"] = entry.dev_mse ? nlohmann::json(*entry.dev_mse) : nlohmann::json();
  out << j.dump() << "\n";
  out.flush();
}

}  // namespace

TrainResult train(const TrainConfig& config, const EpochCallback& on_epoch) {
  validate(config);

  std::error_code ec;
  fs::create_directories(config.checkpoint_dir, ec);
  require(!ec, "train: cannot create checkpoint directory '",
          config.checkpoint_dir, "': ", ec.message());

  const Dataset d_lab =
      load_dataset(config.manifest_path, "train", RecordFilter::kDegradedOnly);
  require(!d_lab.empty(), "train: no degraded train records in '",
          config.manifest_path, "'");
  const std::string clean_manifest = config.clean_manifest_path.empty()
                                         ? config.manifest_path
                                         : config.clean_manifest_path;
  Dataset d_clean =
      load_dataset(clean_manifest, "train", RecordFilter::kCleanOnly);
  require(!d_clean.empty(), "train: no clean train records in '", clean_manifest,
          "'");
  std::sort(d_clean.begin(), d_clean.end(),
            [](const DatasetItem& a, const DatasetItem& b) {
              return a.utterance_id < b.utterance_id;
            });

  model::ModelParams params = init_params(config.model, config.seed);
  const auto named = params.named();

  std::vector<nn::Tensor*> param_ptrs;
  for (const auto& [name, tensor] : named) param_ptrs.push_back(tensor);
  nn::AdamConfig adam_config;
  adam_config.lr = config.lr;
  nn::Adam adam(adam_config, param_ptrs);

  // Dev scoring uses the first clean train clips as references. Their frame
  // embeddings depend on the evolving parameters, so the raw clips are kept
  // and re-encoded each epoch.
  DevSet dev;
  dev.items = load_dataset(config.manifest_path, "dev", RecordFilter::kAll);
  std::vector<audio::AudioClip> dev_nmr_clips;
  if (!dev.items.empty() && config.dev_nmr_count > 0) {
    const int n_dev =
        std::min<int>(config.dev_nmr_count, static_cast<int>(d_clean.size()));
    for (int i = 0; i < n_dev; ++i) dev_nmr_clips.push_back(d_clean[i].clip);
  }

  const int64_t steps_per_epoch =
      (static_cast<int64_t>(d_lab.size()) + config.batch_size - 1) /
      config.batch_size;

  Rng sampler_rng(config.seed ^ 0xa5a5a5a5deadbeefULL);

  // Per-pair gradient slots; reduction happens in batch order so results do
  // not depend on the thread count.
  const size_t n_params = named.size();
  std::vector<std::vector<std::vector<float>>> grad_slots(
      static_cast<size_t>(config.batch_size));
  std::vector<double> loss_slots(static_cast<size_t>(config.batch_size));
  std::vector<nn::Tensor> grad_acc;
  std::vector<std::vector<double>> grad_acc_d;
  for (const auto& [name, tensor] : named) {
    grad_acc.push_back(nn::Tensor::zeros(tensor->shape));
    grad_acc_d.emplace_back(tensor->v.size(), 0.0);
  }

  const std::string log_path =
      (fs::path(config.checkpoint_dir) / "train_log.jsonl").string();
  std::ofstream log_out(log_path, std::ios::binary);
  require(log_out.good(), "train: cannot open '", log_path, "'");

  TrainResult result;
  result.parameter_count = params.parameter_count();
  result.best_checkpoint_path =
      (fs::path(config.checkpoint_dir) / "best.ckpt").string();
  result.final_checkpoint_path =
      (fs::path(config.checkpoint_dir) / "final.ckpt").string();
  result.log_path = log_path;

  double best_dev = -2.0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    double epoch_loss = 0.0;
    for (int64_t step = 0; step < steps_per_epoch; ++step) {
      // One RNG stream per pair, forked in batch order, so sampling can run
      // inside the workers without the schedule affecting the draw sequence.
      std::vector<Rng> pair_rngs;
      pair_rngs.reserve(static_cast<size_t>(config.batch_size));
      for (int b = 0; b < config.batch_size; ++b) {
        pair_rngs.push_back(sampler_rng.fork());
      }
      std::vector<TrainingPair> batch(static_cast<size_t>(config.batch_size));

      parallel_for(config.batch_size, config.threads, [&](int64_t b) {
        batch[static_cast<size_t>(b)] =
            sample_pair(d_lab, d_clean, pair_rngs[static_cast<size_t>(b)],
                        config.clean_pair_fraction);
        const TrainingPair& pair = batch[static_cast<size_t>(b)];
        nn::Graph g(/*grad_enabled=*/true);
        const int frames_i = model::build_frames(
            g, params, model::wave_input<float>(g, config.model, pair.x_i),
            /*trainable=*/true);
        const int frames_j = model::build_frames(
            g, params, model::wave_input<float>(g, config.model, pair.x_j),
            /*trainable=*/true);
        const auto nodes =
            model::build_pair(g, params, frames_i, frames_j, /*trainable=*/true);
        const int loss =
            build_mtl_loss(g, nodes, pair.y, pair.s, config.lambda_q);
        g.backward(loss);

        loss_slots[static_cast<size_t>(b)] = g.value(loss).v[0];
        auto& slot = grad_slots[static_cast<size_t>(b)];
        slot.resize(n_params);
        for (size_t pi = 0; pi < n_params; ++pi) {
          slot[pi] = g.grad(g.param_id(named[pi].second)).v;
        }
      });

      double batch_loss = 0.0;
      for (int b = 0; b < config.batch_size; ++b) {
        batch_loss += loss_slots[static_cast<size_t>(b)];
      }
      batch_loss /= config.batch_size;
      if (!std::isfinite(batch_loss)) {
        fail("train: non-finite loss ", batch_loss, " at epoch ", epoch,
             " step ", step + 1, " (first pair: ", batch[0].source_ids[0],
             " vs ", batch[0].source_ids[1], ")");
      }
      epoch_loss += batch_loss;

      // Batch-order reduction; streaming each slot keeps this cache-friendly.
      for (size_t pi = 0; pi < n_params; ++pi) {
        std::fill(grad_acc_d[pi].begin(), grad_acc_d[pi].end(), 0.0);
      }
      for (int b = 0; b < config.batch_size; ++b) {
        for (size_t pi = 0; pi < n_params; ++pi) {
          const auto& slot = grad_slots[static_cast<size_t>(b)][pi];
          auto& acc = grad_acc_d[pi];
          for (size_t j = 0; j < slot.size(); ++j) acc[j] += slot[j];
        }
      }
      for (size_t pi = 0; pi < n_params; ++pi) {
        auto& acc = grad_acc[pi].v;
        for (size_t j = 0; j < acc.size(); ++j) {
          acc[j] = static_cast<float>(grad_acc_d[pi][j] / config.batch_size);
        }
      }
      std::vector<const nn::Tensor*> grads;
      grads.reserve(n_params);
      for (const auto& g : grad_acc) grads.push_back(&g);
      adam.step(grads);
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = epoch_loss / static_cast<double>(steps_per_epoch);
    if (!dev_nmr_clips.empty()) {
      DevSet scored;
      scored.items = dev.items;
      scored.refs = infer::precompute_reference_frames(
          params, dev_nmr_clips, static_cast<int>(dev_nmr_clips.size()),
          config.threads);
      if (const auto metrics = dev_metrics(params, scored, config.threads)) {
        entry.dev_spearman = metrics->first;
        entry.dev_mse = metrics->second;
      }
    }
    append_log_line(log_out, entry);
    result.log.push_back(entry);
    if (on_epoch) on_epoch(entry);

    if (entry.dev_spearman && *entry.dev_spearman > best_dev) {
      best_dev = *entry.dev_spearman;
      result.best_epoch = epoch;
      nlohmann::json meta;
      meta["epoch"] = epoch;
      meta["dev_spearman"] = *entry.dev_spearman;
      save_checkpoint(params, meta, result.best_checkpoint_path);
    }
  }

  nlohmann::json meta;
  meta["epoch"] = config.epochs;
  if (!result.log.empty() && result.log.back().dev_spearman) {
    meta["dev_spearman"] = *result.log.back().dev_spearman;
  }
  save_checkpoint(params, meta, result.final_checkpoint_path);
  if (result.best_epoch == 0) {
    // No dev scoring happened; the final model doubles as best.
    save_checkpoint(params, meta, result.best_checkpoint_path);
    result.best_epoch = config.epochs;
  }
  return result;
}

}  // namespace nmrmos::train
