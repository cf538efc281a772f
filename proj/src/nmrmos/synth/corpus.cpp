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

#include "nmrmos/synth/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "nmrmos/audio/wav.hpp"
#include "nmrmos/common/error.hpp"

namespace nmrmos::synth {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string utt_name(int source_index) {
  std::ostringstream os;
  os << "u" << std::setw(4) << std::setfill('0') << source_index;
  return os.str();
}

}  // namespace

std::vector<ManifestRecord> gen_corpus(const CorpusConfig& config) {
  require(config.clean_count > 0, "gen_corpus: clean_count must be positive");
  require(!config.kinds.empty(), "gen_corpus: no degradation kinds configured");
  require(config.levels > 0 && config.levels <= kQualityLevels,
          "gen_corpus: levels must be in 1..", kQualityLevels);
  require(config.clip_seconds > 0.0, "gen_corpus: non-positive clip duration");
  require(config.train_sources >= 0 && config.dev_sources >= 0 &&
              config.test_sources >= 0 &&
              config.train_sources + config.dev_sources + config.test_sources ==
                  config.clean_count,
          "gen_corpus: split sizes must sum to clean_count (",
          config.train_sources, "+", config.dev_sources, "+",
          config.test_sources, " != ", config.clean_count, ")");
  require(!config.out_dir.empty(), "gen_corpus: no output directory");

  std::error_code ec;
  fs::create_directories(fs::path(config.out_dir) / "wav", ec);
  require(!ec, "gen_corpus: cannot create output directory '", config.out_dir,
          "': ", ec.message());

  // Shuffle source indices into splits, deterministically in the seed.
  std::vector<int> order(config.clean_count);
  std::iota(order.begin(), order.end(), 0);
  Rng split_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  for (int i = config.clean_count - 1; i > 0; --i) {
    const int j = static_cast<int>(split_rng.below(i + 1));
    std::swap(order[i], order[j]);
  }
  std::vector<std::string> split_of(config.clean_count);
  for (int i = 0; i < config.clean_count; ++i) {
    const char* split = i < config.train_sources               ? "train"
                        : i < config.train_sources + config.dev_sources ? "dev"
                                                                        : "test";
    split_of[order[i]] = split;
  }

  std::vector<ManifestRecord> records;
  records.reserve(static_cast<size_t>(config.clean_count) *
                  (1 + config.kinds.size() * config.levels));

  for (int src = 0; src < config.clean_count; ++src) {
    const std::string source_id = utt_name(src);
    const uint64_t clean_seed = hash_string(source_id) ^ config.seed;
    const audio::AudioClip clean = synth_clean(clean_seed, config.clip_seconds);

    ManifestRecord clean_rec;
    clean_rec.utterance_id = source_id + ".clean";
    clean_rec.path = "wav/" + clean_rec.utterance_id + ".wav";
    clean_rec.mos = 5.0;
    clean_rec.system_id = "clean";
    clean_rec.split = split_of[src];
    audio::save_wav_pcm16(
        (fs::path(config.out_dir) / clean_rec.path).string(), clean);
    records.push_back(clean_rec);

    for (const DegradationKind kind : config.kinds) {
      for (int level = 0; level < config.levels; ++level) {
        std::ostringstream id;
        id << source_id << "." << to_string(kind) << ".l" << level;

        DegradationSpec spec;
        spec.kind = kind;
        spec.level_index = level;
        spec.seed = rng_for(config.seed, id.str()).next_u64();

        ManifestRecord rec;
        rec.utterance_id = id.str();
        rec.path = "wav/" + rec.utterance_id + ".wav";
        rec.mos = pseudo_mos(spec);
        rec.system_id = std::string(to_string(kind)) + "_l" + std::to_string(level);
        rec.split = split_of[src];
        audio::save_wav_pcm16((fs::path(config.out_dir) / rec.path).string(),
                              degrade(clean, spec));
        records.push_back(rec);
      }
    }
  }

  write_manifest((fs::path(config.out_dir) / "manifest.jsonl").string(),
                 records);
  return records;
}

void write_manifest(const std::string& path,
                    const std::vector<ManifestRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "write_manifest: cannot open '", path, "'");
  for (const auto& rec : records) {
    json j;
    j["path"] = rec.path;
    j["mos"] = rec.mos;
    j["system_id"] = rec.system_id;
    j["utterance_id"] = rec.utterance_id;
    j["split"] = rec.split;
    out << j.dump() << "\n";
  }
  require(out.good(), "write_manifest: write failed for '", path, "'");
}

std::vector<ManifestRecord> read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "read_manifest: cannot open '", path, "'");

  std::vector<ManifestRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
      ManifestRecord rec;
      rec.path = j.at("path").get<std::string>();
      rec.mos = j.at("mos").get<double>();
      rec.system_id = j.at("system_id").get<std::string>();
      rec.utterance_id = j.at("utterance_id").get<std::string>();
      rec.split = j.at("split").get<std::string>();
      require(rec.mos >= 1.0 && rec.mos <= 5.0, "mos ", rec.mos,
              " outside [1,5]");
      records.push_back(std::move(rec));
    } catch (const std::exception& e) {
      fail("read_manifest: ", path, " line ", line_no, ": ", e.what());
    }
  }
  return records;
}

std::string resolve_manifest_path(const std::string& manifest_path,
                                  const std::string& record_path) {
  const fs::path rec(record_path);
  if (rec.is_absolute()) return record_path;
  return (fs::path(manifest_path).parent_path() / rec).string();
}

}  // namespace nmrmos::synth
