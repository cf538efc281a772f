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

#include "nmrmos/synth/synth.hpp"

namespace nmrmos::synth {

/// One line of a corpus manifest. Paths are relative to the manifest's
/// directory.
struct ManifestRecord {
  std::string path;
  double mos = 5.0;
  std::string system_id;
  std::string utterance_id;
  std::string split;  // train | dev | test
};

struct CorpusConfig {
  int clean_count = 40;           // number of clean source utterances
  std::vector<DegradationKind> kinds = {
      DegradationKind::kAdditiveNoise, DegradationKind::kLowpass,
      DegradationKind::kClip, DegradationKind::kReverb};
  int levels = kQualityLevels;
  double clip_seconds = audio::kExcerptSeconds;
  // Split sizes in source utterances; must sum to clean_count.
  int train_sources = 24;
  int dev_sources = 6;
  int test_sources = 10;
  uint64_t seed = 1;
  std::string out_dir;
};

/// Synthesizes the corpus (clean sources plus one degraded clip per
/// (source, kind, level)), writes WAVs under out_dir/wav/ and the manifest
/// to out_dir/manifest.jsonl, and returns the records. Deterministic in
/// the seed; per-clip RNG is derived from (seed, utterance_id).
std::vector<ManifestRecord> gen_corpus(const CorpusConfig& config);

void write_manifest(const std::string& path,
                    const std::vector<ManifestRecord>& records);

/// Reads a JSONL manifest; parse errors name the line number.
std::vector<ManifestRecord> read_manifest(const std::string& path);

/// Resolves a record's path against the directory of its manifest.
std::string resolve_manifest_path(const std::string& manifest_path,
                                  const std::string& record_path);

}  // namespace nmrmos::synth
