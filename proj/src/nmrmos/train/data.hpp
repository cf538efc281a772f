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

#include "nmrmos/audio/clip.hpp"
#include "nmrmos/synth/corpus.hpp"

namespace nmrmos::train {

struct DatasetItem {
  audio::AudioClip clip;
  double mos = 5.0;
  std::string utterance_id;
  std::string system_id;
};

using Dataset = std::vector<DatasetItem>;

enum class RecordFilter {
  kAll,
  kCleanOnly,     // system_id == "clean"
  kDegradedOnly,  // system_id != "clean"
};

/// Loads the WAVs of one manifest split into memory at the canonical rate.
/// split may be empty to take every record.
Dataset load_dataset(const std::string& manifest_path, const std::string& split,
                     RecordFilter filter);

/// Same selection without the audio (for evaluation bookkeeping).
std::vector<synth::ManifestRecord> select_records(
    const std::vector<synth::ManifestRecord>& records, const std::string& split,
    RecordFilter filter);

}  // namespace nmrmos::train
