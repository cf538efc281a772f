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

#include "nmrmos/train/data.hpp"

#include "nmrmos/audio/wav.hpp"

namespace nmrmos::train {

namespace {

bool keep(const synth::ManifestRecord& rec, const std::string& split,
          RecordFilter filter) {
  if (!split.empty() && rec.split != split) return false;
  const bool clean = rec.system_id == "clean";
  if (filter == RecordFilter::kCleanOnly && !clean) return false;
  if (filter == RecordFilter::kDegradedOnly && clean) return false;
  return true;
}

}  // namespace

std::vector<synth::ManifestRecord> select_records(
    const std::vector<synth::ManifestRecord>& records, const std::string& split,
    RecordFilter filter) {
  std::vector<synth::ManifestRecord> out;
  for (const auto& rec : records) {
    if (keep(rec, split, filter)) out.push_back(rec);
  }
  return out;
}

Dataset load_dataset(const std::string& manifest_path, const std::string& split,
                     RecordFilter filter) {
  const auto records = synth::read_manifest(manifest_path);
  Dataset out;
  for (const auto& rec : records) {
    if (!keep(rec, split, filter)) continue;
    DatasetItem item;
    item.clip = audio::load_wav_canonical(
        synth::resolve_manifest_path(manifest_path, rec.path));
    item.mos = rec.mos;
    item.utterance_id = rec.utterance_id;
    item.system_id = rec.system_id;
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace nmrmos::train
