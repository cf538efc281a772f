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

#include "nmrmos/train/sampler.hpp"

#include <cmath>

#include "nmrmos/common/error.hpp"
#include "nmrmos/synth/synth.hpp"

namespace nmrmos::train {

namespace {

std::vector<float> make_excerpt(const audio::AudioClip& clip, Rng& rng) {
  // One augmentation drawn uniformly from {none, invert, reverse, stretch}.
  audio::AudioClip augmented;
  const audio::AudioClip* source = &clip;
  switch (rng.below(4)) {
    case 0:
      break;
    case 1:
      augmented = synth::augment(clip, synth::AugmentKind::kInvert, rng);
      source = &augmented;
      break;
    case 2:
      augmented = synth::augment(clip, synth::AugmentKind::kReverse, rng);
      source = &augmented;
      break;
    case 3:
      augmented = synth::augment(clip, synth::AugmentKind::kTimeStretch, rng);
      source = &augmented;
      break;
  }

  const int64_t want =
      std::llround(audio::kExcerptSeconds * source->sample_rate);
  const int64_t slack = static_cast<int64_t>(source->size()) - want;
  const int64_t start = slack > 0 ? static_cast<int64_t>(rng.below(slack + 1)) : 0;
  const audio::AudioClip cropped =
      excerpt(*source, static_cast<double>(start) / source->sample_rate,
              audio::kExcerptSeconds, audio::PadPolicy::kTile);
  return audio::prepare_excerpt(cropped).samples;
}

}  // namespace

TrainingPair make_training_pair(const DatasetItem& item_i,
                                const DatasetItem& item_j, Rng& rng) {
  TrainingPair pair;
  pair.source_ids = {item_i.utterance_id, item_j.utterance_id};
  // Labels come from the original ratings; augmentation cannot touch them.
  pair.y = item_i.mos > item_j.mos ? std::array<float, 2>{1.0f, 0.0f}
                                   : std::array<float, 2>{0.0f, 1.0f};
  pair.s = static_cast<float>(std::abs(item_i.mos - item_j.mos));
  pair.x_i = make_excerpt(item_i.clip, rng);
  pair.x_j = make_excerpt(item_j.clip, rng);
  return pair;
}

TrainingPair sample_pair(const Dataset& d_lab, const Dataset& d_clean, Rng& rng,
                         double clean_fraction) {
  require(!d_lab.empty(), "sample_pair: empty labeled dataset");
  require(!d_clean.empty(), "sample_pair: empty clean dataset");
  auto draw = [&]() -> const DatasetItem& {
    if (rng.bernoulli(clean_fraction)) {
      return d_clean[rng.below(d_clean.size())];
    }
    return d_lab[rng.below(d_lab.size())];
  };
  const DatasetItem& item_i = draw();
  const DatasetItem& item_j = draw();
  return make_training_pair(item_i, item_j, rng);
}

}  // namespace nmrmos::train
