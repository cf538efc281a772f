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

#include <cstdint>
#include <vector>

namespace nmrmos::audio {

/// Everything downstream of ingest runs at this rate.
inline constexpr int kCanonicalRate = 16000;

/// Model inputs are excerpts of this length.
inline constexpr double kExcerptSeconds = 3.0;

/// Level convention for excerpts entering the model.
inline constexpr double kExcerptTargetDbfs = -25.0;

/// Mono waveform. Samples are amplitudes nominally in [-1, 1].
struct AudioClip {
  std::vector<float> samples;
  int sample_rate = kCanonicalRate;

  size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

enum class PadPolicy {
  kTile,  // repeat from the clip start
  kZero,  // silence
};

/// Extracts exactly round(dur_s * rate) samples starting at start_s,
/// filling any shortfall per the pad policy. Never fails.
AudioClip excerpt(const AudioClip& clip, double start_s, double dur_s,
                  PadPolicy pad);

double rms(const AudioClip& clip);

struct NormalizeResult {
  AudioClip clip;
  bool clamped = false;  // true if peak clamping to [-1,1] kicked in
};

/// Scales the clip so its RMS is 10^(target_dbfs/20), then clamps any
/// overshooting peaks to [-1, 1]. Throws on an all-zero clip.
NormalizeResult rms_normalize(const AudioClip& clip, double target_dbfs);

/// RMS-normalizes to the model's excerpt level, passing silent excerpts
/// through untouched (an all-zero window is legal model input).
AudioClip prepare_excerpt(const AudioClip& clip);

}  // namespace nmrmos::audio
