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

#include "nmrmos/audio/clip.hpp"

#include <algorithm>
#include <cmath>

#include "nmrmos/common/error.hpp"

namespace nmrmos::audio {

AudioClip excerpt(const AudioClip& clip, double start_s, double dur_s,
                  PadPolicy pad) {
  require(start_s >= 0.0, "excerpt: negative start ", start_s);
  require(dur_s > 0.0, "excerpt: non-positive duration ", dur_s);

  const int64_t n = std::llround(dur_s * clip.sample_rate);
  const int64_t start = std::llround(start_s * clip.sample_rate);
  const int64_t src_len = static_cast<int64_t>(clip.samples.size());

  AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples.resize(static_cast<size_t>(n), 0.0f);
  for (int64_t i = 0; i < n; ++i) {
    const int64_t src = start + i;
    if (src < src_len) {
      out.samples[i] = clip.samples[src];
    } else if (pad == PadPolicy::kTile && src_len > 0) {
      // Shortfall wraps around to the clip start.
      out.samples[i] = clip.samples[(src - src_len) % src_len];
    }
  }
  return out;
}

double rms(const AudioClip& clip) {
  if (clip.empty()) return 0.0;
  double acc = 0.0;
  for (const float s : clip.samples) acc += static_cast<double>(s) * s;
  return std::sqrt(acc / static_cast<double>(clip.samples.size()));
}

NormalizeResult rms_normalize(const AudioClip& clip, double target_dbfs) {
  const double current = rms(clip);
  require(current > 0.0, "rms_normalize: silent clip");

  const double target = std::pow(10.0, target_dbfs / 20.0);
  const double gain = target / current;

  NormalizeResult res;
  res.clip.sample_rate = clip.sample_rate;
  res.clip.samples.resize(clip.samples.size());
  for (size_t i = 0; i < clip.samples.size(); ++i) {
    float v = static_cast<float>(clip.samples[i] * gain);
    if (v > 1.0f) {
      v = 1.0f;
      res.clamped = true;
    } else if (v < -1.0f) {
      v = -1.0f;
      res.clamped = true;
    }
    res.clip.samples[i] = v;
  }
  return res;
}

AudioClip prepare_excerpt(const AudioClip& clip) {
  if (rms(clip) <= 1e-12) return clip;
  return rms_normalize(clip, kExcerptTargetDbfs).clip;
}

}  // namespace nmrmos::audio
