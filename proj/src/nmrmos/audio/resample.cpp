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

#include "nmrmos/audio/resample.hpp"

#include <cmath>
#include <cstdint>

#include "nmrmos/common/error.hpp"

namespace nmrmos::audio {

namespace {

constexpr int kHalfTaps = 24;

double blackman(double x, double half_width) {
  // x in [-half_width, half_width]
  const double u = (x / half_width + 1.0) * 0.5;  // -> [0, 1]
  return 0.42 - 0.5 * std::cos(2.0 * M_PI * u) + 0.08 * std::cos(4.0 * M_PI * u);
}

double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = M_PI * x;
  return std::sin(px) / px;
}

}  // namespace

AudioClip resample(const AudioClip& clip, int target_rate) {
  require(target_rate > 0, "resample: target rate must be positive, got ",
          target_rate);
  require(clip.sample_rate > 0, "resample: source rate must be positive, got ",
          clip.sample_rate);
  if (target_rate == clip.sample_rate) return clip;

  const int64_t n_in = static_cast<int64_t>(clip.samples.size());
  const int64_t n_out =
      std::llround(static_cast<double>(n_in) * target_rate / clip.sample_rate);

  AudioClip out;
  out.sample_rate = target_rate;
  out.samples.resize(static_cast<size_t>(n_out), 0.0f);
  if (n_in == 0 || n_out == 0) return out;

  // When decimating, the kernel is stretched by the ratio so its cutoff
  // sits at the output Nyquist.
  const double ratio = static_cast<double>(clip.sample_rate) / target_rate;
  const double stretch = std::max(1.0, ratio);
  const double cutoff = 1.0 / stretch;
  const double half_width = kHalfTaps * stretch;

  const double step = static_cast<double>(clip.sample_rate) / target_rate;
  for (int64_t i = 0; i < n_out; ++i) {
    const double center = i * step;  // position in input samples
    const int64_t k_lo = static_cast<int64_t>(std::ceil(center - half_width));
    const int64_t k_hi = static_cast<int64_t>(std::floor(center + half_width));
    double acc = 0.0;
    for (int64_t k = std::max<int64_t>(k_lo, 0);
         k <= std::min<int64_t>(k_hi, n_in - 1); ++k) {
      const double x = center - k;
      acc += clip.samples[k] * cutoff * sinc(cutoff * x) * blackman(x, half_width);
    }
    out.samples[i] = static_cast<float>(acc);
  }
  return out;
}

}  // namespace nmrmos::audio
