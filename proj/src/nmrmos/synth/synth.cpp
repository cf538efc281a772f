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

#include "nmrmos/synth/synth.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nmrmos/common/error.hpp"
#include "nmrmos/common/fft.hpp"

namespace nmrmos::synth {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Direct-form biquad, RBJ lowpass.
struct Biquad {
  double b0 = 1, b1 = 0, b2 = 0, a1 = 0, a2 = 0;
  double z1 = 0, z2 = 0;

  void set_lowpass(double cutoff_hz, double q, double sample_rate) {
    const double w0 = kTwoPi * cutoff_hz / sample_rate;
    const double cw = std::cos(w0);
    const double sw = std::sin(w0);
    const double alpha = sw / (2.0 * q);
    const double a0 = 1.0 + alpha;
    b0 = (1.0 - cw) / 2.0 / a0;
    b1 = (1.0 - cw) / a0;
    b2 = b0;
    a1 = -2.0 * cw / a0;
    a2 = (1.0 - alpha) / a0;
  }

  float process(float x) {
    const double y = b0 * x + z1;
    z1 = b1 * x - a1 * y + z2;
    z2 = b2 * x - a2 * y;
    return static_cast<float>(y);
  }
};

}  // namespace

const char* to_string(DegradationKind kind) {
  switch (kind) {
    case DegradationKind::kAdditiveNoise: return "additive_noise";
    case DegradationKind::kLowpass: return "lowpass";
    case DegradationKind::kClip: return "clip";
    case DegradationKind::kReverb: return "reverb";
  }
  return "?";
}

DegradationKind degradation_kind_from_string(const std::string& name) {
  if (name == "additive_noise") return DegradationKind::kAdditiveNoise;
  if (name == "lowpass") return DegradationKind::kLowpass;
  if (name == "clip") return DegradationKind::kClip;
  if (name == "reverb") return DegradationKind::kReverb;
  fail("unknown degradation kind '", name, "'");
}

double noise_snr_db(int level_index) { return 40.0 - 4.0 * level_index; }

double pseudo_mos_for_level(int level_index) {
  require(level_index >= 0 && level_index < kQualityLevels,
          "pseudo_mos: level_index out of range: ", level_index);
  return 5.0 - 4.0 * level_index / 9.0;
}

double pseudo_mos(const DegradationSpec& spec) {
  return pseudo_mos_for_level(spec.level_index);
}

int level_for_mos(double mos) {
  const int level = static_cast<int>(std::lround((5.0 - mos) * 9.0 / 4.0));
  require(level >= 0 && level < kQualityLevels,
          "level_for_mos: ", mos, " is not on the level grid");
  return level;
}

audio::AudioClip synth_clean(uint64_t seed, double dur_s) {
  require(dur_s > 0.0, "synth_clean: non-positive duration ", dur_s);
  Rng rng(seed);

  const int rate = audio::kCanonicalRate;
  const int64_t n = std::llround(dur_s * rate);

  const double f0 = rng.uniform(90.0, 250.0);
  const double mod_rate = rng.uniform(3.0, 6.0);
  const double mod_phase = rng.uniform(0.0, kTwoPi);
  double harmonic_phase[8];
  for (auto& p : harmonic_phase) p = rng.uniform(0.0, kTwoPi);

  // Resonance center wanders slowly between 400 and 2400 Hz.
  const double sweep_rate = rng.uniform(0.2, 0.6);
  const double sweep_phase = rng.uniform(0.0, kTwoPi);

  audio::AudioClip clip;
  clip.sample_rate = rate;
  clip.samples.resize(static_cast<size_t>(n));

  Biquad filter;
  constexpr int kBlock = 64;
  for (int64_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    double s = 0.0;
    for (int k = 1; k <= 8; ++k) {
      s += std::sin(kTwoPi * k * f0 * t + harmonic_phase[k - 1]) / k;
    }
    const double env =
        0.2 + 0.8 * 0.5 * (1.0 + std::sin(kTwoPi * mod_rate * t + mod_phase));
    if (i % kBlock == 0) {
      const double center =
          1400.0 + 1000.0 * std::sin(kTwoPi * sweep_rate * t + sweep_phase);
      filter.set_lowpass(center, 2.0, rate);
    }
    clip.samples[i] = filter.process(static_cast<float>(s * env));
  }

  return audio::rms_normalize(clip, -25.0).clip;
}

namespace {

audio::AudioClip degrade_noise(const audio::AudioClip& clip, int level,
                               Rng& rng) {
  const double snr_db = noise_snr_db(level);
  std::vector<float> noise(clip.samples.size());
  double noise_power = 0.0;
  for (auto& v : noise) {
    v = static_cast<float>(rng.gaussian());
    noise_power += static_cast<double>(v) * v;
  }
  double signal_power = 0.0;
  for (const float s : clip.samples) signal_power += static_cast<double>(s) * s;
  // Scale the noise so the realized SNR is the target exactly.
  const double gain =
      std::sqrt(signal_power / (noise_power * std::pow(10.0, snr_db / 10.0)));
  audio::AudioClip out = clip;
  for (size_t i = 0; i < out.samples.size(); ++i) {
    out.samples[i] += static_cast<float>(gain * noise[i]);
  }
  return out;
}

audio::AudioClip degrade_lowpass(const audio::AudioClip& clip, int level) {
  const double cutoff = 7600.0 - (7600.0 - 800.0) * level / 9.0;
  Biquad filter;
  filter.set_lowpass(cutoff, 0.7071067811865476, clip.sample_rate);
  audio::AudioClip out = clip;
  for (auto& s : out.samples) s = filter.process(s);
  return out;
}

audio::AudioClip degrade_clip(const audio::AudioClip& clip, int level) {
  float peak = 0.0f;
  for (const float s : clip.samples) peak = std::max(peak, std::abs(s));
  const float threshold =
      peak * static_cast<float>(1.0 - 0.9 * level / 9.0);
  audio::AudioClip out = clip;
  for (auto& s : out.samples) s = std::clamp(s, -threshold, threshold);
  return out;
}

audio::AudioClip degrade_reverb(const audio::AudioClip& clip, int level,
                                Rng& rng) {
  const double rt60 = 1.2 * level / 9.0;
  if (rt60 <= 0.0) return clip;

  const int rate = clip.sample_rate;
  const auto ir_len = static_cast<size_t>(std::llround(rt60 * rate));
  std::vector<float> ir(ir_len);
  // -60 dB at rt60: amplitude decays by 10^-3 over ir_len samples.
  const double decay = std::log(1000.0) / static_cast<double>(ir_len);
  ir[0] = 1.0f;  // direct path
  for (size_t i = 1; i < ir_len; ++i) {
    ir[i] = static_cast<float>(0.5 * rng.gaussian() * std::exp(-decay * static_cast<double>(i)));
  }
  double energy = 0.0;
  for (const float v : ir) energy += static_cast<double>(v) * v;
  const double norm = 1.0 / std::sqrt(energy);
  for (auto& v : ir) v = static_cast<float>(v * norm);

  std::vector<float> wet = fft_convolve(clip.samples, ir);
  audio::AudioClip out;
  out.sample_rate = rate;
  out.samples.assign(wet.begin(), wet.begin() + clip.samples.size());
  return out;
}

}  // namespace

audio::AudioClip degrade(const audio::AudioClip& clip,
                         const DegradationSpec& spec) {
  require(spec.level_index >= 0 && spec.level_index < kQualityLevels,
          "degrade: level_index out of range: ", spec.level_index);
  require(audio::rms(clip) > 0.0, "degrade: silent input");

  Rng rng(spec.seed);
  switch (spec.kind) {
    case DegradationKind::kAdditiveNoise:
      return degrade_noise(clip, spec.level_index, rng);
    case DegradationKind::kLowpass:
      return degrade_lowpass(clip, spec.level_index);
    case DegradationKind::kClip:
      return degrade_clip(clip, spec.level_index);
    case DegradationKind::kReverb:
      return degrade_reverb(clip, spec.level_index, rng);
  }
  fail("degrade: bad kind");
}

audio::AudioClip time_stretch(const audio::AudioClip& clip, double factor) {
  require(!clip.empty(), "time_stretch: empty clip");
  require(factor > 0.0, "time_stretch: non-positive factor ", factor);

  const int window = 2 * kStretchHop;
  const int64_t n = static_cast<int64_t>(clip.samples.size());
  const int64_t analysis_hop = std::max<int64_t>(1, std::llround(kStretchHop / factor));
  const int64_t frames = n >= window ? (n - window) / analysis_hop + 1 : 1;
  const int64_t out_len = (frames - 1) * kStretchHop + window;

  std::vector<double> acc(out_len, 0.0);
  std::vector<double> win_sum(out_len, 0.0);
  std::vector<double> hann(window);
  for (int i = 0; i < window; ++i) {
    hann[i] = 0.5 * (1.0 - std::cos(kTwoPi * i / window));
  }

  for (int64_t f = 0; f < frames; ++f) {
    const int64_t src = f * analysis_hop;
    const int64_t dst = f * kStretchHop;
    for (int i = 0; i < window; ++i) {
      const double x = (src + i < n) ? clip.samples[src + i] : 0.0;
      acc[dst + i] += hann[i] * x;
      win_sum[dst + i] += hann[i];
    }
  }

  audio::AudioClip out;
  out.sample_rate = clip.sample_rate;
  out.samples.resize(out_len);
  for (int64_t i = 0; i < out_len; ++i) {
    out.samples[i] =
        win_sum[i] > 1e-6 ? static_cast<float>(acc[i] / win_sum[i]) : 0.0f;
  }
  return out;
}

audio::AudioClip augment(const audio::AudioClip& clip, AugmentKind kind,
                         Rng& rng) {
  require(!clip.empty(), "augment: empty clip");
  switch (kind) {
    case AugmentKind::kInvert: {
      audio::AudioClip out = clip;
      for (auto& s : out.samples) s = -s;
      return out;
    }
    case AugmentKind::kReverse: {
      audio::AudioClip out = clip;
      std::reverse(out.samples.begin(), out.samples.end());
      return out;
    }
    case AugmentKind::kTimeStretch:
      return time_stretch(clip, rng.uniform(0.9, 1.1));
  }
  fail("augment: bad kind");
}

}  // namespace nmrmos::synth
