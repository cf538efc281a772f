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
#include <string>

#include "nmrmos/audio/clip.hpp"
#include "nmrmos/common/rng.hpp"

namespace nmrmos::synth {

inline constexpr int kQualityLevels = 10;

enum class DegradationKind {
  kAdditiveNoise,
  kLowpass,
  kClip,
  kReverb,
};

const char* to_string(DegradationKind kind);
DegradationKind degradation_kind_from_string(const std::string& name);

/// One degradation condition: what, how hard, and the randomness stream.
/// Level 0 is mildest, level 9 most degraded.
struct DegradationSpec {
  DegradationKind kind = DegradationKind::kAdditiveNoise;
  int level_index = 0;  // 0..9
  uint64_t seed = 0;
};

/// Target SNR in dB for the additive-noise ladder: 40 dB down to 4 dB.
double noise_snr_db(int level_index);

/// Quality label for a degradation level: 5 at level 0 down to 1 at level 9,
/// linear in the level and identical for all kinds.
double pseudo_mos(const DegradationSpec& spec);
double pseudo_mos_for_level(int level_index);

/// Inverse of pseudo_mos_for_level, for recovering the level from a label.
int level_for_mos(double mos);

/// Speech-like test signal: a harmonic complex (f0 in 90..250 Hz, 8 harmonics
/// with 1/k decay) with syllabic amplitude modulation at 3..6 Hz, shaped by a
/// slowly wandering resonant filter, RMS -25 dBFS. Deterministic in seed.
audio::AudioClip synth_clean(uint64_t seed, double dur_s);

/// Applies the degradation described by spec. Throws on silent input.
audio::AudioClip degrade(const audio::AudioClip& clip, const DegradationSpec& spec);

enum class AugmentKind {
  kInvert,
  kReverse,
  kTimeStretch,
};

/// Label-preserving perturbations: waveform inversion, sample-order reversal,
/// and OLA time stretching at a factor drawn uniformly from [0.9, 1.1].
audio::AudioClip augment(const audio::AudioClip& clip, AugmentKind kind, Rng& rng);

/// Time stretch at an explicit factor (exposed for tests).
audio::AudioClip time_stretch(const audio::AudioClip& clip, double factor);

/// OLA hop size in samples; stretch output length is within one hop of
/// factor * input length.
inline constexpr int kStretchHop = 512;

}  // namespace nmrmos::synth
