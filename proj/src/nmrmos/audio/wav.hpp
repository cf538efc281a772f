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

#include "nmrmos/audio/clip.hpp"

namespace nmrmos::audio {

/// Reads a RIFF/WAVE file: PCM 8/16/24-bit integer or 32-bit float,
/// 1 or 2 channels. Stereo is averaged to mono; samples are scaled
/// to [-1, 1]. Throws with the offending field on malformed input.
AudioClip load_wav(const std::string& path);

/// load_wav followed by resampling to the canonical 16 kHz rate.
AudioClip load_wav_canonical(const std::string& path);

/// Writes mono PCM 16-bit little-endian. Samples are clamped to [-1, 1].
void save_wav_pcm16(const std::string& path, const AudioClip& clip);

}  // namespace nmrmos::audio
