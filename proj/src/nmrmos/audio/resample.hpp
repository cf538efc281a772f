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

#include "nmrmos/audio/clip.hpp"

namespace nmrmos::audio {

/// Band-limited rate conversion with a Blackman-windowed sinc kernel
/// (24 taps per side, stretched by the decimation ratio when reducing
/// the rate). Same target rate returns the clip bit-identically.
AudioClip resample(const AudioClip& clip, int target_rate);

}  // namespace nmrmos::audio
