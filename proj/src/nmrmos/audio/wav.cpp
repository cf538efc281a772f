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

#include "nmrmos/audio/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <vector>

#include "nmrmos/audio/resample.hpp"
#include "nmrmos/common/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "WAV I/O assumes a little-endian host");

namespace nmrmos::audio {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatIeeeFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint32_t read_u32(const uint8_t* p) {
  uint32_t v;
  std::memcpy(&v, p, 4);
  return v;
}

uint16_t read_u16(const uint8_t* p) {
  uint16_t v;
  std::memcpy(&v, p, 2);
  return v;
}

float decode_sample(const uint8_t* p, uint16_t bits, uint16_t format) {
  if (format == kFormatIeeeFloat) {
    float f;
    std::memcpy(&f, p, 4);
    return std::clamp(f, -1.0f, 1.0f);
  }
  switch (bits) {
    case 8:
      // 8-bit PCM is unsigned with a 128 offset.
      return (static_cast<int>(p[0]) - 128) / 128.0f;
    case 16: {
      int16_t v;
      std::memcpy(&v, p, 2);
      return static_cast<float>(v) / 32768.0f;
    }
    case 24: {
      int32_t v = (p[0]) | (p[1] << 8) | (p[2] << 16);
      if (v & 0x800000) v |= ~0xFFFFFF;  // sign-extend
      return static_cast<float>(v) / 8388608.0f;
    }
    default:
      fail("load_wav: unsupported bit depth ", bits);
  }
}

}  // namespace

AudioClip load_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "load_wav: cannot open file '", path, "'");
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());

  require(bytes.size() >= 12, "load_wav: truncated header (", bytes.size(),
          " bytes, need at least 12 for RIFF/WAVE)");
  require(std::memcmp(bytes.data(), "RIFF", 4) == 0,
          "load_wav: missing RIFF magic in '", path, "'");
  require(std::memcmp(bytes.data() + 8, "WAVE", 4) == 0,
          "load_wav: missing WAVE form type in '", path, "'");

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  bool have_fmt = false;
  const uint8_t* data = nullptr;
  uint32_t data_size = 0;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const uint32_t chunk_size = read_u32(bytes.data() + pos + 4);
    const size_t body = pos + 8;
    require(body + chunk_size <= bytes.size(),
            "load_wav: truncated header (chunk '", std::string(id, 4),
            "' claims ", chunk_size, " bytes past end of file)");
    if (std::memcmp(id, "fmt ", 4) == 0) {
      require(chunk_size >= 16, "load_wav: fmt chunk too small (", chunk_size,
              " bytes)");
      format = read_u16(bytes.data() + body);
      channels = read_u16(bytes.data() + body + 2);
      sample_rate = read_u32(bytes.data() + body + 4);
      bits = read_u16(bytes.data() + body + 14);
      if (format == kFormatExtensible) {
        require(chunk_size >= 40,
                "load_wav: extensible fmt chunk too small (", chunk_size,
                " bytes)");
        // Sub-format GUID starts with the effective format code.
        format = read_u16(bytes.data() + body + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = chunk_size;
    }
    pos = body + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }

  require(have_fmt, "load_wav: no fmt chunk in '", path, "'");
  require(data != nullptr, "load_wav: no data chunk in '", path, "'");
  require(format == kFormatPcm || format == kFormatIeeeFloat,
          "load_wav: unsupported encoding (format tag ", format,
          "; only PCM and IEEE float are handled)");
  require(channels == 1 || channels == 2, "load_wav: unsupported channel count ",
          channels);
  require(sample_rate > 0, "load_wav: zero sample rate");
  if (format == kFormatIeeeFloat) {
    require(bits == 32, "load_wav: unsupported float bit depth ", bits);
  } else {
    require(bits == 8 || bits == 16 || bits == 24,
            "load_wav: unsupported bit depth ", bits);
  }

  const uint32_t bytes_per_sample = bits / 8;
  const uint32_t frame_size = bytes_per_sample * channels;
  const uint32_t frames = data_size / frame_size;

  AudioClip clip;
  clip.sample_rate = static_cast<int>(sample_rate);
  clip.samples.resize(frames);
  for (uint32_t i = 0; i < frames; ++i) {
    const uint8_t* frame = data + static_cast<size_t>(i) * frame_size;
    float acc = 0.0f;
    for (uint16_t c = 0; c < channels; ++c) {
      acc += decode_sample(frame + c * bytes_per_sample, bits, format);
    }
    clip.samples[i] = acc / channels;
  }
  return clip;
}

AudioClip load_wav_canonical(const std::string& path) {
  return resample(load_wav(path), kCanonicalRate);
}

void save_wav_pcm16(const std::string& path, const AudioClip& clip) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "save_wav: cannot open '", path, "' for writing");

  const uint32_t n = static_cast<uint32_t>(clip.samples.size());
  const uint32_t data_size = n * 2;
  const uint32_t sample_rate = static_cast<uint32_t>(clip.sample_rate);
  const uint32_t byte_rate = sample_rate * 2;

  auto put_u32 = [&](uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
  auto put_u16 = [&](uint16_t v) { out.write(reinterpret_cast<const char*>(&v), 2); };

  out.write("RIFF", 4);
  put_u32(36 + data_size);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put_u32(16);
  put_u16(kFormatPcm);
  put_u16(1);  // mono
  put_u32(sample_rate);
  put_u32(byte_rate);
  put_u16(2);   // block align
  put_u16(16);  // bits
  out.write("data", 4);
  put_u32(data_size);

  for (const float s : clip.samples) {
    const double scaled = std::clamp(static_cast<double>(s), -1.0, 1.0) * 32768.0;
    const int32_t q = std::clamp<int32_t>(
        static_cast<int32_t>(std::lround(scaled)), -32768, 32767);
    const int16_t v = static_cast<int16_t>(q);
    out.write(reinterpret_cast<const char*>(&v), 2);
  }
  require(out.good(), "save_wav: write failed for '", path, "'");
}

}  // namespace nmrmos::audio
