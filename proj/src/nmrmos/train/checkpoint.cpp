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

#include "nmrmos/train/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "nmrmos/common/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace nmrmos::train {

namespace {

constexpr char kMagic[8] = {'N', 'M', 'R', 'M', 'O', 'S', 'C', 'K'};
constexpr uint32_t kVersion = 1;

void write_u32(std::ofstream& out, uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), 4);
}

void write_string(std::ofstream& out, const std::string& s) {
  write_u32(out, static_cast<uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

class Reader {
 public:
  Reader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    require(in_.good(), "load_checkpoint: cannot open '", path, "'");
  }

  void read(void* dst, size_t n, const char* what) {
    in_.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
    require(in_.gcount() == static_cast<std::streamsize>(n),
            "corrupt checkpoint '", path_, "': truncated while reading ", what);
  }

  uint32_t read_u32(const char* what) {
    uint32_t v;
    read(&v, 4, what);
    return v;
  }

  std::string read_string(const char* what) {
    const uint32_t len = read_u32(what);
    require(len < (1u << 24), "corrupt checkpoint '", path_,
            "': implausible length for ", what);
    std::string s(len, '\0');
    read(s.data(), len, what);
    return s;
  }

 private:
  std::string path_;
  std::ifstream in_;
};

}  // namespace

void save_checkpoint(const model::ModelParams& params, const nlohmann::json& meta,
                     const std::string& path) {
  params.config.validate();
  const auto named = params.named();

  std::ofstream out(path, std::ios::binary);
  require(out.good(), "save_checkpoint: cannot open '", path, "' for writing");

  out.write(kMagic, sizeof(kMagic));
  write_u32(out, kVersion);
  write_string(out, params.config.to_json().dump());
  write_string(out, meta.dump());
  write_u32(out, static_cast<uint32_t>(named.size()));
  for (const auto& [name, tensor] : named) {
    write_string(out, name);
    write_u32(out, static_cast<uint32_t>(tensor->ndim()));
    for (const int d : tensor->shape) {
      write_u32(out, static_cast<uint32_t>(d));
    }
    out.write(reinterpret_cast<const char*>(tensor->data()),
              static_cast<std::streamsize>(tensor->v.size() * sizeof(float)));
  }
  require(out.good(), "save_checkpoint: write failed for '", path, "'");
}

Checkpoint load_checkpoint(const std::string& path) {
  Reader reader(path);

  char magic[8];
  reader.read(magic, sizeof(magic), "magic");
  require(std::memcmp(magic, kMagic, sizeof(kMagic)) == 0,
          "corrupt checkpoint '", path, "': bad magic");
  const uint32_t version = reader.read_u32("version");
  require(version == kVersion, "load_checkpoint: unknown version ", version,
          " in '", path, "' (expected ", kVersion, ")");

  Checkpoint ckpt;
  try {
    ckpt.params.config =
        model::ModelConfig::from_json(nlohmann::json::parse(reader.read_string("config")));
    ckpt.meta = nlohmann::json::parse(reader.read_string("meta"));
  } catch (const nlohmann::json::exception& e) {
    fail("corrupt checkpoint '", path, "': bad header JSON: ", e.what());
  }

  const auto expected = model::parameter_shapes(ckpt.params.config);
  const uint32_t n_records = reader.read_u32("record count");
  require(n_records == expected.size(), "corrupt checkpoint '", path, "': ",
          n_records, " records for a config with ", expected.size());

  for (const auto& [want_name, want_shape] : expected) {
    const std::string name = reader.read_string("record name");
    require(name == want_name, "load_checkpoint: record '", name,
            "' where '", want_name, "' was expected in '", path, "'");
    const uint32_t ndim = reader.read_u32("record rank");
    std::vector<int> shape(ndim);
    for (auto& d : shape) {
      d = static_cast<int>(reader.read_u32("record dims"));
    }
    nn::Tensor t = nn::Tensor::zeros(shape);
    require(shape == want_shape, "load_checkpoint: record '", name,
            "': shape ", nn::shape_str(t), " does not match the config");
    reader.read(t.data(), t.v.size() * sizeof(float), name.c_str());
    ckpt.params.tensors.push_back(std::move(t));
  }
  return ckpt;
}

Checkpoint load_checkpoint(const std::string& path,
                           const model::ModelConfig& expected) {
  Checkpoint ckpt = load_checkpoint(path);
  if (ckpt.params.config != expected) {
    // Name the first structurally different record to aid diagnosis.
    const auto got = model::parameter_shapes(ckpt.params.config);
    const auto want = model::parameter_shapes(expected);
    for (size_t i = 0; i < std::min(got.size(), want.size()); ++i) {
      if (got[i] != want[i]) {
        fail("load_checkpoint: '", path, "' does not match the requested config; ",
             "first mismatched record '", got[i].first, "'");
      }
    }
    if (got.size() != want.size()) {
      fail("load_checkpoint: '", path, "' does not match the requested config (",
           got.size(), " records vs ", want.size(), ")");
    }
    fail("load_checkpoint: '", path, "' does not match the requested config ",
         "(non-parameter fields differ, e.g. input_samples)");
  }
  return ckpt;
}

}  // namespace nmrmos::train
