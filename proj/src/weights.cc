// Copyright 2026 The adaptmpc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "adaptmpc/weights.h"

#include <fstream>

#include "json.hpp"

#include "adaptmpc/config.h"
#include "adaptmpc/errors.h"

namespace adaptmpc {

namespace {

using nlohmann::json;

constexpr const char* kFormatName = "adaptmpc-weights";

}  // namespace

void save_weights(const std::filesystem::path& dir,
                  const PipelineParams<FixedTensor>& params,
                  const AdapterConfig& config, DType dtype) {
  config.validate();
  if (params.adapters.size() != static_cast<std::size_t>(config.s)) {
    throw ConfigError("weights hold " + std::to_string(params.adapters.size()) +
                      " adapters, config says " + std::to_string(config.s));
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  const auto expected = param_shapes(config);
  json tensors = json::array();
  std::size_t i = 0;
  params.for_each([&](const std::string& name, const FixedTensor& t) {
    if (name != expected[i].first || t.shape() != expected[i].second) {
      throw ShapeError("tensor " + name + " does not match the adapter config");
    }
    tensors.push_back({{"name", name},
                       {"shape", {t.rows(), t.cols()}},
                       {"dtype", std::string(dtype_name(dtype))}});
    ++i;
  });

  const auto bin_path = dir / kWeightsFile;
  std::ofstream bin(bin_path, std::ios::binary);
  if (!bin) throw IoError("cannot write " + bin_path.string());
  params.for_each([&](const std::string&, const FixedTensor& t) {
    write_tensor(bin, t, dtype);
  });
  if (!bin) throw IoError("write failed: " + bin_path.string());

  const json manifest = {{"format", kFormatName},
                         {"version", 1},
                         {"adapter", adapter_to_json(config)},
                         {"tensors", tensors}};
  const auto man_path = dir / kManifestFile;
  std::ofstream man(man_path);
  if (!man) throw IoError("cannot write " + man_path.string());
  man << manifest.dump(2) << "\n";
}

WeightsBundle load_weights(const std::filesystem::path& dir,
                           const FixedPointConfig& fixed) {
  const auto man_path = dir / kManifestFile;
  std::ifstream man(man_path);
  if (!man) throw IoError("cannot open weights manifest " + man_path.string());
  json manifest;
  try {
    manifest = json::parse(man);
  } catch (const json::parse_error& e) {
    throw FormatError(man_path.string() + ": " + e.what());
  }
  if (manifest.value("format", "") != kFormatName ||
      manifest.value("version", 0) != 1) {
    throw FormatError(man_path.string() + ": not an adaptmpc weights manifest");
  }

  WeightsBundle out;
  out.config = adapter_from_json(manifest.at("adapter"));
  const auto expected = param_shapes(out.config);
  const json& tensors = manifest.at("tensors");
  if (!tensors.is_array() || tensors.size() != expected.size()) {
    throw FormatError(man_path.string() + ": expected " +
                      std::to_string(expected.size()) + " tensors");
  }

  const auto bin_path = dir / kWeightsFile;
  std::ifstream bin(bin_path, std::ios::binary);
  if (!bin) throw IoError("cannot open weights file " + bin_path.string());

  out.params.adapters.resize(out.config.s);
  std::size_t i = 0;
  out.params.for_each([&](const std::string& name, FixedTensor& t) {
    const json& entry = tensors[i];
    std::array<Index, 2> shape{};
    DType dtype;
    try {
      if (entry.at("name").get<std::string>() != name) {
        throw FormatError("manifest entry " + std::to_string(i) + " is " +
                          entry.at("name").get<std::string>() +
                          ", expected " + name);
      }
      shape = entry.at("shape").get<std::array<Index, 2>>();
      dtype = parse_dtype(entry.at("dtype").get<std::string>());
    } catch (const json::exception& e) {
      throw FormatError(man_path.string() + ": " + e.what());
    }
    if (shape != expected[i].second) {
      throw ShapeError("manifest shape of " + name + " disagrees with config");
    }
    t = read_tensor(bin, dtype, fixed);
    if (t.shape() != shape) {
      throw ShapeError(bin_path.string() + ": " + name + " has shape " +
                       std::to_string(t.rows()) + "x" + std::to_string(t.cols()));
    }
    ++i;
  });
  if (bin.peek() != std::char_traits<char>::eof()) {
    throw FormatError(bin_path.string() + ": trailing bytes");
  }
  return out;
}

}  // namespace adaptmpc
