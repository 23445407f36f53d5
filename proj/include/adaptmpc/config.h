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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"

#include "adaptmpc/adapter.h"
#include "adaptmpc/network.h"
#include "adaptmpc/ring.h"

namespace adaptmpc {

struct PathsConfig {
  std::string weights_dir;
  std::string features_file;
  std::string features_dtype = "f32";
  std::string utility_table;
  std::string output_dir;
};

// JSON run configuration:
//   { "fixed_point": {"frac_bits"}, "adapter": {h, r, s, scaler, d_model,
//     n_tokens, n_classes}, "env": {label, bandwidth_mbps, latency_ms},
//     "paths": {weights_dir, features_file, features_dtype, utility_table,
//     output_dir}, "seed" }
// Every section is optional; unknown keys are rejected. Relative paths are
// resolved against the config file's directory.
struct RunConfig {
  FixedPointConfig fixed_point;
  AdapterConfig adapter;
  NetworkEnv env = NetworkEnv::wan();
  PathsConfig paths;
  std::uint64_t seed = 1;

  void validate() const;
};

RunConfig parse_run_config(const nlohmann::json& doc,
                           const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& config);

nlohmann::json adapter_to_json(const AdapterConfig& config);
AdapterConfig adapter_from_json(const nlohmann::json& doc);

}  // namespace adaptmpc
