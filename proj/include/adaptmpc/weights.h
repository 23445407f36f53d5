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

#include <filesystem>

#include "adaptmpc/adapter.h"
#include "adaptmpc/ring.h"
#include "adaptmpc/tensor_io.h"

namespace adaptmpc {

// A weights directory holds
//   manifest.json  {"format": "adaptmpc-weights", "version": 1,
//                   "adapter": {...}, "tensors": [{name, shape, dtype}, ...]}
//   weights.bin    one tensor record per manifest entry, in order.
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kWeightsFile = "weights.bin";

struct WeightsBundle {
  AdapterConfig config;
  PipelineParams<FixedTensor> params;
};

void save_weights(const std::filesystem::path& dir,
                  const PipelineParams<FixedTensor>& params,
                  const AdapterConfig& config, DType dtype = DType::kF32);

// Checks names and shapes against the adapter config in the manifest.
WeightsBundle load_weights(const std::filesystem::path& dir,
                           const FixedPointConfig& fixed);

}  // namespace adaptmpc
