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

#include "adaptmpc/adapter.h"
#include "adaptmpc/channel.h"
#include "adaptmpc/meter.h"
#include "adaptmpc/network.h"
#include "adaptmpc/ring.h"
#include "adaptmpc/runtime.h"

namespace adaptmpc {

// What the model user ends up with after one private inference.
struct InferenceResult {
  RealMatrix logits;  // 1 x n_classes
  Index argmax = 0;
  std::uint64_t rounds = 0;    // online rounds
  std::uint64_t bytes = 0;     // online bytes, both directions
  std::uint64_t io_bytes = 0;  // input distribution + output delivery
  double simulated_comm_time = 0;
  double wall_comp_time = 0;
  CommMeter meter;  // the model user's own meter
};

// Both roles must agree on this before any share is exchanged.
std::uint64_t session_digest(const AdapterConfig& config,
                             const FixedPointConfig& fixed, std::uint64_t seed);

// Party 0. Holds the backbone features (N x d_model); learns only the logits.
InferenceResult run_model_user(Channel& chan, const AdapterConfig& config,
                               const FixedTensor& features, std::uint64_t seed,
                               const NetworkEnv& env);

// Party 1. Holds the adapter and head weights; learns nothing.
void run_model_server(Channel& chan, const AdapterConfig& config,
                      const PipelineParams<FixedTensor>& weights,
                      std::uint64_t seed);

// Both roles on two threads of this process.
InferenceResult infer_local(const AdapterConfig& config,
                            const FixedTensor& features,
                            const PipelineParams<FixedTensor>& weights,
                            std::uint64_t seed, const NetworkEnv& env,
                            TransportKind kind = TransportKind::kInProcess);

}  // namespace adaptmpc
