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
#include <string>

#include "adaptmpc/errors.h"
#include "adaptmpc/meter.h"

namespace adaptmpc {

struct NetworkEnv {
  std::string label;
  double bandwidth_bps = 0;  // bits per second
  double latency_s = 0;      // one-way

  void validate() const;

  // 1 Gbps, 0.5 ms.
  static NetworkEnv lan();
  // 400 Mbps, 4 ms.
  static NetworkEnv wan();
  static NetworkEnv by_label(const std::string& label);
};

// rounds * 2 * latency + total_bytes * 8 / bandwidth.
double simulate_latency(std::uint64_t rounds, std::uint64_t total_bytes,
                        const NetworkEnv& env);

// Uses online rounds and bytes of a meter; pass CommMeter::merge(m0, m1) to
// charge both directions.
double simulate_latency(const CommMeter& meter, const NetworkEnv& env);

}  // namespace adaptmpc
