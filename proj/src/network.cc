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

#include "adaptmpc/network.h"

#include <cmath>

namespace adaptmpc {

void NetworkEnv::validate() const {
  if (!(bandwidth_bps > 0) || !std::isfinite(bandwidth_bps)) {
    throw ConfigError("network bandwidth must be positive");
  }
  if (!(latency_s >= 0) || !std::isfinite(latency_s)) {
    throw ConfigError("network latency must be non-negative");
  }
}

NetworkEnv NetworkEnv::lan() { return {"LAN", 1e9, 0.5e-3}; }
NetworkEnv NetworkEnv::wan() { return {"WAN", 400e6, 4e-3}; }

NetworkEnv NetworkEnv::by_label(const std::string& label) {
  if (label == "LAN") return lan();
  if (label == "WAN") return wan();
  throw ConfigError("unknown network environment '" + label + "'");
}

double simulate_latency(std::uint64_t rounds, std::uint64_t total_bytes,
                        const NetworkEnv& env) {
  env.validate();
  return static_cast<double>(rounds) * 2.0 * env.latency_s +
         static_cast<double>(total_bytes) * 8.0 / env.bandwidth_bps;
}

double simulate_latency(const CommMeter& meter, const NetworkEnv& env) {
  return simulate_latency(meter.rounds(), meter.bytes_sent(), env);
}

}  // namespace adaptmpc
