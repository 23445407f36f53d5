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

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "adaptmpc/adapter.h"
#include "adaptmpc/network.h"
#include "adaptmpc/runtime.h"

namespace adaptmpc {

// The searchable part of an adapter configuration.
struct Arch {
  int h = 1;
  int r = 8;
  int s = 1;

  friend bool operator==(const Arch&, const Arch&) = default;
};

std::string to_string(const Arch& a);

// Seconds modeled as (c1 h + c2 r + c3) s + c4, separately for
// communication and computation.
struct CostCoefficients {
  std::string env;
  std::array<double, 4> comm{};
  std::array<double, 4> comp{};
  double r2_comm = 0;
  double r2_comp = 0;

  double comm_time(const Arch& a) const;
  double comp_time(const Arch& a) const;

  // Published WAN fit (400 Mbps, 4 ms).
  static CostCoefficients paper_wan();
};

struct LatencyEstimate {
  double comm_time = 0;
  double comp_time = 0;
  double total() const { return comm_time + comp_time; }
};

// 26 s + 3.
std::uint64_t estimate_rounds(int s);
// (0.001153 h + 0.000187 r + 0.000578) s + 0.005692 GB.
double estimate_comm_gb(const Arch& a);
LatencyEstimate estimate_latency(const Arch& a, const CostCoefficients& c);

// Coefficients for `label`: an entry of `fitted` wins, otherwise the built-in
// WAN fit. Anything else throws ConfigError.
const CostCoefficients& coefficients_for(
    const std::string& label, std::span<const CostCoefficients> fitted = {});

// Baseline full fine-tuning row of the published breakdown table.
struct BaselineCosts {
  const char* env;
  double comm_gb;
  std::uint64_t rounds;
  double comm_time_s;
  double total_time_s;
  const char* source;
};
inline constexpr BaselineCosts kSftBaselineLan{"LAN", 1.55, 77, 14.40, 23.56,
                                               "Table V"};
inline constexpr BaselineCosts kSftBaselineWan{"WAN", 1.55, 77, 34.42, 45.38,
                                               "Table V"};
const BaselineCosts& sft_baseline(const std::string& env_label);

// Efficiency-first WAN architectures per dataset with their published
// measured and estimated latencies.
struct PublishedConfig {
  const char* dataset;
  Arch arch;
  double wan_measured_s;
  double wan_estimate_s;
  const char* arch_source;
  const char* estimate_source;
};
inline constexpr std::array<PublishedConfig, 5> kWanEfficiencyFirst{{
    {"CIFAR-10", {2, 120, 2}, 2.45, 2.55, "Table II", "Table IV"},
    {"CIFAR-100", {1, 300, 1}, 2.26, 2.24, "Table II", "Table IV"},
    {"Food-101", {4, 180, 1}, 1.85, 1.79, "Table II", "Table IV"},
    {"SVHN", {12, 300, 1}, 2.78, 2.66, "Table II", "Table IV"},
    {"Flowers-102", {1, 180, 1}, 1.61, 1.68, "Table II", "Table IV"},
}};

struct ProfileSample {
  Arch arch;
  double comm_time_s = 0;
  double comp_time_s = 0;
  std::uint64_t rounds = 0;
  std::uint64_t bytes = 0;
};

// Ordinary least squares on (h s, r s, s, 1) for both targets. Needs at least
// five samples and two distinct values of each of h, r and s.
CostCoefficients fit_cost_model(std::span<const ProfileSample> samples,
                                const std::string& env);

// Runs the private pipeline once per architecture. `base` supplies the
// non-searched dimensions. Communication time is simulated from the meters,
// computation time is the wall clock of the online phase.
std::vector<ProfileSample> profile_pipeline(
    std::span<const Arch> grid, const AdapterConfig& base,
    const NetworkEnv& env, std::uint64_t seed,
    TransportKind kind = TransportKind::kInProcess);

// CSV with header h,r,s,comm_time_s,comp_time_s,rounds,bytes.
void write_profile_csv(std::ostream& os, std::span<const ProfileSample> samples);
std::vector<ProfileSample> read_profile_csv(std::istream& is);
void save_profile_csv(const std::filesystem::path& path,
                      std::span<const ProfileSample> samples);
std::vector<ProfileSample> load_profile_csv(const std::filesystem::path& path);

// {env, comm: [c1..c4], comp: [...], r2_comm, r2_comp}
nlohmann::json to_json(const CostCoefficients& c);
CostCoefficients coefficients_from_json(const nlohmann::json& doc);
void save_coefficients(const std::filesystem::path& path,
                       const CostCoefficients& c);
CostCoefficients load_coefficients(const std::filesystem::path& path);

}  // namespace adaptmpc
