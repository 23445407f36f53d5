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

#include "adaptmpc/cost_model.h"

#include <gtest/gtest.h>

#include <sstream>

#include "adaptmpc/errors.h"
#include "adaptmpc/share.h"

namespace adaptmpc {
namespace {

TEST(EstimateTest, RoundsAreAffineInS) {
  EXPECT_EQ(estimate_rounds(1), 29u);
  EXPECT_EQ(estimate_rounds(2), 55u);
  EXPECT_EQ(estimate_rounds(3), 81u);
  EXPECT_THROW(estimate_rounds(0), ConfigError);
}

TEST(EstimateTest, CommunicationVolume) {
  EXPECT_NEAR(estimate_comm_gb({1, 300, 1}), 0.06, 0.005);
  EXPECT_NEAR(estimate_comm_gb({1, 240, 1}), 0.05, 0.005);
  // 2 (0.002306 + 0.02244 + 0.000578) + 0.005692
  EXPECT_NEAR(estimate_comm_gb({2, 120, 2}), 0.056340, 1e-12);
}

TEST(EstimateTest, WanLatencyTable) {
  const auto c = CostCoefficients::paper_wan();
  struct Case {
    Arch a;
    double want;
  };
  for (const Case& k : {Case{{2, 120, 2}, 2.55}, Case{{1, 300, 1}, 2.24},
                        Case{{4, 180, 1}, 1.79}, Case{{12, 300, 1}, 2.66},
                        Case{{1, 180, 1}, 1.68}}) {
    EXPECT_NEAR(estimate_latency(k.a, c).total(), k.want, 0.01) << to_string(k.a);
  }
  const auto e = estimate_latency({1, 300, 1}, c);
  // 0.02117 + 0.00344 * 300 + 0.35828 + 0.15541
  EXPECT_NEAR(e.comm_time, 1.56686, 1e-12);
  // 0.01711 + 0.00121 * 300 + 0.12311 + 0.16581
  EXPECT_NEAR(e.comp_time, 0.66903, 1e-12);
}

TEST(EstimateTest, UnknownEnvironment) {
  EXPECT_EQ(coefficients_for("WAN").env, "WAN");
  EXPECT_THROW(coefficients_for("LAN"), ConfigError);
  CostCoefficients lan;
  lan.env = "LAN";
  const std::vector<CostCoefficients> fitted{lan};
  EXPECT_EQ(&coefficients_for("LAN", fitted), &fitted[0]);
}

TEST(EstimateTest, BaselineRatio) {
  EXPECT_NEAR(static_cast<double>(kSftBaselineWan.rounds) / estimate_rounds(1),
              2.66, 0.005);
}

std::vector<ProfileSample> synthetic(const CostCoefficients& truth,
                                     double noise, std::uint64_t seed) {
  Prg prg(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<ProfileSample> out;
  for (int s : {1, 2, 3}) {
    for (int h : {1, 2, 4}) {
      for (int r : {4, 8, 16}) {
        const Arch a{h, r, s};
        ProfileSample p;
        p.arch = a;
        p.comm_time_s = truth.comm_time(a) * (1 + noise * n(prg));
        p.comp_time_s = truth.comp_time(a) * (1 + noise * n(prg));
        out.push_back(p);
      }
    }
  }
  return out;
}

TEST(FitTest, ExactRecovery) {
  const auto truth = CostCoefficients::paper_wan();
  const auto fit = fit_cost_model(synthetic(truth, 0.0, 1), "WAN");
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(fit.comm[k], truth.comm[k], 1e-9);
    EXPECT_NEAR(fit.comp[k], truth.comp[k], 1e-9);
  }
  EXPECT_NEAR(fit.r2_comm, 1.0, 1e-12);
  EXPECT_NEAR(fit.r2_comp, 1.0, 1e-12);
}

TEST(FitTest, ConstantSIsUnderdetermined) {
  std::vector<ProfileSample> v;
  for (int h : {1, 2, 4})
    for (int r : {4, 8}) v.push_back({{h, r, 1}, 1.0, 1.0, 29, 1});
  try {
    fit_cost_model(v, "x");
    FAIL() << "expected UnderdeterminedError";
  } catch (const UnderdeterminedError& e) {
    EXPECT_NE(std::string(e.what()).find(" s"), std::string::npos);
  }
}

TEST(FitTest, TooFewSamples) {
  std::vector<ProfileSample> v{{{1, 4, 1}, 1, 1, 0, 0}, {{2, 8, 2}, 2, 2, 0, 0}};
  EXPECT_THROW(fit_cost_model(v, "x"), UnderdeterminedError);
}

TEST(FitTest, CollinearDesignIsRejected) {
  // h, r and s vary but h = s and r = 4 s: columns h s and r s are collinear
  // with s^2.
  std::vector<ProfileSample> v;
  for (int s : {1, 2, 3, 4, 5}) v.push_back({{s, 4 * s, s}, 1.0 * s, 1, 0, 0});
  EXPECT_THROW(fit_cost_model(v, "x"), UnderdeterminedError);
}

TEST(CsvTest, RoundTrip) {
  const auto v = synthetic(CostCoefficients::paper_wan(), 0.01, 3);
  std::stringstream ss;
  write_profile_csv(ss, v);
  const auto back = read_profile_csv(ss);
  ASSERT_EQ(back.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(back[i].arch, v[i].arch);
    EXPECT_EQ(back[i].comm_time_s, v[i].comm_time_s);
    EXPECT_EQ(back[i].comp_time_s, v[i].comp_time_s);
  }
}

TEST(CsvTest, RejectsBadHeaderAndRows) {
  std::stringstream bad_header("h,r,s\n1,2,3\n");
  EXPECT_THROW(read_profile_csv(bad_header), FormatError);
  std::stringstream bad_row(
      "h,r,s,comm_time_s,comp_time_s,rounds,bytes\n1,2,3,x,1,1,1\n");
  EXPECT_THROW(read_profile_csv(bad_row), FormatError);
}

TEST(CoefficientsJsonTest, RoundTrip) {
  const auto c = CostCoefficients::paper_wan();
  const auto back = coefficients_from_json(to_json(c));
  EXPECT_EQ(back.env, c.env);
  EXPECT_EQ(back.comm, c.comm);
  EXPECT_EQ(back.comp, c.comp);
  EXPECT_THROW(coefficients_from_json(nlohmann::json{{"env", "x"}}),
               FormatError);
}

TEST(ProfileTest, RoundsMatchEstimateAndBytesGrowWithRank) {
  std::vector<Arch> grid{{1, 4, 1}, {1, 8, 1}, {1, 16, 1}, {2, 8, 2}};
  const auto samples = profile_pipeline(grid, AdapterConfig{},
                                        NetworkEnv::wan(), 5);
  for (const auto& p : samples) {
    EXPECT_EQ(p.rounds, estimate_rounds(p.arch.s)) << to_string(p.arch);
    EXPECT_GT(p.comm_time_s, 0);
  }
  EXPECT_LT(samples[0].bytes, samples[1].bytes);
  EXPECT_LT(samples[1].bytes, samples[2].bytes);

  const auto again = profile_pipeline(grid, AdapterConfig{}, NetworkEnv::wan(), 5);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_EQ(again[i].rounds, samples[i].rounds);
    EXPECT_EQ(again[i].bytes, samples[i].bytes);
    EXPECT_EQ(again[i].comm_time_s, samples[i].comm_time_s);
  }
}

}  // namespace
}  // namespace adaptmpc
