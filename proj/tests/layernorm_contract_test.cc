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


// Accuracy contract of the private LayerNorm: the inverse square root it
// applies must be within 5% (3-round budget) or 15% (2-round budget) of
// 1/sqrt(var) for every var in [0.1, 10].

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>

#include "adaptmpc/adapter.h"
#include "adaptmpc/private_nn.h"
#include "adaptmpc/protocols.h"
#include "adaptmpc/runtime.h"
#include "adaptmpc/share.h"

namespace adaptmpc {
namespace {

constexpr int kRows = 64;
constexpr int kCols = 32;

// Row i is +-sqrt(v_i) alternating, so its mean is 0 and its variance v_i,
// with v_i log-spaced over [0.1, 10].
RealMatrix probe_rows(std::vector<double>& vars) {
  RealMatrix x(kRows, kCols);
  vars.resize(kRows);
  for (int i = 0; i < kRows; ++i) {
    vars[i] = 0.1 * std::pow(100.0, static_cast<double>(i) / (kRows - 1));
    for (int j = 0; j < kCols; ++j) {
      x(i, j) = (j % 2 ? -1.0 : 1.0) * std::sqrt(vars[i]);
    }
  }
  return x;
}

double worst_relative_error(int budget) {
  const FixedPointConfig cfg;
  std::vector<double> vars;
  const RealMatrix x = probe_rows(vars);
  Prg prg(31);
  const auto [x0, x1] = share_arith(FixedTensor::from_real(x, cfg), prg);
  const auto [g0, g1] = share_arith(
      FixedTensor::from_real(RealMatrix::Ones(1, kCols), cfg), prg);
  const auto [b0, b1] = share_arith(
      FixedTensor::from_real(RealMatrix::Zero(1, kCols), cfg), prg);
  const auto run = [&](Channel& c) {
    Party p(c, 5);
    return c.party() == 0 ? layernorm_private(p, x0, g0, b0, budget)
                          : layernorm_private(p, x1, g1, b1, budget);
  };
  const auto res = run_two_party(run, run);
  const RealMatrix out = reconstruct_arith(res.output0, res.output1).to_real();
  double worst = 0;
  for (int i = 0; i < kRows; ++i) {
    const double want = 1.0 / std::sqrt(vars[i]);
    const double got = out(i, 0) / x(i, 0);
    worst = std::max(worst, std::fabs(got - want) / want);
  }
  std::printf("budget %d: worst relative error of 1/sqrt(var) = %.4f\n", budget,
              worst);
  return worst;
}

TEST(LayerNormContract, ThreeRoundBudgetWithinFivePercent) {
  EXPECT_LE(worst_relative_error(3), 0.05);
}

TEST(LayerNormContract, TwoRoundBudgetWithinFifteenPercent) {
  EXPECT_LE(worst_relative_error(2), 0.15);
}

}  // namespace
}  // namespace adaptmpc
