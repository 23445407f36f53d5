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


#include <gtest/gtest.h>

#include "adaptmpc/errors.h"
#include "adaptmpc/meter.h"
#include "adaptmpc/network.h"

namespace adaptmpc {
namespace {

TEST(NetworkTest, Presets) {
  EXPECT_EQ(NetworkEnv::lan().bandwidth_bps, 1e9);
  EXPECT_EQ(NetworkEnv::lan().latency_s, 0.5e-3);
  EXPECT_EQ(NetworkEnv::wan().bandwidth_bps, 400e6);
  EXPECT_EQ(NetworkEnv::wan().latency_s, 4e-3);
  EXPECT_EQ(NetworkEnv::by_label("WAN").label, "WAN");
  EXPECT_THROW(NetworkEnv::by_label("5G"), ConfigError);
}

TEST(NetworkTest, SimulateLatencyByHand) {
  const NetworkEnv wan = NetworkEnv::wan();
  EXPECT_EQ(simulate_latency(0, 0, wan), 0.0);
  EXPECT_NEAR(simulate_latency(29, 0, wan), 0.232, 1e-12);
  EXPECT_NEAR(simulate_latency(29, 60'000'000, wan), 1.432, 1e-12);
  // One 1 KB round on LAN: 1 ms RTT plus 8192 bits at 1 Gbps.
  EXPECT_NEAR(simulate_latency(1, 1024, NetworkEnv::lan()), 1e-3 + 8.192e-6,
              1e-15);
}

TEST(NetworkTest, SimulateLatencyMonotone) {
  const NetworkEnv base = NetworkEnv::wan();
  NetworkEnv slower = base;
  slower.bandwidth_bps /= 2;
  NetworkEnv farther = base;
  farther.latency_s *= 2;
  const double t = simulate_latency(10, 5000, base);
  EXPECT_LE(t, simulate_latency(11, 5000, base));
  EXPECT_LE(t, simulate_latency(10, 5001, base));
  EXPECT_LE(t, simulate_latency(10, 5000, slower));
  EXPECT_LE(t, simulate_latency(10, 5000, farther));
}

TEST(NetworkTest, RejectsBadEnv) {
  EXPECT_THROW(simulate_latency(1, 1, NetworkEnv{"x", 0, 0}), ConfigError);
  EXPECT_THROW(simulate_latency(1, 1, NetworkEnv{"x", 1, -1}), ConfigError);
}

TEST(MeterTest, CountsRoundsAndBytes) {
  CommMeter m;
  m.record_round(16);
  m.record_round(800);
  m.record_io(64);
  EXPECT_EQ(m.rounds(), 2u);
  EXPECT_EQ(m.bytes_sent(), 816u);
  EXPECT_EQ(m.io_rounds(), 1u);
  EXPECT_EQ(m.io_bytes(), 64u);
  EXPECT_NEAR(simulate_latency(m, NetworkEnv::wan()),
              2 * 0.008 + 816 * 8 / 400e6, 1e-15);
}

TEST(MeterTest, ScopesNest) {
  CommMeter m;
  {
    MeterScope a(m, "adapter");
    m.record_round(8);
    {
      MeterScope r(m, "relu");
      m.record_round(8);
      m.record_round(8);
    }
  }
  {
    MeterScope r(m, "relu");
    m.record_round(8);
  }
  EXPECT_EQ(m.stats_within("adapter").rounds, 3u);
  EXPECT_EQ(m.stats_within("relu").rounds, 3u);
  EXPECT_EQ(m.stats_within("relu").calls, 2u);
  EXPECT_EQ(m.calls_nested("adapter", "relu"), 1u);
}

TEST(MeterTest, MergeTakesMaxRoundsAndSumsBytes) {
  CommMeter a, b;
  a.record_round(10);
  a.record_round(10);
  b.record_round(30);
  b.record_round(30);
  const CommMeter m = CommMeter::merge(a, b);
  EXPECT_EQ(m.rounds(), 2u);
  EXPECT_EQ(m.bytes_sent(), 80u);
}

}  // namespace
}  // namespace adaptmpc
