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

#include "adaptmpc/nas.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "adaptmpc/errors.h"

namespace adaptmpc {
namespace {

SearchSpace demo_space() {
  SearchSpace sp;
  sp.heads = {1, 2, 4, 6, 12};
  sp.ranks = {60, 120, 180, 240, 300};
  sp.s_max = 2;
  return sp;
}

TableEvaluator demo_table() {
  return TableEvaluator::load(std::filesystem::path(ADAPTMPC_DATA_DIR) /
                              "demo_utility.csv");
}

TEST(SearchSpaceTest, MasksIndivisiblePairs) {
  SearchSpace sp;
  sp.heads = {1, 2, 3};
  sp.ranks = {4, 6};
  const std::vector<HeadRank> want{{1, 4}, {1, 6}, {2, 4}, {2, 6}, {3, 6}};
  EXPECT_EQ(sp.valid_pairs(), want);
  EXPECT_EQ(sp.init_h(), 1);
  EXPECT_EQ(sp.init_r(), 4);
  sp.heads = {5};
  EXPECT_THROW(sp.validate(), ConfigError);
}

TEST(ControllerTest, UniformDraws) {
  Controller c({{1, 1}, {1, 2}, {2, 2}, {2, 4}}, 42);
  std::map<HeadRank, int> counts;
  const int n = 10000;
  for (int i = 0; i < n; ++i) ++counts[c.sample()];
  for (const auto& [pair, k] : counts) {
    EXPECT_NEAR(static_cast<double>(k) / n, 0.25, 0.03);
  }
}

TEST(ControllerTest, SinglePairAndDeterminism) {
  Controller one({{2, 8}}, 1);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(one.sample(), HeadRank(2, 8));

  const std::vector<HeadRank> pairs{{1, 4}, {2, 4}, {4, 4}};
  Controller a(pairs, 9), b(pairs, 9);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.sample(), b.sample());
}

TEST(ControllerTest, UpdateFollowsAdvantageSign) {
  Controller c({{1, 4}, {2, 4}}, 3);
  c.update({1, 4}, 1.0);  // sets the baseline, no change
  EXPECT_EQ(c.theta()[0], 0.0);
  EXPECT_EQ(c.baseline(), 1.0);
  const double p0 = c.probabilities()[0];
  c.update({1, 4}, 2.0);
  EXPECT_DOUBLE_EQ(c.theta()[0], 0.1);
  EXPECT_GT(c.probabilities()[0], p0);
  EXPECT_DOUBLE_EQ(c.baseline(), 0.9 * 1.0 + 0.1 * 2.0);

  const auto before = c.theta();
  c.update({2, 4}, c.baseline());
  EXPECT_EQ(c.theta(), before);
}

TEST(ControllerTest, RepeatedRewardConcentrates) {
  const std::vector<HeadRank> pairs{{1, 4}, {2, 4}, {4, 4}};
  Controller c(pairs, 11);
  c.update({1, 4}, 0.0);
  for (int i = 0; i < 300; ++i) {
    const auto p = c.sample();
    c.update(p, p == HeadRank(4, 4) ? 1.0 : 0.0);
  }
  EXPECT_GT(c.probabilities()[2], 0.9);
}

TEST(ControllerTest, ExhaustiveCyclesInLatencyOrder) {
  auto c = Controller::exhaustive({{1, 4}, {2, 4}, {1, 8}});
  c.begin_stage(1, [](const Arch& a) { return 10.0 - a.r - a.h; });
  EXPECT_EQ(c.sample(), HeadRank(1, 8));
  EXPECT_EQ(c.sample(), HeadRank(2, 4));
  EXPECT_EQ(c.sample(), HeadRank(1, 4));
  EXPECT_EQ(c.sample(), HeadRank(1, 8));
}

TEST(TableEvaluatorTest, ParsesAndRejects) {
  std::istringstream ok("h,r,s,utility\n1,4,1,0.5\n2,4,1,0.75\n");
  auto t = TableEvaluator::parse(ok);
  EXPECT_EQ(t.evaluate({2, 4, 1}), 0.75);
  EXPECT_THROW(t.evaluate({4, 4, 1}), ConfigError);
  std::istringstream range("h,r,s,utility\n1,4,1,1.5\n");
  EXPECT_THROW(TableEvaluator::parse(range), FormatError);
  std::istringstream dup("h,r,s,utility\n1,4,1,0.5\n1,4,1,0.5\n");
  EXPECT_THROW(TableEvaluator::parse(dup), FormatError);
}

TEST(CommandEvaluatorTest, ReadsStdout) {
  const auto dir = std::filesystem::temp_directory_path() / "adaptmpc_eval";
  std::filesystem::create_directories(dir);
  const auto script = dir / "eval.sh";
  {
    std::ofstream os(script);
    os << "#!/bin/sh\n# --h H --r R --s S\necho \"0.$2$4$6\"\n";
  }
  std::filesystem::permissions(script, std::filesystem::perms::owner_all);
  CommandEvaluator ev(script.string());
  EXPECT_DOUBLE_EQ(ev.evaluate({1, 2, 3}), 0.123);

  const auto bad = dir / "bad.sh";
  {
    std::ofstream os(bad);
    os << "#!/bin/sh\nexit 3\n";
  }
  std::filesystem::permissions(bad, std::filesystem::perms::owner_all);
  CommandEvaluator failing(bad.string());
  EXPECT_THROW(failing.evaluate({1, 2, 3}), IoError);
}

TEST(NasTest, SingleConfigSpace) {
  SearchSpace sp;
  sp.heads = {2};
  sp.ranks = {8};
  int calls = 0;
  FunctionEvaluator ev([&](const Arch&) {
    ++calls;
    return 0.9;
  });
  auto c = Controller::exhaustive(sp.valid_pairs());
  const auto res = nas_search({0.8, 10.0, 5}, [](const Arch&) { return 1.0; },
                              sp, ev, c);
  EXPECT_TRUE(res.met_target);
  EXPECT_EQ(res.arch, (Arch{2, 8, 1}));
  EXPECT_EQ(calls, 1);
}

TEST(NasTest, FallsBackToBestUtilityWithinBudget) {
  SearchSpace sp;
  sp.heads = {1, 2};
  sp.ranks = {4, 8};
  sp.s_max = 2;
  FunctionEvaluator ev([](const Arch& a) { return 0.1 * a.h + 0.01 * a.r; });
  const LatencyModel lat = [](const Arch& a) { return 1.0 * a.s; };
  auto c = Controller::exhaustive(sp.valid_pairs());
  const auto res = nas_search({0.99, 10.0, 8}, lat, sp, ev, c);
  EXPECT_FALSE(res.met_target);
  EXPECT_EQ(res.arch, (Arch{2, 8, 1}));
}

TEST(NasTest, NeverEvaluatesOverBudgetOrEscalated) {
  SearchSpace sp;
  sp.heads = {1, 2, 4};
  sp.ranks = {4, 8, 16};
  sp.s_max = 3;
  // h = 4 at any s costs more than the reference config at s + 1.
  const LatencyModel lat = [](const Arch& a) {
    return a.s * (1.0 + (a.h == 4 ? 5.0 : 0.0)) + 0.01 * a.r;
  };
  const double l_target = 2.5;
  std::vector<Arch> seen;
  FunctionEvaluator ev([&](const Arch& a) {
    seen.push_back(a);
    return 0.5;
  });
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Controller c(sp.valid_pairs(), seed);
    const auto res = nas_search({0.9, l_target, 6}, lat, sp, ev, c);
    EXPECT_LE(res.latency, l_target);
  }
  ASSERT_FALSE(seen.empty());
  for (const Arch& a : seen) {
    EXPECT_NE(a.h, 4) << to_string(a);
    EXPECT_LE(lat(a), l_target) << to_string(a);
  }
}

TEST(NasTest, StochasticFindsUniqueWinner) {
  // Utility rises with r; only (4, 16, 1) is both within budget and on target.
  SearchSpace sp;
  sp.heads = {1, 2, 4};
  sp.ranks = {4, 8, 16};
  sp.s_max = 2;
  const LatencyModel lat = [](const Arch& a) {
    return 0.5 * a.s + 0.01 * a.h + 0.01 * a.r;
  };
  FunctionEvaluator ev([](const Arch& a) {
    return std::min(1.0, 0.5 + 0.02 * a.r + 0.05 * a.h + 0.2 * (a.s - 1));
  });
  const SearchTargets t{0.99, 0.8, 30};
  const auto oracle = brute_force_search(t, lat, sp, ev);
  ASSERT_TRUE(oracle.met_target);
  EXPECT_EQ(oracle.arch, (Arch{4, 16, 1}));
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Controller c(sp.valid_pairs(), seed);
    const auto res = nas_search(t, lat, sp, ev, c, {200});
    hits += res.arch == oracle.arch;
  }
  EXPECT_GE(hits, 19);
}

TEST(BruteForceTest, HandEnumeratedWinner) {
  // 2 x 2 x 1: latency 1.0 + 0.1 h + 0.01 r.
  //   (1,2) 1.12 u .70   (1,4) 1.14 u .85   (2,2) 1.22 u .90   (2,4) 1.24 u .95
  SearchSpace sp;
  sp.heads = {1, 2};
  sp.ranks = {2, 4};
  std::istringstream csv(
      "h,r,s,utility\n1,2,1,0.70\n1,4,1,0.85\n2,2,1,0.90\n2,4,1,0.95\n");
  auto table = TableEvaluator::parse(csv);
  const LatencyModel lat = [](const Arch& a) {
    return 1.0 + 0.1 * a.h + 0.01 * a.r;
  };
  const auto res = brute_force_search({0.88, 5.0, 3}, lat, sp, table);
  EXPECT_EQ(res.arch, (Arch{2, 2, 1}));
  EXPECT_TRUE(res.met_target);

  const auto none = brute_force_search({0.5, 0.5, 3}, lat, sp, table);
  EXPECT_FALSE(none.found);

  const auto fastest = brute_force_search({0.0, 5.0, 3}, lat, sp, table);
  EXPECT_EQ(fastest.arch, (Arch{1, 2, 1}));

  const auto fallback = brute_force_search({0.99, 1.2, 3}, lat, sp, table);
  EXPECT_FALSE(fallback.met_target);
  EXPECT_EQ(fallback.arch, (Arch{1, 4, 1}));
}

TEST(BruteForceTest, TiesPreferSmallerConfig) {
  SearchSpace sp;
  sp.heads = {1, 2};
  sp.ranks = {4};
  sp.s_max = 2;
  FunctionEvaluator ev([](const Arch&) { return 1.0; });
  const auto res =
      brute_force_search({0.5, 5.0, 3}, [](const Arch&) { return 1.0; }, sp, ev);
  EXPECT_EQ(res.arch, (Arch{1, 4, 1}));
}

TEST(DemoTableTest, ExhaustiveSearchMatchesBruteForce) {
  auto table = demo_table();
  const auto sp = demo_space();
  EXPECT_EQ(table.table().size(), 50u);
  const auto lat = latency_model(CostCoefficients::paper_wan());
  for (double u : {0.0, 0.90, 0.92, 0.93, 0.94, 0.95}) {
    const SearchTargets t{u, 3.0, 40};
    auto c = Controller::exhaustive(sp.valid_pairs());
    const auto res = nas_search(t, lat, sp, table, c);
    const auto oracle = brute_force_search(t, lat, sp, table);
    EXPECT_EQ(res.arch, oracle.arch) << "U_target " << u;
    EXPECT_TRUE(res.met_target) << "U_target " << u;
    EXPECT_EQ(res.met_target, oracle.met_target) << "U_target " << u;
  }
}

TEST(DemoTableTest, EscalationCanHideConfigsFromTheSearch) {
  // At 0.96 the only target-meeting config within 3 s is {6,120,2}, which
  // costs more than {1,60,3}; at 0.99 nothing qualifies and the oracle falls
  // back to the best utility in budget. The search never looks at pairs
  // costlier than the reference config with one more adapter, so in both
  // cases it settles for less.
  auto table = demo_table();
  const auto sp = demo_space();
  const auto lat = latency_model(CostCoefficients::paper_wan());
  for (double u : {0.96, 0.99}) {
    const SearchTargets t{u, 3.0, 40};
    auto c = Controller::exhaustive(sp.valid_pairs());
    const auto res = nas_search(t, lat, sp, table, c);
    const auto oracle = brute_force_search(t, lat, sp, table);
    EXPECT_FALSE(res.met_target);
    EXPECT_EQ(oracle.met_target, u < 0.97);
    EXPECT_EQ(oracle.arch, (Arch{6, 120, 2}));
    EXPECT_EQ(res.arch, (Arch{4, 120, 2}));
    for (const auto& e : res.evaluations) {
      const double escalate =
          lat(Arch{sp.init_h(), sp.init_r(), e.arch.s + sp.delta});
      EXPECT_LE(e.latency, std::min(escalate, t.l_target)) << to_string(e.arch);
    }
    double best = 0;
    for (const auto& e : res.evaluations) best = std::max(best, e.utility);
    EXPECT_EQ(res.utility, best);
  }
}

}  // namespace
}  // namespace adaptmpc
