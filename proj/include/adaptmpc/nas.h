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
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "adaptmpc/cost_model.h"
#include "adaptmpc/share.h"

namespace adaptmpc {

using HeadRank = std::pair<int, int>;  // (h, r)

struct SearchSpace {
  std::vector<int> heads;
  std::vector<int> ranks;
  int s_max = 1;
  int h_init = 0;  // 0: smallest head count
  int r_init = 0;  // 0: smallest rank
  int delta = 1;

  void validate() const;
  // Pairs with r divisible by h, in (h, r) order.
  std::vector<HeadRank> valid_pairs() const;
  int init_h() const;
  int init_r() const;
};

struct SearchTargets {
  double u_target = 1.0;
  double l_target = 1.0;  // seconds
  int t_target = 10;      // patience

  void validate() const;
};

using LatencyModel = std::function<double(const Arch&)>;

// Total of the two affine forms.
LatencyModel latency_model(const CostCoefficients& c);

class UtilityEvaluator {
 public:
  virtual ~UtilityEvaluator() = default;
  // Utility in [0, 1]; deterministic per architecture.
  virtual double evaluate(const Arch& a) = 0;
};

// Utility table, CSV with header h,r,s,utility.
class TableEvaluator : public UtilityEvaluator {
 public:
  explicit TableEvaluator(std::map<std::tuple<int, int, int>, double> table);
  static TableEvaluator load(const std::filesystem::path& path);
  static TableEvaluator parse(std::istream& is);

  double evaluate(const Arch& a) override;
  const std::map<std::tuple<int, int, int>, double>& table() const {
    return table_;
  }

 private:
  std::map<std::tuple<int, int, int>, double> table_;
};

// Runs `<command> --h H --r R --s S` and reads one decimal from stdout.
class CommandEvaluator : public UtilityEvaluator {
 public:
  explicit CommandEvaluator(std::string command);
  double evaluate(const Arch& a) override;

 private:
  std::string command_;
};

class FunctionEvaluator : public UtilityEvaluator {
 public:
  explicit FunctionEvaluator(std::function<double(const Arch&)> fn)
      : fn_(std::move(fn)) {}
  double evaluate(const Arch& a) override;

 private:
  std::function<double(const Arch&)> fn_;
};

struct ControllerOptions {
  double learning_rate = 0.1;
  double temperature = 1.0;
  double baseline_decay = 0.9;
};

// Samples (h, r) pairs. Softmax mode draws from softmax(theta / T) and learns
// with REINFORCE against a moving-average baseline. Exhaustive mode walks the
// pairs in a fixed order and ignores rewards.
class Controller {
 public:
  enum class Mode { kSoftmax, kExhaustive };

  Controller(std::vector<HeadRank> pairs, std::uint64_t seed,
             ControllerOptions options = {});
  static Controller exhaustive(std::vector<HeadRank> pairs);

  Mode mode() const { return mode_; }
  const std::vector<HeadRank>& pairs() const { return pairs_; }
  const std::vector<double>& theta() const { return theta_; }
  std::vector<double> probabilities() const;
  double baseline() const { return baseline_; }

  // Called when the search moves to a new adapter count. Exhaustive mode
  // re-sorts by (latency at s, h r, h) and restarts its cycle.
  void begin_stage(int s, const LatencyModel& latency);

  HeadRank sample();
  void update(const HeadRank& pair, double reward);

 private:
  Controller() = default;
  std::size_t index_of(const HeadRank& pair) const;

  Mode mode_ = Mode::kSoftmax;
  std::vector<HeadRank> pairs_;
  std::vector<double> theta_;
  ControllerOptions options_;
  Prg prg_;
  double baseline_ = 0;
  bool has_baseline_ = false;
  std::size_t cursor_ = 0;
};

struct EvalRecord {
  Arch arch;
  double latency = 0;
  double utility = 0;
};

struct SearchResult {
  bool found = false;  // false: nothing feasible
  Arch arch;
  double utility = 0;
  double latency = 0;
  bool met_target = false;
  std::uint64_t samples = 0;
  std::vector<EvalRecord> evaluations;
};

struct SearchOptions {
  // Hard stop on controller draws, across all stages.
  std::uint64_t max_samples = 10000;
};

SearchResult nas_search(const SearchTargets& targets,
                        const LatencyModel& latency, const SearchSpace& space,
                        UtilityEvaluator& evaluator, Controller& controller,
                        const SearchOptions& options = {});

// Evaluates every feasible configuration and applies the selection rule:
// least latency with U >= U_target (ties: smaller s, h r, h), else the best
// utility within the latency budget.
SearchResult brute_force_search(const SearchTargets& targets,
                                const LatencyModel& latency,
                                const SearchSpace& space,
                                UtilityEvaluator& evaluator);

}  // namespace adaptmpc
