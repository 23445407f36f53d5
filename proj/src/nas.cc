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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <tuple>

#include <sys/wait.h>

#include "adaptmpc/errors.h"

namespace adaptmpc {

namespace {

std::tuple<int, int, int> key(const Arch& a) { return {a.h, a.r, a.s}; }

double check_utility(double u, const Arch& a) {
  if (!std::isfinite(u) || u < 0.0 || u > 1.0) {
    throw ConfigError("utility of " + to_string(a) + " outside [0, 1]");
  }
  return u;
}

// Ordering used to break latency ties.
auto tie_key(const Arch& a) {
  return std::make_tuple(a.s, a.h * a.r, a.h);
}

}  // namespace

void SearchSpace::validate() const {
  if (heads.empty() || ranks.empty()) {
    throw ConfigError("search space needs at least one h and one r");
  }
  if (s_max < 1 || delta < 1) throw ConfigError("s_max and delta must be >= 1");
  for (int h : heads) {
    if (h < 1) throw ConfigError("head counts must be positive");
  }
  for (int r : ranks) {
    if (r < 1) throw ConfigError("ranks must be positive");
  }
  if (valid_pairs().empty()) {
    throw ConfigError("no (h, r) pair with r divisible by h");
  }
}

std::vector<HeadRank> SearchSpace::valid_pairs() const {
  std::vector<HeadRank> out;
  for (int h : heads) {
    for (int r : ranks) {
      if (h > 0 && r % h == 0) out.emplace_back(h, r);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int SearchSpace::init_h() const {
  return h_init > 0 ? h_init : *std::min_element(heads.begin(), heads.end());
}

int SearchSpace::init_r() const {
  return r_init > 0 ? r_init : *std::min_element(ranks.begin(), ranks.end());
}

void SearchTargets::validate() const {
  if (!(u_target >= 0.0 && u_target <= 1.0)) {
    throw ConfigError("U_target must be in [0, 1]");
  }
  if (!(l_target > 0.0)) throw ConfigError("L_target must be positive");
  if (t_target < 1) throw ConfigError("T_target must be >= 1");
}

LatencyModel latency_model(const CostCoefficients& c) {
  return [c](const Arch& a) { return estimate_latency(a, c).total(); };
}

TableEvaluator::TableEvaluator(std::map<std::tuple<int, int, int>, double> t)
    : table_(std::move(t)) {}

TableEvaluator TableEvaluator::parse(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "h,r,s,utility") {
    throw FormatError("utility table must start with 'h,r,s,utility'");
  }
  std::map<std::tuple<int, int, int>, double> table;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    Arch a;
    double u = 0;
    char c1, c2, c3;
    ls >> a.h >> c1 >> a.r >> c2 >> a.s >> c3 >> u;
    if (!ls || c1 != ',' || c2 != ',' || c3 != ',' ||
        (ls >> std::ws).peek() != std::char_traits<char>::eof()) {
      throw FormatError("malformed utility table line " +
                        std::to_string(lineno));
    }
    if (!(u >= 0.0 && u <= 1.0)) {
      throw FormatError("utility outside [0, 1] on line " +
                        std::to_string(lineno));
    }
    if (!table.emplace(key(a), u).second) {
      throw FormatError("duplicate entry " + to_string(a) + " on line " +
                        std::to_string(lineno));
    }
  }
  return TableEvaluator(std::move(table));
}

TableEvaluator TableEvaluator::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open utility table " + path.string());
  return parse(is);
}

double TableEvaluator::evaluate(const Arch& a) {
  const auto it = table_.find(key(a));
  if (it == table_.end()) {
    throw ConfigError("utility table has no entry for " + to_string(a));
  }
  return it->second;
}

CommandEvaluator::CommandEvaluator(std::string command)
    : command_(std::move(command)) {}

double CommandEvaluator::evaluate(const Arch& a) {
  const std::string cmd = command_ + " --h " + std::to_string(a.h) + " --r " +
                          std::to_string(a.r) + " --s " + std::to_string(a.s);
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) throw IoError("cannot run evaluator: " + cmd);
  std::string out;
  std::array<char, 256> buf;
  while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  const int status = ::pclose(pipe);
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw IoError("evaluator failed: " + cmd);
  }
  std::istringstream is(out);
  double u = 0;
  is >> u;
  if (!is || (is >> std::ws).peek() != std::char_traits<char>::eof()) {
    throw FormatError("evaluator printed '" + out + "', expected one number");
  }
  return check_utility(u, a);
}

double FunctionEvaluator::evaluate(const Arch& a) {
  return check_utility(fn_(a), a);
}

Controller::Controller(std::vector<HeadRank> pairs, std::uint64_t seed,
                       ControllerOptions options)
    : pairs_(std::move(pairs)),
      theta_(pairs_.size(), 0.0),
      options_(options),
      prg_(seed) {
  if (pairs_.empty()) throw ConfigError("controller has no valid pairs");
  if (!(options_.temperature > 0)) {
    throw ConfigError("controller temperature must be positive");
  }
}

Controller Controller::exhaustive(std::vector<HeadRank> pairs) {
  if (pairs.empty()) throw ConfigError("controller has no valid pairs");
  Controller c;
  c.mode_ = Mode::kExhaustive;
  c.pairs_ = std::move(pairs);
  c.theta_.assign(c.pairs_.size(), 0.0);
  return c;
}

std::vector<double> Controller::probabilities() const {
  std::vector<double> p(theta_.size());
  const double top = *std::max_element(theta_.begin(), theta_.end());
  double z = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp((theta_[i] - top) / options_.temperature);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return p;
}

void Controller::begin_stage(int s, const LatencyModel& latency) {
  if (mode_ != Mode::kExhaustive) return;
  auto order = [&](const HeadRank& p) {
    const Arch a{p.first, p.second, s};
    return std::make_tuple(latency(a), p.first * p.second, p.first);
  };
  std::stable_sort(pairs_.begin(), pairs_.end(),
                   [&](const HeadRank& x, const HeadRank& y) {
                     return order(x) < order(y);
                   });
  cursor_ = 0;
}

HeadRank Controller::sample() {
  if (mode_ == Mode::kExhaustive) {
    const HeadRank p = pairs_[cursor_];
    cursor_ = (cursor_ + 1) % pairs_.size();
    return p;
  }
  const auto p = probabilities();
  std::discrete_distribution<std::size_t> dist(p.begin(), p.end());
  return pairs_[dist(prg_)];
}

std::size_t Controller::index_of(const HeadRank& pair) const {
  const auto it = std::find(pairs_.begin(), pairs_.end(), pair);
  if (it == pairs_.end()) throw ConfigError("pair is not in the controller");
  return static_cast<std::size_t>(it - pairs_.begin());
}

void Controller::update(const HeadRank& pair, double reward) {
  if (!std::isfinite(reward)) throw ConfigError("reward must be finite");
  if (mode_ == Mode::kExhaustive) return;
  if (!has_baseline_) {
    baseline_ = reward;
    has_baseline_ = true;
  }
  theta_[index_of(pair)] += options_.learning_rate * (reward - baseline_);
  baseline_ = options_.baseline_decay * baseline_ +
              (1.0 - options_.baseline_decay) * reward;
}

SearchResult nas_search(const SearchTargets& targets,
                        const LatencyModel& latency, const SearchSpace& space,
                        UtilityEvaluator& evaluator, Controller& controller,
                        const SearchOptions& options) {
  targets.validate();
  space.validate();
  SearchResult best;
  double best_u = -std::numeric_limits<double>::infinity();
  std::map<std::tuple<int, int, int>, double> cache;

  for (int s = 1; s <= space.s_max; ++s) {
    controller.begin_stage(s, latency);
    const double escalate =
        latency(Arch{space.init_h(), space.init_r(), s + space.delta});
    int tau = 0;
    while (true) {
      if (best.samples >= options.max_samples) return best;
      const auto [h, r] = controller.sample();
      ++best.samples;
      const Arch a{h, r, s};
      const double lat = latency(a);
      double reward = 0;
      if (lat > escalate || lat > targets.l_target) {
        reward = 1.0 / lat;
        ++tau;
      } else {
        auto it = cache.find(key(a));
        if (it == cache.end()) {
          it = cache.emplace(key(a), check_utility(evaluator.evaluate(a), a))
                   .first;
          best.evaluations.push_back({a, lat, it->second});
        }
        const double u = it->second;
        reward = u + 1.0 / lat;
        ++tau;
        if (u > best_u) {
          best_u = u;
          best.found = true;
          best.arch = a;
          best.utility = u;
          best.latency = lat;
          tau = 0;
        }
        if (best_u >= targets.u_target) {
          best.met_target = true;
          return best;
        }
      }
      controller.update({h, r}, reward);
      if (tau >= targets.t_target) break;
    }
  }
  return best;
}

SearchResult brute_force_search(const SearchTargets& targets,
                                const LatencyModel& latency,
                                const SearchSpace& space,
                                UtilityEvaluator& evaluator) {
  targets.validate();
  space.validate();
  SearchResult out;
  const EvalRecord* hit = nullptr;
  const EvalRecord* fallback = nullptr;
  for (int s = 1; s <= space.s_max; ++s) {
    for (const auto& [h, r] : space.valid_pairs()) {
      const Arch a{h, r, s};
      const double lat = latency(a);
      if (lat > targets.l_target) continue;
      out.evaluations.push_back(
          {a, lat, check_utility(evaluator.evaluate(a), a)});
    }
  }
  auto faster = [](const EvalRecord& x, const EvalRecord& y) {
    return std::make_tuple(x.latency, tie_key(x.arch)) <
           std::make_tuple(y.latency, tie_key(y.arch));
  };
  for (const auto& e : out.evaluations) {
    if (e.utility >= targets.u_target && (!hit || faster(e, *hit))) hit = &e;
    if (!fallback || e.utility > fallback->utility ||
        (e.utility == fallback->utility && faster(e, *fallback))) {
      fallback = &e;
    }
  }
  const EvalRecord* pick = hit ? hit : fallback;
  if (pick) {
    out.found = true;
    out.met_target = hit != nullptr;
    out.arch = pick->arch;
    out.utility = pick->utility;
    out.latency = pick->latency;
  }
  out.samples = out.evaluations.size();
  return out;
}

}  // namespace adaptmpc
