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
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace adaptmpc {

struct OpStats {
  std::uint64_t rounds = 0;
  std::uint64_t bytes_sent = 0;
  std::uint64_t calls = 0;

  friend bool operator==(const OpStats&, const OpStats&) = default;
};

// Per-party communication counters. A round is one batched exchange (each
// party sends one frame and receives one). Bytes are payload bytes written by
// this party, framing excluded.
//
// Online counters cover protocol execution. Input distribution and output
// delivery are tracked separately as "io".
//
// The breakdown is keyed by the scope path ("adapter/relu/ltz/a2b"); rounds and
// bytes go to the innermost open scope, calls to every scope on entry.
class CommMeter {
 public:
  void record_round(std::uint64_t bytes_sent);
  void record_io(std::uint64_t bytes_sent);

  void enter(std::string_view label);
  void leave();

  std::uint64_t rounds() const { return rounds_; }
  std::uint64_t bytes_sent() const { return bytes_sent_; }
  std::uint64_t io_rounds() const { return io_rounds_; }
  std::uint64_t io_bytes() const { return io_bytes_; }
  const std::map<std::string, OpStats>& breakdown() const { return breakdown_; }

  // Sum over every scope path that contains `label` as a component.
  OpStats stats_within(std::string_view label) const;
  // Number of `inner` scope entries nested anywhere below an `outer` scope.
  std::uint64_t calls_nested(std::string_view outer,
                             std::string_view inner) const;

  // Combines the meters of the two parties: rounds are synchronized so the
  // maximum is kept, bytes add up.
  static CommMeter merge(const CommMeter& a, const CommMeter& b);

  friend bool operator==(const CommMeter& a, const CommMeter& b) {
    return a.rounds_ == b.rounds_ && a.bytes_sent_ == b.bytes_sent_ &&
           a.io_rounds_ == b.io_rounds_ && a.io_bytes_ == b.io_bytes_ &&
           a.breakdown_ == b.breakdown_;
  }

 private:
  std::string path() const;

  std::uint64_t rounds_ = 0;
  std::uint64_t bytes_sent_ = 0;
  std::uint64_t io_rounds_ = 0;
  std::uint64_t io_bytes_ = 0;
  std::vector<std::string> scope_;
  std::map<std::string, OpStats> breakdown_;
};

class MeterScope {
 public:
  MeterScope(CommMeter& meter, std::string_view label) : meter_(meter) {
    meter_.enter(label);
  }
  ~MeterScope() { meter_.leave(); }
  MeterScope(const MeterScope&) = delete;
  MeterScope& operator=(const MeterScope&) = delete;

 private:
  CommMeter& meter_;
};

}  // namespace adaptmpc
