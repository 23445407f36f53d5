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

#include "adaptmpc/meter.h"

#include <algorithm>

namespace adaptmpc {

namespace {

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto pos = path.find('/');
    parts.push_back(path.substr(0, pos));
    if (pos == std::string_view::npos) break;
    path.remove_prefix(pos + 1);
  }
  return parts;
}

}  // namespace

std::string CommMeter::path() const {
  std::string p;
  for (const auto& s : scope_) {
    if (!p.empty()) p += '/';
    p += s;
  }
  return p.empty() ? std::string("(root)") : p;
}

void CommMeter::record_round(std::uint64_t bytes_sent) {
  ++rounds_;
  bytes_sent_ += bytes_sent;
  auto& s = breakdown_[path()];
  ++s.rounds;
  s.bytes_sent += bytes_sent;
}

void CommMeter::record_io(std::uint64_t bytes_sent) {
  ++io_rounds_;
  io_bytes_ += bytes_sent;
}

void CommMeter::enter(std::string_view label) {
  scope_.emplace_back(label);
  ++breakdown_[path()].calls;
}

void CommMeter::leave() {
  if (!scope_.empty()) scope_.pop_back();
}

OpStats CommMeter::stats_within(std::string_view label) const {
  OpStats total;
  for (const auto& [key, s] : breakdown_) {
    const auto parts = split_path(key);
    if (std::find(parts.begin(), parts.end(), label) == parts.end()) continue;
    total.rounds += s.rounds;
    total.bytes_sent += s.bytes_sent;
    // Only count entries of the label itself, not of nested scopes.
    if (parts.back() == label) total.calls += s.calls;
  }
  return total;
}

std::uint64_t CommMeter::calls_nested(std::string_view outer,
                                      std::string_view inner) const {
  std::uint64_t n = 0;
  for (const auto& [key, s] : breakdown_) {
    const auto parts = split_path(key);
    if (parts.back() != inner) continue;
    if (std::find(parts.begin(), parts.end() - 1, outer) != parts.end() - 1) {
      n += s.calls;
    }
  }
  return n;
}

CommMeter CommMeter::merge(const CommMeter& a, const CommMeter& b) {
  CommMeter m;
  m.rounds_ = std::max(a.rounds_, b.rounds_);
  m.bytes_sent_ = a.bytes_sent_ + b.bytes_sent_;
  m.io_rounds_ = std::max(a.io_rounds_, b.io_rounds_);
  m.io_bytes_ = a.io_bytes_ + b.io_bytes_;
  m.breakdown_ = a.breakdown_;
  for (const auto& [key, s] : b.breakdown_) {
    auto& t = m.breakdown_[key];
    t.rounds = std::max(t.rounds, s.rounds);
    t.bytes_sent += s.bytes_sent;
    t.calls = std::max(t.calls, s.calls);
  }
  return m;
}

}  // namespace adaptmpc
