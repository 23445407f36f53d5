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

#include <chrono>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <utility>

#include "adaptmpc/channel.h"

namespace adaptmpc {

enum class TransportKind { kInProcess, kTcpLoopback };

template <typename R0, typename R1>
struct TwoPartyResult {
  R0 output0;
  R1 output1;
  CommMeter meter0;
  CommMeter meter1;

  CommMeter merged() const { return CommMeter::merge(meter0, meter1); }
};

TransportPair make_transport_pair(TransportKind kind);

// Runs `party0(Channel&)` and `party1(Channel&)` on two threads connected by
// the chosen transport. If either side throws, its endpoint is closed so the
// other side unblocks, and the originating error is rethrown.
template <typename F0, typename F1>
auto run_two_party(F0&& party0, F1&& party1,
                   TransportKind kind = TransportKind::kInProcess,
                   std::chrono::milliseconds timeout = kDefaultReceiveTimeout)
    -> TwoPartyResult<std::invoke_result_t<F0, Channel&>,
                      std::invoke_result_t<F1, Channel&>> {
  using R0 = std::invoke_result_t<F0, Channel&>;
  using R1 = std::invoke_result_t<F1, Channel&>;
  auto [t0, t1] = make_transport_pair(kind);
  Channel c0(0, std::move(t0), timeout);
  Channel c1(1, std::move(t1), timeout);

  std::optional<R0> out0;
  std::optional<R1> out1;
  std::exception_ptr err0, err1;
  {
    std::jthread th1([&] {
      try {
        out1.emplace(party1(c1));
      } catch (...) {
        err1 = std::current_exception();
        c1.close();
      }
    });
    try {
      out0.emplace(party0(c0));
    } catch (...) {
      err0 = std::current_exception();
      c0.close();
    }
  }
  auto is_peer_closed = [](const std::exception_ptr& e) {
    try {
      std::rethrow_exception(e);
    } catch (const PeerClosedError&) {
      return true;
    } catch (...) {
      return false;
    }
  };
  if (err0 && err1) {
    std::rethrow_exception(is_peer_closed(err0) ? err1 : err0);
  }
  if (err0) std::rethrow_exception(err0);
  if (err1) std::rethrow_exception(err1);
  return {std::move(*out0), std::move(*out1), c0.meter(), c1.meter()};
}

}  // namespace adaptmpc
