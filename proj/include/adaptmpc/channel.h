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
#include <chrono>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "adaptmpc/meter.h"
#include "adaptmpc/ring.h"
#include "adaptmpc/transport.h"

namespace adaptmpc {

inline constexpr std::chrono::milliseconds kDefaultReceiveTimeout{30000};

// How an opening relates to the secret it is computed from. Beaver openings
// (x - a) are masked; everything else reveals data. With auditing on, a
// reveal is a protocol error.
enum class Opening { kMasked, kReveal };

using Shape = std::array<Index, 2>;

// One party's endpoint. Owns the transport, the round tag sequence and the
// meter. Not thread-safe: a channel belongs to one party's thread.
class Channel {
 public:
  Channel(int party, std::unique_ptr<Transport> transport,
          std::chrono::milliseconds timeout = kDefaultReceiveTimeout);

  int party() const { return party_; }
  int peer() const { return 1 - party_; }

  // Sends all matrices in one frame and receives the peer's matrices of the
  // same shapes. Counts one online round.
  std::vector<RingMatrix> exchange(std::span<const RingMatrix> outgoing);

  // Like exchange() but shapes may differ per direction; counted as io.
  std::vector<RingMatrix> exchange_io(std::span<const RingMatrix> outgoing,
                                      std::span<const Shape> incoming);

  // Confirms both sides agree on a configuration digest. Not metered.
  void handshake(std::uint64_t digest);

  CommMeter& meter() { return meter_; }
  const CommMeter& meter() const { return meter_; }

  void set_audit(bool on) { audit_ = on; }
  bool audit() const { return audit_; }
  void check_opening(Opening kind) const;

  void close();

 private:
  Frame send_recv(Frame out);
  std::vector<RingMatrix> unpack(const Frame& in, std::span<const Shape> shapes,
                                 std::uint32_t tag) const;

  int party_;
  std::unique_ptr<Transport> transport_;
  std::chrono::milliseconds timeout_;
  std::uint32_t next_tag_ = 0;
  bool audit_ = false;
  CommMeter meter_;
};

// Reconstructs by exchanging shares; both parties learn the sum.
std::vector<RingMatrix> open_values(Channel& chan,
                                    std::span<const RingMatrix> shares,
                                    Opening kind);
RingMatrix open_values(Channel& chan, const RingMatrix& share, Opening kind);

}  // namespace adaptmpc
