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
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "adaptmpc/ring.h"

namespace adaptmpc {

// Wire frame: "CP01" | round tag u32 LE | payload length u64 LE (bytes) |
// payload as little-endian u64 ring elements. One frame per party per round.
struct Frame {
  std::uint32_t tag = 0;
  std::vector<Ring> payload;

  friend bool operator==(const Frame&, const Frame&) = default;
};

inline constexpr std::size_t kFrameHeaderBytes = 16;

std::vector<std::uint8_t> encode_frame(const Frame& frame);
// Parses the fixed header; returns (tag, payload byte length).
std::pair<std::uint32_t, std::uint64_t> decode_frame_header(
    std::span<const std::uint8_t> header);
Frame decode_frame(std::span<const std::uint8_t> bytes);

// Ordered, reliable, bidirectional message pipe to the other party.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual void send(const Frame& frame) = 0;
  // Throws ProtocolError on timeout, PeerClosedError when the peer is gone.
  virtual Frame recv(std::chrono::milliseconds timeout) = 0;
  // Wakes a blocked peer; idempotent.
  virtual void close() = 0;
};

using TransportPair =
    std::pair<std::unique_ptr<Transport>, std::unique_ptr<Transport>>;

TransportPair make_in_process_pair();

class TcpListener {
 public:
  // Port 0 picks an ephemeral port.
  TcpListener(const std::string& host, std::uint16_t port);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::uint16_t port() const { return port_; }
  std::unique_ptr<Transport> accept(std::chrono::milliseconds timeout);

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

// Retries until the listener is up or the timeout expires.
std::unique_ptr<Transport> tcp_connect(const std::string& host,
                                       std::uint16_t port,
                                       std::chrono::milliseconds timeout);

// Loopback TCP connection; first = listener side (party 0).
TransportPair make_tcp_loopback_pair();

// "host:port" -> (host, port).
std::pair<std::string, std::uint16_t> parse_address(const std::string& addr);

}  // namespace adaptmpc
