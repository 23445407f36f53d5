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

#include "adaptmpc/channel.h"

#include <string>

namespace adaptmpc {

namespace {

constexpr std::uint32_t kHandshakeTag = 0xFFFFFFFFu;

Frame pack(std::span<const RingMatrix> mats, std::uint32_t tag) {
  Frame f;
  f.tag = tag;
  std::size_t n = 0;
  for (const auto& m : mats) n += static_cast<std::size_t>(m.size());
  f.payload.reserve(n);
  for (const auto& m : mats) {
    f.payload.insert(f.payload.end(), m.data(), m.data() + m.size());
  }
  return f;
}

}  // namespace

Channel::Channel(int party, std::unique_ptr<Transport> transport,
                 std::chrono::milliseconds timeout)
    : party_(party), transport_(std::move(transport)), timeout_(timeout) {
  if (party != 0 && party != 1) throw ConfigError("party id must be 0 or 1");
}

Frame Channel::send_recv(Frame out) {
  // Party 0 writes first and party 1 reads first so that large frames never
  // block both sides in send().
  if (party_ == 0) {
    transport_->send(out);
    return transport_->recv(timeout_);
  }
  Frame in = transport_->recv(timeout_);
  transport_->send(out);
  return in;
}

std::vector<RingMatrix> Channel::unpack(const Frame& in,
                                        std::span<const Shape> shapes,
                                        std::uint32_t tag) const {
  if (in.tag != tag) {
    throw ProtocolError("protocol mismatch: expected round " +
                        std::to_string(tag) + ", peer sent " +
                        std::to_string(in.tag));
  }
  std::size_t want = 0;
  for (const auto& s : shapes) want += static_cast<std::size_t>(s[0] * s[1]);
  if (in.payload.size() != want) {
    throw ProtocolError("protocol mismatch in round " + std::to_string(tag) +
                        ": expected " + std::to_string(want) +
                        " elements, got " + std::to_string(in.payload.size()));
  }
  std::vector<RingMatrix> out;
  out.reserve(shapes.size());
  std::size_t off = 0;
  for (const auto& s : shapes) {
    RingMatrix m(s[0], s[1]);
    std::copy_n(in.payload.data() + off, m.size(), m.data());
    off += static_cast<std::size_t>(m.size());
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<RingMatrix> Channel::exchange(
    std::span<const RingMatrix> outgoing) {
  std::vector<Shape> shapes;
  shapes.reserve(outgoing.size());
  for (const auto& m : outgoing) shapes.push_back({m.rows(), m.cols()});
  const std::uint32_t tag = next_tag_++;
  Frame out = pack(outgoing, tag);
  const std::uint64_t bytes = 8 * out.payload.size();
  Frame in = send_recv(std::move(out));
  meter_.record_round(bytes);
  return unpack(in, shapes, tag);
}

std::vector<RingMatrix> Channel::exchange_io(
    std::span<const RingMatrix> outgoing, std::span<const Shape> incoming) {
  const std::uint32_t tag = next_tag_++;
  Frame out = pack(outgoing, tag);
  const std::uint64_t bytes = 8 * out.payload.size();
  Frame in = send_recv(std::move(out));
  meter_.record_io(bytes);
  return unpack(in, incoming, tag);
}

void Channel::handshake(std::uint64_t digest) {
  Frame in = send_recv(Frame{kHandshakeTag, {digest}});
  if (in.tag != kHandshakeTag || in.payload.size() != 1) {
    throw ProtocolError("protocol mismatch: malformed handshake");
  }
  if (in.payload[0] != digest) {
    throw ProtocolError("configuration mismatch between parties");
  }
}

void Channel::check_opening(Opening kind) const {
  if (audit_ && kind == Opening::kReveal) {
    throw ProtocolError("audit: unmasked opening on an audited path");
  }
}

void Channel::close() { transport_->close(); }

std::vector<RingMatrix> open_values(Channel& chan,
                                    std::span<const RingMatrix> shares,
                                    Opening kind) {
  chan.check_opening(kind);
  auto theirs = chan.exchange(shares);
  for (std::size_t i = 0; i < theirs.size(); ++i) theirs[i] += shares[i];
  return theirs;
}

RingMatrix open_values(Channel& chan, const RingMatrix& share, Opening kind) {
  return std::move(open_values(chan, std::span(&share, 1), kind).front());
}

}  // namespace adaptmpc
