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

#include "adaptmpc/transport.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <future>
#include <mutex>
#include <thread>

#include "le_bytes.h"

namespace adaptmpc {

namespace {

constexpr std::array<std::uint8_t, 4> kFrameMagic = {'C', 'P', '0', '1'};

using Clock = std::chrono::steady_clock;

// ---------------------------------------------------------------------------
// In-process transport

struct Mailbox {
  std::mutex mu;
  std::condition_variable cv;
  std::array<std::deque<Frame>, 2> inbox;
  std::array<bool, 2> closed = {false, false};
};

class InProcessTransport final : public Transport {
 public:
  InProcessTransport(std::shared_ptr<Mailbox> box, int self)
      : box_(std::move(box)), self_(self) {}
  ~InProcessTransport() override { close(); }

  void send(const Frame& frame) override {
    std::lock_guard lock(box_->mu);
    if (box_->closed[self_]) throw TransportError("send on closed endpoint");
    if (box_->closed[1 - self_]) throw PeerClosedError("peer endpoint closed");
    box_->inbox[1 - self_].push_back(frame);
    box_->cv.notify_all();
  }

  Frame recv(std::chrono::milliseconds timeout) override {
    std::unique_lock lock(box_->mu);
    auto& q = box_->inbox[self_];
    const bool ready = box_->cv.wait_for(lock, timeout, [&] {
      return !q.empty() || box_->closed[1 - self_] || box_->closed[self_];
    });
    if (!q.empty()) {
      Frame f = std::move(q.front());
      q.pop_front();
      return f;
    }
    if (!ready) throw ProtocolError("protocol mismatch: receive timed out");
    if (box_->closed[self_]) throw TransportError("recv on closed endpoint");
    throw PeerClosedError("peer endpoint closed");
  }

  void close() override {
    std::lock_guard lock(box_->mu);
    box_->closed[self_] = true;
    box_->cv.notify_all();
  }

 private:
  std::shared_ptr<Mailbox> box_;
  int self_;
};

// ---------------------------------------------------------------------------
// TCP transport

std::string errno_text() { return std::strerror(errno); }

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

// Waits until fd is readable; false on timeout.
bool wait_readable(int fd, Clock::time_point deadline) {
  while (true) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - Clock::now());
    if (left.count() <= 0) return false;
    pollfd p{fd, POLLIN, 0};
    const int rc = ::poll(&p, 1, static_cast<int>(left.count()));
    if (rc > 0) return true;
    if (rc == 0) return false;
    if (errno != EINTR) throw TransportError("poll failed: " + errno_text());
  }
}

class TcpTransport final : public Transport {
 public:
  explicit TcpTransport(int fd) : fd_(fd) { set_nodelay(fd_); }
  ~TcpTransport() override {
    if (fd_ >= 0) ::close(fd_);
  }

  void send(const Frame& frame) override {
    const auto bytes = encode_frame(frame);
    std::size_t off = 0;
    while (off < bytes.size()) {
      const ssize_t n = ::send(fd_, bytes.data() + off, bytes.size() - off,
                               MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        if (errno == EPIPE || errno == ECONNRESET) {
          throw PeerClosedError("connection reset by peer");
        }
        throw TransportError("send failed: " + errno_text());
      }
      off += static_cast<std::size_t>(n);
    }
  }

  Frame recv(std::chrono::milliseconds timeout) override {
    const auto deadline = Clock::now() + timeout;
    std::array<std::uint8_t, kFrameHeaderBytes> header{};
    read_exact(header.data(), header.size(), deadline);
    const auto [tag, len] = decode_frame_header(header);
    if (len > (std::uint64_t{1} << 36)) {
      throw FormatError("frame payload too large");
    }
    std::vector<std::uint8_t> payload(len);
    read_exact(payload.data(), payload.size(), deadline);
    Frame f;
    f.tag = tag;
    f.payload.resize(len / 8);
    for (std::size_t i = 0; i < f.payload.size(); ++i) {
      f.payload[i] = detail::get_le<std::uint64_t>(payload.data() + 8 * i);
    }
    return f;
  }

  void close() override {
    if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
  }

 private:
  void read_exact(std::uint8_t* dst, std::size_t n,
                  Clock::time_point deadline) {
    std::size_t off = 0;
    while (off < n) {
      if (!wait_readable(fd_, deadline)) {
        throw ProtocolError("protocol mismatch: receive timed out");
      }
      const ssize_t got = ::recv(fd_, dst + off, n - off, 0);
      if (got == 0) throw PeerClosedError("connection closed by peer");
      if (got < 0) {
        if (errno == EINTR) continue;
        if (errno == ECONNRESET) throw PeerClosedError("connection reset");
        throw TransportError("recv failed: " + errno_text());
      }
      off += static_cast<std::size_t>(got);
    }
  }

  int fd_;
};

sockaddr_in resolve(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const int rc = ::getaddrinfo(host.c_str(), nullptr, &hints, &res);
  if (rc != 0 || res == nullptr) {
    throw TransportError("cannot resolve host '" + host +
                         "': " + ::gai_strerror(rc));
  }
  sockaddr_in addr{};
  std::memcpy(&addr, res->ai_addr, sizeof(addr));
  ::freeaddrinfo(res);
  addr.sin_port = htons(port);
  return addr;
}

}  // namespace

std::vector<std::uint8_t> encode_frame(const Frame& frame) {
  std::vector<std::uint8_t> out(kFrameMagic.begin(), kFrameMagic.end());
  out.reserve(kFrameHeaderBytes + 8 * frame.payload.size());
  detail::put_le<std::uint32_t>(out, frame.tag);
  detail::put_le<std::uint64_t>(out, 8 * frame.payload.size());
  for (Ring v : frame.payload) detail::put_le<std::uint64_t>(out, v);
  return out;
}

std::pair<std::uint32_t, std::uint64_t> decode_frame_header(
    std::span<const std::uint8_t> header) {
  if (header.size() < kFrameHeaderBytes) {
    throw FormatError("frame header truncated");
  }
  if (!std::equal(kFrameMagic.begin(), kFrameMagic.end(), header.begin())) {
    throw FormatError("bad frame magic");
  }
  const auto tag = detail::get_le<std::uint32_t>(header.data() + 4);
  const auto len = detail::get_le<std::uint64_t>(header.data() + 8);
  if (len % 8 != 0) {
    throw FormatError("frame payload length " + std::to_string(len) +
                      " is not a multiple of 8");
  }
  return {tag, len};
}

Frame decode_frame(std::span<const std::uint8_t> bytes) {
  const auto [tag, len] = decode_frame_header(bytes);
  if (bytes.size() != kFrameHeaderBytes + len) {
    throw FormatError("frame length mismatch: header says " +
                      std::to_string(len) + " payload bytes, have " +
                      std::to_string(bytes.size() - kFrameHeaderBytes));
  }
  Frame f;
  f.tag = tag;
  f.payload.resize(len / 8);
  for (std::size_t i = 0; i < f.payload.size(); ++i) {
    f.payload[i] =
        detail::get_le<std::uint64_t>(bytes.data() + kFrameHeaderBytes + 8 * i);
  }
  return f;
}

TransportPair make_in_process_pair() {
  auto box = std::make_shared<Mailbox>();
  return {std::make_unique<InProcessTransport>(box, 0),
          std::make_unique<InProcessTransport>(box, 1)};
}

TcpListener::TcpListener(const std::string& host, std::uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw TransportError("socket failed: " + errno_text());
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr = resolve(host, port);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    const std::string msg = "bind " + host + ":" + std::to_string(port) +
                            " failed: " + errno_text();
    ::close(fd_);
    throw TransportError(msg);
  }
  if (::listen(fd_, 1) < 0) {
    ::close(fd_);
    throw TransportError("listen failed: " + errno_text());
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<Transport> TcpListener::accept(
    std::chrono::milliseconds timeout) {
  if (!wait_readable(fd_, Clock::now() + timeout)) {
    throw TransportError("no peer connected within timeout");
  }
  const int conn = ::accept(fd_, nullptr, nullptr);
  if (conn < 0) throw TransportError("accept failed: " + errno_text());
  return std::make_unique<TcpTransport>(conn);
}

std::unique_ptr<Transport> tcp_connect(const std::string& host,
                                       std::uint16_t port,
                                       std::chrono::milliseconds timeout) {
  const sockaddr_in addr = resolve(host, port);
  const auto deadline = Clock::now() + timeout;
  while (true) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw TransportError("socket failed: " + errno_text());
    if (::connect(fd, reinterpret_cast<const sockaddr*>(&addr),
                  sizeof(addr)) == 0) {
      return std::make_unique<TcpTransport>(fd);
    }
    const int err = errno;
    ::close(fd);
    if (err != ECONNREFUSED && err != EINTR) {
      throw TransportError("connect to " + host + ":" + std::to_string(port) +
                           " failed: " + std::strerror(err));
    }
    if (Clock::now() >= deadline) {
      throw TransportError("connect to " + host + ":" + std::to_string(port) +
                           " refused");
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
}

TransportPair make_tcp_loopback_pair() {
  TcpListener listener("127.0.0.1", 0);
  auto client = std::async(std::launch::async, [port = listener.port()] {
    return tcp_connect("127.0.0.1", port, std::chrono::seconds(10));
  });
  auto server = listener.accept(std::chrono::seconds(10));
  return {std::move(server), client.get()};
}

std::pair<std::string, std::uint16_t> parse_address(const std::string& addr) {
  const auto pos = addr.rfind(':');
  if (pos == std::string::npos || pos == 0 || pos + 1 == addr.size()) {
    throw ConfigError("address must be host:port, got '" + addr + "'");
  }
  const std::string port_text = addr.substr(pos + 1);
  int port = 0;
  try {
    std::size_t used = 0;
    port = std::stoi(port_text, &used);
    if (used != port_text.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ConfigError("invalid port in '" + addr + "'");
  }
  if (port < 0 || port > 65535) throw ConfigError("port out of range");
  return {addr.substr(0, pos), static_cast<std::uint16_t>(port)};
}

}  // namespace adaptmpc
