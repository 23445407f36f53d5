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

#include "adaptmpc/ring.h"

#include <cmath>
#include <string>

namespace adaptmpc {

void FixedPointConfig::validate() const {
  if (frac_bits < 1 || frac_bits > 32) {
    throw ConfigError("frac_bits must be in [1, 32], got " +
                      std::to_string(frac_bits));
  }
}

Ring encode_fixed(double value, const FixedPointConfig& cfg) {
  const double scaled = std::round(value * cfg.scale());
  constexpr double kLimit = 4611686018427387904.0;  // 2^62
  if (!std::isfinite(scaled) || std::fabs(scaled) >= kLimit) {
    throw OverflowError("value " + std::to_string(value) +
                        " exceeds fixed-point headroom at frac_bits=" +
                        std::to_string(cfg.frac_bits));
  }
  return to_ring(static_cast<std::int64_t>(scaled));
}

double decode_fixed(Ring v, const FixedPointConfig& cfg) {
  return static_cast<double>(to_signed(v)) / cfg.scale();
}

RingMatrix encode_fixed(const RealMatrix& values,
                        const FixedPointConfig& cfg) {
  return values.unaryExpr([&](double v) { return encode_fixed(v, cfg); });
}

RealMatrix decode_fixed(const RingMatrix& values,
                        const FixedPointConfig& cfg) {
  return values.unaryExpr([&](Ring v) { return decode_fixed(v, cfg); });
}

RingMatrix arshift(const RingMatrix& x, int bits) {
  return x.unaryExpr([bits](Ring v) { return to_ring(to_signed(v) >> bits); });
}

std::array<Index, 2> broadcast_shape(Index r0, Index c0, Index r1, Index c1) {
  auto dim = [&](Index a, Index b) {
    if (a == b || b == 1) return a;
    if (a == 1) return b;
    throw ShapeError("shapes " + std::to_string(r0) + "x" +
                     std::to_string(c0) + " and " + std::to_string(r1) + "x" +
                     std::to_string(c1) + " are not broadcastable");
  };
  return {dim(r0, r1), dim(c0, c1)};
}

FixedTensor::FixedTensor(RingMatrix values, FixedPointConfig config)
    : values_(std::move(values)), config_(config) {
  config_.validate();
}

FixedTensor FixedTensor::from_real(const RealMatrix& values,
                                   const FixedPointConfig& config) {
  config.validate();
  return FixedTensor(encode_fixed(values, config), config);
}

FixedTensor mul_fixed_plain(const FixedTensor& x, const FixedTensor& y) {
  if (!(x.config() == y.config())) {
    throw ConfigError("mul_fixed_plain: fixed-point configs differ");
  }
  const auto [rows, cols] =
      broadcast_shape(x.rows(), x.cols(), y.rows(), y.cols());
  RingMatrix prod = broadcast_to(x.values(), rows, cols)
                        .cwiseProduct(broadcast_to(y.values(), rows, cols));
  return FixedTensor(arshift(prod, x.config().frac_bits), x.config());
}

FixedTensor matmul_plain(const FixedTensor& a, const FixedTensor& b) {
  if (!(a.config() == b.config())) {
    throw ConfigError("matmul_plain: fixed-point configs differ");
  }
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul_plain: inner dimensions " +
                     std::to_string(a.cols()) + " and " +
                     std::to_string(b.rows()) + " differ");
  }
  RingMatrix prod = a.values() * b.values();
  return FixedTensor(arshift(prod, a.config().frac_bits), a.config());
}

}  // namespace adaptmpc
