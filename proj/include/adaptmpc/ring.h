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

#include <Eigen/Dense>
#include <array>
#include <cstdint>

#include "adaptmpc/errors.h"

namespace adaptmpc {

template <typename Scalar>
using Matrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Element of Z_{2^64}. Signed values use the two's-complement reading.
using Ring = std::uint64_t;
using RingMatrix = Matrix<Ring>;
using RealMatrix = Matrix<double>;
using Index = Eigen::Index;

struct FixedPointConfig {
  static constexpr int kRingBits = 64;
  // Encoded magnitudes must stay below 2^kHeadroomBits.
  static constexpr int kHeadroomBits = 62;

  int frac_bits = 16;

  void validate() const;
  double scale() const { return static_cast<double>(Ring{1} << frac_bits); }
  Ring one() const { return Ring{1} << frac_bits; }

  friend bool operator==(const FixedPointConfig&,
                         const FixedPointConfig&) = default;
};

inline std::int64_t to_signed(Ring v) { return static_cast<std::int64_t>(v); }
inline Ring to_ring(std::int64_t v) { return static_cast<Ring>(v); }

// round(value * 2^f) mod 2^64, rounding half away from zero.
Ring encode_fixed(double value, const FixedPointConfig& cfg);
double decode_fixed(Ring v, const FixedPointConfig& cfg);

RingMatrix encode_fixed(const RealMatrix& values, const FixedPointConfig& cfg);
RealMatrix decode_fixed(const RingMatrix& values, const FixedPointConfig& cfg);

// Arithmetic (sign-extending) right shift of every element.
RingMatrix arshift(const RingMatrix& x, int bits);

// Expands a 1x1, 1xn or mx1 operand to rows x cols; equal shapes pass through.
template <typename Scalar>
Matrix<Scalar> broadcast_to(const Matrix<Scalar>& x, Index rows, Index cols) {
  if (x.rows() == rows && x.cols() == cols) return x;
  if (x.rows() == 1 && x.cols() == 1) {
    return Matrix<Scalar>::Constant(rows, cols, x(0, 0));
  }
  if (x.rows() == 1 && x.cols() == cols) return x.replicate(rows, 1);
  if (x.cols() == 1 && x.rows() == rows) return x.replicate(1, cols);
  throw ShapeError("cannot broadcast " + std::to_string(x.rows()) + "x" +
                   std::to_string(x.cols()) + " to " + std::to_string(rows) +
                   "x" + std::to_string(cols));
}

// Shape both operands can be broadcast to.
std::array<Index, 2> broadcast_shape(Index r0, Index c0, Index r1, Index c1);

// Dense fixed-point tensor (rank <= 2) of ring elements.
class FixedTensor {
 public:
  FixedTensor() = default;
  FixedTensor(RingMatrix values, FixedPointConfig config);

  static FixedTensor from_real(const RealMatrix& values,
                               const FixedPointConfig& config);

  RealMatrix to_real() const { return decode_fixed(values_, config_); }

  const RingMatrix& values() const { return values_; }
  RingMatrix& values() { return values_; }
  const FixedPointConfig& config() const { return config_; }
  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }
  std::array<Index, 2> shape() const { return {rows(), cols()}; }

 private:
  RingMatrix values_;
  FixedPointConfig config_;
};

// Elementwise ring product then signed truncation by f.
FixedTensor mul_fixed_plain(const FixedTensor& x, const FixedTensor& y);

// Ring matrix product with one truncation per accumulated entry.
FixedTensor matmul_plain(const FixedTensor& a, const FixedTensor& b);

}  // namespace adaptmpc
