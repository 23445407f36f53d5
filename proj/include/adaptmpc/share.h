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
#include <random>
#include <string>
#include <utility>

#include "adaptmpc/ring.h"

namespace adaptmpc {

// One party's additive share: [x]_0 + [x]_1 = x (mod 2^64).
struct ArithShare {
  int party = 0;
  RingMatrix data;
  FixedPointConfig config;

  Index rows() const { return data.rows(); }
  Index cols() const { return data.cols(); }
};

// One party's XOR share: <x>_0 ^ <x>_1 = x, bitwise per 64-bit word.
struct BinShare {
  int party = 0;
  RingMatrix data;

  Index rows() const { return data.rows(); }
  Index cols() const { return data.cols(); }
};

using Prg = std::mt19937_64;

RingMatrix random_ring(Prg& prg, Index rows, Index cols);

std::pair<ArithShare, ArithShare> share_arith(const FixedTensor& x, Prg& prg);
FixedTensor reconstruct_arith(const ArithShare& s0, const ArithShare& s1);

std::pair<BinShare, BinShare> share_bin(const RingMatrix& x, Prg& prg);
RingMatrix reconstruct_bin(const BinShare& s0, const BinShare& s1);

// Local linear algebra on arithmetic shares; no communication.
ArithShare add(const ArithShare& x, const ArithShare& y);
ArithShare sub(const ArithShare& x, const ArithShare& y);
ArithShare neg(const ArithShare& x);
// Ring multiply by a public integer (no rescaling).
ArithShare mul_public(const ArithShare& x, Ring c);
// Elementwise ring multiply by a public (broadcastable) matrix.
ArithShare mul_public(const ArithShare& x, const RingMatrix& c);
// Adds a public ring value; only party 0 changes its share.
ArithShare add_public(const ArithShare& x, const RingMatrix& c);
ArithShare add_public(const ArithShare& x, Ring c);
// Multiply by a public real constant: encode, multiply, truncate.
ArithShare scale_public(const ArithShare& x, double c);

// Local truncation: each party arithmetic-shifts its share by `bits`. The
// reconstructed value is off by at most one unit in the last place, except
// with probability about |x| / 2^63 (wraparound of the share sum).
ArithShare truncate_share(const ArithShare& x, int bits);
ArithShare truncate_share(const ArithShare& x);  // by frac_bits

BinShare xor_shares(const BinShare& x, const BinShare& y);
BinShare xor_public(const BinShare& x, const RingMatrix& c);
BinShare and_public(const BinShare& x, Ring mask);
BinShare shift_left(const BinShare& x, int bits);
BinShare shift_right(const BinShare& x, int bits);  // logical

enum class TripleFlavor { kArith, kBinary };

// One party's share of a Beaver triple. Elementwise: a, b, c share a shape
// and c = a*b (ring) or c = a&b (bitwise). Matrix: a is m x k, b is k x n,
// c = a*b as a ring matrix product.
struct TripleShare {
  RingMatrix a;
  RingMatrix b;
  RingMatrix c;
};

// Trusted dealer for the offline phase. Both parties run a dealer with the
// same seed, draw the same triple stream, and keep their own half; the same
// seed always yields the same stream.
class TripleDealer {
 public:
  explicit TripleDealer(std::uint64_t seed);

  std::pair<TripleShare, TripleShare> gen_beaver(Index rows, Index cols,
                                                 TripleFlavor flavor);
  std::pair<TripleShare, TripleShare> gen_matmul(Index m, Index k, Index n);

  // Number of triples issued, keyed like "arith:4x4" or "matmul:2x3x4".
  const std::map<std::string, std::uint64_t>& issued() const {
    return issued_;
  }

 private:
  Prg prg_;
  std::map<std::string, std::uint64_t> issued_;
};

}  // namespace adaptmpc
