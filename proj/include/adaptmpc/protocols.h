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
#include <span>
#include <vector>

#include "adaptmpc/channel.h"
#include "adaptmpc/share.h"

namespace adaptmpc {

// Everything one party needs to run the interactive protocols: its channel,
// its half of the dealer stream, and local randomness.
class Party {
 public:
  Party(Channel& channel, std::uint64_t seed, FixedPointConfig config = {});

  int id() const { return channel_.party(); }
  Channel& channel() { return channel_; }
  CommMeter& meter() { return channel_.meter(); }
  TripleDealer& dealer() { return dealer_; }
  Prg& prg() { return prg_; }
  const FixedPointConfig& config() const { return config_; }

  TripleShare next_beaver(Index rows, Index cols, TripleFlavor flavor);
  TripleShare next_matmul(Index m, Index k, Index n);

 private:
  Channel& channel_;
  TripleDealer dealer_;
  Prg prg_;
  FixedPointConfig config_;
};

enum class Product { kHadamard, kMatmul };

struct ProductTerm {
  const ArithShare& lhs;
  const ArithShare& rhs;
  Product kind = Product::kHadamard;
};

// Beaver multiplication of every term in one round: opens x - a and y - b
// for all terms in a single exchange, then [c] + e[b] + [a]d + ed. Results
// are raw ring products (scale 2^2f for fixed-point inputs); truncate after.
// Hadamard terms broadcast 1xn / mx1 / 1x1 operands.
std::vector<ArithShare> multiply(Party& party,
                                 std::span<const ProductTerm> terms);
std::vector<ArithShare> multiply(Channel& channel,
                                 std::span<const ProductTerm> terms,
                                 std::span<const TripleShare> triples);

ArithShare mul_beaver(Party& party, const ArithShare& x, const ArithShare& y);
ArithShare mul_beaver(Channel& channel, const ArithShare& x,
                      const ArithShare& y, const TripleShare& triple);
ArithShare matmul_beaver(Party& party, const ArithShare& x,
                         const ArithShare& y);
ArithShare matmul_beaver(Channel& channel, const ArithShare& x,
                         const ArithShare& y, const TripleShare& triple);

// Bitwise AND of XOR shares, all pairs in one round.
std::vector<BinShare> and_beaver(
    Party& party, std::span<const std::pair<BinShare, BinShare>> pairs);
BinShare and_beaver(Party& party, const BinShare& x, const BinShare& y);
BinShare and_beaver(Channel& channel, const BinShare& x, const BinShare& y,
                    const TripleShare& triple);

// Arithmetic to XOR sharing. Round 1 opens the masked operands of the
// generate AND between the two private summands; rounds 2..7 are the
// Kogge-Stone prefix levels (shifts 1, 2, 4, 8, 16, 32).
BinShare a2b(Party& party, const ArithShare& x);

// XOR-shared bits (bit 0 of every word, other bits zero) to additive shares
// of 0/1 at integer scale: b0 + b1 - 2*b0*b1, one round.
ArithShare bit_to_arith(Party& party, const BinShare& bits);

// All 64 bits converted in one batched round and recombined with powers of 2.
ArithShare b2a_full(Party& party, const BinShare& x);

// Additive shares of 1 where x < 0, else 0 (integer scale). Eight rounds.
ArithShare ltz(Party& party, const ArithShare& x);

}  // namespace adaptmpc
