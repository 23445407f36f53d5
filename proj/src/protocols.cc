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

#include "adaptmpc/protocols.h"

#include <array>
#include <string>

namespace adaptmpc {

namespace {

Ring x_or(Ring a, Ring b) { return a ^ b; }
Ring x_and(Ring a, Ring b) { return a & b; }

RingMatrix bxor(const RingMatrix& a, const RingMatrix& b) {
  return a.binaryExpr(b, &x_or);
}
RingMatrix band(const RingMatrix& a, const RingMatrix& b) {
  return a.binaryExpr(b, &x_and);
}

Shape product_shape(const ProductTerm& t) {
  if (t.kind == Product::kMatmul) {
    if (t.lhs.cols() != t.rhs.rows()) {
      throw ShapeError("matmul_beaver: inner dimensions " +
                       std::to_string(t.lhs.cols()) + " and " +
                       std::to_string(t.rhs.rows()) + " differ");
    }
    return {t.lhs.rows(), t.rhs.cols()};
  }
  return broadcast_shape(t.lhs.rows(), t.lhs.cols(), t.rhs.rows(),
                         t.rhs.cols());
}

void check_triple(const ProductTerm& t, const TripleShare& tr,
                  const RingMatrix& lhs, const RingMatrix& rhs) {
  if (tr.a.rows() != lhs.rows() || tr.a.cols() != lhs.cols() ||
      tr.b.rows() != rhs.rows() || tr.b.cols() != rhs.cols()) {
    throw ShapeError(std::string(t.kind == Product::kMatmul ? "matmul" : "mul") +
                     "_beaver: triple shape does not match operands");
  }
}

}  // namespace

Party::Party(Channel& channel, std::uint64_t seed, FixedPointConfig config)
    : channel_(channel), dealer_(seed), config_(config) {
  config_.validate();
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(channel.party()), 0x5eedu};
  prg_.seed(seq);
}

TripleShare Party::next_beaver(Index rows, Index cols, TripleFlavor flavor) {
  auto [s0, s1] = dealer_.gen_beaver(rows, cols, flavor);
  return id() == 0 ? std::move(s0) : std::move(s1);
}

TripleShare Party::next_matmul(Index m, Index k, Index n) {
  auto [s0, s1] = dealer_.gen_matmul(m, k, n);
  return id() == 0 ? std::move(s0) : std::move(s1);
}

std::vector<ArithShare> multiply(Channel& channel,
                                 std::span<const ProductTerm> terms,
                                 std::span<const TripleShare> triples) {
  if (terms.size() != triples.size()) {
    throw ShapeError("multiply: one triple per term required");
  }
  const int self = channel.party();
  std::vector<RingMatrix> lhs, rhs, masked;
  lhs.reserve(terms.size());
  rhs.reserve(terms.size());
  masked.reserve(2 * terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    if (t.lhs.party != self || t.rhs.party != self) {
      throw ShapeError("multiply: share does not belong to this party");
    }
    const Shape out = product_shape(t);
    if (t.kind == Product::kHadamard) {
      lhs.push_back(broadcast_to(t.lhs.data, out[0], out[1]));
      rhs.push_back(broadcast_to(t.rhs.data, out[0], out[1]));
    } else {
      lhs.push_back(t.lhs.data);
      rhs.push_back(t.rhs.data);
    }
    check_triple(t, triples[i], lhs.back(), rhs.back());
    masked.push_back(lhs.back() - triples[i].a);
    masked.push_back(rhs.back() - triples[i].b);
  }
  const auto opened = open_values(channel, masked, Opening::kMasked);

  std::vector<ArithShare> out;
  out.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const RingMatrix& e = opened[2 * i];
    const RingMatrix& d = opened[2 * i + 1];
    const TripleShare& tr = triples[i];
    RingMatrix z;
    if (terms[i].kind == Product::kMatmul) {
      z = tr.c + e * tr.b + tr.a * d;
      if (self == 0) z += e * d;
    } else {
      z = tr.c + e.cwiseProduct(tr.b) + tr.a.cwiseProduct(d);
      if (self == 0) z += e.cwiseProduct(d);
    }
    out.push_back(ArithShare{self, std::move(z), terms[i].lhs.config});
  }
  return out;
}

std::vector<ArithShare> multiply(Party& party,
                                 std::span<const ProductTerm> terms) {
  std::vector<TripleShare> triples;
  triples.reserve(terms.size());
  for (const auto& t : terms) {
    const Shape out = product_shape(t);
    if (t.kind == Product::kMatmul) {
      triples.push_back(party.next_matmul(t.lhs.rows(), t.lhs.cols(),
                                          t.rhs.cols()));
    } else {
      triples.push_back(party.next_beaver(out[0], out[1], TripleFlavor::kArith));
    }
  }
  return multiply(party.channel(), terms, triples);
}

ArithShare mul_beaver(Party& party, const ArithShare& x, const ArithShare& y) {
  const std::array terms{ProductTerm{x, y, Product::kHadamard}};
  return std::move(multiply(party, terms).front());
}

ArithShare mul_beaver(Channel& channel, const ArithShare& x,
                      const ArithShare& y, const TripleShare& triple) {
  const std::array terms{ProductTerm{x, y, Product::kHadamard}};
  return std::move(
      multiply(channel, terms, std::span(&triple, 1)).front());
}

ArithShare matmul_beaver(Party& party, const ArithShare& x,
                         const ArithShare& y) {
  const std::array terms{ProductTerm{x, y, Product::kMatmul}};
  return std::move(multiply(party, terms).front());
}

ArithShare matmul_beaver(Channel& channel, const ArithShare& x,
                         const ArithShare& y, const TripleShare& triple) {
  const std::array terms{ProductTerm{x, y, Product::kMatmul}};
  return std::move(
      multiply(channel, terms, std::span(&triple, 1)).front());
}

namespace {

std::vector<BinShare> and_with(Channel& channel,
                               std::span<const std::pair<BinShare, BinShare>> pairs,
                               std::span<const TripleShare> triples) {
  const int self = channel.party();
  std::vector<RingMatrix> masked;
  masked.reserve(2 * pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [x, y] = pairs[i];
    if (x.rows() != y.rows() || x.cols() != y.cols() ||
        triples[i].a.rows() != x.rows() || triples[i].a.cols() != x.cols()) {
      throw ShapeError("and_beaver: shape mismatch");
    }
    masked.push_back(bxor(x.data, triples[i].a));
    masked.push_back(bxor(y.data, triples[i].b));
  }
  // XOR opening: exchange and combine with ^ rather than +.
  channel.check_opening(Opening::kMasked);
  auto theirs = channel.exchange(masked);
  std::vector<BinShare> out;
  out.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const RingMatrix e = bxor(theirs[2 * i], masked[2 * i]);
    const RingMatrix d = bxor(theirs[2 * i + 1], masked[2 * i + 1]);
    const TripleShare& tr = triples[i];
    RingMatrix z = bxor(bxor(tr.c, band(e, tr.b)), band(tr.a, d));
    if (self == 0) z = bxor(z, band(e, d));
    out.push_back(BinShare{self, std::move(z)});
  }
  return out;
}

}  // namespace

std::vector<BinShare> and_beaver(
    Party& party, std::span<const std::pair<BinShare, BinShare>> pairs) {
  MeterScope scope(party.meter(), "and");
  std::vector<TripleShare> triples;
  triples.reserve(pairs.size());
  for (const auto& [x, y] : pairs) {
    triples.push_back(party.next_beaver(x.rows(), x.cols(), TripleFlavor::kBinary));
  }
  return and_with(party.channel(), pairs, triples);
}

BinShare and_beaver(Party& party, const BinShare& x, const BinShare& y) {
  const std::array pairs{std::pair{x, y}};
  return std::move(and_beaver(party, pairs).front());
}

BinShare and_beaver(Channel& channel, const BinShare& x, const BinShare& y,
                    const TripleShare& triple) {
  const std::array pairs{std::pair{x, y}};
  return std::move(and_with(channel, pairs, std::span(&triple, 1)).front());
}

BinShare a2b(Party& party, const ArithShare& x) {
  MeterScope scope(party.meter(), "a2b");
  const int self = party.id();
  const RingMatrix zero = RingMatrix::Zero(x.rows(), x.cols());
  // The two additive shares are private summands; (x0, 0) and (0, x1) are
  // XOR sharings of them.
  const BinShare lhs{self, self == 0 ? x.data : zero};
  const BinShare rhs{self, self == 1 ? x.data : zero};

  const BinShare propagate0 = xor_shares(lhs, rhs);
  BinShare generate = and_beaver(party, lhs, rhs);
  BinShare propagate = propagate0;
  for (int shift = 1; shift < 64; shift <<= 1) {
    if (shift < 32) {
      const std::array pairs{
          std::pair{propagate, shift_left(generate, shift)},
          std::pair{propagate, shift_left(propagate, shift)}};
      auto r = and_beaver(party, pairs);
      generate = xor_shares(generate, r[0]);
      propagate = std::move(r[1]);
    } else {
      generate = xor_shares(
          generate, and_beaver(party, propagate, shift_left(generate, shift)));
    }
  }
  // generate now holds the carry out of every bit position.
  return xor_shares(propagate0, shift_left(generate, 1));
}

ArithShare bit_to_arith(Party& party, const BinShare& bits) {
  MeterScope scope(party.meter(), "bit2a");
  const int self = party.id();
#ifndef NDEBUG
  for (Index i = 0; i < bits.data.size(); ++i) {
    if (bits.data.data()[i] > 1) {
      throw ShapeError("bit_to_arith: share word is not a single bit");
    }
  }
#endif
  const RingMatrix zero = RingMatrix::Zero(bits.rows(), bits.cols());
  const ArithShare b0{self, self == 0 ? bits.data : zero, party.config()};
  const ArithShare b1{self, self == 1 ? bits.data : zero, party.config()};
  const ArithShare prod = mul_beaver(party, b0, b1);
  return sub(add(b0, b1), mul_public(prod, Ring{2}));
}

ArithShare b2a_full(Party& party, const BinShare& x) {
  MeterScope scope(party.meter(), "b2a");
  const Index rows = x.rows();
  const Index cols = x.cols();
  BinShare bits{x.party, RingMatrix(64 * rows, cols)};
  for (int j = 0; j < 64; ++j) {
    bits.data.middleRows(j * rows, rows) =
        x.data.unaryExpr([j](Ring v) { return (v >> j) & Ring{1}; });
  }
  const ArithShare a = bit_to_arith(party, bits);
  RingMatrix sum = RingMatrix::Zero(rows, cols);
  for (int j = 0; j < 64; ++j) {
    sum += a.data.middleRows(j * rows, rows) * (Ring{1} << j);
  }
  return ArithShare{x.party, std::move(sum), party.config()};
}

ArithShare ltz(Party& party, const ArithShare& x) {
  MeterScope scope(party.meter(), "ltz");
  const BinShare z = a2b(party, x);
  return bit_to_arith(party, shift_right(z, 63));
}

}  // namespace adaptmpc
