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

#include "adaptmpc/share.h"

#include <string>

namespace adaptmpc {

namespace {

void check_same(const ArithShare& x, const ArithShare& y, const char* op) {
  if (x.party != y.party) {
    throw ShapeError(std::string(op) + ": shares of different parties");
  }
  if (!(x.config == y.config)) {
    throw ConfigError(std::string(op) + ": fixed-point configs differ");
  }
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw ShapeError(std::string(op) + ": shape " + std::to_string(x.rows()) +
                     "x" + std::to_string(x.cols()) + " vs " +
                     std::to_string(y.rows()) + "x" + std::to_string(y.cols()));
  }
}

std::string shape_key(const char* kind, std::initializer_list<Index> dims) {
  std::string key = kind;
  key += ':';
  bool first = true;
  for (Index d : dims) {
    if (!first) key += 'x';
    key += std::to_string(d);
    first = false;
  }
  return key;
}

}  // namespace

RingMatrix random_ring(Prg& prg, Index rows, Index cols) {
  RingMatrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = prg();
  return m;
}

std::pair<ArithShare, ArithShare> share_arith(const FixedTensor& x, Prg& prg) {
  RingMatrix r = random_ring(prg, x.rows(), x.cols());
  RingMatrix other = x.values() - r;
  return {ArithShare{0, std::move(r), x.config()},
          ArithShare{1, std::move(other), x.config()}};
}

FixedTensor reconstruct_arith(const ArithShare& s0, const ArithShare& s1) {
  if (!(s0.config == s1.config)) {
    throw ConfigError("reconstruct_arith: fixed-point configs differ");
  }
  if (s0.rows() != s1.rows() || s0.cols() != s1.cols()) {
    throw ShapeError("reconstruct_arith: share shapes differ");
  }
  return FixedTensor(s0.data + s1.data, s0.config);
}

std::pair<BinShare, BinShare> share_bin(const RingMatrix& x, Prg& prg) {
  RingMatrix r = random_ring(prg, x.rows(), x.cols());
  RingMatrix other = x.binaryExpr(r, [](Ring a, Ring b) { return a ^ b; });
  return {BinShare{0, std::move(r)}, BinShare{1, std::move(other)}};
}

RingMatrix reconstruct_bin(const BinShare& s0, const BinShare& s1) {
  if (s0.rows() != s1.rows() || s0.cols() != s1.cols()) {
    throw ShapeError("reconstruct_bin: share shapes differ");
  }
  return s0.data.binaryExpr(s1.data, [](Ring a, Ring b) { return a ^ b; });
}

ArithShare add(const ArithShare& x, const ArithShare& y) {
  check_same(x, y, "add");
  return {x.party, x.data + y.data, x.config};
}

ArithShare sub(const ArithShare& x, const ArithShare& y) {
  check_same(x, y, "sub");
  return {x.party, x.data - y.data, x.config};
}

ArithShare neg(const ArithShare& x) {
  return {x.party, RingMatrix::Zero(x.rows(), x.cols()) - x.data, x.config};
}

ArithShare mul_public(const ArithShare& x, Ring c) {
  return {x.party, x.data * c, x.config};
}

ArithShare mul_public(const ArithShare& x, const RingMatrix& c) {
  return {x.party,
          x.data.cwiseProduct(broadcast_to(c, x.rows(), x.cols())), x.config};
}

ArithShare add_public(const ArithShare& x, const RingMatrix& c) {
  if (x.party != 0) return x;
  return {x.party, x.data + broadcast_to(c, x.rows(), x.cols()), x.config};
}

ArithShare add_public(const ArithShare& x, Ring c) {
  return add_public(x, RingMatrix::Constant(1, 1, c));
}

ArithShare scale_public(const ArithShare& x, double c) {
  return truncate_share(mul_public(x, encode_fixed(c, x.config)));
}

ArithShare truncate_share(const ArithShare& x, int bits) {
  return {x.party, arshift(x.data, bits), x.config};
}

ArithShare truncate_share(const ArithShare& x) {
  return truncate_share(x, x.config.frac_bits);
}

BinShare xor_shares(const BinShare& x, const BinShare& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw ShapeError("xor_shares: shapes differ");
  }
  return {x.party,
          x.data.binaryExpr(y.data, [](Ring a, Ring b) { return a ^ b; })};
}

BinShare xor_public(const BinShare& x, const RingMatrix& c) {
  if (x.party != 0) return x;
  return {x.party, x.data.binaryExpr(broadcast_to(c, x.rows(), x.cols()),
                                     [](Ring a, Ring b) { return a ^ b; })};
}

BinShare and_public(const BinShare& x, Ring mask) {
  return {x.party, x.data.unaryExpr([mask](Ring v) { return v & mask; })};
}

BinShare shift_left(const BinShare& x, int bits) {
  return {x.party, x.data.unaryExpr([bits](Ring v) { return v << bits; })};
}

BinShare shift_right(const BinShare& x, int bits) {
  return {x.party, x.data.unaryExpr([bits](Ring v) { return v >> bits; })};
}

TripleDealer::TripleDealer(std::uint64_t seed) : prg_(seed) {}

std::pair<TripleShare, TripleShare> TripleDealer::gen_beaver(
    Index rows, Index cols, TripleFlavor flavor) {
  RingMatrix a = random_ring(prg_, rows, cols);
  RingMatrix b = random_ring(prg_, rows, cols);
  RingMatrix c;
  TripleShare s0{random_ring(prg_, rows, cols), random_ring(prg_, rows, cols),
                 random_ring(prg_, rows, cols)};
  TripleShare s1;
  if (flavor == TripleFlavor::kArith) {
    c = a.cwiseProduct(b);
    s1 = {a - s0.a, b - s0.b, c - s0.c};
  } else {
    auto x = [](Ring p, Ring q) { return p ^ q; };
    c = a.binaryExpr(b, [](Ring p, Ring q) { return p & q; });
    s1 = {a.binaryExpr(s0.a, x), b.binaryExpr(s0.b, x), c.binaryExpr(s0.c, x)};
  }
  ++issued_[shape_key(flavor == TripleFlavor::kArith ? "arith" : "binary",
                      {rows, cols})];
  return {std::move(s0), std::move(s1)};
}

std::pair<TripleShare, TripleShare> TripleDealer::gen_matmul(Index m, Index k,
                                                             Index n) {
  RingMatrix a = random_ring(prg_, m, k);
  RingMatrix b = random_ring(prg_, k, n);
  RingMatrix c = a * b;
  TripleShare s0{random_ring(prg_, m, k), random_ring(prg_, k, n),
                 random_ring(prg_, m, n)};
  TripleShare s1{a - s0.a, b - s0.b, c - s0.c};
  ++issued_[shape_key("matmul", {m, k, n})];
  return {std::move(s0), std::move(s1)};
}

}  // namespace adaptmpc
