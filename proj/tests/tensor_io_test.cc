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


#include "adaptmpc/tensor_io.h"

#include <gtest/gtest.h>

#include <sstream>

#include "adaptmpc/errors.h"

namespace adaptmpc {
namespace {

std::string serialize(const FixedTensor& t, DType dtype) {
  std::ostringstream os;
  write_tensor(os, t, dtype);
  return os.str();
}

FixedTensor parse(const std::string& bytes, DType dtype) {
  std::istringstream is(bytes);
  return read_tensor(is, dtype, {});
}

FixedTensor sample() {
  RealMatrix m(2, 3);
  m << 0.5, -1.25, 3.0, 0.0, 100.75, -0.0625;
  return FixedTensor::from_real(m, {});
}

TEST(TensorIoTest, HeaderLayout) {
  const std::string b = serialize(sample(), DType::kF32);
  ASSERT_EQ(b.size(), 8u + 16u + 6u * 4u);
  EXPECT_EQ(b.substr(0, 4), "CPFT");
  EXPECT_EQ(b[4], 1);
  EXPECT_EQ(b[5], 0);
  EXPECT_EQ(b[6], 2);
  EXPECT_EQ(b[8], 2);
  EXPECT_EQ(b[16], 3);
}

TEST(TensorIoTest, RoundtripF32) {
  const FixedTensor t = sample();
  EXPECT_EQ(parse(serialize(t, DType::kF32), DType::kF32).values(), t.values());
}

TEST(TensorIoTest, RoundtripRing) {
  RingMatrix v(3, 2);
  v << 0, 1, ~Ring{0}, Ring{1} << 63, 12345, 987654321;
  const FixedTensor t(v, {});
  EXPECT_EQ(parse(serialize(t, DType::kU64Ring), DType::kU64Ring).values(), v);
}

TEST(TensorIoTest, RejectsBadMagic) {
  std::string b = serialize(sample(), DType::kF32);
  b[0] = 'X';
  EXPECT_THROW(parse(b, DType::kF32), FormatError);
}

TEST(TensorIoTest, RejectsBadVersion) {
  std::string b = serialize(sample(), DType::kF32);
  b[4] = 2;
  EXPECT_THROW(parse(b, DType::kF32), FormatError);
}

TEST(TensorIoTest, RejectsHighRank) {
  std::string b = serialize(sample(), DType::kF32);
  b[6] = 3;
  EXPECT_THROW(parse(b, DType::kF32), FormatError);
}

TEST(TensorIoTest, RejectsTruncation) {
  const std::string b = serialize(sample(), DType::kU64Ring);
  EXPECT_THROW(parse(b.substr(0, b.size() - 1), DType::kU64Ring), FormatError);
  EXPECT_THROW(parse(b.substr(0, 6), DType::kU64Ring), FormatError);
}

TEST(TensorIoTest, DtypeNames) {
  EXPECT_EQ(parse_dtype("f32"), DType::kF32);
  EXPECT_EQ(parse_dtype("u64ring"), DType::kU64Ring);
  EXPECT_EQ(dtype_name(DType::kU64Ring), "u64ring");
  EXPECT_THROW(parse_dtype("f64"), FormatError);
}

TEST(TensorIoTest, MissingFile) {
  EXPECT_THROW(load_tensor("/nonexistent/x.cpft", DType::kF32, {}), IoError);
}

}  // namespace
}  // namespace adaptmpc
