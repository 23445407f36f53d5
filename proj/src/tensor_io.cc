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

#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>

#include "le_bytes.h"

namespace adaptmpc {

namespace {

constexpr std::array<char, 4> kMagic = {'C', 'P', 'F', 'T'};

void read_exact(std::istream& is, void* dst, std::size_t n) {
  is.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(is.gcount()) != n) {
    throw FormatError("tensor stream truncated");
  }
}

}  // namespace

std::string_view dtype_name(DType dtype) {
  return dtype == DType::kF32 ? "f32" : "u64ring";
}

DType parse_dtype(std::string_view name) {
  if (name == "f32") return DType::kF32;
  if (name == "u64ring") return DType::kU64Ring;
  throw FormatError("unknown dtype '" + std::string(name) + "'");
}

void write_tensor(std::ostream& os, const FixedTensor& tensor, DType dtype) {
  std::vector<std::uint8_t> buf(kMagic.begin(), kMagic.end());
  detail::put_le<std::uint16_t>(buf, kTensorFormatVersion);
  detail::put_le<std::uint16_t>(buf, 2);
  detail::put_le<std::uint64_t>(buf, static_cast<std::uint64_t>(tensor.rows()));
  detail::put_le<std::uint64_t>(buf, static_cast<std::uint64_t>(tensor.cols()));
  const RingMatrix& v = tensor.values();
  for (Index i = 0; i < v.size(); ++i) {
    if (dtype == DType::kF32) {
      const auto f = static_cast<float>(decode_fixed(v.data()[i], tensor.config()));
      detail::put_le<std::uint32_t>(buf, std::bit_cast<std::uint32_t>(f));
    } else {
      detail::put_le<std::uint64_t>(buf, v.data()[i]);
    }
  }
  os.write(reinterpret_cast<const char*>(buf.data()),
           static_cast<std::streamsize>(buf.size()));
  if (!os) throw IoError("failed writing tensor");
}

FixedTensor read_tensor(std::istream& is, DType dtype,
                        const FixedPointConfig& cfg) {
  std::array<std::uint8_t, 8> head{};
  read_exact(is, head.data(), head.size());
  if (!std::equal(kMagic.begin(), kMagic.end(), head.begin())) {
    throw FormatError("bad tensor magic");
  }
  const auto version = detail::get_le<std::uint16_t>(head.data() + 4);
  if (version != kTensorFormatVersion) {
    throw FormatError("unsupported tensor format version " +
                      std::to_string(version));
  }
  const auto rank = detail::get_le<std::uint16_t>(head.data() + 6);
  if (rank > 2) {
    throw FormatError("tensor rank " + std::to_string(rank) +
                      " not supported (max 2)");
  }
  std::vector<std::uint64_t> dims(rank);
  for (auto& d : dims) {
    std::array<std::uint8_t, 8> b{};
    read_exact(is, b.data(), b.size());
    d = detail::get_le<std::uint64_t>(b.data());
  }
  std::uint64_t rows = 1, cols = 1;
  if (rank == 1) cols = dims[0];
  if (rank == 2) {
    rows = dims[0];
    cols = dims[1];
  }
  constexpr std::uint64_t kMaxElems = std::uint64_t{1} << 32;
  if (rows > kMaxElems || cols > kMaxElems || rows * cols > kMaxElems) {
    throw FormatError("tensor dims too large");
  }
  const std::size_t n = rows * cols;
  const std::size_t width = dtype == DType::kF32 ? 4 : 8;
  std::vector<std::uint8_t> payload(n * width);
  read_exact(is, payload.data(), payload.size());

  RingMatrix values(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* p = payload.data() + i * width;
    if (dtype == DType::kF32) {
      const auto f = std::bit_cast<float>(detail::get_le<std::uint32_t>(p));
      values.data()[i] = encode_fixed(static_cast<double>(f), cfg);
    } else {
      values.data()[i] = detail::get_le<std::uint64_t>(p);
    }
  }
  return FixedTensor(std::move(values), cfg);
}

void save_tensor(const std::filesystem::path& path, const FixedTensor& tensor,
                 DType dtype) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_tensor(os, tensor, dtype);
}

FixedTensor load_tensor(const std::filesystem::path& path, DType dtype,
                        const FixedPointConfig& cfg) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  return read_tensor(is, dtype, cfg);
}

}  // namespace adaptmpc
