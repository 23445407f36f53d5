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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "adaptmpc/ring.h"

namespace adaptmpc {

// Tensor file layout (little-endian):
//   "CPFT" | version u16 = 1 | rank u16 | rank x u64 dims | payload
// Payload is row-major f32 or raw u64 ring elements; which one is declared
// out of band (manifest or run config).
enum class DType { kF32, kU64Ring };

inline constexpr std::uint16_t kTensorFormatVersion = 1;

std::string_view dtype_name(DType dtype);
DType parse_dtype(std::string_view name);

void write_tensor(std::ostream& os, const FixedTensor& tensor, DType dtype);
FixedTensor read_tensor(std::istream& is, DType dtype,
                        const FixedPointConfig& cfg);

void save_tensor(const std::filesystem::path& path, const FixedTensor& tensor,
                 DType dtype);
FixedTensor load_tensor(const std::filesystem::path& path, DType dtype,
                        const FixedPointConfig& cfg);

}  // namespace adaptmpc
