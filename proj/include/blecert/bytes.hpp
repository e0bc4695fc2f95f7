// Copyright 2026 The blecert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy of
// the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations under
// the License.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace blecert {

template <std::size_t N>
using Octets = std::array<std::uint8_t, N>;

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// Lowercase, no separators.
std::string to_hex(ByteView data);

// Accepts upper or lower case; surrounding whitespace is ignored.
// Throws Error(Errc::BadHex).
Bytes from_hex(std::string_view text);

template <std::size_t N>
Octets<N> octets_from_hex(std::string_view text);

inline void append(Bytes& out, ByteView data) {
  out.insert(out.end(), data.begin(), data.end());
}

// Overwrites memory in a way the optimizer may not elide.
void secure_wipe(std::span<std::uint8_t> data);

// Constant-time equality for equally sized buffers.
bool constant_time_equal(ByteView a, ByteView b);

}  // namespace blecert

#include "blecert/error.hpp"

namespace blecert {

template <std::size_t N>
Octets<N> octets_from_hex(std::string_view text) {
  const Bytes raw = from_hex(text);
  if (raw.size() != N) {
    throw Error(Errc::BadLength, "expected " + std::to_string(N) +
                                     " bytes of hex, got " +
                                     std::to_string(raw.size()));
  }
  Octets<N> out{};
  std::copy(raw.begin(), raw.end(), out.begin());
  return out;
}

}  // namespace blecert
