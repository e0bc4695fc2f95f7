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

#include <cstdint>
#include <span>

#include "blecert/bytes.hpp"

namespace blecert {

// Source of uniformly random bytes. Implementations throw
// Error(Errc::RandomnessFailure) when they cannot deliver.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;

  template <std::size_t N>
  Octets<N> draw() {
    Octets<N> out{};
    fill(out);
    return out;
  }
};

// Operating-system entropy through OpenSSL's DRBG. Safe to share between
// threads.
class SystemRandom final : public RandomSource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

// Deterministic SHA-256 counter-mode stream: block_i = SHA256(seed || i).
// Reproducible for a given seed; not thread-safe, use one per thread.
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(std::uint64_t seed);
  explicit SeededRandom(ByteView seed);
  ~SeededRandom() override;

  void fill(std::span<std::uint8_t> out) override;

  // Independent child stream, e.g. one per simulated endpoint.
  SeededRandom fork(std::uint64_t label);

 private:
  void refill();

  Octets<32> seed_{};
  std::uint64_t counter_ = 0;
  Octets<32> block_{};
  std::size_t used_ = block_.size();
};

}  // namespace blecert
