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

#include "blecert/random.hpp"

#include <openssl/rand.h>

#include <algorithm>

#include "blecert/crypto.hpp"

namespace blecert {

void SystemRandom::fill(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw Error(Errc::RandomnessFailure, "RAND_bytes failed");
  }
}

namespace {

void put_u64(Bytes& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

}  // namespace

SeededRandom::SeededRandom(std::uint64_t seed) {
  Bytes material = {'s', 'e', 'e', 'd'};
  put_u64(material, seed);
  seed_ = crypto::sha256(material);
}

SeededRandom::SeededRandom(ByteView seed) {
  Bytes material = {'r', 'a', 'w', ' '};
  append(material, seed);
  seed_ = crypto::sha256(material);
}

SeededRandom::~SeededRandom() {
  secure_wipe(seed_);
  secure_wipe(block_);
}

void SeededRandom::refill() {
  Bytes material(seed_.begin(), seed_.end());
  put_u64(material, counter_++);
  block_ = crypto::sha256(material);
  secure_wipe(material);
  used_ = 0;
}

void SeededRandom::fill(std::span<std::uint8_t> out) {
  std::size_t written = 0;
  while (written < out.size()) {
    if (used_ == block_.size()) refill();
    const std::size_t take =
        std::min(out.size() - written, block_.size() - used_);
    std::copy_n(block_.begin() + static_cast<std::ptrdiff_t>(used_), take,
                out.begin() + static_cast<std::ptrdiff_t>(written));
    used_ += take;
    written += take;
  }
}

SeededRandom SeededRandom::fork(std::uint64_t label) {
  Bytes material(seed_.begin(), seed_.end());
  material.insert(material.end(), {'f', 'o', 'r', 'k'});
  put_u64(material, label);
  return SeededRandom(ByteView(crypto::sha256(material)));
}

}  // namespace blecert
