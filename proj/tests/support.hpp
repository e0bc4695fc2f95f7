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

#include <algorithm>
#include <deque>
#include <string>

#include "blecert/authority.hpp"
#include "blecert/bytes.hpp"
#include "blecert/crypto.hpp"
#include "blecert/key_update.hpp"
#include "blecert/pairing.hpp"
#include "oracle/p256_oracle.hpp"

namespace testing_support {

using blecert::Bytes;

inline Bytes hex(const std::string& text) { return blecert::from_hex(text); }

template <std::size_t N>
blecert::Octets<N> octets(const std::string& text) {
  return blecert::octets_from_hex<N>(text);
}

// LTK recomputed from raw CMAC calls: T = CMAC(SALT, x), LTK = CMAC(T, ...).
inline blecert::Octets<16> oracle_ltk(const blecert::crypto::SharedSecret& s,
                                      const blecert::crypto::Nonce128& n_c,
                                      const blecert::crypto::Nonce128& n_p,
                                      const blecert::crypto::DeviceAddress& a_c,
                                      const blecert::crypto::DeviceAddress& a_p) {
  const Bytes salt = hex("6C888391AAF5A53860370BDB5A6083BE");
  const auto t = oracle::cmac(salt, s.value);
  Bytes msg;
  blecert::append(msg, n_c.value);
  blecert::append(msg, n_p.value);
  blecert::append(msg, a_c.encode());
  blecert::append(msg, a_p.encode());
  return oracle::cmac(t, msg);
}

inline blecert::Octets<16> oracle_confirm(const blecert::crypto::PublicKey& c,
                                          const blecert::crypto::PublicKey& p,
                                          const blecert::crypto::Nonce128& n_p) {
  Bytes msg;
  blecert::append(msg, c.x());
  blecert::append(msg, p.x());
  return oracle::cmac(n_p.value, msg);
}

// Replays scripted chunks first, then falls through to a seeded stream.
class ScriptedRandom final : public blecert::RandomSource {
 public:
  explicit ScriptedRandom(std::uint64_t seed) : fallback_(seed) {}
  void push(Bytes chunk) { script_.push_back(std::move(chunk)); }
  void fill(std::span<std::uint8_t> out) override {
    if (!script_.empty() && script_.front().size() == out.size()) {
      std::copy(script_.front().begin(), script_.front().end(), out.begin());
      script_.pop_front();
      return;
    }
    fallback_.fill(out);
  }

 private:
  std::deque<Bytes> script_;
  blecert::SeededRandom fallback_;
};

// An authority with one registered manufacturer.
struct IssuerFixture {
  blecert::SeededRandom rng;
  blecert::RootAuthority authority;
  blecert::update::Manufacturer manufacturer;

  explicit IssuerFixture(std::uint64_t seed)
      : rng(seed),
        authority(blecert::RootAuthority::init(rng)),
        manufacturer(blecert::update::Manufacturer::create(rng)) {
    authority.register_manufacturer(manufacturer.public_key());
  }

  blecert::update::Credentials issue(const blecert::Serial& serial) {
    auto keys = blecert::crypto::generate_keypair(rng);
    auto cert =
        authority.issue(manufacturer.request_for(serial, keys.public_key));
    return {std::move(keys), cert};
  }
};

inline blecert::Serial serial_of(std::uint8_t last) {
  return blecert::Serial{0xC0, 0xFF, 0xEE, 0x00, 0x00, last};
}

// Runs a handshake between two contexts until neither has anything to send.
inline void drive(blecert::pairing::PairingContext& central,
                  blecert::pairing::PairingContext& peripheral,
                  blecert::RandomSource& rng_c, blecert::RandomSource& rng_p) {
  using blecert::pairing::WireMessage;
  std::deque<std::pair<bool, WireMessage>> queue;  // true: to peripheral
  queue.emplace_back(true, central.start_pairing());
  while (!queue.empty()) {
    auto [to_p, msg] = queue.front();
    queue.pop_front();
    auto out = to_p ? peripheral.handle_message(msg, rng_p)
                    : central.handle_message(msg, rng_c);
    for (auto& m : out) queue.emplace_back(!to_p, std::move(m));
  }
}

}  // namespace testing_support
