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

#include <cstdio>

#include "blecert/crypto.hpp"

namespace blecert::crypto {

Nonce128 Nonce128::generate(RandomSource& rng) {
  return Nonce128{rng.draw<kBlockSize>()};
}

Ltk::~Ltk() { secure_wipe(value_); }

bool Ltk::operator==(const Ltk& other) const {
  return constant_time_equal(value_, other.value_);
}

Octets<DeviceAddress::kEncodedSize> DeviceAddress::encode() const {
  Octets<kEncodedSize> out{};
  std::copy(addr.begin(), addr.end(), out.begin());
  out[6] = static_cast<std::uint8_t>(type);
  return out;
}

DeviceAddress DeviceAddress::parse(std::string_view text, AddressType type) {
  // Six colon-separated octets.
  if (text.size() != 17) {
    throw Error(Errc::BadAddress, "expected AA:BB:CC:DD:EE:FF");
  }
  std::string compact;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i % 3 == 2) {
      if (text[i] != ':') throw Error(Errc::BadAddress, "expected ':'");
      continue;
    }
    compact.push_back(text[i]);
  }
  try {
    return DeviceAddress{octets_from_hex<6>(compact), type};
  } catch (const Error&) {
    throw Error(Errc::BadAddress, "invalid address octet");
  }
}

std::string DeviceAddress::to_string() const {
  char buf[18];
  std::snprintf(buf, sizeof(buf), "%02X:%02X:%02X:%02X:%02X:%02X", addr[0],
                addr[1], addr[2], addr[3], addr[4], addr[5]);
  return buf;
}

Octets<kSignatureSize> Signature::encode() const {
  Octets<kSignatureSize> out{};
  std::copy(r.begin(), r.end(), out.begin());
  std::copy(s.begin(), s.end(), out.begin() + kScalarSize);
  return out;
}

Signature Signature::decode(ByteView raw) {
  if (raw.size() != kSignatureSize) {
    throw Error(Errc::BadLength, "signature must be 64 bytes");
  }
  Signature sig;
  std::copy_n(raw.begin(), kScalarSize, sig.r.begin());
  std::copy_n(raw.begin() + kScalarSize, kScalarSize, sig.s.begin());
  return sig;
}

}  // namespace blecert::crypto
