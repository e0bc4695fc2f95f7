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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include "blecert/bytes.hpp"
#include "blecert/random.hpp"

// P-256 ECDH/ECDSA, AES-CMAC and the two pairing functions built on it:
// f4 (confirm value) and f5 (long term key).
namespace blecert::crypto {

inline constexpr std::size_t kScalarSize = 32;
inline constexpr std::size_t kCoordinateSize = 32;
inline constexpr std::size_t kBlockSize = 16;
inline constexpr std::size_t kSignatureSize = 64;

using Block = Octets<kBlockSize>;

// Key for the first f5 stage: T = AES-CMAC_SALT(ECDH x-coordinate).
inline constexpr Block kF5Salt = {0x6C, 0x88, 0x83, 0x91, 0xAA, 0xF5,
                                  0xA5, 0x38, 0x60, 0x37, 0x0B, 0xDB,
                                  0x5A, 0x60, 0x83, 0xBE};

// Scalar in [1, n). Wiped on destruction.
class PrivateScalar {
 public:
  // Throws Error(Errc::InvalidScalar) when out of range.
  static PrivateScalar from_bytes(const Octets<kScalarSize>& value);
  static PrivateScalar from_hex(std::string_view hex);

  PrivateScalar(const PrivateScalar&) = default;
  PrivateScalar& operator=(const PrivateScalar&) = default;
  ~PrivateScalar();

  const Octets<kScalarSize>& bytes() const noexcept { return value_; }
  bool operator==(const PrivateScalar& other) const;

 private:
  explicit PrivateScalar(const Octets<kScalarSize>& value) : value_(value) {}
  Octets<kScalarSize> value_;
};

// Affine P-256 point. Every instance has passed on-curve validation, so an
// off-curve point cannot reach a scalar multiplication.
class PublicKey {
 public:
  // Throws Error(Errc::InvalidPoint) unless (x, y) is on the curve.
  static PublicKey from_affine(const Octets<kCoordinateSize>& x,
                               const Octets<kCoordinateSize>& y);
  // Recovers the even-y point for x. Throws Error(Errc::InvalidPoint) when x
  // has no curve solution.
  static PublicKey from_x(const Octets<kCoordinateSize>& x);
  static std::optional<PublicKey> try_from_x(const Octets<kCoordinateSize>& x);

  const Octets<kCoordinateSize>& x() const noexcept { return x_; }
  const Octets<kCoordinateSize>& y() const noexcept { return y_; }
  bool has_even_y() const noexcept { return (y_.back() & 1U) == 0; }

  bool operator==(const PublicKey&) const = default;

 private:
  PublicKey(const Octets<kCoordinateSize>& x, const Octets<kCoordinateSize>& y)
      : x_(x), y_(y) {}
  Octets<kCoordinateSize> x_;
  Octets<kCoordinateSize> y_;
};

struct KeyPair {
  PrivateScalar private_key;
  PublicKey public_key;
};

// x-coordinate of the ECDH product.
struct SharedSecret {
  Octets<kCoordinateSize> value{};
  bool operator==(const SharedSecret&) const = default;
};

struct Nonce128 {
  Block value{};
  static Nonce128 generate(RandomSource& rng);
  bool operator==(const Nonce128&) const = default;
};

struct ConfirmValue {
  Block value{};
  bool operator==(const ConfirmValue&) const = default;
};

// 128-bit link key. Wiped on destruction.
class Ltk {
 public:
  Ltk() = default;
  explicit Ltk(const Block& value) : value_(value) {}
  Ltk(const Ltk&) = default;
  Ltk& operator=(const Ltk&) = default;
  ~Ltk();

  const Block& bytes() const noexcept { return value_; }
  bool operator==(const Ltk& other) const;

 private:
  Block value_{};
};

enum class AddressType : std::uint8_t { Public = 0x00, StaticRandom = 0x01 };

// 6-byte hardware address plus its type octet: 56 bits on the wire.
struct DeviceAddress {
  static constexpr std::size_t kEncodedSize = 7;

  Octets<6> addr{};
  AddressType type = AddressType::Public;

  Octets<kEncodedSize> encode() const;
  // "AA:BB:CC:DD:EE:FF", most significant byte first.
  static DeviceAddress parse(std::string_view text,
                             AddressType type = AddressType::Public);
  std::string to_string() const;

  bool operator==(const DeviceAddress&) const = default;
  auto operator<=>(const DeviceAddress&) const = default;
};

struct Signature {
  Octets<kScalarSize> r{};
  Octets<kScalarSize> s{};

  Octets<kSignatureSize> encode() const;
  static Signature decode(ByteView raw);  // Throws Error(Errc::BadLength).

  bool operator==(const Signature&) const = default;
};

// Draws scalars until one lands in [1, n) and its public point has even y.
KeyPair generate_keypair(RandomSource& rng);

// Public point for a scalar, any y parity.
PublicKey derive_public_key(const PrivateScalar& scalar);

// Throws Error(Errc::IdentityResult) if the product is the point at infinity.
SharedSecret ecdh(const PrivateScalar& local, const PublicKey& remote);

Block aes128_encrypt_block(const Block& key, const Block& plaintext);

// RFC 4493.
Block aes_cmac(const Block& key, ByteView message);

// C = AES-CMAC_{n_p}(x(pk_c) || x(pk_p)).
ConfirmValue f4_confirm(const PublicKey& pk_c, const PublicKey& pk_p,
                        const Nonce128& n_p);

// First stage of f5. Throws Error(Errc::ZeroSecret) for an all-zero secret.
Block f5_intermediate_key(const SharedSecret& secret);

// LTK = AES-CMAC_T(n_c || n_p || mac_c || mac_p), T from
// f5_intermediate_key.
Ltk f5_ltk(const SharedSecret& secret, const Nonce128& n_c, const Nonce128& n_p,
           const DeviceAddress& mac_c, const DeviceAddress& mac_p);

Octets<32> sha256(ByteView message);

// ECDSA over SHA-256 with a per-signature nonce drawn from rng.
Signature ecdsa_sign(const PrivateScalar& key, ByteView message,
                     RandomSource& rng);

// ECDSA over SHA-256 with the RFC 6979 deterministic nonce.
Signature ecdsa_sign_deterministic(const PrivateScalar& key, ByteView message);

// Malformed signatures are rejected, never thrown.
bool ecdsa_verify(const PublicKey& key, ByteView message, const Signature& sig);

// Session link protection: AES-128-GCM under the LTK.
// Frame: 8-byte big-endian counter || ciphertext || 16-byte tag.
enum class LinkDirection : std::uint8_t {
  CentralToPeripheral = 0x00,
  PeripheralToCentral = 0x01,
};

inline constexpr std::size_t kSessionOverhead = 8 + 16;

Bytes session_seal(const Ltk& ltk, LinkDirection direction,
                   std::uint64_t counter, ByteView plaintext);

struct OpenedFrame {
  std::uint64_t counter = 0;
  Bytes plaintext;
};

// Throws Error(Errc::AuthFailure) on any tampering or a truncated frame.
OpenedFrame session_open(const Ltk& ltk, LinkDirection direction,
                         ByteView frame);

// One direction of an established link: seals with a strictly increasing
// counter and rejects frames whose counter does not increase.
class SessionChannel {
 public:
  SessionChannel(const Ltk& ltk, LinkDirection outbound);

  Bytes seal(ByteView plaintext);
  // Throws Error(Errc::AuthFailure) or Error(Errc::ReplayDetected).
  Bytes open(ByteView frame);

 private:
  Ltk ltk_;
  LinkDirection outbound_;
  LinkDirection inbound_;
  std::uint64_t next_send_ = 1;
  std::uint64_t last_received_ = 0;
};

}  // namespace blecert::crypto
