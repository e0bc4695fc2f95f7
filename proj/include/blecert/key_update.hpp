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
#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "blecert/authority.hpp"
#include "blecert/certificate.hpp"

// Device key rotation pushed by the manufacturer.
//
// Package layout (175 bytes):
//   new certificate (103) || sealed scalar (48) || timestamp (8, BE) || tag (16)
// The sealed scalar is a 16-byte IV followed by the AES-128-CTR encryption of
// the new private scalar. Encryption and tag keys are CMACs of fixed labels
// under the device's 128-bit manufacturing secret; the tag is AES-CMAC over
// everything before it.
namespace blecert::update {

inline constexpr std::size_t kSealedScalarSize = 48;
inline constexpr std::size_t kPackageSize =
    kCertificateSize + kSealedScalarSize + 8 + 16;
inline constexpr std::uint64_t kDefaultFreshnessWindow = 300;

using ManufacturingSecret = Octets<16>;

struct UpdatePackage {
  BleCertificate certificate;
  Octets<kSealedScalarSize> sealed_scalar{};
  std::uint64_t timestamp = 0;
  Octets<16> tag{};

  Octets<kPackageSize> encode() const;
  // Throws Error(Errc::BadLength) or Error(Errc::BadVersion).
  static UpdatePackage decode(ByteView bytes);

  bool operator==(const UpdatePackage&) const = default;
};

// Chip manufacturer: holds its request-signing key and the manufacturing
// secret burned into each device it built.
class Manufacturer {
 public:
  static Manufacturer create(RandomSource& rng);
  explicit Manufacturer(crypto::KeyPair signing_key);

  const crypto::PublicKey& public_key() const noexcept {
    return signing_key_.public_key;
  }
  const crypto::PrivateScalar& private_key() const noexcept {
    return signing_key_.private_key;
  }

  // Generates and records the manufacturing secret for a new device.
  ManufacturingSecret enroll_device(const Serial& serial, RandomSource& rng);
  void enroll_device(const Serial& serial, const ManufacturingSecret& secret);

  // Throws Error(Errc::UnknownDevice).
  const ManufacturingSecret& secret_for(const Serial& serial) const;

  IssuanceRequest request_for(const Serial& serial,
                              const crypto::PublicKey& subject) const;

 private:
  crypto::KeyPair signing_key_;
  std::map<Serial, ManufacturingSecret> secrets_;
};

// Throws Error(Errc::UnknownDevice) if the manufacturer never built the
// device, Error(Errc::BadParameter) if the certificate does not match the
// serial and key.
UpdatePackage build_update(const Manufacturer& manufacturer,
                           const Serial& device_serial,
                           const crypto::KeyPair& new_keypair,
                           const BleCertificate& new_certificate,
                           std::uint64_t now, RandomSource& rng);

struct Credentials {
  crypto::KeyPair keys;
  BleCertificate certificate;
};

enum class DisconnectReason { BadAuth, StaleTimestamp, KeyCertMismatch };

const char* to_string(DisconnectReason reason);

struct UpdateOutcome {
  bool applied = false;
  std::optional<DisconnectReason> reason;

  static UpdateOutcome ok() { return {true, std::nullopt}; }
  static UpdateOutcome disconnected(DisconnectReason r) { return {false, r}; }
};

// Key material held by a device. The active certificate always carries the
// active key; the manufacturing secret never changes. Pairing snapshots and
// updates are mutually exclusive.
class DeviceKeystore {
 public:
  // Throws Error(Errc::BadParameter) if the certificate does not carry the
  // key.
  DeviceKeystore(ManufacturingSecret manufacturing_secret,
                 Credentials active);

  DeviceKeystore(DeviceKeystore&&) noexcept = default;
  DeviceKeystore& operator=(DeviceKeystore&&) noexcept = default;

  Credentials credentials() const;
  Serial serial() const;
  const ManufacturingSecret& manufacturing_secret() const noexcept {
    return secret_;
  }

 private:
  friend UpdateOutcome apply_update(DeviceKeystore&, const UpdatePackage&,
                                    std::uint64_t, std::uint64_t);
  ManufacturingSecret secret_;
  Credentials active_;
  std::unique_ptr<std::mutex> mutex_;
};

// Applied only if the tag verifies, |now - timestamp| <= window and the
// unsealed scalar matches the certificate; then the scalar and certificate
// are swapped in together. On any other outcome the keystore is unchanged.
UpdateOutcome apply_update(DeviceKeystore& keystore, const UpdatePackage& pkg,
                           std::uint64_t now,
                           std::uint64_t window = kDefaultFreshnessWindow);

}  // namespace blecert::update
