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
#include <optional>
#include <shared_mutex>
#include <vector>

#include "blecert/certificate.hpp"

namespace blecert {

// A manufacturer's countersigned request for a device certificate. The
// manufacturer signature covers serial || subject_public_key.
struct IssuanceRequest {
  Serial serial{};
  Octets<crypto::kCoordinateSize> subject_public_key{};
  crypto::Signature manufacturer_signature;

  Bytes signed_bytes() const;

  static IssuanceRequest create(const Serial& serial,
                                const Octets<crypto::kCoordinateSize>& subject,
                                const crypto::PrivateScalar& manufacturer_key);
};

using RegistrationId = std::uint32_t;

// Root certification authority with a device registry of at most one
// certificate per serial.
//
// Mutations are serialized; lookups may run concurrently with each other.
class RootAuthority {
 public:
  static RootAuthority init(RandomSource& rng);
  // Rebuilds an authority from persisted state; every certificate must
  // verify under the root key.
  static RootAuthority restore(crypto::PrivateScalar root_key,
                               const std::vector<crypto::PublicKey>& manufacturers,
                               const std::vector<BleCertificate>& registry);

  RootAuthority(RootAuthority&&) noexcept = default;
  RootAuthority& operator=(RootAuthority&&) noexcept = default;

  const crypto::PublicKey& public_key() const noexcept { return root_.public_key; }
  const crypto::PrivateScalar& private_key() const noexcept {
    return root_.private_key;
  }

  // Throws Error(Errc::DuplicateManufacturer).
  RegistrationId register_manufacturer(const crypto::PublicKey& key);

  // Throws Error(Errc::RequestRejected), Error(Errc::DuplicateSerial) or
  // Error(Errc::BadSubjectKey). A rejected request leaves the registry
  // untouched.
  BleCertificate issue(const IssuanceRequest& request);

  // Replaces the certificate of an already enrolled serial after a device
  // key rotation. The previous certificate is dropped from the registry.
  // Throws like issue(), with Error(Errc::UnknownSerial) instead of
  // DuplicateSerial.
  BleCertificate reissue(const IssuanceRequest& request);

  std::optional<BleCertificate> lookup(const Serial& serial) const;

  std::size_t registry_size() const;
  std::vector<BleCertificate> certificates() const;
  std::vector<crypto::PublicKey> manufacturers() const;

 private:
  explicit RootAuthority(crypto::KeyPair root);

  void check_request(const IssuanceRequest& request) const;
  BleCertificate sign(const IssuanceRequest& request) const;

  crypto::KeyPair root_;
  std::vector<crypto::PublicKey> manufacturers_;
  std::map<Serial, BleCertificate> registry_;
  std::unique_ptr<std::shared_mutex> mutex_;
};

}  // namespace blecert
