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

#include "blecert/authority.hpp"

#include <algorithm>
#include <mutex>

namespace blecert {

Bytes IssuanceRequest::signed_bytes() const {
  Bytes out(serial.begin(), serial.end());
  append(out, subject_public_key);
  return out;
}

IssuanceRequest IssuanceRequest::create(
    const Serial& serial, const Octets<crypto::kCoordinateSize>& subject,
    const crypto::PrivateScalar& manufacturer_key) {
  IssuanceRequest request{serial, subject, {}};
  request.manufacturer_signature =
      crypto::ecdsa_sign_deterministic(manufacturer_key, request.signed_bytes());
  return request;
}

RootAuthority::RootAuthority(crypto::KeyPair root)
    : root_(std::move(root)), mutex_(std::make_unique<std::shared_mutex>()) {}

RootAuthority RootAuthority::init(RandomSource& rng) {
  return RootAuthority(crypto::generate_keypair(rng));
}

RootAuthority RootAuthority::restore(
    crypto::PrivateScalar root_key,
    const std::vector<crypto::PublicKey>& manufacturers,
    const std::vector<BleCertificate>& registry) {
  crypto::PublicKey pub = crypto::derive_public_key(root_key);
  RootAuthority authority(crypto::KeyPair{std::move(root_key), pub});
  authority.manufacturers_ = manufacturers;
  for (const auto& cert : registry) {
    if (verify_cert(cert, authority.public_key()) != CertVerdict::Accept) {
      throw Error(Errc::RequestRejected,
                  "registry entry does not verify under the root key");
    }
    authority.registry_.insert_or_assign(cert.serial, cert);
  }
  return authority;
}

RegistrationId RootAuthority::register_manufacturer(
    const crypto::PublicKey& key) {
  std::unique_lock lock(*mutex_);
  if (std::find(manufacturers_.begin(), manufacturers_.end(), key) !=
      manufacturers_.end()) {
    throw Error(Errc::DuplicateManufacturer);
  }
  manufacturers_.push_back(key);
  return static_cast<RegistrationId>(manufacturers_.size());
}

void RootAuthority::check_request(const IssuanceRequest& request) const {
  const Bytes message = request.signed_bytes();
  const bool signed_by_registered =
      std::any_of(manufacturers_.begin(), manufacturers_.end(),
                  [&](const crypto::PublicKey& key) {
                    return crypto::ecdsa_verify(key, message,
                                                request.manufacturer_signature);
                  });
  if (!signed_by_registered) {
    throw Error(Errc::RequestRejected,
                "request not signed by a registered manufacturer");
  }
}

BleCertificate RootAuthority::sign(const IssuanceRequest& request) const {
  if (!crypto::PublicKey::try_from_x(request.subject_public_key)) {
    throw Error(Errc::BadSubjectKey, "subject key has no curve point");
  }
  return sign_certificate(request.serial, request.subject_public_key,
                          root_.private_key);
}

BleCertificate RootAuthority::issue(const IssuanceRequest& request) {
  std::unique_lock lock(*mutex_);
  check_request(request);
  if (registry_.contains(request.serial)) {
    throw Error(Errc::DuplicateSerial);
  }
  BleCertificate cert = sign(request);
  registry_.emplace(cert.serial, cert);
  return cert;
}

BleCertificate RootAuthority::reissue(const IssuanceRequest& request) {
  std::unique_lock lock(*mutex_);
  check_request(request);
  auto it = registry_.find(request.serial);
  if (it == registry_.end()) {
    throw Error(Errc::UnknownSerial);
  }
  BleCertificate cert = sign(request);
  it->second = cert;
  return cert;
}

std::optional<BleCertificate> RootAuthority::lookup(const Serial& serial) const {
  std::shared_lock lock(*mutex_);
  if (auto it = registry_.find(serial); it != registry_.end()) {
    return it->second;
  }
  return std::nullopt;
}

std::size_t RootAuthority::registry_size() const {
  std::shared_lock lock(*mutex_);
  return registry_.size();
}

std::vector<BleCertificate> RootAuthority::certificates() const {
  std::shared_lock lock(*mutex_);
  std::vector<BleCertificate> out;
  out.reserve(registry_.size());
  for (const auto& [serial, cert] : registry_) out.push_back(cert);
  return out;
}

std::vector<crypto::PublicKey> RootAuthority::manufacturers() const {
  std::shared_lock lock(*mutex_);
  return manufacturers_;
}

}  // namespace blecert
