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

#include "blecert/key_update.hpp"

#include <openssl/evp.h>

#include <string_view>

#include "ossl.hpp"

namespace blecert::update {

namespace {

constexpr std::string_view kEncryptionLabel = "blecert key update enc";
constexpr std::string_view kTagLabel = "blecert key update tag";

crypto::Block derive_key(const ManufacturingSecret& secret,
                         std::string_view label) {
  const auto* data = reinterpret_cast<const std::uint8_t*>(label.data());
  return crypto::aes_cmac(secret, ByteView(data, label.size()));
}

Octets<32> aes_ctr(const crypto::Block& key, const crypto::Block& iv,
                   const Octets<32>& in) {
  ossl::CipherCtxPtr ctx(EVP_CIPHER_CTX_new());
  if (!ctx) ossl::fail("EVP_CIPHER_CTX_new");
  ossl::check(EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_ctr(), nullptr,
                                 key.data(), iv.data()),
              "EVP_EncryptInit_ex");
  Octets<32> out{};
  int len = 0;
  ossl::check(EVP_EncryptUpdate(ctx.get(), out.data(), &len, in.data(),
                                static_cast<int>(in.size())),
              "EVP_EncryptUpdate");
  return out;
}

Octets<16> package_tag(const ManufacturingSecret& secret,
                       const UpdatePackage& pkg) {
  const auto encoded = pkg.encode();
  crypto::Block key = derive_key(secret, kTagLabel);
  const auto tag = crypto::aes_cmac(
      key, ByteView(encoded.data(), kPackageSize - pkg.tag.size()));
  secure_wipe(key);
  return tag;
}

}  // namespace

Octets<kPackageSize> UpdatePackage::encode() const {
  Octets<kPackageSize> out{};
  auto it = out.begin();
  const auto cert = certificate.encode();
  it = std::copy(cert.begin(), cert.end(), it);
  it = std::copy(sealed_scalar.begin(), sealed_scalar.end(), it);
  for (int shift = 56; shift >= 0; shift -= 8) {
    *it++ = static_cast<std::uint8_t>(timestamp >> shift);
  }
  std::copy(tag.begin(), tag.end(), it);
  return out;
}

UpdatePackage UpdatePackage::decode(ByteView bytes) {
  if (bytes.size() != kPackageSize) {
    throw Error(Errc::BadLength, "update package must be " +
                                     std::to_string(kPackageSize) + " bytes");
  }
  UpdatePackage pkg;
  pkg.certificate = BleCertificate::decode(bytes.first(kCertificateSize));
  std::size_t offset = kCertificateSize;
  std::copy_n(bytes.begin() + offset, kSealedScalarSize,
              pkg.sealed_scalar.begin());
  offset += kSealedScalarSize;
  for (int i = 0; i < 8; ++i) {
    pkg.timestamp = (pkg.timestamp << 8) | bytes[offset++];
  }
  std::copy_n(bytes.begin() + offset, pkg.tag.size(), pkg.tag.begin());
  return pkg;
}

Manufacturer Manufacturer::create(RandomSource& rng) {
  return Manufacturer(crypto::generate_keypair(rng));
}

Manufacturer::Manufacturer(crypto::KeyPair signing_key)
    : signing_key_(std::move(signing_key)) {}

ManufacturingSecret Manufacturer::enroll_device(const Serial& serial,
                                                RandomSource& rng) {
  const auto secret = rng.draw<16>();
  enroll_device(serial, secret);
  return secret;
}

void Manufacturer::enroll_device(const Serial& serial,
                                 const ManufacturingSecret& secret) {
  secrets_.insert_or_assign(serial, secret);
}

const ManufacturingSecret& Manufacturer::secret_for(const Serial& serial) const {
  auto it = secrets_.find(serial);
  if (it == secrets_.end()) throw Error(Errc::UnknownDevice);
  return it->second;
}

IssuanceRequest Manufacturer::request_for(const Serial& serial,
                                          const crypto::PublicKey& subject) const {
  return IssuanceRequest::create(serial, subject.x(), signing_key_.private_key);
}

UpdatePackage build_update(const Manufacturer& manufacturer,
                           const Serial& device_serial,
                           const crypto::KeyPair& new_keypair,
                           const BleCertificate& new_certificate,
                           std::uint64_t now, RandomSource& rng) {
  const ManufacturingSecret& secret = manufacturer.secret_for(device_serial);
  if (new_certificate.serial != device_serial ||
      new_certificate.subject_public_key != new_keypair.public_key.x()) {
    throw Error(Errc::BadParameter,
                "certificate does not match the device and new key");
  }

  UpdatePackage pkg;
  pkg.certificate = new_certificate;
  pkg.timestamp = now;

  const crypto::Block iv = rng.draw<16>();
  crypto::Block enc_key = derive_key(secret, kEncryptionLabel);
  Octets<32> sealed = aes_ctr(enc_key, iv, new_keypair.private_key.bytes());
  secure_wipe(enc_key);
  std::copy(iv.begin(), iv.end(), pkg.sealed_scalar.begin());
  std::copy(sealed.begin(), sealed.end(), pkg.sealed_scalar.begin() + 16);

  pkg.tag = package_tag(secret, pkg);
  return pkg;
}

DeviceKeystore::DeviceKeystore(ManufacturingSecret manufacturing_secret,
                               Credentials active)
    : secret_(manufacturing_secret),
      active_(std::move(active)),
      mutex_(std::make_unique<std::mutex>()) {
  if (active_.certificate.subject_public_key != active_.keys.public_key.x()) {
    throw Error(Errc::BadParameter, "certificate does not carry the key");
  }
}

Credentials DeviceKeystore::credentials() const {
  std::lock_guard lock(*mutex_);
  return active_;
}

Serial DeviceKeystore::serial() const {
  std::lock_guard lock(*mutex_);
  return active_.certificate.serial;
}

const char* to_string(DisconnectReason reason) {
  switch (reason) {
    case DisconnectReason::BadAuth: return "BadAuth";
    case DisconnectReason::StaleTimestamp: return "StaleTimestamp";
    case DisconnectReason::KeyCertMismatch: return "KeyCertMismatch";
  }
  return "Unknown";
}

UpdateOutcome apply_update(DeviceKeystore& keystore, const UpdatePackage& pkg,
                           std::uint64_t now, std::uint64_t window) {
  std::lock_guard lock(*keystore.mutex_);

  const auto expected_tag = package_tag(keystore.secret_, pkg);
  if (!constant_time_equal(expected_tag, pkg.tag)) {
    return UpdateOutcome::disconnected(DisconnectReason::BadAuth);
  }
  const std::uint64_t age =
      now >= pkg.timestamp ? now - pkg.timestamp : pkg.timestamp - now;
  if (age > window) {
    return UpdateOutcome::disconnected(DisconnectReason::StaleTimestamp);
  }

  crypto::Block iv{};
  Octets<32> sealed{};
  std::copy_n(pkg.sealed_scalar.begin(), 16, iv.begin());
  std::copy_n(pkg.sealed_scalar.begin() + 16, 32, sealed.begin());
  crypto::Block enc_key = derive_key(keystore.secret_, kEncryptionLabel);
  Octets<32> raw = aes_ctr(enc_key, iv, sealed);
  secure_wipe(enc_key);

  std::optional<crypto::KeyPair> keys;
  try {
    auto scalar = crypto::PrivateScalar::from_bytes(raw);
    auto pub = crypto::derive_public_key(scalar);
    keys = crypto::KeyPair{std::move(scalar), pub};
  } catch (const Error&) {
  }
  secure_wipe(raw);
  if (!keys || !keys->public_key.has_even_y() ||
      keys->public_key.x() != pkg.certificate.subject_public_key ||
      pkg.certificate.serial != keystore.active_.certificate.serial) {
    return UpdateOutcome::disconnected(DisconnectReason::KeyCertMismatch);
  }

  keystore.active_ = Credentials{std::move(*keys), pkg.certificate};
  return UpdateOutcome::ok();
}

}  // namespace blecert::update
