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

#include <string>
#include <vector>

#include "blecert/crypto.hpp"

namespace blecert {

inline constexpr std::uint8_t kCertificateVersion = 0x01;
inline constexpr std::size_t kCertificateSize = 103;
// version || serial || subject public key; the signature covers these bytes.
inline constexpr std::size_t kSignedPayloadSize = 39;

// Static device MAC, most significant byte first.
using Serial = Octets<6>;

// Compact device certificate.
//
//   offset  size  field
//        0     1  version (0x01)
//        1     6  serial (static device MAC)
//        7    32  subject public key, x-coordinate of an even-y P-256 point
//       39    64  ECDSA-SHA256 signature r || s by the authority
//
// Issuer and algorithms are implicit; there is no validity period.
struct BleCertificate {
  std::uint8_t version = kCertificateVersion;
  Serial serial{};
  Octets<crypto::kCoordinateSize> subject_public_key{};
  crypto::Signature signature;

  Octets<kCertificateSize> encode() const;
  Octets<kSignedPayloadSize> signed_payload() const;

  // Throws Error(Errc::BadLength) or Error(Errc::BadVersion). The signature
  // is not checked here.
  static BleCertificate decode(ByteView bytes);

  // Public static address named by the serial.
  crypto::DeviceAddress subject_address() const {
    return crypto::DeviceAddress{serial, crypto::AddressType::Public};
  }

  bool operator==(const BleCertificate&) const = default;
};

enum class CertVerdict { Accept, BadSignature, BadPoint };

const char* to_string(CertVerdict verdict);

CertVerdict verify_cert(const BleCertificate& cert,
                        const crypto::PublicKey& authority_key);

// Signs version || serial || subject key with the RFC 6979 nonce. Performs
// no checks on the subject key.
BleCertificate sign_certificate(const Serial& serial,
                                const Octets<crypto::kCoordinateSize>& subject,
                                const crypto::PrivateScalar& authority_key);

// Certificate files hold the raw 103 bytes or 206 hex characters on one line.
BleCertificate parse_certificate_file(ByteView contents);
std::string armor_certificate(const BleCertificate& cert);

struct CertFieldSize {
  std::string field;
  int x509_bytes = 0;
  int ble_bytes = 0;
};

// Field-by-field size comparison of an unprofiled X.509 v3 certificate and
// the compact certificate above.
struct CertSizeReport {
  std::vector<CertFieldSize> fields;
  int x509_total = 0;
  int ble_total = 0;
  double reduction_percent = 0.0;
};

CertSizeReport size_report();
std::string render_text(const CertSizeReport& report);

}  // namespace blecert
