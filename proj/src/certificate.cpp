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

#include "blecert/certificate.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

namespace blecert {

Octets<kSignedPayloadSize> BleCertificate::signed_payload() const {
  Octets<kSignedPayloadSize> out{};
  out[0] = version;
  std::copy(serial.begin(), serial.end(), out.begin() + 1);
  std::copy(subject_public_key.begin(), subject_public_key.end(),
            out.begin() + 1 + serial.size());
  return out;
}

Octets<kCertificateSize> BleCertificate::encode() const {
  Octets<kCertificateSize> out{};
  const auto payload = signed_payload();
  std::copy(payload.begin(), payload.end(), out.begin());
  const auto sig = signature.encode();
  std::copy(sig.begin(), sig.end(), out.begin() + kSignedPayloadSize);
  return out;
}

BleCertificate BleCertificate::decode(ByteView bytes) {
  if (bytes.size() != kCertificateSize) {
    throw Error(Errc::BadLength, "certificate must be 103 bytes, got " +
                                     std::to_string(bytes.size()));
  }
  if (bytes[0] != kCertificateVersion) {
    throw Error(Errc::BadVersion,
                "unsupported certificate version " + std::to_string(bytes[0]));
  }
  BleCertificate cert;
  cert.version = bytes[0];
  std::copy_n(bytes.begin() + 1, cert.serial.size(), cert.serial.begin());
  std::copy_n(bytes.begin() + 7, cert.subject_public_key.size(),
              cert.subject_public_key.begin());
  cert.signature = crypto::Signature::decode(bytes.subspan(kSignedPayloadSize));
  return cert;
}

const char* to_string(CertVerdict verdict) {
  switch (verdict) {
    case CertVerdict::Accept: return "Accept";
    case CertVerdict::BadSignature: return "BadSignature";
    case CertVerdict::BadPoint: return "BadPoint";
  }
  return "Unknown";
}

CertVerdict verify_cert(const BleCertificate& cert,
                        const crypto::PublicKey& authority_key) {
  const auto payload = cert.signed_payload();
  if (!crypto::ecdsa_verify(authority_key, payload, cert.signature)) {
    return CertVerdict::BadSignature;
  }
  if (!crypto::PublicKey::try_from_x(cert.subject_public_key)) {
    return CertVerdict::BadPoint;
  }
  return CertVerdict::Accept;
}

BleCertificate sign_certificate(const Serial& serial,
                                const Octets<crypto::kCoordinateSize>& subject,
                                const crypto::PrivateScalar& authority_key) {
  BleCertificate cert;
  cert.serial = serial;
  cert.subject_public_key = subject;
  cert.signature =
      crypto::ecdsa_sign_deterministic(authority_key, cert.signed_payload());
  return cert;
}

BleCertificate parse_certificate_file(ByteView contents) {
  if (contents.size() == kCertificateSize) {
    return BleCertificate::decode(contents);
  }
  // Anything else must be the hex armor.
  const std::string text(contents.begin(), contents.end());
  const bool looks_hex = std::all_of(text.begin(), text.end(), [](char c) {
    return std::isxdigit(static_cast<unsigned char>(c)) ||
           std::isspace(static_cast<unsigned char>(c));
  });
  if (!looks_hex) {
    throw Error(Errc::BadLength, "certificate must be 103 bytes, got " +
                                     std::to_string(contents.size()));
  }
  return BleCertificate::decode(from_hex(text));
}

std::string armor_certificate(const BleCertificate& cert) {
  return to_hex(cert.encode());
}

CertSizeReport size_report() {
  CertSizeReport report;
  report.fields = {
      {"Version", 5, 1},
      {"Serial Number", 18, 6},
      {"Signature", 15, 0},
      {"Issuer", 114, 0},
      {"Validity", 32, 0},
      {"Subject", 168, 0},
      {"Subject public key info", 294, 32},
      {"Issuer and subject unique ID", 0, 0},
      {"Extensions", 596, 0},
      {"Signature Algorithm", 15, 0},
      {"Signature", 261, 64},
  };
  for (const auto& f : report.fields) {
    report.x509_total += f.x509_bytes;
    report.ble_total += f.ble_bytes;
  }
  report.reduction_percent =
      100.0 * static_cast<double>(report.x509_total - report.ble_total) /
      static_cast<double>(report.x509_total);
  return report;
}

std::string render_text(const CertSizeReport& report) {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof(line), "%-30s %10s %14s\n", "Field", "No Profile",
                "BLE Profiled");
  out += line;
  for (const auto& f : report.fields) {
    std::snprintf(line, sizeof(line), "%-30s %10d %14d\n", f.field.c_str(),
                  f.x509_bytes, f.ble_bytes);
    out += line;
  }
  std::snprintf(line, sizeof(line), "%-30s %10d %14d\n", "Total",
                report.x509_total, report.ble_total);
  out += line;
  std::snprintf(line, sizeof(line), "Reduction: %.1f%%\n",
                report.reduction_percent);
  out += line;
  return out;
}

}  // namespace blecert
