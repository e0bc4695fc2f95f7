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

#include <optional>
#include <vector>

#include "blecert/certificate.hpp"
#include "blecert/crypto.hpp"

// Certificate-authenticated Just Works pairing.
//
//   central                                   peripheral
//   PAIRING_REQ (cert_auth=1)        ->
//                                    <-       PAIRING_RSP (cert_auth=1)
//   CERT_CENTRAL                     ->       verify, ECDH, N_p, C_p
//                                    <-       CERT_PERIPHERAL, CONFIRM
//   verify, ECDH, N_c
//   NONCE_CENTRAL                    ->
//                                    <-       NONCE_PERIPHERAL, derive LTK
//   check C_p, derive LTK
//
// The baseline mode runs the same exchange with bare public keys in place of
// certificates, i.e. LE Secure Connections Just Works without authentication.
namespace blecert::pairing {

enum class Opcode : std::uint8_t {
  PairingRequest = 0x01,
  PairingResponse = 0x02,
  CertCentral = 0x10,
  CertPeripheral = 0x11,
  PublicKeyCentral = 0x12,
  PublicKeyPeripheral = 0x13,
  Confirm = 0x20,
  NonceCentral = 0x21,
  NoncePeripheral = 0x22,
  SessionFrame = 0x30,
  Fail = 0xFF,
};

const char* to_string(Opcode opcode);

enum class FailReason : std::uint8_t {
  InvalidCertificate = 0x01,
  ConfirmMismatch = 0x02,
  UnsupportedPeer = 0x03,
  WrongState = 0x04,
  MalformedMessage = 0x05,
  Unspecified = 0x08,
};

const char* to_string(FailReason reason);

// Authentication requirements octet.
//   bits 0-1 bonding, 2 MITM, 3 secure connections, 4 keypress,
//   5 certificate authentication, 6-7 reserved (zero).
struct AuthReq {
  static constexpr std::uint8_t kCertAuthBit = 1U << 5;

  std::uint8_t bonding = 0x01;
  bool mitm = false;
  bool secure_connections = true;
  bool keypress = false;
  bool cert_auth = false;

  std::uint8_t encode() const;
  // Throws Error(Errc::MalformedMessage) if a reserved bit is set.
  static AuthReq decode(std::uint8_t octet);

  bool operator==(const AuthReq&) const = default;
};

// Body of PAIRING_REQ / PAIRING_RSP; with the opcode the frame is 7 bytes.
struct PairingFeatures {
  static constexpr std::size_t kSize = 6;
  static constexpr std::uint8_t kNoInputNoOutput = 0x03;

  std::uint8_t io_capability = kNoInputNoOutput;
  std::uint8_t oob_data_flag = 0x00;
  AuthReq auth_req;
  std::uint8_t max_key_size = 16;
  std::uint8_t initiator_key_distribution = 0x00;
  std::uint8_t responder_key_distribution = 0x00;

  Octets<kSize> encode() const;
  static PairingFeatures decode(ByteView body);

  bool operator==(const PairingFeatures&) const = default;
};

// opcode || payload, all multi-byte fields big-endian.
struct WireMessage {
  Opcode opcode = Opcode::Fail;
  Bytes payload;

  Bytes encode() const;
  // Throws Error(Errc::MalformedMessage) on an unknown opcode or a payload of
  // the wrong length.
  static WireMessage decode(ByteView frame);

  static WireMessage pairing_request(const PairingFeatures& features);
  static WireMessage pairing_response(const PairingFeatures& features);
  static WireMessage certificate(Opcode opcode, const BleCertificate& cert);
  static WireMessage block(Opcode opcode, const crypto::Block& value);
  static WireMessage fail(FailReason reason);

  bool operator==(const WireMessage&) const = default;
};

// Expected payload length, or nullopt for variable-length opcodes.
std::optional<std::size_t> payload_size(Opcode opcode);

enum class Role { Central, Peripheral };
enum class Mode { Certificate, JustWorksBaseline };

enum class State {
  Idle,
  FeatureExchanged,
  CertSent,
  CertVerified,
  ConfirmExchanged,
  NoncesExchanged,
  Established,
  Failed,
};

const char* to_string(Role role);
const char* to_string(State state);

struct EndpointConfig {
  Role role = Role::Central;
  Mode mode = Mode::Certificate;
  crypto::KeyPair keys;
  // Required in certificate mode.
  std::optional<BleCertificate> certificate;
  std::optional<crypto::PublicKey> trusted_root;
  crypto::DeviceAddress local_address;
  // Identity address the peer is expected to hold; in certificate mode the
  // peer certificate's serial must name it.
  crypto::DeviceAddress peer_address;
};

// One endpoint of a pairing. Not thread-safe; process one message at a time.
class PairingContext {
 public:
  // Throws Error(Errc::BadParameter) if a certificate-mode endpoint lacks a
  // certificate or root key, or its certificate does not carry its key.
  explicit PairingContext(EndpointConfig config);

  // Central only, from Idle. Throws Error(Errc::WrongRole) or
  // Error(Errc::WrongState).
  WireMessage start_pairing();

  // Advances the state machine. Protocol violations and verification
  // failures never throw: the context moves to Failed and the FAIL message
  // to send is returned. Terminal states ignore further input, except that an
  // Established context drops its key on a peer FAIL.
  std::vector<WireMessage> handle_message(const WireMessage& message,
                                          RandomSource& rng);
  std::vector<WireMessage> handle_frame(ByteView frame, RandomSource& rng);

  // Throws Error(Errc::NotEstablished) outside Established.
  const crypto::Ltk& ltk() const;

  Role role() const noexcept { return config_.role; }
  Mode mode() const noexcept { return config_.mode; }
  State state() const noexcept { return state_; }
  bool terminal() const noexcept {
    return state_ == State::Established || state_ == State::Failed;
  }
  std::optional<FailReason> failure_reason() const noexcept { return failure_; }
  // True when this endpoint detected the failure itself rather than being
  // told by its peer.
  bool failed_locally() const noexcept { return failed_locally_; }

  const std::optional<BleCertificate>& peer_certificate() const noexcept {
    return peer_certificate_;
  }
  const std::optional<crypto::SharedSecret>& shared_secret() const noexcept {
    return shared_secret_;
  }
  const crypto::DeviceAddress& local_address() const noexcept {
    return config_.local_address;
  }
  const crypto::DeviceAddress& peer_address() const noexcept {
    return config_.peer_address;
  }

 private:
  std::vector<WireMessage> dispatch(const WireMessage& message,
                                    RandomSource& rng);
  std::vector<WireMessage> on_pairing_request(const WireMessage& message);
  std::vector<WireMessage> on_pairing_response(const WireMessage& message);
  std::vector<WireMessage> on_central_key(const WireMessage& message,
                                          RandomSource& rng);
  std::vector<WireMessage> on_peripheral_key(const WireMessage& message);
  std::vector<WireMessage> on_confirm(const WireMessage& message,
                                      RandomSource& rng);
  std::vector<WireMessage> on_nonce_central(const WireMessage& message);
  std::vector<WireMessage> on_nonce_peripheral(const WireMessage& message);

  // Authenticates the peer's key from a CERT_* or PUBLIC_KEY_* message and
  // computes the shared secret. Returns nullopt after failing the context.
  std::optional<crypto::PublicKey> accept_peer_key(const WireMessage& message);

  WireMessage local_key_message() const;
  PairingFeatures local_features() const;
  void derive_ltk();
  std::vector<WireMessage> abort(FailReason reason);
  void wipe();

  EndpointConfig config_;
  State state_ = State::Idle;
  std::optional<FailReason> failure_;
  bool failed_locally_ = false;

  std::optional<BleCertificate> peer_certificate_;
  std::optional<crypto::PublicKey> peer_key_;
  std::optional<crypto::SharedSecret> shared_secret_;
  std::optional<crypto::Nonce128> local_nonce_;
  std::optional<crypto::Nonce128> remote_nonce_;
  std::optional<crypto::ConfirmValue> confirm_;
  std::optional<crypto::Ltk> ltk_;
};

}  // namespace blecert::pairing
