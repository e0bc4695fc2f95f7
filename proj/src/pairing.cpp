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

#include "blecert/pairing.hpp"

namespace blecert::pairing {

const char* to_string(Opcode opcode) {
  switch (opcode) {
    case Opcode::PairingRequest: return "PAIRING_REQ";
    case Opcode::PairingResponse: return "PAIRING_RSP";
    case Opcode::CertCentral: return "CERT_CENTRAL";
    case Opcode::CertPeripheral: return "CERT_PERIPHERAL";
    case Opcode::PublicKeyCentral: return "PUBLIC_KEY_CENTRAL";
    case Opcode::PublicKeyPeripheral: return "PUBLIC_KEY_PERIPHERAL";
    case Opcode::Confirm: return "CONFIRM";
    case Opcode::NonceCentral: return "NONCE_CENTRAL";
    case Opcode::NoncePeripheral: return "NONCE_PERIPHERAL";
    case Opcode::SessionFrame: return "SESSION_FRAME";
    case Opcode::Fail: return "FAIL";
  }
  return "UNKNOWN";
}

const char* to_string(FailReason reason) {
  switch (reason) {
    case FailReason::InvalidCertificate: return "InvalidCertificate";
    case FailReason::ConfirmMismatch: return "ConfirmMismatch";
    case FailReason::UnsupportedPeer: return "UnsupportedPeer";
    case FailReason::WrongState: return "WrongState";
    case FailReason::MalformedMessage: return "MalformedMessage";
    case FailReason::Unspecified: return "Unspecified";
  }
  return "Unknown";
}

const char* to_string(Role role) {
  return role == Role::Central ? "central" : "peripheral";
}

const char* to_string(State state) {
  switch (state) {
    case State::Idle: return "Idle";
    case State::FeatureExchanged: return "FeatureExchanged";
    case State::CertSent: return "CertSent";
    case State::CertVerified: return "CertVerified";
    case State::ConfirmExchanged: return "ConfirmExchanged";
    case State::NoncesExchanged: return "NoncesExchanged";
    case State::Established: return "Established";
    case State::Failed: return "Failed";
  }
  return "Unknown";
}

std::uint8_t AuthReq::encode() const {
  std::uint8_t octet = bonding & 0x03;
  if (mitm) octet |= 1U << 2;
  if (secure_connections) octet |= 1U << 3;
  if (keypress) octet |= 1U << 4;
  if (cert_auth) octet |= kCertAuthBit;
  return octet;
}

AuthReq AuthReq::decode(std::uint8_t octet) {
  if (octet & 0xC0) {
    throw Error(Errc::MalformedMessage, "reserved AuthReq bit set");
  }
  AuthReq req;
  req.bonding = octet & 0x03;
  req.mitm = (octet >> 2) & 1U;
  req.secure_connections = (octet >> 3) & 1U;
  req.keypress = (octet >> 4) & 1U;
  req.cert_auth = (octet & kCertAuthBit) != 0;
  return req;
}

Octets<PairingFeatures::kSize> PairingFeatures::encode() const {
  return {io_capability,   oob_data_flag,
          auth_req.encode(), max_key_size,
          initiator_key_distribution, responder_key_distribution};
}

PairingFeatures PairingFeatures::decode(ByteView body) {
  if (body.size() != kSize) {
    throw Error(Errc::MalformedMessage, "pairing features must be 6 bytes");
  }
  PairingFeatures f;
  f.io_capability = body[0];
  f.oob_data_flag = body[1];
  f.auth_req = AuthReq::decode(body[2]);
  f.max_key_size = body[3];
  f.initiator_key_distribution = body[4];
  f.responder_key_distribution = body[5];
  return f;
}

std::optional<std::size_t> payload_size(Opcode opcode) {
  switch (opcode) {
    case Opcode::PairingRequest:
    case Opcode::PairingResponse:
      return PairingFeatures::kSize;
    case Opcode::CertCentral:
    case Opcode::CertPeripheral:
      return kCertificateSize;
    case Opcode::PublicKeyCentral:
    case Opcode::PublicKeyPeripheral:
      return 2 * crypto::kCoordinateSize;
    case Opcode::Confirm:
    case Opcode::NonceCentral:
    case Opcode::NoncePeripheral:
      return crypto::kBlockSize;
    case Opcode::SessionFrame:
      return std::nullopt;
    case Opcode::Fail:
      return 1;
  }
  return std::nullopt;
}

namespace {

bool known_opcode(std::uint8_t value) {
  switch (static_cast<Opcode>(value)) {
    case Opcode::PairingRequest:
    case Opcode::PairingResponse:
    case Opcode::CertCentral:
    case Opcode::CertPeripheral:
    case Opcode::PublicKeyCentral:
    case Opcode::PublicKeyPeripheral:
    case Opcode::Confirm:
    case Opcode::NonceCentral:
    case Opcode::NoncePeripheral:
    case Opcode::SessionFrame:
    case Opcode::Fail:
      return true;
  }
  return false;
}

crypto::Block block_of(const WireMessage& message) {
  crypto::Block out{};
  std::copy_n(message.payload.begin(), out.size(), out.begin());
  return out;
}

}  // namespace

Bytes WireMessage::encode() const {
  Bytes out;
  out.reserve(1 + payload.size());
  out.push_back(static_cast<std::uint8_t>(opcode));
  append(out, payload);
  return out;
}

WireMessage WireMessage::decode(ByteView frame) {
  if (frame.empty()) {
    throw Error(Errc::MalformedMessage, "empty frame");
  }
  if (!known_opcode(frame[0])) {
    throw Error(Errc::MalformedMessage, "unknown opcode");
  }
  WireMessage message{static_cast<Opcode>(frame[0]),
                      Bytes(frame.begin() + 1, frame.end())};
  if (const auto expected = payload_size(message.opcode);
      expected && message.payload.size() != *expected) {
    throw Error(Errc::MalformedMessage,
                std::string("bad payload length for ") +
                    to_string(message.opcode));
  }
  return message;
}

WireMessage WireMessage::pairing_request(const PairingFeatures& features) {
  const auto body = features.encode();
  return {Opcode::PairingRequest, Bytes(body.begin(), body.end())};
}

WireMessage WireMessage::pairing_response(const PairingFeatures& features) {
  const auto body = features.encode();
  return {Opcode::PairingResponse, Bytes(body.begin(), body.end())};
}

WireMessage WireMessage::certificate(Opcode opcode, const BleCertificate& cert) {
  const auto body = cert.encode();
  return {opcode, Bytes(body.begin(), body.end())};
}

WireMessage WireMessage::block(Opcode opcode, const crypto::Block& value) {
  return {opcode, Bytes(value.begin(), value.end())};
}

WireMessage WireMessage::fail(FailReason reason) {
  return {Opcode::Fail, Bytes{static_cast<std::uint8_t>(reason)}};
}

PairingContext::PairingContext(EndpointConfig config)
    : config_(std::move(config)) {
  if (config_.mode == Mode::Certificate) {
    if (!config_.certificate || !config_.trusted_root) {
      throw Error(Errc::BadParameter,
                  "certificate mode needs a certificate and a root key");
    }
    if (config_.certificate->subject_public_key != config_.keys.public_key.x() ||
        !config_.keys.public_key.has_even_y()) {
      throw Error(Errc::BadParameter,
                  "certificate does not carry the endpoint's public key");
    }
  }
}

PairingFeatures PairingContext::local_features() const {
  PairingFeatures features;
  features.auth_req.cert_auth = config_.mode == Mode::Certificate;
  return features;
}

WireMessage PairingContext::start_pairing() {
  if (config_.role != Role::Central) throw Error(Errc::WrongRole);
  if (state_ != State::Idle) throw Error(Errc::WrongState);
  state_ = State::FeatureExchanged;
  return WireMessage::pairing_request(local_features());
}

std::vector<WireMessage> PairingContext::handle_frame(ByteView frame,
                                                      RandomSource& rng) {
  WireMessage message;
  try {
    message = WireMessage::decode(frame);
  } catch (const Error&) {
    if (terminal()) return {};
    return abort(FailReason::MalformedMessage);
  }
  return handle_message(message, rng);
}

std::vector<WireMessage> PairingContext::handle_message(
    const WireMessage& message, RandomSource& rng) {
  if (message.opcode == Opcode::Fail) {
    if (state_ != State::Failed) {
      failure_ = message.payload.size() == 1
                     ? static_cast<FailReason>(message.payload[0])
                     : FailReason::Unspecified;
      failed_locally_ = false;
      state_ = State::Failed;
      wipe();
    }
    return {};
  }
  if (terminal()) return {};
  if (const auto expected = payload_size(message.opcode);
      expected && message.payload.size() != *expected) {
    return abort(FailReason::MalformedMessage);
  }
  try {
    return dispatch(message, rng);
  } catch (const Error& e) {
    if (e.code() == Errc::RandomnessFailure || e.code() == Errc::Internal) {
      throw;
    }
    return abort(e.code() == Errc::MalformedMessage
                     ? FailReason::MalformedMessage
                     : FailReason::Unspecified);
  }
}

std::vector<WireMessage> PairingContext::dispatch(const WireMessage& message,
                                                  RandomSource& rng) {
  const bool central = config_.role == Role::Central;
  const bool certs = config_.mode == Mode::Certificate;
  const Opcode central_key =
      certs ? Opcode::CertCentral : Opcode::PublicKeyCentral;
  const Opcode peripheral_key =
      certs ? Opcode::CertPeripheral : Opcode::PublicKeyPeripheral;

  if (central) {
    if (state_ == State::FeatureExchanged &&
        message.opcode == Opcode::PairingResponse) {
      return on_pairing_response(message);
    }
    if (state_ == State::CertSent && message.opcode == peripheral_key) {
      return on_peripheral_key(message);
    }
    if (state_ == State::CertVerified && message.opcode == Opcode::Confirm) {
      return on_confirm(message, rng);
    }
    if (state_ == State::ConfirmExchanged &&
        message.opcode == Opcode::NoncePeripheral) {
      return on_nonce_peripheral(message);
    }
  } else {
    if (state_ == State::Idle && message.opcode == Opcode::PairingRequest) {
      return on_pairing_request(message);
    }
    if (state_ == State::FeatureExchanged && message.opcode == central_key) {
      return on_central_key(message, rng);
    }
    if (state_ == State::ConfirmExchanged &&
        message.opcode == Opcode::NonceCentral) {
      return on_nonce_central(message);
    }
  }
  return abort(FailReason::WrongState);
}

std::vector<WireMessage> PairingContext::on_pairing_request(
    const WireMessage& message) {
  const PairingFeatures peer = PairingFeatures::decode(message.payload);
  if (config_.mode == Mode::Certificate && !peer.auth_req.cert_auth) {
    return abort(FailReason::UnsupportedPeer);
  }
  state_ = State::FeatureExchanged;
  return {WireMessage::pairing_response(local_features())};
}

std::vector<WireMessage> PairingContext::on_pairing_response(
    const WireMessage& message) {
  const PairingFeatures peer = PairingFeatures::decode(message.payload);
  // A responder that does not echo the flag would silently downgrade the
  // pairing to unauthenticated Just Works.
  if (config_.mode == Mode::Certificate && !peer.auth_req.cert_auth) {
    return abort(FailReason::UnsupportedPeer);
  }
  state_ = State::CertSent;
  return {local_key_message()};
}

WireMessage PairingContext::local_key_message() const {
  const bool central = config_.role == Role::Central;
  if (config_.mode == Mode::Certificate) {
    return WireMessage::certificate(
        central ? Opcode::CertCentral : Opcode::CertPeripheral,
        *config_.certificate);
  }
  Bytes point(config_.keys.public_key.x().begin(),
              config_.keys.public_key.x().end());
  append(point, config_.keys.public_key.y());
  return {central ? Opcode::PublicKeyCentral : Opcode::PublicKeyPeripheral,
          std::move(point)};
}

std::optional<crypto::PublicKey> PairingContext::accept_peer_key(
    const WireMessage& message) {
  std::optional<crypto::PublicKey> key;
  if (config_.mode == Mode::Certificate) {
    BleCertificate cert;
    try {
      cert = BleCertificate::decode(message.payload);
    } catch (const Error&) {
      abort(FailReason::InvalidCertificate);
      return std::nullopt;
    }
    // The serial binds the key to the static address of the device we meant
    // to pair with; a valid certificate for any other device is rejected.
    if (verify_cert(cert, *config_.trusted_root) != CertVerdict::Accept ||
        cert.serial != config_.peer_address.addr) {
      abort(FailReason::InvalidCertificate);
      return std::nullopt;
    }
    peer_certificate_ = cert;
    key = crypto::PublicKey::from_x(cert.subject_public_key);
  } else {
    Octets<crypto::kCoordinateSize> x{};
    Octets<crypto::kCoordinateSize> y{};
    std::copy_n(message.payload.begin(), x.size(), x.begin());
    std::copy_n(message.payload.begin() + crypto::kCoordinateSize, y.size(),
                y.begin());
    try {
      key = crypto::PublicKey::from_affine(x, y);
    } catch (const Error&) {
      abort(FailReason::MalformedMessage);
      return std::nullopt;
    }
  }
  peer_key_ = key;
  shared_secret_ = crypto::ecdh(config_.keys.private_key, *key);
  state_ = State::CertVerified;
  return key;
}

std::vector<WireMessage> PairingContext::on_central_key(
    const WireMessage& message, RandomSource& rng) {
  if (!accept_peer_key(message)) return {WireMessage::fail(*failure_)};

  local_nonce_ = crypto::Nonce128::generate(rng);
  confirm_ = crypto::f4_confirm(*peer_key_, config_.keys.public_key,
                                *local_nonce_);
  state_ = State::ConfirmExchanged;
  // The confirm value commits to N_p before N_c is revealed.
  return {local_key_message(),
          WireMessage::block(Opcode::Confirm, confirm_->value)};
}

std::vector<WireMessage> PairingContext::on_peripheral_key(
    const WireMessage& message) {
  if (!accept_peer_key(message)) return {WireMessage::fail(*failure_)};
  return {};
}

std::vector<WireMessage> PairingContext::on_confirm(const WireMessage& message,
                                                    RandomSource& rng) {
  confirm_ = crypto::ConfirmValue{block_of(message)};
  local_nonce_ = crypto::Nonce128::generate(rng);
  state_ = State::ConfirmExchanged;
  return {WireMessage::block(Opcode::NonceCentral, local_nonce_->value)};
}

std::vector<WireMessage> PairingContext::on_nonce_central(
    const WireMessage& message) {
  remote_nonce_ = crypto::Nonce128{block_of(message)};
  state_ = State::NoncesExchanged;
  derive_ltk();
  return {WireMessage::block(Opcode::NoncePeripheral, local_nonce_->value)};
}

std::vector<WireMessage> PairingContext::on_nonce_peripheral(
    const WireMessage& message) {
  remote_nonce_ = crypto::Nonce128{block_of(message)};
  state_ = State::NoncesExchanged;
  const crypto::ConfirmValue expected = crypto::f4_confirm(
      config_.keys.public_key, *peer_key_, *remote_nonce_);
  if (!constant_time_equal(expected.value, confirm_->value)) {
    return abort(FailReason::ConfirmMismatch);
  }
  derive_ltk();
  return {};
}

void PairingContext::derive_ltk() {
  const bool central = config_.role == Role::Central;
  const crypto::Nonce128& n_c = central ? *local_nonce_ : *remote_nonce_;
  const crypto::Nonce128& n_p = central ? *remote_nonce_ : *local_nonce_;
  const crypto::DeviceAddress& mac_c =
      central ? config_.local_address : config_.peer_address;
  const crypto::DeviceAddress& mac_p =
      central ? config_.peer_address : config_.local_address;
  ltk_ = crypto::f5_ltk(*shared_secret_, n_c, n_p, mac_c, mac_p);
  state_ = State::Established;
}

std::vector<WireMessage> PairingContext::abort(FailReason reason) {
  failure_ = reason;
  failed_locally_ = true;
  state_ = State::Failed;
  wipe();
  return {WireMessage::fail(reason)};
}

void PairingContext::wipe() {
  if (shared_secret_) secure_wipe(shared_secret_->value);
  shared_secret_.reset();
  ltk_.reset();
  if (local_nonce_) secure_wipe(local_nonce_->value);
}

const crypto::Ltk& PairingContext::ltk() const {
  if (state_ != State::Established || !ltk_) {
    throw Error(Errc::NotEstablished);
  }
  return *ltk_;
}

}  // namespace blecert::pairing
