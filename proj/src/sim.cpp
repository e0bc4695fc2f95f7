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

#include "blecert/sim.hpp"

#include <algorithm>

namespace blecert::sim {

using pairing::Mode;
using pairing::Opcode;
using pairing::PairingContext;
using pairing::Role;
using pairing::State;
using pairing::WireMessage;

const char* to_string(Direction direction) {
  return direction == Direction::CentralToPeripheral ? "C->P" : "P->C";
}

const char* to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::Passive: return "passive";
    case Strategy::CertSubstitute: return "cert-sub";
    case Strategy::KeySubstitute: return "key-sub";
    case Strategy::NonceTamper: return "nonce-tamper";
    case Strategy::ConfirmTamper: return "confirm-tamper";
    case Strategy::AddressSpoof: return "addr-spoof";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  for (const Strategy s :
       {Strategy::Passive, Strategy::CertSubstitute, Strategy::KeySubstitute,
        Strategy::NonceTamper, Strategy::ConfirmTamper,
        Strategy::AddressSpoof}) {
    if (name == to_string(s)) return s;
  }
  return std::nullopt;
}

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::EstablishedSecurely: return "EstablishedSecurely";
    case Outcome::AbortedWithReason: return "AbortedWithReason";
    case Outcome::CompromiseDetectedByHarness:
      return "CompromiseDetectedByHarness";
  }
  return "Unknown";
}

SeededRandom stream(std::uint64_t seed, StreamLabel label) {
  return SeededRandom(seed).fork(static_cast<std::uint64_t>(label));
}

namespace {

Direction opposite(Direction d) {
  return d == Direction::CentralToPeripheral ? Direction::PeripheralToCentral
                                             : Direction::CentralToPeripheral;
}

std::optional<Opcode> opcode_of(const Bytes& frame) {
  try {
    return WireMessage::decode(frame).opcode;
  } catch (const Error&) {
    return std::nullopt;
  }
}

Serial fresh_serial(RandomSource& rng, const std::vector<Serial>& taken) {
  for (;;) {
    Serial s = rng.draw<6>();
    if (std::find(taken.begin(), taken.end(), s) == taken.end()) return s;
  }
}

class PassiveAdversary final : public Adversary {
 public:
  std::vector<Delivery> intercept(Direction direction,
                                  const Bytes& frame) override {
    return {{direction, frame}};
  }
};

// Flips one random payload bit in the first frame carrying `target`.
class FrameTamperer final : public Adversary {
 public:
  FrameTamperer(Opcode target, SeededRandom rng)
      : target_(target), rng_(std::move(rng)) {}

  std::vector<Delivery> intercept(Direction direction,
                                  const Bytes& frame) override {
    if (done_ || opcode_of(frame) != target_ || frame.size() < 2) {
      return {{direction, frame}};
    }
    done_ = true;
    Bytes tampered = frame;
    const auto word = rng_.draw<4>();
    const std::uint32_t r = (std::uint32_t{word[0]} << 24) |
                            (std::uint32_t{word[1]} << 16) |
                            (std::uint32_t{word[2]} << 8) | word[3];
    const std::size_t bit = r % ((frame.size() - 1) * 8);
    tampered[1 + bit / 8] ^= static_cast<std::uint8_t>(0x80U >> (bit % 8));
    notes_.push_back(std::string("flipped payload bit ") + std::to_string(bit) +
                     " of " + pairing::to_string(target_));
    return {{direction, std::move(tampered)}};
  }

  std::vector<std::string> notes() const override { return notes_; }

 private:
  Opcode target_;
  SeededRandom rng_;
  bool done_ = false;
  std::vector<std::string> notes_;
};

// Swaps a victim's certificate for one naming the victim's serial but the
// attacker's key, either self-signed or signed by a rogue root.
class CertSubstituter final : public Adversary {
 public:
  CertSubstituter(const World& world, std::uint64_t seed, SeededRandom rng)
      : target_(seed % 2 == 0 ? Opcode::CertPeripheral : Opcode::CertCentral) {
    const crypto::KeyPair attacker = crypto::generate_keypair(rng);
    const Serial victim = target_ == Opcode::CertPeripheral
                              ? world.peripheral.certificate.serial
                              : world.central.certificate.serial;
    if ((seed / 2) % 2 == 0) {
      forged_ = sign_certificate(victim, attacker.public_key.x(),
                                 attacker.private_key);
      notes_.push_back("self-signed certificate");
    } else {
      const crypto::KeyPair rogue_root = crypto::generate_keypair(rng);
      forged_ = sign_certificate(victim, attacker.public_key.x(),
                                 rogue_root.private_key);
      notes_.push_back("certificate from a rogue root");
    }
  }

  std::vector<Delivery> intercept(Direction direction,
                                  const Bytes& frame) override {
    if (opcode_of(frame) != target_) return {{direction, frame}};
    substituted_ = true;
    notes_.push_back(std::string("substituted ") + pairing::to_string(target_));
    return {{direction, WireMessage::certificate(target_, forged_).encode()}};
  }

  std::vector<std::string> notes() const override {
    auto out = notes_;
    if (!substituted_) out.push_back("no certificate frame to substitute");
    return out;
  }

 private:
  Opcode target_;
  BleCertificate forged_;
  bool substituted_ = false;
  std::vector<std::string> notes_;
};

// Classic MITM: runs its own peripheral endpoint toward the central and its
// own central endpoint toward the peripheral, relaying session traffic
// between the two links if both come up.
class Interposer final : public Adversary {
 public:
  Interposer(pairing::EndpointConfig facing_central,
             pairing::EndpointConfig facing_peripheral, SeededRandom rng,
             std::vector<std::string> notes)
      : facing_central_(std::move(facing_central)),
        facing_peripheral_(std::move(facing_peripheral)),
        rng_(std::move(rng)),
        notes_(std::move(notes)) {}

  std::vector<Delivery> intercept(Direction direction,
                                  const Bytes& frame) override {
    if (opcode_of(frame) == Opcode::SessionFrame) {
      return relay(direction, frame);
    }
    std::vector<Delivery> out;
    if (direction == Direction::CentralToPeripheral) {
      for (const auto& m : facing_central_.handle_frame(frame, rng_)) {
        out.push_back({Direction::PeripheralToCentral, m.encode()});
      }
      if (!started_) {
        started_ = true;
        out.push_back({Direction::CentralToPeripheral,
                       facing_peripheral_.start_pairing().encode()});
      }
    } else {
      for (const auto& m : facing_peripheral_.handle_frame(frame, rng_)) {
        out.push_back({Direction::CentralToPeripheral, m.encode()});
      }
    }
    return out;
  }

  std::vector<crypto::Ltk> captured_keys() const override {
    std::vector<crypto::Ltk> keys;
    for (const PairingContext* ctx : {&facing_central_, &facing_peripheral_}) {
      if (ctx->state() == State::Established) keys.push_back(ctx->ltk());
    }
    return keys;
  }

  std::vector<std::string> notes() const override {
    auto out = notes_;
    out.push_back(std::string("attacker toward central: ") +
                  pairing::to_string(facing_central_.state()));
    out.push_back(std::string("attacker toward peripheral: ") +
                  pairing::to_string(facing_peripheral_.state()));
    return out;
  }

 private:
  std::vector<Delivery> relay(Direction direction, const Bytes& frame) {
    if (facing_central_.state() != State::Established ||
        facing_peripheral_.state() != State::Established) {
      return {};
    }
    if (!to_central_) {
      to_central_.emplace(facing_central_.ltk(),
                          crypto::LinkDirection::PeripheralToCentral);
      to_peripheral_.emplace(facing_peripheral_.ltk(),
                             crypto::LinkDirection::CentralToPeripheral);
    }
    const WireMessage message = WireMessage::decode(frame);
    try {
      if (direction == Direction::CentralToPeripheral) {
        const Bytes plain = to_central_->open(message.payload);
        return {{direction, WireMessage{Opcode::SessionFrame,
                                        to_peripheral_->seal(plain)}
                                .encode()}};
      }
      const Bytes plain = to_peripheral_->open(message.payload);
      return {{direction,
               WireMessage{Opcode::SessionFrame, to_central_->seal(plain)}
                   .encode()}};
    } catch (const Error&) {
      return {};
    }
  }

  PairingContext facing_central_;
  PairingContext facing_peripheral_;
  SeededRandom rng_;
  std::vector<std::string> notes_;
  bool started_ = false;
  std::optional<crypto::SessionChannel> to_central_;
  std::optional<crypto::SessionChannel> to_peripheral_;
};

pairing::EndpointConfig attacker_config(const World& world, Role role,
                                        Mode mode, crypto::KeyPair keys,
                                        BleCertificate cert) {
  // Link-layer impersonation: each attacker endpoint uses the address of the
  // victim it pretends to be.
  const bool as_peripheral = role == Role::Peripheral;
  pairing::EndpointConfig config{
      .role = role,
      .mode = mode,
      .keys = std::move(keys),
      .certificate = std::move(cert),
      .trusted_root = world.authority.public_key(),
      .local_address =
          as_peripheral ? world.peripheral_address : world.central_address,
      .peer_address =
          as_peripheral ? world.central_address : world.peripheral_address,
  };
  return config;
}

std::unique_ptr<Adversary> key_substitute(World& world, Mode mode,
                                          SeededRandom rng) {
  const crypto::KeyPair rogue_root = crypto::generate_keypair(rng);
  crypto::KeyPair as_peripheral = crypto::generate_keypair(rng);
  crypto::KeyPair as_central = crypto::generate_keypair(rng);
  BleCertificate cert_p =
      sign_certificate(world.peripheral.certificate.serial,
                       as_peripheral.public_key.x(), rogue_root.private_key);
  BleCertificate cert_c =
      sign_certificate(world.central.certificate.serial,
                       as_central.public_key.x(), rogue_root.private_key);
  return std::make_unique<Interposer>(
      attacker_config(world, Role::Peripheral, mode, std::move(as_peripheral),
                      std::move(cert_p)),
      attacker_config(world, Role::Central, mode, std::move(as_central),
                      std::move(cert_c)),
      std::move(rng),
      std::vector<std::string>{"attacker certificates from a rogue root"});
}

// The attacker owns a genuine device. Enrolling its key under the victim's
// serial fails, so it interposes with its own valid certificate while
// spoofing the victims' addresses on the link.
std::unique_ptr<Adversary> address_spoof(World& world, Mode mode,
                                         SeededRandom rng) {
  std::vector<std::string> notes;
  crypto::KeyPair attacker = crypto::generate_keypair(rng);
  try {
    world.authority.issue(world.manufacturer.request_for(
        world.peripheral.certificate.serial, attacker.public_key));
    notes.push_back("issuance under the victim serial succeeded");
  } catch (const Error& e) {
    notes.push_back(std::string("issuance under the victim serial: ") +
                    to_string(e.code()));
  }
  const Serial own = fresh_serial(rng, {world.central.certificate.serial,
                                        world.peripheral.certificate.serial});
  BleCertificate genuine = world.authority.issue(
      world.manufacturer.request_for(own, attacker.public_key));
  notes.push_back("attacker holds a valid certificate for " +
                  genuine.subject_address().to_string());
  crypto::KeyPair copy = attacker;
  return std::make_unique<Interposer>(
      attacker_config(world, Role::Peripheral, mode, std::move(attacker),
                      genuine),
      attacker_config(world, Role::Central, mode, std::move(copy), genuine),
      std::move(rng), std::move(notes));
}

bool contains(const Bytes& haystack, ByteView needle) {
  return !needle.empty() &&
         std::search(haystack.begin(), haystack.end(), needle.begin(),
                     needle.end()) != haystack.end();
}

}  // namespace

void SimLink::send(Direction direction, const Bytes& frame) {
  std::vector<Delivery> out = adversary_.intercept(direction, frame);
  // The pass-through is an unchanged copy if one exists, else the first
  // delivery in the same direction (a modification).
  std::optional<std::size_t> passed;
  for (std::size_t i = 0; i < out.size() && !passed; ++i) {
    if (out[i].direction == direction && out[i].frame == frame) passed = i;
  }
  for (std::size_t i = 0; i < out.size() && !passed; ++i) {
    if (out[i].direction == direction) passed = i;
  }
  const bool original_passed = passed.has_value();
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& d = out[i];
    Queued q;
    if (passed == i) {
      q.original = frame;
      q.modified = d.frame != frame;
    } else {
      q.injected = true;
    }
    q.frame = std::move(d.frame);
    (d.direction == Direction::CentralToPeripheral ? to_peripheral_
                                                   : to_central_)
        .push_back(std::move(q));
  }
  if (!original_passed) {
    TranscriptEntry entry;
    entry.index = transcript_.size();
    entry.direction = direction;
    entry.original = frame;
    entry.dropped = true;
    transcript_.push_back(std::move(entry));
  }
}

std::optional<SimLink::Queued> SimLink::take(Direction direction) {
  auto& queue = direction == Direction::CentralToPeripheral ? to_peripheral_
                                                            : to_central_;
  if (queue.empty()) return std::nullopt;
  Queued q = std::move(queue.front());
  queue.pop_front();
  return q;
}

void SimLink::record(Direction direction, const Queued& queued,
                     std::string receiver_state) {
  TranscriptEntry entry;
  entry.index = transcript_.size();
  entry.direction = direction;
  entry.original = queued.original;
  entry.delivered = queued.frame;
  entry.modified = queued.modified;
  entry.injected = queued.injected;
  entry.receiver_state = std::move(receiver_state);
  transcript_.push_back(std::move(entry));
}

World provision(std::uint64_t seed) {
  SeededRandom rng = stream(seed, StreamLabel::World);
  RootAuthority authority = RootAuthority::init(rng);
  update::Manufacturer manufacturer = update::Manufacturer::create(rng);
  authority.register_manufacturer(manufacturer.public_key());

  auto enroll = [&](const Serial& serial) {
    crypto::KeyPair keys = crypto::generate_keypair(rng);
    BleCertificate cert =
        authority.issue(manufacturer.request_for(serial, keys.public_key));
    manufacturer.enroll_device(serial, rng);
    return update::Credentials{std::move(keys), std::move(cert)};
  };
  const Serial central_serial = fresh_serial(rng, {});
  const Serial peripheral_serial = fresh_serial(rng, {central_serial});
  update::Credentials central = enroll(central_serial);
  update::Credentials peripheral = enroll(peripheral_serial);

  return World{std::move(authority),
               std::move(manufacturer),
               std::move(central),
               std::move(peripheral),
               {central_serial, crypto::AddressType::Public},
               {peripheral_serial, crypto::AddressType::Public}};
}

pairing::EndpointConfig endpoint_config(const World& world, Role role,
                                        Mode mode) {
  const bool central = role == Role::Central;
  const update::Credentials& own = central ? world.central : world.peripheral;
  return pairing::EndpointConfig{
      .role = role,
      .mode = mode,
      .keys = own.keys,
      .certificate = own.certificate,
      .trusted_root = world.authority.public_key(),
      .local_address = central ? world.central_address : world.peripheral_address,
      .peer_address = central ? world.peripheral_address : world.central_address,
  };
}

std::unique_ptr<Adversary> make_adversary(Strategy strategy, World& world,
                                          Mode mode, std::uint64_t seed) {
  SeededRandom rng = stream(seed, StreamLabel::Adversary);
  switch (strategy) {
    case Strategy::Passive:
      return std::make_unique<PassiveAdversary>();
    case Strategy::CertSubstitute:
      return std::make_unique<CertSubstituter>(world, seed, std::move(rng));
    case Strategy::KeySubstitute:
      return key_substitute(world, mode, std::move(rng));
    case Strategy::NonceTamper:
      return std::make_unique<FrameTamperer>(Opcode::NoncePeripheral,
                                             std::move(rng));
    case Strategy::ConfirmTamper:
      return std::make_unique<FrameTamperer>(Opcode::Confirm, std::move(rng));
    case Strategy::AddressSpoof:
      return address_spoof(world, mode, std::move(rng));
  }
  throw Error(Errc::BadParameter, "unknown strategy");
}

ScenarioRun simulate(Strategy strategy, std::uint64_t seed, Mode mode) {
  // Generous bound; an honest run takes eight deliveries.
  constexpr int kMaxRounds = 64;

  World world = provision(seed);
  std::unique_ptr<Adversary> adversary =
      make_adversary(strategy, world, mode, seed);
  PairingContext central(endpoint_config(world, Role::Central, mode));
  PairingContext peripheral(endpoint_config(world, Role::Peripheral, mode));
  SeededRandom central_rng = stream(seed, StreamLabel::Central);
  SeededRandom peripheral_rng = stream(seed, StreamLabel::Peripheral);
  SimLink link(*adversary);

  std::optional<pairing::FailReason> first_local_failure;
  auto deliver = [&](Direction direction) {
    auto queued = link.take(direction);
    if (!queued) return false;
    const bool to_peripheral = direction == Direction::CentralToPeripheral;
    PairingContext& receiver = to_peripheral ? peripheral : central;
    RandomSource& rng = to_peripheral ? static_cast<RandomSource&>(peripheral_rng)
                                      : central_rng;
    const bool was_failed = receiver.state() == State::Failed;
    const auto replies = receiver.handle_frame(queued->frame, rng);
    if (!was_failed && receiver.state() == State::Failed &&
        receiver.failed_locally() && !first_local_failure) {
      first_local_failure = receiver.failure_reason();
    }
    link.record(direction, *queued,
                std::string(pairing::to_string(receiver.role())) + ": " +
                    pairing::to_string(receiver.state()));
    for (const auto& reply : replies) {
      link.send(opposite(direction), reply.encode());
    }
    return true;
  };

  link.send(Direction::CentralToPeripheral, central.start_pairing().encode());
  for (int round = 0; round < kMaxRounds; ++round) {
    const bool a = deliver(Direction::CentralToPeripheral);
    const bool b = deliver(Direction::PeripheralToCentral);
    if (!a && !b) break;
  }

  ScenarioRun run;
  ScenarioReport& report = run.report;
  report.scenario = std::string(to_string(strategy)) +
                    (mode == Mode::Certificate ? "/certificate" : "/baseline");
  report.strategy = strategy;
  report.mode = mode;
  report.seed = seed;

  const bool both_established = central.state() == State::Established &&
                                peripheral.state() == State::Established;
  if (both_established) {
    run.central_ltk = central.ltk();
    run.peripheral_ltk = peripheral.ltk();
    report.ltk_match = central.ltk() == peripheral.ltk();

    // One sealed frame each way over the (possibly attacked) link.
    crypto::SessionChannel central_chan(central.ltk(),
                                        crypto::LinkDirection::CentralToPeripheral);
    crypto::SessionChannel peripheral_chan(
        peripheral.ltk(), crypto::LinkDirection::PeripheralToCentral);
    auto probe = [&](Direction direction, crypto::SessionChannel& sender,
                     crypto::SessionChannel& receiver) {
      static constexpr std::uint8_t kProbe[] = {'p', 'r', 'o', 'b', 'e'};
      link.send(direction,
                WireMessage{Opcode::SessionFrame, sender.seal(kProbe)}.encode());
      auto queued = link.take(direction);
      if (!queued) return false;
      bool ok = false;
      try {
        const WireMessage m = WireMessage::decode(queued->frame);
        ok = m.opcode == Opcode::SessionFrame &&
             receiver.open(m.payload) == Bytes(std::begin(kProbe), std::end(kProbe));
      } catch (const Error&) {
        ok = false;
      }
      link.record(direction, *queued, ok ? "session: opened" : "session: rejected");
      return ok;
    };
    const bool forward =
        probe(Direction::CentralToPeripheral, central_chan, peripheral_chan);
    const bool backward =
        probe(Direction::PeripheralToCentral, peripheral_chan, central_chan);
    report.session_probe_ok = forward && backward;

    for (const auto& key : adversary->captured_keys()) {
      if (key == central.ltk() || key == peripheral.ltk()) {
        report.adversary_holds_session_key = true;
      }
    }
    if (report.adversary_holds_session_key) {
      report.outcome = Outcome::CompromiseDetectedByHarness;
    } else if (*report.ltk_match && *report.session_probe_ok) {
      report.outcome = Outcome::EstablishedSecurely;
    } else {
      report.outcome = Outcome::AbortedWithReason;
      report.abort_reason = "SessionAuthFailure";
    }
  } else {
    report.outcome = Outcome::AbortedWithReason;
    if (first_local_failure) {
      report.abort_reason = pairing::to_string(*first_local_failure);
    } else if (central.failure_reason()) {
      report.abort_reason = pairing::to_string(*central.failure_reason());
    } else if (peripheral.failure_reason()) {
      report.abort_reason = pairing::to_string(*peripheral.failure_reason());
    } else {
      report.abort_reason = "Stalled";
    }
  }

  // Secret material that must never appear on the wire.
  std::vector<Bytes> secrets;
  for (const auto* creds : {&world.central, &world.peripheral}) {
    const auto& d = creds->keys.private_key.bytes();
    secrets.emplace_back(d.begin(), d.end());
  }
  for (const PairingContext* ctx : {&central, &peripheral}) {
    if (const auto& s = ctx->shared_secret()) {
      secrets.emplace_back(s->value.begin(), s->value.end());
      const auto t = crypto::f5_intermediate_key(*s);
      secrets.emplace_back(t.begin(), t.end());
    }
  }
  for (const auto& ltk : {run.central_ltk, run.peripheral_ltk}) {
    if (ltk) secrets.emplace_back(ltk->bytes().begin(), ltk->bytes().end());
  }
  for (const auto& entry : link.transcript()) {
    for (const auto& secret : secrets) {
      if (contains(entry.original, secret) || contains(entry.delivered, secret)) {
        report.transcript_exposes_secrets = true;
      }
    }
  }

  report.central_state = central.state();
  report.peripheral_state = peripheral.state();
  report.frames_exchanged = static_cast<std::size_t>(
      std::count_if(link.transcript().begin(), link.transcript().end(),
                    [](const TranscriptEntry& e) { return !e.dropped; }));
  report.notes = adversary->notes();
  run.transcript = link.transcript();
  return run;
}

ScenarioReport run_scenario(Strategy strategy, std::uint64_t seed) {
  return simulate(strategy, seed, Mode::Certificate).report;
}

ScenarioReport run_baseline_justworks(Strategy strategy, std::uint64_t seed) {
  return simulate(strategy, seed, Mode::JustWorksBaseline).report;
}

}  // namespace blecert::sim
