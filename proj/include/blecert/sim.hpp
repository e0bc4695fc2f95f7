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

#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "blecert/authority.hpp"
#include "blecert/key_update.hpp"
#include "blecert/pairing.hpp"

// In-process link between a central and a peripheral with a Dolev-Yao
// adversary on the wire: it may read, modify, drop or inject any frame but
// cannot break the primitives or read provisioned private keys.
namespace blecert::sim {

enum class Direction { CentralToPeripheral, PeripheralToCentral };

const char* to_string(Direction direction);

enum class Strategy {
  Passive,
  CertSubstitute,
  KeySubstitute,
  NonceTamper,
  ConfirmTamper,
  AddressSpoof,
};

const char* to_string(Strategy strategy);  // CLI spelling, e.g. "key-sub"
std::optional<Strategy> parse_strategy(std::string_view name);

enum class Outcome {
  EstablishedSecurely,
  AbortedWithReason,
  CompromiseDetectedByHarness,
};

const char* to_string(Outcome outcome);

struct Delivery {
  Direction direction;
  Bytes frame;
};

// One frame as it crossed the link. A dropped frame has an empty
// `delivered`; an injected frame has an empty `original`.
struct TranscriptEntry {
  std::size_t index = 0;
  Direction direction = Direction::CentralToPeripheral;
  Bytes original;
  Bytes delivered;
  bool modified = false;
  bool injected = false;
  bool dropped = false;
  // Receiver's state after handling the frame.
  std::string receiver_state;
};

class Adversary {
 public:
  virtual ~Adversary() = default;

  // Sees every frame an endpoint sends and returns what reaches the link.
  virtual std::vector<Delivery> intercept(Direction direction,
                                          const Bytes& frame) = 0;

  // Session keys the adversary ended up sharing with an endpoint.
  virtual std::vector<crypto::Ltk> captured_keys() const { return {}; }
  virtual std::vector<std::string> notes() const { return {}; }
};

// FIFO per direction. Everything an endpoint sends goes through the
// adversary first.
class SimLink {
 public:
  explicit SimLink(Adversary& adversary) : adversary_(adversary) {}

  void send(Direction direction, const Bytes& frame);

  struct Queued {
    Bytes frame;
    Bytes original;
    bool modified = false;
    bool injected = false;
  };
  std::optional<Queued> take(Direction direction);

  // Appends the delivery record once the receiver has handled the frame.
  void record(Direction direction, const Queued& queued,
              std::string receiver_state);

  const std::vector<TranscriptEntry>& transcript() const noexcept {
    return transcript_;
  }

 private:
  Adversary& adversary_;
  std::deque<Queued> to_peripheral_;
  std::deque<Queued> to_central_;
  std::vector<TranscriptEntry> transcript_;
};

// Everything provisioned before pairing: an authority, one manufacturer and
// two enrolled devices.
struct World {
  RootAuthority authority;
  update::Manufacturer manufacturer;
  update::Credentials central;
  update::Credentials peripheral;
  crypto::DeviceAddress central_address;
  crypto::DeviceAddress peripheral_address;
};

// Deterministic for a given seed.
World provision(std::uint64_t seed);

pairing::EndpointConfig endpoint_config(const World& world, pairing::Role role,
                                        pairing::Mode mode);

std::unique_ptr<Adversary> make_adversary(Strategy strategy, World& world,
                                          pairing::Mode mode,
                                          std::uint64_t seed);

struct ScenarioReport {
  std::string scenario;
  Strategy strategy = Strategy::Passive;
  pairing::Mode mode = pairing::Mode::Certificate;
  std::uint64_t seed = 0;
  Outcome outcome = Outcome::AbortedWithReason;
  std::size_t frames_exchanged = 0;
  std::optional<std::string> abort_reason;
  // Set when both endpoints reached Established.
  std::optional<bool> ltk_match;
  bool adversary_holds_session_key = false;
  bool transcript_exposes_secrets = false;
  std::optional<bool> session_probe_ok;
  pairing::State central_state = pairing::State::Idle;
  pairing::State peripheral_state = pairing::State::Idle;
  std::vector<std::string> notes;
};

struct ScenarioRun {
  ScenarioReport report;
  std::vector<TranscriptEntry> transcript;
  std::optional<crypto::Ltk> central_ltk;
  std::optional<crypto::Ltk> peripheral_ltk;
};

// Runs one pairing to completion with strict alternation of endpoint turns,
// then exchanges one sealed probe frame each way if both sides established.
ScenarioRun simulate(Strategy strategy, std::uint64_t seed, pairing::Mode mode);

// Certificate-authenticated pairing under attack.
ScenarioReport run_scenario(Strategy strategy, std::uint64_t seed);

// Unauthenticated Just Works control arm under the same attack.
ScenarioReport run_baseline_justworks(Strategy strategy, std::uint64_t seed);

// Seed streams used by simulate(); exposed so a transcript can be replayed
// against freshly built endpoints.
enum class StreamLabel : std::uint64_t {
  World = 0,
  Central = 1,
  Peripheral = 2,
  Adversary = 3,
};
SeededRandom stream(std::uint64_t seed, StreamLabel label);

}  // namespace blecert::sim
